//! Rational direction sets, the geometric-lemma coefficients, and Beltrami
//! waves.
//!
//! Each family is a set of 6 ± pairs of rational unit vectors ξ with a
//! rational orthonormal frame (ξ, A_ξ, ξ×A_ξ). The coefficient functions
//! γ_ξ are defined by the square linear system Σ_pairs γ_ξ²(Id − ξ⊗ξ) = R,
//! so γ_ξ² is affine in R; the admissible radius ε_γ around Id is computed
//! exactly from that affine map (smallest radius at which some coefficient
//! can reach the positivity floor).

use nalgebra::{Matrix3, Matrix6, Vector6};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;

/// Positivity floor for the coefficient solve.
pub const GAMMA_FLOOR: f64 = 1e-6;

/// One ± pair of directions with its rational orthonormal frame.
#[derive(Debug, Clone)]
pub struct DirectionPair {
    /// N0·ξ (integer entries).
    pub p: [i64; 3],
    /// N0·A_ξ.
    pub q: [i64; 3],
    /// N0·(ξ×A_ξ).
    pub s: [i64; 3],
    /// Family denominator.
    pub n0: i64,
}

impl DirectionPair {
    #[inline]
    pub fn xi(&self) -> [f64; 3] {
        let d = self.n0 as f64;
        [self.p[0] as f64 / d, self.p[1] as f64 / d, self.p[2] as f64 / d]
    }

    #[inline]
    pub fn a(&self) -> [f64; 3] {
        let d = self.n0 as f64;
        [self.q[0] as f64 / d, self.q[1] as f64 / d, self.q[2] as f64 / d]
    }

    #[inline]
    pub fn cross(&self) -> [f64; 3] {
        let d = self.n0 as f64;
        [self.s[0] as f64 / d, self.s[1] as f64 / d, self.s[2] as f64 / d]
    }

    /// B_ξ = (A_ξ + i ξ×A_ξ)/√2 for the +ξ representative.
    pub fn b_vec(&self) -> [Complex64; 3] {
        let a = self.a();
        let c = self.cross();
        let r = std::f64::consts::FRAC_1_SQRT_2;
        [
            Complex64::new(a[0] * r, c[0] * r),
            Complex64::new(a[1] * r, c[1] * r),
            Complex64::new(a[2] * r, c[2] * r),
        ]
    }

    /// Id − ξ⊗ξ.
    pub fn m_matrix(&self) -> Matrix3<f64> {
        let xi = self.xi();
        let mut m = Matrix3::identity();
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] -= xi[i] * xi[j];
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct DirectionSet {
    alpha: usize,
    n0: i64,
    pairs: Vec<DirectionPair>,
    eps_gamma: f64,
    /// 6×6 map from pair coefficients to vec6 of the reconstructed matrix.
    gram: Matrix6<f64>,
    gram_inv: Matrix6<f64>,
    c_id: Vector6<f64>,
}

/// Orthonormal basis of Sym(3) under the Frobenius inner product.
fn sym_basis() -> [Matrix3<f64>; 6] {
    let mut b = [Matrix3::zeros(); 6];
    for i in 0..3 {
        b[i][(i, i)] = 1.0;
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let offs = [(0usize, 1usize), (0, 2), (1, 2)];
    for (k, &(i, j)) in offs.iter().enumerate() {
        b[3 + k][(i, j)] = r;
        b[3 + k][(j, i)] = r;
    }
    b
}

fn vec6(m: &Matrix3<f64>) -> Vector6<f64> {
    let b = sym_basis();
    Vector6::from_iterator(b.iter().map(|e| (m.component_mul(e)).sum()))
}

impl DirectionSet {
    fn assemble(alpha: usize, n0: i64, raw_pairs: &[[i64; 3]]) -> Result<Self> {
        let mut pairs = Vec::with_capacity(raw_pairs.len());
        for &p in raw_pairs {
            let q = find_orthogonal_frame(p, n0)?;
            let s = cross_int(p, q);
            debug_assert!(s.iter().all(|v| v % n0 == 0));
            let s = [s[0] / n0, s[1] / n0, s[2] / n0];
            pairs.push(DirectionPair { p, q, s, n0 });
        }
        // gram: column per pair, rows = vec6 of M_ξ
        let basis = sym_basis();
        let mut gram = Matrix6::zeros();
        for (c, pair) in pairs.iter().enumerate() {
            let m = pair.m_matrix();
            for (r, e) in basis.iter().enumerate() {
                gram[(r, c)] = m.component_mul(e).sum();
            }
        }
        let gram_inv = gram
            .try_inverse()
            .ok_or_else(|| Error::InvalidParams("direction set does not span Sym(3)".into()))?;
        let c_id = gram_inv * vec6(&Matrix3::identity());
        if c_id.iter().any(|&c| c <= GAMMA_FLOOR) {
            return Err(Error::InvalidParams(
                "identity decomposition is not strictly positive".into(),
            ));
        }
        // exact positivity radius: c_i(Id + S) = c_i(Id) + <row_i, vec6(S)>;
        // worst unit-Frobenius S drops c_i by the row norm.
        let mut eps = f64::INFINITY;
        for i in 0..6 {
            let row_norm: f64 =
                (0..6).map(|j| gram_inv[(i, j)] * gram_inv[(i, j)]).sum::<f64>().sqrt();
            eps = eps.min((c_id[i] - GAMMA_FLOOR) / row_norm);
        }
        Ok(DirectionSet { alpha, n0, pairs, eps_gamma: eps, gram, gram_inv, c_id })
    }

    #[inline]
    pub fn alpha(&self) -> usize {
        self.alpha
    }

    #[inline]
    pub fn n0(&self) -> i64 {
        self.n0
    }

    #[inline]
    pub fn pairs(&self) -> &[DirectionPair] {
        &self.pairs
    }

    #[inline]
    pub fn eps_gamma(&self) -> f64 {
        self.eps_gamma
    }

    /// Number of directions counting both signs.
    pub fn len_directions(&self) -> usize {
        2 * self.pairs.len()
    }

    /// Coefficients γ_ξ (one per ± pair) at a symmetric matrix R in the ball.
    pub fn gamma(&self, r: &Matrix3<f64>) -> Result<Vec<f64>> {
        let dist = frobenius_dist_to_id(r);
        if dist > self.eps_gamma {
            return Err(Error::GammaOutOfBall { dist, eps: self.eps_gamma });
        }
        let c = self.gamma_sq(r);
        Ok(c.iter().map(|&v| v.max(0.0).sqrt()).collect())
    }

    /// The affine map R ↦ (γ_ξ²) without the ball check.
    pub fn gamma_sq(&self, r: &Matrix3<f64>) -> Vec<f64> {
        let c = self.gram_inv * vec6(r);
        c.iter().copied().collect()
    }

    /// Residual |Σ γ² M_ξ − R|_F for a coefficient vector.
    pub fn reconstruction_residual(&self, coeffs: &[f64], r: &Matrix3<f64>) -> f64 {
        let mut acc = Matrix3::zeros();
        for (c, pair) in coeffs.iter().zip(&self.pairs) {
            acc += pair.m_matrix() * *c;
        }
        (acc - r).norm()
    }

    /// Project a symmetric matrix onto the closed θ·ε_γ ball around Id,
    /// preserving Id (hence the trace relation used by the energy identity).
    pub fn project_to_ball(&self, r: &Matrix3<f64>, theta: f64) -> (Matrix3<f64>, bool) {
        let id = Matrix3::identity();
        let s = r - id;
        let norm = s.norm();
        let radius = theta * self.eps_gamma;
        if norm <= radius {
            (*r, false)
        } else {
            (id + s * (radius / norm), true)
        }
    }

    #[inline]
    pub fn gram(&self) -> &Matrix6<f64> {
        &self.gram
    }

    #[inline]
    pub fn c_id(&self) -> Vec<f64> {
        self.c_id.iter().copied().collect()
    }
}

pub fn frobenius_dist_to_id(r: &Matrix3<f64>) -> f64 {
    (r - Matrix3::identity()).norm()
}

fn cross_int(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// Deterministic search for an integer A with |A| = n0, A·p = 0, and
/// (p×A)/n0 integer, so the whole frame lives on the N0-lattice.
fn find_orthogonal_frame(p: [i64; 3], n0: i64) -> Result<[i64; 3]> {
    let nsq = n0 * n0;
    for x in -n0..=n0 {
        for y in -n0..=n0 {
            for z in -n0..=n0 {
                let v = [x, y, z];
                if x * x + y * y + z * z != nsq {
                    continue;
                }
                if v[0] * p[0] + v[1] * p[1] + v[2] * p[2] != 0 {
                    continue;
                }
                let c = cross_int(p, v);
                if c.iter().all(|e| e % n0 == 0) {
                    return Ok(v);
                }
            }
        }
    }
    Err(Error::InvalidParams(format!("no rational frame for direction {p:?}/{n0}")))
}

/// Catalog family 1: ± classes from the (1,2,2)/3 orbit (N0 = 3).
const FAMILY_DEN3: [[i64; 3]; 6] =
    [[-2, 1, -2], [-1, -2, 2], [1, 2, 2], [2, -1, -2], [2, -2, 1], [-2, -2, -1]];

/// Catalog family 2: symmetric ± classes from the (3,4,0)/5 orbit (N0 = 5).
const FAMILY_DEN5: [[i64; 3]; 6] =
    [[3, 4, 0], [3, -4, 0], [0, 3, 4], [0, 3, -4], [4, 0, 3], [4, 0, -3]];

/// Build `count` pairwise-disjoint direction families (count ≤ 2).
pub fn build_direction_sets(count: usize) -> Result<Vec<DirectionSet>> {
    if count == 0 {
        return Err(Error::InvalidParams("need at least one direction family".into()));
    }
    if count > 2 {
        return Err(Error::InvalidParams(
            "catalog provides two disjoint families; more are never needed here".into(),
        ));
    }
    let mut out = vec![DirectionSet::assemble(1, 3, &FAMILY_DEN3)?];
    if count == 2 {
        out.push(DirectionSet::assemble(2, 5, &FAMILY_DEN5)?);
    }
    Ok(out)
}

/// W(x) = Σ_pairs a_ξ B_ξ e^{iλξ·x} + c.c. as a real spectral field.
///
/// `lambda` must be a multiple of the family denominator so λξ ∈ ℤ³.
pub fn beltrami_wave(
    ds: &DirectionSet,
    amps: &[Complex64],
    lambda: i64,
    grid: Grid,
) -> Result<SpectralField> {
    if amps.len() != ds.pairs.len() {
        return Err(Error::InvalidParams(format!(
            "need {} pair amplitudes, got {}",
            ds.pairs.len(),
            amps.len()
        )));
    }
    if lambda <= 0 || lambda % ds.n0 != 0 {
        return Err(Error::InvalidParams(format!(
            "lambda = {lambda} is not a positive multiple of the catalog denominator {}",
            ds.n0
        )));
    }
    let scale = lambda / ds.n0;
    let mut w = SpectralField::zeros(grid, 3);
    for (pair, &a) in ds.pairs.iter().zip(amps) {
        let k = [pair.p[0] * scale, pair.p[1] * scale, pair.p[2] * scale];
        let b = pair.b_vec();
        for c in 0..3 {
            w.add_coeff(c, k, a * b[c])?;
            w.add_coeff(c, [-k[0], -k[1], -k[2]], (a * b[c]).conj())?;
        }
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ops;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_in_ball(ds: &DirectionSet, rng: &mut impl Rng, frac: f64) -> Matrix3<f64> {
        let mut s = Matrix3::zeros();
        for i in 0..3 {
            for j in i..3 {
                let v = rng.gen_range(-1.0..1.0);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        let norm = s.norm();
        Matrix3::identity() + s * (frac * ds.eps_gamma() / norm)
    }

    #[test]
    fn families_satisfy_invariants() {
        let sets = build_direction_sets(2).unwrap();
        assert_eq!(sets.len(), 2);
        for ds in &sets {
            assert!(ds.len_directions() >= 12);
            assert!(ds.eps_gamma() > 0.05, "eps_gamma = {}", ds.eps_gamma());
            for pair in ds.pairs() {
                let xi = pair.xi();
                let a = pair.a();
                let c = pair.cross();
                let n = |v: [f64; 3]| (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                assert!((n(xi) - 1.0).abs() < 1e-14);
                assert!((n(a) - 1.0).abs() < 1e-14);
                assert!((n(c) - 1.0).abs() < 1e-14);
                let dot = xi[0] * a[0] + xi[1] * a[1] + xi[2] * a[2];
                assert!(dot.abs() < 1e-14);
                // b·ξ = 0, |b| = 1
                let b = pair.b_vec();
                let bdotxi: Complex64 = (0..3).map(|i| b[i] * xi[i]).sum();
                assert!(bdotxi.norm() < 1e-14);
                let bnorm: f64 = (0..3).map(|i| b[i].norm_sqr()).sum();
                assert!((bnorm - 1.0).abs() < 1e-14);
            }
        }
        // disjointness across families
        for p1 in sets[0].pairs() {
            for p2 in sets[1].pairs() {
                let x1 = p1.xi();
                let x2 = p2.xi();
                let same = x1.iter().zip(&x2).all(|(a, b)| (a - b).abs() < 1e-12);
                let opp = x1.iter().zip(&x2).all(|(a, b)| (a + b).abs() < 1e-12);
                assert!(!same && !opp);
            }
        }
    }

    #[test]
    fn identity_decomposition_residual() {
        for ds in build_direction_sets(2).unwrap() {
            let id = Matrix3::identity();
            let gamma = ds.gamma(&id).unwrap();
            let coeffs: Vec<f64> = gamma.iter().map(|g| g * g).collect();
            assert!(ds.reconstruction_residual(&coeffs, &id) < 1e-12);
            // trace relation: Σ_{ξ∈Λ} γ² = tr Id = 3, i.e. 3/2 per ± pair
            let total: f64 = coeffs.iter().sum();
            assert!((2.0 * total - 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn den5_family_has_equal_gamma_at_identity() {
        let sets = build_direction_sets(2).unwrap();
        let gamma = sets[1].gamma(&Matrix3::identity()).unwrap();
        for g in &gamma {
            assert!((g - 0.5).abs() < 1e-12, "gamma {gamma:?}");
        }
    }

    #[test]
    fn gamma_positive_and_exact_in_ball() {
        let sets = build_direction_sets(2).unwrap();
        for ds in &sets {
            let mut rng = ChaCha8Rng::seed_from_u64(17);
            for _ in 0..20 {
                let r = random_in_ball(ds, &mut rng, 0.999);
                let gamma = ds.gamma(&r).unwrap();
                assert!(gamma.iter().all(|&g| g > 0.0));
                let coeffs: Vec<f64> = gamma.iter().map(|g| g * g).collect();
                assert!(ds.reconstruction_residual(&coeffs, &r) < 1e-10);
            }
        }
    }

    #[test]
    fn gamma_rejects_outside_ball() {
        let ds = &build_direction_sets(1).unwrap()[0];
        let mut r = Matrix3::identity();
        r[(0, 0)] += 2.0 * ds.eps_gamma();
        match ds.gamma(&r) {
            Err(Error::GammaOutOfBall { dist, eps }) => {
                assert!(dist > eps);
            }
            other => panic!("expected out-of-ball rejection, got {other:?}"),
        }
    }

    #[test]
    fn ball_projection_preserves_identity_direction() {
        let ds = &build_direction_sets(1).unwrap()[0];
        let mut r = Matrix3::identity();
        r[(0, 1)] += 5.0;
        r[(1, 0)] += 5.0;
        let (proj, clamped) = ds.project_to_ball(&r, 0.99);
        assert!(clamped);
        assert!(frobenius_dist_to_id(&proj) <= 0.99 * ds.eps_gamma() + 1e-12);
        assert!((proj.trace() - 3.0).abs() < 1e-12);
        let (same, not) = ds.project_to_ball(&Matrix3::identity(), 0.99);
        assert!(!not);
        assert_eq!(same, Matrix3::identity());
    }

    #[test]
    fn wave_is_curl_eigenfunction() {
        let g = Grid::new(32).unwrap();
        let ds = &build_direction_sets(1).unwrap()[0];
        let amps: Vec<Complex64> = (0..6).map(|i| Complex64::new(0.3 + 0.1 * i as f64, 0.1)).collect();
        let lambda = 9i64;
        let w = beltrami_wave(ds, &amps, lambda, g).unwrap();
        // real-valued
        let (_, imag) = w.to_samples_with_imag();
        assert!(imag < 1e-12);
        // div-free
        assert!(ops::divergence_defect(&w) < 1e-12);
        // curl W = λ W
        let cw = ops::curl(&w).unwrap();
        let resid = cw.sub(&w.clone().scaled(lambda as f64)).max_coeff();
        assert!(resid < 1e-12, "curl residual {resid}");
    }

    #[test]
    fn wave_mean_outer_matches_half_sum() {
        let g = Grid::new(32).unwrap();
        let ds = &build_direction_sets(1).unwrap()[0];
        let gamma = ds.gamma(&Matrix3::identity()).unwrap();
        let amps: Vec<Complex64> = gamma.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let w = beltrami_wave(ds, &amps, 9, g).unwrap();
        let outer = ops::outer_vv(&w, &w).unwrap();
        let mean = outer.mean_matrix();
        // expected: Σ_pairs γ² (Id − ξ⊗ξ) = Id
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((mean[i][j] - want).abs() < 1e-10, "({i},{j}): {}", mean[i][j]);
            }
        }
    }

    #[test]
    fn wave_rejects_incompatible_lambda() {
        let g = Grid::new(16).unwrap();
        let ds = &build_direction_sets(1).unwrap()[0];
        let amps = vec![Complex64::new(1.0, 0.0); 6];
        assert!(beltrami_wave(ds, &amps, 7, g).is_err());
    }

    #[test]
    fn zero_amplitudes_give_zero_field() {
        let g = Grid::new(16).unwrap();
        let ds = &build_direction_sets(1).unwrap()[0];
        let amps = vec![Complex64::default(); 6];
        let w = beltrami_wave(ds, &amps, 3, g).unwrap();
        assert_eq!(w.max_coeff(), 0.0);
    }

    #[test]
    fn sampled_boundary_positivity_confirms_eps() {
        // ε_γ from the affine formula agrees with random boundary sampling
        for ds in build_direction_sets(2).unwrap() {
            let mut rng = ChaCha8Rng::seed_from_u64(99);
            for _ in 0..200 {
                let r = random_in_ball(&ds, &mut rng, 0.999);
                let c = ds.gamma_sq(&r);
                assert!(c.iter().all(|&v| v > 0.0), "coefficient went nonpositive inside ball");
            }
        }
    }
}
