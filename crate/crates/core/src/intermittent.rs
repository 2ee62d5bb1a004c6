//! Dirichlet kernels, the oscillation factors η_ξ, and intermittent Beltrami
//! waves.
//!
//! η is built directly in Fourier space: every lattice point (j,k,l) of the
//! cube Ω_r maps to the wavevector λσ(j·N0ξ + k·N0A_ξ + l·N0 ξ×A_ξ) with
//! coefficient (2r+1)^{-3/2} and time phase e^{i j λσ N0 μ t}. The frame is
//! orthogonal, so the map is injective, mean(η²) = 1 is exact, and time
//! evolution is a rigid translation along ξ with speed μ.

use num_complex::Complex64;

use crate::beltrami::DirectionPair;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::ops;

#[derive(Debug, Clone, Copy)]
pub struct IntermittencyParams {
    /// Wave frequency λ (a multiple of the catalog denominator).
    pub lambda: i64,
    /// λσ ∈ ℕ, the lattice spacing factor (σ = lambda_sigma/λ).
    pub lambda_sigma: i64,
    /// Kernel size r (number of frequencies along each edge of Ω_r).
    pub r: i64,
    /// Temporal oscillation μ ∈ (λ, λ²).
    pub mu: f64,
}

impl IntermittencyParams {
    pub fn sigma(&self) -> f64 {
        self.lambda_sigma as f64 / self.lambda as f64
    }

    pub fn validate(&self, n0: i64) -> Result<()> {
        if self.lambda <= 0 || self.lambda % n0 != 0 {
            return Err(Error::InvalidParams(format!(
                "lambda = {} must be a positive multiple of the catalog denominator {n0}",
                self.lambda
            )));
        }
        if self.lambda_sigma < 1 {
            return Err(Error::InvalidParams("lambda*sigma must be a positive integer".into()));
        }
        if self.r < 0 {
            return Err(Error::InvalidParams("kernel size r must be nonnegative".into()));
        }
        if self.sigma() * self.r as f64 >= 1.0 {
            return Err(Error::InvalidParams(format!(
                "need sigma*r < 1, got {}",
                self.sigma() * self.r as f64
            )));
        }
        let lam = self.lambda as f64;
        if !(self.mu > lam && self.mu < lam * lam) {
            return Err(Error::InvalidParams(format!(
                "mu = {} must lie in (lambda, lambda^2) = ({lam}, {})",
                self.mu,
                lam * lam
            )));
        }
        Ok(())
    }

    /// Frequency-support bound for η: every mode satisfies |k| ≤ 2λσ r N0.
    pub fn eta_support_radius(&self, n0: i64) -> f64 {
        2.0 * (self.lambda_sigma * self.r * n0) as f64
    }
}

/// 3D normalized Dirichlet kernel D_r as a spectral field: coefficient
/// (2r+1)^{-3/2} on the cube Ω_r.
pub fn dirichlet_3d(r: i64, grid: Grid) -> Result<SpectralField> {
    if r < 0 || r > grid.kmax() {
        return Err(Error::InvalidParams(format!(
            "kernel size r = {r} does not fit the grid band kmax = {}",
            grid.kmax()
        )));
    }
    let coeff = Complex64::new(((2 * r + 1) as f64).powf(-1.5), 0.0);
    let mut f = SpectralField::zeros(grid, 1);
    for j in -r..=r {
        for k in -r..=r {
            for l in -r..=r {
                f.set_coeff(0, [j, k, l], coeff)?;
            }
        }
    }
    Ok(f)
}

/// One Fourier mode of η: wavevector, real base coefficient, translation
/// index j (phase rate j·λσ·N0·μ).
#[derive(Debug, Clone, Copy)]
pub struct EtaMode {
    pub k: [i64; 3],
    pub coeff: f64,
    pub j: i64,
}

/// The oscillation factor η_ξ of one ± pair, in sparse form.
///
/// Per the convention for ξ ∈ Λ⁻, η_{−ξ} = η_ξ: the pair has one η, built
/// from the positive representative's frame.
#[derive(Debug, Clone)]
pub struct EtaField {
    pub modes: Vec<EtaMode>,
    pub params: IntermittencyParams,
    pub n0: i64,
    /// ξ of the positive representative.
    pub xi: [f64; 3],
}

pub fn build_eta(pair: &DirectionPair, params: IntermittencyParams) -> Result<EtaField> {
    params.validate(pair.n0)?;
    let r = params.r;
    let ls = params.lambda_sigma;
    let coeff = ((2 * r + 1) as f64).powf(-1.5);
    let mut modes = Vec::with_capacity(((2 * r + 1) * (2 * r + 1) * (2 * r + 1)) as usize);
    for j in -r..=r {
        for k in -r..=r {
            for l in -r..=r {
                let kv = [
                    ls * (j * pair.p[0] + k * pair.q[0] + l * pair.s[0]),
                    ls * (j * pair.p[1] + k * pair.q[1] + l * pair.s[1]),
                    ls * (j * pair.p[2] + k * pair.q[2] + l * pair.s[2]),
                ];
                modes.push(EtaMode { k: kv, coeff, j });
            }
        }
    }
    Ok(EtaField { modes, params, n0: pair.n0, xi: pair.xi() })
}

impl EtaField {
    /// Phase rate of mode index j: j·λσ·N0·μ.
    #[inline]
    pub fn rate(&self, j: i64) -> f64 {
        (j * self.params.lambda_sigma * self.n0) as f64 * self.params.mu
    }

    /// Dense scalar field at time t.
    pub fn to_field(&self, grid: Grid, t: f64) -> Result<SpectralField> {
        let mut f = SpectralField::zeros(grid, 1);
        for m in &self.modes {
            let phase = Complex64::from_polar(m.coeff, self.rate(m.j) * t);
            f.add_coeff(0, m.k, phase)?;
        }
        Ok(f)
    }

    /// Dense ∂_t η at time t (exact per-mode phase derivative).
    pub fn dt_to_field(&self, grid: Grid, t: f64) -> Result<SpectralField> {
        let mut f = SpectralField::zeros(grid, 1);
        for m in &self.modes {
            let rate = self.rate(m.j);
            let phase = Complex64::from_polar(m.coeff, rate * t) * Complex64::new(0.0, rate);
            f.add_coeff(0, m.k, phase)?;
        }
        Ok(f)
    }

    /// Exact mean of η² from coefficients: Σ c(k)² (modes are distinct).
    pub fn mean_sq(&self) -> f64 {
        self.modes.iter().map(|m| m.coeff * m.coeff).sum()
    }

    /// Max |k_i| over modes.
    pub fn band(&self) -> i64 {
        self.modes
            .iter()
            .map(|m| m.k.iter().map(|v| v.abs()).max().unwrap())
            .max()
            .unwrap_or(0)
    }

    /// Max Euclidean |k| over modes.
    pub fn support_radius(&self) -> f64 {
        self.modes
            .iter()
            .map(|m| ((m.k[0] * m.k[0] + m.k[1] * m.k[1] + m.k[2] * m.k[2]) as f64).sqrt())
            .fold(0.0, f64::max)
    }
}

/// Max coefficient residual of μ⁻¹∂_tη = ±(ξ·∇)η for the given sign class.
pub fn check_transport(pair: &DirectionPair, params: IntermittencyParams, sign: i8, grid: Grid) -> Result<f64> {
    let eta = build_eta(pair, params)?;
    let t = 0.37; // any time; the identity is per-mode
    let dte = eta.dt_to_field(grid, t)?;
    let dense = eta.to_field(grid, t)?;
    // (ξ·∇)η per mode: i (ξ·k) c
    let xi = pair.xi();
    let mut transport = dense.clone();
    {
        let g = grid;
        let n = g.n();
        let kt = g.k_table();
        for ix in 0..n {
            for iy in 0..n {
                for iz in 0..n {
                    let kdotxi = kt[ix] as f64 * xi[0] + kt[iy] as f64 * xi[1] + kt[iz] as f64 * xi[2];
                    let idx = g.flat(ix, iy, iz);
                    let v = transport.comp(0)[idx];
                    transport.comp_mut(0)[idx] = Complex64::new(0.0, kdotxi) * v;
                }
            }
        }
    }
    let mut lhs = dte;
    lhs.scale(1.0 / params.mu);
    lhs.add_assign_scaled(&transport, -(sign as f64));
    Ok(lhs.max_coeff())
}

/// Sparse modes of the intermittent wave 𝕎_ξ = η_ξ B_ξ e^{iλξ·x} for the
/// +ξ representative: (wavevector, vector coefficient, translation index).
pub fn wave_modes(
    pair: &DirectionPair,
    params: IntermittencyParams,
) -> Result<Vec<([i64; 3], [Complex64; 3], i64)>> {
    let eta = build_eta(pair, params)?;
    let scale = params.lambda / pair.n0;
    let lxi = [pair.p[0] * scale, pair.p[1] * scale, pair.p[2] * scale];
    let b = pair.b_vec();
    Ok(eta
        .modes
        .iter()
        .map(|m| {
            let k = [m.k[0] + lxi[0], m.k[1] + lxi[1], m.k[2] + lxi[2]];
            let v = [b[0] * m.coeff, b[1] * m.coeff, b[2] * m.coeff];
            (k, v, m.j)
        })
        .collect())
}

/// Real symmetrized wave a𝕎_ξ + ā𝕎_{−ξ} as a dense field at time t.
pub fn symmetrized_wave(
    pair: &DirectionPair,
    amp: Complex64,
    params: IntermittencyParams,
    grid: Grid,
    t: f64,
) -> Result<SpectralField> {
    let modes = wave_modes(pair, params)?;
    let eta = build_eta(pair, params)?;
    let mut f = SpectralField::zeros(grid, 3);
    for (k, v, j) in modes {
        let phase = Complex64::from_polar(1.0, eta.rate(j) * t);
        for c in 0..3 {
            let coeff = amp * v[c] * phase;
            f.add_coeff(c, k, coeff)?;
            f.add_coeff(c, [-k[0], -k[1], -k[2]], coeff.conj())?;
        }
    }
    Ok(f)
}

/// Mean of 𝕎_ξ ⊗ 𝕎_{−ξ} from coefficients: Σ_k η̂(k)² B_ξ⊗B_{−ξ} = B_ξ⊗B̄_ξ.
pub fn wave_decorrelation_mean(pair: &DirectionPair, params: IntermittencyParams) -> Result<[[Complex64; 3]; 3]> {
    let eta = build_eta(pair, params)?;
    let msq = eta.mean_sq();
    let b = pair.b_vec();
    let mut out = [[Complex64::default(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = b[i] * b[j].conj() * msq;
        }
    }
    Ok(out)
}

/// Shell bound check: every wave mode satisfies λ/2 ≤ |k| ≤ 2λ. Returns the
/// (min, max) of |k| over modes for assertion at presets where it holds.
pub fn wave_shell_range(pair: &DirectionPair, params: IntermittencyParams) -> Result<(f64, f64)> {
    let modes = wave_modes(pair, params)?;
    let mut lo = f64::INFINITY;
    let mut hi = 0.0f64;
    for (k, _, _) in modes {
        let kk = ((k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64).sqrt();
        lo = lo.min(kk);
        hi = hi.max(kk);
    }
    Ok((lo, hi))
}

/// Rows (sweep value, p, ||·||_p) for ||D_r||_{L^p} over r and p lists.
pub fn dirichlet_lp_sweep(rs: &[i64], ps: &[f64], grid: Grid) -> Result<Vec<(f64, f64, f64)>> {
    let mut rows = Vec::new();
    for &r in rs {
        let d = dirichlet_3d(r, grid)?;
        let norms = crate::norms::lp_norms(&d, ps);
        for (&p, v) in ps.iter().zip(norms) {
            rows.push((r as f64, p, v));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beltrami::build_direction_sets;
    use crate::grid::VOLUME;
    use crate::norms;

    fn params(lambda: i64, r: i64) -> IntermittencyParams {
        let mu = (lambda as f64).powf(1.25).round();
        IntermittencyParams { lambda, lambda_sigma: 1, r, mu }
    }

    #[test]
    fn dirichlet_r0_is_constant_one() {
        let g = Grid::new(16).unwrap();
        let d = dirichlet_3d(0, g).unwrap();
        assert!((d.coeff(0, [0, 0, 0]) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(d.nonzero_modes(0).len(), 1);
    }

    #[test]
    fn dirichlet_l2_is_volume() {
        let g = Grid::new(16).unwrap();
        for r in [1i64, 2, 4] {
            let d = dirichlet_3d(r, g).unwrap();
            assert!((d.l2_sq() - VOLUME).abs() < 1e-12 * VOLUME);
            // quadrature L2 agrees
            let q = norms::lp_norm(&d, 2.0);
            assert!((q * q - VOLUME).abs() < 1e-10 * VOLUME);
        }
    }

    #[test]
    fn dirichlet_rejects_oversized_r() {
        let g = Grid::new(16).unwrap();
        assert!(dirichlet_3d(8, g).is_err());
    }

    #[test]
    fn eta_mean_square_is_one() {
        let ds = &build_direction_sets(1).unwrap()[0];
        let p = params(24, 2);
        for pair in ds.pairs() {
            let eta = build_eta(pair, p).unwrap();
            assert!((eta.mean_sq() - 1.0).abs() < 1e-12);
            // dense route at a nonzero time agrees
            let g = Grid::new(64).unwrap();
            let f = eta.to_field(g, 0.3).unwrap();
            let sq = crate::ops::mul_ss(&f, &f).unwrap();
            assert!((sq.coeff(0, [0, 0, 0]).re - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn eta_r0_is_constant() {
        let ds = &build_direction_sets(1).unwrap()[0];
        let eta = build_eta(&ds.pairs()[0], params(24, 0)).unwrap();
        assert_eq!(eta.modes.len(), 1);
        assert!((eta.modes[0].coeff - 1.0).abs() < 1e-15);
        assert_eq!(eta.modes[0].k, [0, 0, 0]);
    }

    #[test]
    fn eta_frequency_support_exact() {
        let ds = build_direction_sets(2).unwrap();
        for fam in &ds {
            let lambda = 24 * fam.n0() / 3; // multiple of the denominator
            let p = params(lambda, 2);
            for pair in fam.pairs() {
                let eta = build_eta(pair, p).unwrap();
                let bound = p.eta_support_radius(fam.n0());
                assert!(eta.support_radius() <= bound + 1e-12);
                // on-lattice: every mode is λσ·(integer frame combination)
                for m in &eta.modes {
                    for c in m.k {
                        assert_eq!(c % p.lambda_sigma, 0);
                    }
                }
            }
        }
    }

    #[test]
    fn transport_identity_exact() {
        let ds = &build_direction_sets(1).unwrap()[0];
        let g = Grid::new(64).unwrap();
        let p = params(24, 2);
        for pair in ds.pairs().iter().take(2) {
            let plus = check_transport(pair, p, 1, g).unwrap();
            assert!(plus < 1e-12, "plus-sign residual {plus}");
            let minus = check_transport(pair, p, -1, g).unwrap();
            assert!(minus > 1e-3, "minus sign must break the plus identity");
        }
    }

    #[test]
    fn transport_r0_trivial() {
        let ds = &build_direction_sets(1).unwrap()[0];
        let g = Grid::new(16).unwrap();
        let resid = check_transport(&ds.pairs()[0], params(24, 0), 1, g).unwrap();
        assert!(resid < 1e-15);
    }

    #[test]
    fn wave_reduces_to_beltrami_at_r0() {
        let ds = &build_direction_sets(1).unwrap()[0];
        let g = Grid::new(64).unwrap();
        let pair = &ds.pairs()[2];
        let p = params(24, 0);
        let w = symmetrized_wave(pair, Complex64::new(1.0, 0.0), p, g, 0.0).unwrap();
        // exactly the two modes ±λξ
        let count: usize = (0..3).map(|c| w.nonzero_modes(c).len()).sum();
        assert!(count <= 6);
        let cw = crate::ops::curl(&w).unwrap();
        assert!(cw.sub(&w.clone().scaled(24.0)).max_coeff() < 1e-12);
    }

    #[test]
    fn wave_shell_support_at_small_sigma_r() {
        let ds = &build_direction_sets(1).unwrap()[0];
        let p = params(24, 2); // σrN0√3 = 10.39 ≤ λ/2 = 12
        for pair in ds.pairs() {
            let (lo, hi) = wave_shell_range(pair, p).unwrap();
            assert!(lo >= 12.0 - 1e-9, "lo = {lo}");
            assert!(hi <= 48.0 + 1e-9, "hi = {hi}");
        }
    }

    #[test]
    fn wave_is_real_and_decorrelation_exact() {
        let ds = &build_direction_sets(1).unwrap()[0];
        let g = Grid::new(64).unwrap();
        let pair = &ds.pairs()[0];
        let p = params(24, 2);
        let w = symmetrized_wave(pair, Complex64::new(0.7, 0.2), p, g, 0.45).unwrap();
        let (_, imag) = w.to_samples_with_imag();
        assert!(imag < 1e-12);
        // decorrelation: mean of 𝕎⊗𝕎_{-ξ} equals B_ξ⊗B_{-ξ}
        let mean = wave_decorrelation_mean(pair, p).unwrap();
        let b = pair.b_vec();
        for i in 0..3 {
            for j in 0..3 {
                assert!((mean[i][j] - b[i] * b[j].conj()).norm() < 1e-12);
            }
        }
        // and via the dense product of the full symmetrized wave:
        // ⨍ w⊗w = |a|²(B⊗B̄ + B̄⊗B) + cross-pair terms (absent for one pair)
        let outer = crate::ops::outer_vv(&w, &w).unwrap();
        let m = outer.mean_matrix();
        let a2 = Complex64::new(0.7, 0.2).norm_sqr();
        for i in 0..3 {
            for j in 0..3 {
                let want = a2 * 2.0 * (b[i] * b[j].conj()).re;
                assert!((m[i][j] - want).abs() < 1e-10, "({i},{j}): {} vs {want}", m[i][j]);
            }
        }
    }

    #[test]
    fn wave_band_overflow_detected() {
        let ds = &build_direction_sets(1).unwrap()[0];
        let g = Grid::new(16).unwrap();
        let p = params(24, 2);
        let res = symmetrized_wave(&ds.pairs()[0], Complex64::new(1.0, 0.0), p, g, 0.0);
        assert!(matches!(res, Err(Error::BandOverflow { .. })));
    }

    #[test]
    fn params_validation() {
        assert!(params(24, 2).validate(3).is_ok());
        assert!(params(25, 2).validate(3).is_err()); // not multiple of 3
        assert!(params(24, 30).validate(3).is_err()); // σr ≥ 1
        let bad_mu = IntermittencyParams { lambda: 24, lambda_sigma: 1, r: 2, mu: 10.0 };
        assert!(bad_mu.validate(3).is_err());
    }
}
