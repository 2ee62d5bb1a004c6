//! Norm computation and scaling-law regression.
//!
//! L^p norms (p ≠ 2) are physical-grid quadrature on the 3/2 dealiasing-
//! padded grid: `∫|f|^p ≈ (2π/m)³ Σ_j |f(x_j)|^p`. The quadrature is exact
//! for band-limited integrands (p even with the product in band) and
//! otherwise carries the usual spectral quadrature error, reduced by the
//! padding. L² is also available exactly from coefficients via Parseval.
//! C^N norms are grid maxima of spectral derivatives, a documented proxy.

use crate::error::{Error, Result};
use crate::fft::det_sum;
use crate::field::SpectralField;
use crate::grid::VOLUME;
use crate::ops::{self, FreqCut};

/// The supported L^p exponent set (∞ encoded as f64::INFINITY).
pub const P_SET: [f64; 7] = [1.0, 4.0 / 3.0, 1.5, 2.0, 3.0, 4.0, f64::INFINITY];

#[derive(Debug, Clone)]
pub struct NormReport {
    /// (p, ||f||_p) pairs over P_SET.
    pub lp: Vec<(f64, f64)>,
    /// (p, ||f||_{W^{1,p}}) pairs over P_SET, with ||f||^p + ||∇f||^p inside.
    pub w1p: Vec<(f64, f64)>,
    /// Max-norms of all space derivatives up to order N for N = 0, 1, 2.
    pub cn: [f64; 3],
}

impl NormReport {
    pub fn lp(&self, p: f64) -> f64 {
        lookup(&self.lp, p)
    }
    pub fn w1p(&self, p: f64) -> f64 {
        lookup(&self.w1p, p)
    }
}

fn lookup(table: &[(f64, f64)], p: f64) -> f64 {
    table
        .iter()
        .find(|(q, _)| (q == &p) || ((q - p).abs() < 1e-12))
        .map(|(_, v)| *v)
        .unwrap_or_else(|| panic!("unsupported exponent p = {p}"))
}

/// Pointwise Euclidean modulus samples |f(x_j)| on the padded grid.
pub fn modulus_samples(f: &SpectralField) -> (usize, Vec<f64>) {
    let (m, comps) = ops::padded_physical(f);
    let len = m * m * m;
    let mut out = vec![0.0f64; len];
    for c in &comps {
        for (dst, v) in out.iter_mut().zip(c) {
            *dst += v * v;
        }
    }
    for v in &mut out {
        *v = v.sqrt();
    }
    (m, out)
}

fn quadrature_lp(m: usize, moduli: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return moduli.iter().copied().fold(0.0, f64::max);
    }
    let cell = VOLUME / (m * m * m) as f64;
    let sum = if p == 2.0 {
        det_sum(moduli.iter().map(|&v| v * v))
    } else if p == 1.0 {
        det_sum(moduli.iter().copied())
    } else if p == 3.0 {
        det_sum(moduli.iter().map(|&v| v * v * v))
    } else if p == 4.0 {
        det_sum(moduli.iter().map(|&v| {
            let s = v * v;
            s * s
        }))
    } else {
        det_sum(moduli.iter().map(|&v| v.powf(p)))
    };
    (cell * sum).powf(1.0 / p)
}

/// `||f||_{L^p}` by padded-grid quadrature (p = ∞ gives the grid max).
pub fn lp_norm(f: &SpectralField, p: f64) -> f64 {
    let (m, moduli) = modulus_samples(f);
    quadrature_lp(m, &moduli, p)
}

/// Several L^p norms sharing one set of samples.
pub fn lp_norms(f: &SpectralField, ps: &[f64]) -> Vec<f64> {
    let (m, moduli) = modulus_samples(f);
    ps.iter().map(|&p| quadrature_lp(m, &moduli, p)).collect()
}

/// Exact L² from coefficients (Parseval).
pub fn parseval_l2(f: &SpectralField) -> f64 {
    f.l2_sq().sqrt()
}

/// Frobenius modulus samples of the full Jacobian of f.
fn jacobian_modulus(f: &SpectralField) -> (usize, Vec<f64>) {
    let mut acc: Option<(usize, Vec<f64>)> = None;
    for c in 0..f.ncomp() {
        let mut comp = SpectralField::zeros(f.grid(), 1);
        comp.comp_mut(0).copy_from_slice(f.comp(c));
        let grad = ops::gradient(&comp).expect("scalar gradient");
        let (m, comps) = ops::padded_physical(&grad);
        let entry = acc.get_or_insert_with(|| (m, vec![0.0; m * m * m]));
        for g in &comps {
            for (dst, v) in entry.1.iter_mut().zip(g) {
                *dst += v * v;
            }
        }
    }
    let (m, mut sq) = acc.unwrap();
    for v in &mut sq {
        *v = v.sqrt();
    }
    (m, sq)
}

/// Max over the grid of all |∂_i ∂_j f_c| (order-2 derivative proxy).
fn second_derivative_max(f: &SpectralField) -> f64 {
    let g = f.grid();
    let kt = g.k_table();
    let n = g.n();
    let mut worst = 0.0f64;
    for c in 0..f.ncomp() {
        for i in 0..3 {
            for j in i..3 {
                let mut d2 = SpectralField::zeros(g, 1);
                for ix in 0..n {
                    for iy in 0..n {
                        for iz in 0..n {
                            let kv = [kt[ix] as f64, kt[iy] as f64, kt[iz] as f64];
                            let idx = g.flat(ix, iy, iz);
                            d2.comp_mut(0)[idx] = -kv[i] * kv[j] * f.comp(c)[idx];
                        }
                    }
                }
                let (_, moduli) = modulus_samples(&d2);
                let mx = moduli.iter().copied().fold(0.0, f64::max);
                worst = worst.max(mx);
            }
        }
    }
    worst
}

/// Full norm report for one time slice.
pub fn norms(f: &SpectralField) -> NormReport {
    let (m, moduli) = modulus_samples(f);
    let lp: Vec<(f64, f64)> =
        P_SET.iter().map(|&p| (p, quadrature_lp(m, &moduli, p))).collect();
    let (mj, jac) = jacobian_modulus(f);
    let w1p: Vec<(f64, f64)> = P_SET
        .iter()
        .map(|&p| {
            let fp = lookup(&lp, p);
            let gp = quadrature_lp(mj, &jac, p);
            let v = if p.is_infinite() {
                fp.max(gp)
            } else {
                (fp.powf(p) + gp.powf(p)).powf(1.0 / p)
            };
            (p, v)
        })
        .collect();
    let c0 = lookup(&lp, f64::INFINITY);
    let c1 = c0.max(jac.iter().copied().fold(0.0, f64::max));
    let c2 = c1.max(second_derivative_max(f));
    NormReport { lp, w1p, cn: [c0, c1, c2] }
}

/// Least-squares slope and intercept of log(y) against log(x).
pub fn fit_loglog(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    assert_eq!(xs.len(), ys.len());
    assert!(xs.len() >= 2, "need at least two sweep points");
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in lx.iter().zip(&ly) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Commutator bound probe: ‖|∇|⁻¹(a P_{≥κ} f)‖_{L²} · κ / (C_a ‖f‖_{L²}),
/// with C_a = max_{j≤2} ‖|∇|^j a‖_∞ / λ^j measured on the grid.
///
/// The bounded-ratio assertion across growing κ is the numerical shadow of
/// the |∇|⁻¹ gain above frequency κ.
pub fn commutator_check(
    a: &SpectralField,
    f: &SpectralField,
    kappa: f64,
    lambda: f64,
) -> Result<f64> {
    if kappa < lambda {
        return Err(Error::InvalidParams(format!(
            "commutator check needs kappa >= lambda, got kappa = {kappa}, lambda = {lambda}"
        )));
    }
    if a.ncomp() != 1 || f.ncomp() != 1 {
        return Err(Error::ComponentMismatch { got: a.ncomp().max(f.ncomp()), want: 1 });
    }
    let fl2 = parseval_l2(f);
    if fl2 == 0.0 {
        return Ok(0.0);
    }
    // measure C_a over |∇|^j a for j = 0, 1, 2
    let mut ca = 0.0f64;
    for j in 0..=2u32 {
        let da = ops::multiplier(a, |k2| k2.sqrt().powi(j as i32));
        let (_, moduli) = modulus_samples(&da);
        let mx = moduli.iter().copied().fold(0.0, f64::max);
        ca = ca.max(mx / lambda.powi(j as i32));
    }
    let high = ops::freq_project(f, FreqCut::Geq(kappa));
    let mut prod = ops::mul_ss(a, &high)?;
    // enforce zero mean, as the lemma hypothesis requires
    prod.comp_mut(0)[0] = num_complex::Complex64::default();
    let val = parseval_l2(&ops::inv_modulus(&prod));
    Ok(val * kappa / (ca * fl2))
}
