//! Fourier-multiplier operators and dealiased products.
//!
//! All differential operators act exactly per mode. Nonlinear products go
//! through a 3/2 zero-padded grid (Orszag), so every retained coefficient of
//! a pairwise product of band-limited fields is alias-free: the product
//! equals the sharp truncation of the exact product. Truncation is linear,
//! which is what makes the stress-decomposition identities hold to roundoff.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft::fft3;
use crate::field::SpectralField;
use crate::grid::Grid;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn expect_vector(f: &SpectralField) -> Result<()> {
    if f.ncomp() != 3 {
        return Err(Error::ComponentMismatch { got: f.ncomp(), want: 3 });
    }
    Ok(())
}

fn expect_scalar(f: &SpectralField) -> Result<()> {
    if f.ncomp() != 1 {
        return Err(Error::ComponentMismatch { got: f.ncomp(), want: 1 });
    }
    Ok(())
}

/// ∇×f, exact per mode: c(k) ↦ i k × c(k).
pub fn curl(f: &SpectralField) -> Result<SpectralField> {
    expect_vector(f)?;
    let g = f.grid();
    let n = g.n();
    let mut out = SpectralField::zeros(g, 3);
    let kt = g.k_table();
    for ix in 0..n {
        let kx = kt[ix] as f64;
        for iy in 0..n {
            let ky = kt[iy] as f64;
            for iz in 0..n {
                let kz = kt[iz] as f64;
                let idx = g.flat(ix, iy, iz);
                let v = [f.comp(0)[idx], f.comp(1)[idx], f.comp(2)[idx]];
                out.comp_mut(0)[idx] = I * (ky * v[2] - kz * v[1]);
                out.comp_mut(1)[idx] = I * (kz * v[0] - kx * v[2]);
                out.comp_mut(2)[idx] = I * (kx * v[1] - ky * v[0]);
            }
        }
    }
    Ok(out)
}

/// ∇·f, exact per mode: c(k) ↦ i k · c(k).
pub fn divergence(f: &SpectralField) -> Result<SpectralField> {
    expect_vector(f)?;
    let g = f.grid();
    let n = g.n();
    let mut out = SpectralField::zeros(g, 1);
    let kt = g.k_table();
    for ix in 0..n {
        let kx = kt[ix] as f64;
        for iy in 0..n {
            let ky = kt[iy] as f64;
            for iz in 0..n {
                let kz = kt[iz] as f64;
                let idx = g.flat(ix, iy, iz);
                out.comp_mut(0)[idx] =
                    I * (kx * f.comp(0)[idx] + ky * f.comp(1)[idx] + kz * f.comp(2)[idx]);
            }
        }
    }
    Ok(out)
}

/// ∇f for scalar f.
pub fn gradient(f: &SpectralField) -> Result<SpectralField> {
    expect_scalar(f)?;
    let g = f.grid();
    let n = g.n();
    let mut out = SpectralField::zeros(g, 3);
    let kt = g.k_table();
    for ix in 0..n {
        let kx = kt[ix] as f64;
        for iy in 0..n {
            let ky = kt[iy] as f64;
            for iz in 0..n {
                let kz = kt[iz] as f64;
                let idx = g.flat(ix, iy, iz);
                let v = f.comp(0)[idx];
                out.comp_mut(0)[idx] = I * kx * v;
                out.comp_mut(1)[idx] = I * ky * v;
                out.comp_mut(2)[idx] = I * kz * v;
            }
        }
    }
    Ok(out)
}

/// Δf (any component count): c(k) ↦ -|k|² c(k).
pub fn laplacian(f: &SpectralField) -> SpectralField {
    multiplier(f, |k2| -k2)
}

/// Apply a real radial multiplier m(|k|²) to every coefficient.
pub fn multiplier(f: &SpectralField, m: impl Fn(f64) -> f64) -> SpectralField {
    let g = f.grid();
    let n = g.n();
    let mut out = f.clone();
    let kt = g.k_table();
    for ix in 0..n {
        let kx = kt[ix] as f64;
        for iy in 0..n {
            let ky = kt[iy] as f64;
            for iz in 0..n {
                let kz = kt[iz] as f64;
                let k2 = kx * kx + ky * ky + kz * kz;
                let idx = g.flat(ix, iy, iz);
                let w = m(k2);
                for c in 0..f.ncomp() {
                    out.comp_mut(c)[idx] *= w;
                }
            }
        }
    }
    out
}

/// Leray projection P_H: per mode k≠0, c ↦ c − k (k·c)/|k|²; mean preserved.
pub fn leray_project(f: &SpectralField) -> Result<SpectralField> {
    expect_vector(f)?;
    let g = f.grid();
    let n = g.n();
    let mut out = f.clone();
    let kt = g.k_table();
    for ix in 0..n {
        let kx = kt[ix] as f64;
        for iy in 0..n {
            let ky = kt[iy] as f64;
            for iz in 0..n {
                let kz = kt[iz] as f64;
                let k2 = kx * kx + ky * ky + kz * kz;
                if k2 == 0.0 {
                    continue;
                }
                let idx = g.flat(ix, iy, iz);
                let dot = kx * out.comp(0)[idx] + ky * out.comp(1)[idx] + kz * out.comp(2)[idx];
                let s = dot / k2;
                out.comp_mut(0)[idx] -= kx * s;
                out.comp_mut(1)[idx] -= ky * s;
                out.comp_mut(2)[idx] -= kz * s;
            }
        }
    }
    Ok(out)
}

/// Sharp frequency cutoffs by Euclidean |k|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FreqCut {
    /// Keep |k| ≤ κ.
    Leq(f64),
    /// Keep |k| ≥ κ.
    Geq(f64),
    /// Zero only the mean.
    NotZero,
}

pub fn freq_project(f: &SpectralField, cut: FreqCut) -> SpectralField {
    if let FreqCut::Leq(c) | FreqCut::Geq(c) = cut {
        assert!(c > 0.0, "cutoff must be positive");
    }
    let g = f.grid();
    let n = g.n();
    let mut out = f.clone();
    let kt = g.k_table();
    for ix in 0..n {
        let kx = kt[ix] as f64;
        for iy in 0..n {
            let ky = kt[iy] as f64;
            for iz in 0..n {
                let kz = kt[iz] as f64;
                let kk = (kx * kx + ky * ky + kz * kz).sqrt();
                let keep = match cut {
                    FreqCut::Leq(c) => kk <= c,
                    FreqCut::Geq(c) => kk >= c,
                    FreqCut::NotZero => kk > 0.0,
                };
                if !keep {
                    let idx = g.flat(ix, iy, iz);
                    for c in 0..f.ncomp() {
                        out.comp_mut(c)[idx] = Complex64::default();
                    }
                }
            }
        }
    }
    out
}

/// Solenoidality defect max |k·c(k)| (absolute).
pub fn divergence_defect(f: &SpectralField) -> f64 {
    let g = f.grid();
    let n = g.n();
    let kt = g.k_table();
    let mut worst = 0.0f64;
    for ix in 0..n {
        let kx = kt[ix] as f64;
        for iy in 0..n {
            let ky = kt[iy] as f64;
            for iz in 0..n {
                let kz = kt[iz] as f64;
                let idx = g.flat(ix, iy, iz);
                let d = (kx * f.comp(0)[idx] + ky * f.comp(1)[idx] + kz * f.comp(2)[idx]).norm();
                if d > worst {
                    worst = d;
                }
            }
        }
    }
    worst
}

/// curl⁻¹ = ∇×(−Δ)⁻¹ on divergence-free mean-free fields.
///
/// Output g satisfies ∇×g = f, ∇·g = 0, mean g = 0.
pub fn inverse_curl(f: &SpectralField) -> Result<SpectralField> {
    expect_vector(f)?;
    let scale = f.max_coeff().max(1.0);
    let div = divergence_defect(f);
    if div > 1e-10 * scale {
        return Err(Error::NotSolenoidal(div));
    }
    let mean: f64 = f.mean().iter().map(|c| c.norm()).sum();
    if mean > 1e-10 * scale {
        return Err(Error::NotMeanFree(mean));
    }
    let g = f.grid();
    let n = g.n();
    let mut out = SpectralField::zeros(g, 3);
    let kt = g.k_table();
    for ix in 0..n {
        let kx = kt[ix] as f64;
        for iy in 0..n {
            let ky = kt[iy] as f64;
            for iz in 0..n {
                let kz = kt[iz] as f64;
                let k2 = kx * kx + ky * ky + kz * kz;
                if k2 == 0.0 {
                    continue;
                }
                let idx = g.flat(ix, iy, iz);
                let v = [f.comp(0)[idx], f.comp(1)[idx], f.comp(2)[idx]];
                // i k × v / |k|²
                out.comp_mut(0)[idx] = I * (ky * v[2] - kz * v[1]) / k2;
                out.comp_mut(1)[idx] = I * (kz * v[0] - kx * v[2]) / k2;
                out.comp_mut(2)[idx] = I * (kx * v[1] - ky * v[0]) / k2;
            }
        }
    }
    Ok(out)
}

/// |∇|⁻¹: c(k) ↦ c(k)/|k| for k ≠ 0; mean dropped.
pub fn inv_modulus(f: &SpectralField) -> SpectralField {
    let g = f.grid();
    let n = g.n();
    let mut out = f.clone();
    let kt = g.k_table();
    for ix in 0..n {
        let kx = kt[ix] as f64;
        for iy in 0..n {
            let ky = kt[iy] as f64;
            for iz in 0..n {
                let kz = kt[iz] as f64;
                let kk = (kx * kx + ky * ky + kz * kz).sqrt();
                let idx = g.flat(ix, iy, iz);
                for c in 0..f.ncomp() {
                    if kk == 0.0 {
                        out.comp_mut(c)[idx] = Complex64::default();
                    } else {
                        out.comp_mut(c)[idx] /= kk;
                    }
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// tensors
// ---------------------------------------------------------------------------

/// A 3×3 tensor field stored as nine scalar spectral fields, T[(i,j)] = T_ij.
#[derive(Debug, Clone)]
pub struct TensorField {
    grid: Grid,
    comps: Vec<SpectralField>,
}

impl TensorField {
    pub fn zeros(grid: Grid) -> Self {
        TensorField { grid, comps: (0..9).map(|_| SpectralField::zeros(grid, 1)).collect() }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &SpectralField {
        &self.comps[3 * i + j]
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut SpectralField {
        &mut self.comps[3 * i + j]
    }

    pub fn set(&mut self, i: usize, j: usize, f: SpectralField) {
        assert_eq!(f.ncomp(), 1);
        self.comps[3 * i + j] = f;
    }

    pub fn add_assign_scaled(&mut self, other: &TensorField, a: f64) {
        for (dst, src) in self.comps.iter_mut().zip(&other.comps) {
            dst.add_assign_scaled(src, a);
        }
    }

    pub fn scale(&mut self, a: f64) {
        for c in &mut self.comps {
            c.scale(a);
        }
    }

    pub fn transpose(&self) -> TensorField {
        let mut out = TensorField::zeros(self.grid);
        for i in 0..3 {
            for j in 0..3 {
                out.set(i, j, self.get(j, i).clone());
            }
        }
        out
    }

    pub fn symmetrize_tensor(&self) -> TensorField {
        let mut out = self.clone();
        out.add_assign_scaled(&self.transpose(), 1.0);
        out.scale(0.5);
        out
    }

    pub fn trace(&self) -> SpectralField {
        let mut out = self.get(0, 0).clone();
        out.add_assign_scaled(self.get(1, 1), 1.0);
        out.add_assign_scaled(self.get(2, 2), 1.0);
        out
    }

    /// (∇·T)_j = Σ_i ∂_i T_ij.
    pub fn divergence(&self) -> SpectralField {
        let g = self.grid;
        let n = g.n();
        let mut out = SpectralField::zeros(g, 3);
        let kt = g.k_table();
        for ix in 0..n {
            let kx = kt[ix] as f64;
            for iy in 0..n {
                let ky = kt[iy] as f64;
                for iz in 0..n {
                    let kz = kt[iz] as f64;
                    let idx = g.flat(ix, iy, iz);
                    let kv = [kx, ky, kz];
                    for j in 0..3 {
                        let mut acc = Complex64::default();
                        for i in 0..3 {
                            acc += I * kv[i] * self.get(i, j).comp(0)[idx];
                        }
                        out.comp_mut(j)[idx] = acc;
                    }
                }
            }
        }
        out
    }

    /// Max |c| over all components and modes.
    pub fn max_coeff(&self) -> f64 {
        self.comps.iter().map(|c| c.max_coeff()).fold(0.0, f64::max)
    }

    /// Max coefficient of the difference.
    pub fn max_abs_diff(&self, other: &TensorField) -> f64 {
        let mut t = self.clone();
        t.add_assign_scaled(other, -1.0);
        t.max_coeff()
    }

    /// Mean 3×3 matrix (k = 0 coefficients, real parts).
    pub fn mean_matrix(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.get(i, j).coeff(0, [0, 0, 0]).re;
            }
        }
        m
    }
}

/// Jacobian tensor (∇v)_{ij} = ∂_i v_j.
pub fn grad_vector(v: &SpectralField) -> Result<TensorField> {
    expect_vector(v)?;
    let g = v.grid();
    let n = g.n();
    let mut out = TensorField::zeros(g);
    let kt = g.k_table();
    for ix in 0..n {
        let kx = kt[ix] as f64;
        for iy in 0..n {
            let ky = kt[iy] as f64;
            for iz in 0..n {
                let kz = kt[iz] as f64;
                let idx = g.flat(ix, iy, iz);
                let kv = [kx, ky, kz];
                for i in 0..3 {
                    for j in 0..3 {
                        out.get_mut(i, j).comp_mut(0)[idx] = I * kv[i] * v.comp(j)[idx];
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Symmetric traceless anti-divergence R with ∇·R(f) = f − mean f.
///
/// Construction (frozen): split f̂ = P f̂ + k̂(k̂·f̂) per mode. For the
/// solenoidal part take u = Δ⁻¹Pf and S₁ = ∇u + (∇u)ᵀ; for the gradient part
/// k̂(k̂·f̂) = ∇g take h = (3/2)Δ⁻¹g and S₂ = (∇∇ − Δ/3·Id)h. R = S₁ + S₂ is
/// symmetric, traceless, of order −1, and ∇·R = f − ⨍f exactly per mode.
pub fn anti_divergence(f: &SpectralField) -> Result<TensorField> {
    expect_vector(f)?;
    let g = f.grid();
    let n = g.n();
    let mut out = TensorField::zeros(g);
    let kt = g.k_table();
    for ix in 0..n {
        let kx = kt[ix] as f64;
        for iy in 0..n {
            let ky = kt[iy] as f64;
            for iz in 0..n {
                let kz = kt[iz] as f64;
                let k2 = kx * kx + ky * ky + kz * kz;
                if k2 == 0.0 {
                    continue;
                }
                let idx = g.flat(ix, iy, iz);
                let kv = [kx, ky, kz];
                let v = [f.comp(0)[idx], f.comp(1)[idx], f.comp(2)[idx]];
                let kdotv = kv[0] * v[0] + kv[1] * v[1] + kv[2] * v[2];
                // solenoidal part: û = -(v - k (k·v)/|k|²)/|k|²
                let mut u = [Complex64::default(); 3];
                for i in 0..3 {
                    u[i] = -(v[i] - kv[i] * kdotv / k2) / k2;
                }
                // ĝ = -i (k·v)/|k|², ĥ = -(3/2) ĝ/|k|²
                let gh = -I * kdotv / k2;
                let h = -1.5 * gh / k2;
                for i in 0..3 {
                    for j in 0..3 {
                        let s1 = I * (kv[i] * u[j] + kv[j] * u[i]);
                        let del = if i == j { 1.0 } else { 0.0 };
                        let s2 = (-kv[i] * kv[j] + k2 * del / 3.0) * h;
                        out.get_mut(i, j).comp_mut(0)[idx] = s1 + s2;
                    }
                }
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// dealiased products
// ---------------------------------------------------------------------------

/// Padded physical samples of every component on the 3n/2 grid.
pub fn padded_physical(f: &SpectralField) -> (usize, Vec<Vec<f64>>) {
    let n = f.grid().n();
    let m = 3 * n / 2;
    let comps = (0..f.ncomp())
        .map(|c| {
            let mut big = pad_comp(f.comp(c), f.grid(), m);
            fft3(&mut big, m, false);
            big.iter().map(|z| z.re).collect()
        })
        .collect();
    (m, comps)
}

fn pad_comp(src: &[Complex64], g: Grid, m: usize) -> Vec<Complex64> {
    let n = g.n();
    let mut big = vec![Complex64::default(); m * m * m];
    let half = n / 2; // |k| <= n/2 - 1 copied
    for ix in 0..n {
        let kx = g.wavenumber(ix);
        if kx.unsigned_abs() as usize >= half {
            continue;
        }
        let jx = if kx >= 0 { kx as usize } else { (kx + m as i64) as usize };
        for iy in 0..n {
            let ky = g.wavenumber(iy);
            if ky.unsigned_abs() as usize >= half {
                continue;
            }
            let jy = if ky >= 0 { ky as usize } else { (ky + m as i64) as usize };
            for iz in 0..n {
                let kz = g.wavenumber(iz);
                if kz.unsigned_abs() as usize >= half {
                    continue;
                }
                let jz = if kz >= 0 { kz as usize } else { (kz + m as i64) as usize };
                big[(jx * m + jy) * m + jz] = src[g.flat(ix, iy, iz)];
            }
        }
    }
    big
}

/// Forward transform physical samples on the m-grid, truncate to `g`.
pub fn physical_to_field(g: Grid, m: usize, comps: &[Vec<f64>]) -> SpectralField {
    let ncomp = comps.len();
    let mut out = SpectralField::zeros(g, ncomp);
    for (c, phys) in comps.iter().enumerate() {
        let mut big: Vec<Complex64> = phys.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        fft3(&mut big, m, true);
        let n = g.n();
        let half = n / 2;
        for ix in 0..n {
            let kx = g.wavenumber(ix);
            if kx.unsigned_abs() as usize >= half {
                continue;
            }
            let jx = if kx >= 0 { kx as usize } else { (kx + m as i64) as usize };
            for iy in 0..n {
                let ky = g.wavenumber(iy);
                if ky.unsigned_abs() as usize >= half {
                    continue;
                }
                let jy = if ky >= 0 { ky as usize } else { (ky + m as i64) as usize };
                for iz in 0..n {
                    let kz = g.wavenumber(iz);
                    if kz.unsigned_abs() as usize >= half {
                        continue;
                    }
                    let jz = if kz >= 0 { kz as usize } else { (kz + m as i64) as usize };
                    out.comp_mut(c)[g.flat(ix, iy, iz)] = big[(jx * m + jy) * m + jz];
                }
            }
        }
    }
    out.symmetrize();
    out
}

fn binary_product(
    f: &SpectralField,
    h: &SpectralField,
    out_ncomp: usize,
    combine: impl Fn(&[f64; 3], &[f64; 3], usize) -> f64 + Sync,
) -> Result<SpectralField> {
    f.grid().same(&h.grid())?;
    let (m, fa) = padded_physical(f);
    let (_, ha) = padded_physical(h);
    let len = m * m * m;
    let mut comps = Vec::with_capacity(out_ncomp);
    for c in 0..out_ncomp {
        let mut buf = vec![0.0f64; len];
        for (i, dst) in buf.iter_mut().enumerate() {
            let mut av = [0.0f64; 3];
            for (ci, s) in fa.iter().enumerate() {
                av[ci] = s[i];
            }
            let mut bv = [0.0f64; 3];
            for (ci, s) in ha.iter().enumerate() {
                bv[ci] = s[i];
            }
            *dst = combine(&av, &bv, c);
        }
        comps.push(buf);
    }
    Ok(physical_to_field(f.grid(), m, &comps))
}

/// Pointwise product of two scalars.
pub fn mul_ss(f: &SpectralField, h: &SpectralField) -> Result<SpectralField> {
    expect_scalar(f)?;
    expect_scalar(h)?;
    binary_product(f, h, 1, |a, b, _| a[0] * b[0])
}

/// Scalar times vector.
pub fn mul_sv(s: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    expect_scalar(s)?;
    expect_vector(v)?;
    binary_product(s, v, 3, |a, b, c| a[0] * b[c])
}

/// Dot product of two vectors (scalar output).
pub fn dot_vv(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    expect_vector(u)?;
    expect_vector(v)?;
    binary_product(u, v, 1, |a, b, _| a[0] * b[0] + a[1] * b[1] + a[2] * b[2])
}

/// Cross product of two vectors.
pub fn cross_vv(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    expect_vector(u)?;
    expect_vector(v)?;
    binary_product(u, v, 3, |a, b, c| match c {
        0 => a[1] * b[2] - a[2] * b[1],
        1 => a[2] * b[0] - a[0] * b[2],
        _ => a[0] * b[1] - a[1] * b[0],
    })
}

/// Outer product (u ⊗ v)_{ij} = u_i v_j.
pub fn outer_vv(u: &SpectralField, v: &SpectralField) -> Result<TensorField> {
    expect_vector(u)?;
    expect_vector(v)?;
    u.grid().same(&v.grid())?;
    let g = u.grid();
    let (m, ua) = padded_physical(u);
    let (_, va) = padded_physical(v);
    let len = m * m * m;
    let mut out = TensorField::zeros(g);
    for i in 0..3 {
        for j in 0..3 {
            let mut buf = vec![0.0f64; len];
            for (idx, dst) in buf.iter_mut().enumerate() {
                *dst = ua[i][idx] * va[j][idx];
            }
            let f = physical_to_field(g, m, std::slice::from_ref(&buf));
            out.set(i, j, f);
        }
    }
    Ok(out)
}
