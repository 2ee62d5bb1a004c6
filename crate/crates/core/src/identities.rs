//! Vector-calculus identity suite and the two forms of the Hall
//! nonlinearity.
//!
//! The curl form is ∇×∇×((∇×B)×B). The divergence form (with standard
//! tensor conventions, (X⊗Y)_{ij} = X_iY_j contracted over i, and
//! ∇·∇V = ΔV) is
//!
//!   ∇·((∇×J)⊗B + B⊗(∇×J) − ∇(J×B)) − ∇|J|²/2,  J = ∇×B.
//!
//! The two differ pointwise by the curl-cross terms
//!
//!   D = (∇×J)×(∇×B) + B×(∇×∇×J) − ∇|J|²/2,
//!
//! which vanish for Beltrami waves but not in general; `hall_forms` verifies
//! curl = div + D to roundoff and reports both the corrected and the literal
//! residuals (Leray-projected, since gradient parts are pressure).

use num_complex::Complex64;

use crate::beltrami::DirectionSet;
use crate::error::{Error, Result};
use crate::field::SpectralField;
use crate::grid::Grid;
use crate::intermittent::{symmetrized_wave, IntermittencyParams};
use crate::norms::parseval_l2;
use crate::ops::{
    self, cross_vv, divergence_defect, dot_vv, grad_vector, laplacian, leray_project, mul_sv,
    outer_vv,
};

fn require_solenoidal(b: &SpectralField) -> Result<()> {
    let defect = divergence_defect(b);
    let scale = b.max_coeff().max(1.0);
    if defect > 1e-10 * scale {
        return Err(Error::NotSolenoidal(defect));
    }
    Ok(())
}

/// ∇×∇×((∇×B)×B).
pub fn hall_curl_form(b: &SpectralField) -> Result<SpectralField> {
    require_solenoidal(b)?;
    let j = ops::curl(b)?;
    let jxb = cross_vv(&j, b)?;
    ops::curl(&ops::curl(&jxb)?)
}

/// ∇·((∇×J)⊗B + B⊗(∇×J)) − Δ(J×B) − ∇|J|²/2 with J = ∇×B.
pub fn hall_div_form(b: &SpectralField) -> Result<SpectralField> {
    require_solenoidal(b)?;
    let j = ops::curl(b)?;
    div_form_bracket(b, &j)
}

/// The divergence-form bracket at an arbitrary pair (B, J); the closeness
/// computation feeds non-solenoidal intermittent flows through this.
pub fn div_form_bracket(b: &SpectralField, j: &SpectralField) -> Result<SpectralField> {
    let c = ops::curl(j)?;
    let cb = outer_vv(&c, b)?;
    let mut tensor = cb.transpose();
    tensor.add_assign_scaled(&cb, 1.0);
    let mut out = tensor.divergence();
    let jxb = cross_vv(j, b)?;
    out.add_assign_scaled(&laplacian(&jxb), -1.0);
    let jj = dot_vv(j, j)?;
    out.add_assign_scaled(&ops::gradient(&jj)?, -0.5);
    Ok(out)
}

/// The curl-cross correction D with curl = div + D exactly.
pub fn hall_forms_correction(b: &SpectralField) -> Result<SpectralField> {
    let j = ops::curl(b)?;
    let c = ops::curl(&j)?;
    let mut d = cross_vv(&c, &j)?;
    d.add_assign_scaled(&cross_vv(b, &ops::curl(&c)?)?, 1.0);
    let jj = dot_vv(&j, &j)?;
    d.add_assign_scaled(&ops::gradient(&jj)?, -0.5);
    Ok(d)
}

#[derive(Debug)]
pub struct HallForms {
    pub curl_form: SpectralField,
    pub div_form: SpectralField,
    /// Relative L² residual of the corrected identity curl = div + D,
    /// compared after Leray projection.
    pub residual: f64,
    /// Relative L² of the Leray-projected literal difference curl − div.
    pub literal_residual: f64,
}

pub fn hall_forms(b: &SpectralField) -> Result<HallForms> {
    let curl_form = hall_curl_form(b)?;
    let div_form = hall_div_form(b)?;
    let correction = hall_forms_correction(b)?;
    let scale = parseval_l2(&leray_project(&curl_form)?).max(1e-300);
    let mut diff = curl_form.sub(&div_form);
    let literal_residual = parseval_l2(&leray_project(&diff)?) / scale;
    diff.add_assign_scaled(&correction, -1.0);
    let residual = parseval_l2(&leray_project(&diff)?) / scale;
    Ok(HallForms { curl_form, div_form, residual, literal_residual })
}

/// One verified identity: name and max-coefficient residual.
#[derive(Debug, Clone)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub residual: f64,
}

/// Residuals of the appendix vector-calculus identities for given fields.
///
/// All products are dealiased; with inputs band-limited to half the grid
/// band, every identity is exact up to roundoff.
pub fn appendix_identity_suite(
    a: &SpectralField,
    b: &SpectralField,
    phi: &SpectralField,
) -> Result<Vec<IdentityResidual>> {
    let mut out = Vec::new();

    // ∇×(φA) = φ∇×A + ∇φ×A
    {
        let lhs = ops::curl(&mul_sv(phi, a)?)?;
        let mut rhs = mul_sv(phi, &ops::curl(a)?)?;
        rhs.add_assign_scaled(&cross_vv(&ops::gradient(phi)?, a)?, 1.0);
        out.push(IdentityResidual { name: "curl_phi_a", residual: lhs.sub(&rhs).max_coeff() });
    }

    // ∇(A·B) = Σ_i B_i ∇A_i + A_i ∇B_i
    {
        let lhs = ops::gradient(&dot_vv(a, b)?)?;
        let ga = grad_vector(a)?; // (i,j) = ∂_i A_j
        let gb = grad_vector(b)?;
        let mut rhs = SpectralField::zeros(a.grid(), 3);
        for j in 0..3 {
            // component j: Σ_i B_i ∂_j A_i + A_i ∂_j B_i
            for i in 0..3 {
                let bi = extract(b, i);
                let ai = extract(a, i);
                let t1 = ops::mul_ss(&bi, ga.get(j, i))?;
                let t2 = ops::mul_ss(&ai, gb.get(j, i))?;
                add_into(&mut rhs, j, &t1, 1.0);
                add_into(&mut rhs, j, &t2, 1.0);
            }
        }
        out.push(IdentityResidual { name: "grad_dot", residual: lhs.sub(&rhs).max_coeff() });
    }

    // ∇·(A×B) = (∇×A)·B − A·(∇×B)
    {
        let lhs = ops::divergence(&cross_vv(a, b)?)?;
        let mut rhs = dot_vv(&ops::curl(a)?, b)?;
        rhs.add_assign_scaled(&dot_vv(a, &ops::curl(b)?)?, -1.0);
        out.push(IdentityResidual { name: "div_cross", residual: lhs.sub(&rhs).max_coeff() });
    }

    // ∇×(A×B) = A(∇·B) − B(∇·A) + (B·∇)A − (A·∇)B
    {
        let lhs = ops::curl(&cross_vv(a, b)?)?;
        let mut rhs = mul_sv(&ops::divergence(b)?, a)?;
        rhs.add_assign_scaled(&mul_sv(&ops::divergence(a)?, b)?, -1.0);
        rhs.add_assign_scaled(&advect(b, a)?, 1.0);
        rhs.add_assign_scaled(&advect(a, b)?, -1.0);
        out.push(IdentityResidual { name: "curl_cross", residual: lhs.sub(&rhs).max_coeff() });
    }

    // ∇×(A×B) = ∇·(B⊗A − A⊗B)  [(X⊗Y)_{ij} = X_iY_j, contraction over i]
    {
        let lhs = ops::curl(&cross_vv(a, b)?)?;
        let mut t = outer_vv(b, a)?;
        t.add_assign_scaled(&outer_vv(a, b)?, -1.0);
        let rhs = t.divergence();
        out.push(IdentityResidual { name: "curl_cross_tensor", residual: lhs.sub(&rhs).max_coeff() });
    }

    // ∇×∇×A = ∇(∇·A) − ΔA
    {
        let lhs = ops::curl(&ops::curl(a)?)?;
        let mut rhs = ops::gradient(&ops::divergence(a)?)?;
        rhs.add_assign_scaled(&laplacian(a), -1.0);
        out.push(IdentityResidual { name: "double_curl", residual: lhs.sub(&rhs).max_coeff() });
    }

    Ok(out)
}

fn extract(v: &SpectralField, c: usize) -> SpectralField {
    let mut out = SpectralField::zeros(v.grid(), 1);
    out.comp_mut(0).copy_from_slice(v.comp(c));
    out
}

fn add_into(dst: &mut SpectralField, c: usize, src: &SpectralField, scale: f64) {
    let len = dst.grid().len();
    let _ = len;
    for (d, s) in dst.comp_mut(c).iter_mut().zip(src.comp(0)) {
        *d += scale * s;
    }
}

/// (U·∇)V computed with dealiased products.
fn advect(u: &SpectralField, v: &SpectralField) -> Result<SpectralField> {
    let gv = grad_vector(v)?; // (i,j) = ∂_i v_j
    let mut out = SpectralField::zeros(u.grid(), 3);
    for j in 0..3 {
        for i in 0..3 {
            let ui = extract(u, i);
            let t = ops::mul_ss(&ui, gv.get(i, j))?;
            add_into(&mut out, j, &t, 1.0);
        }
    }
    Ok(out)
}

/// Closeness of the Hall nonlinearity to the NSE nonlinearity near the
/// intermittent flow B = λ⁻¹ Σ_ξ γ_ξ(Id) 𝕎_ξ: returns
/// ‖bracket − ∇·(J⊗J)‖_{L²} / ‖∇·(J⊗J)‖_{L²}.
pub fn nse_closeness(
    ds: &DirectionSet,
    params: IntermittencyParams,
    grid: Grid,
) -> Result<f64> {
    params.validate(ds.n0())?;
    let gamma = ds.gamma(&nalgebra::Matrix3::identity())?;
    let mut b = SpectralField::zeros(grid, 3);
    for (pair, &g) in ds.pairs().iter().zip(&gamma) {
        let w = symmetrized_wave(pair, Complex64::new(g, 0.0), params, grid, 0.0)?;
        b.add_assign_scaled(&w, 1.0 / params.lambda as f64);
    }
    let j = ops::curl(&b)?;
    let bracket = div_form_bracket(&b, &j)?;
    let nse = outer_vv(&j, &j)?.divergence();
    let denom = parseval_l2(&nse);
    if denom < 1e-14 {
        return Ok(0.0);
    }
    let diff = bracket.sub(&nse);
    Ok(parseval_l2(&diff) / denom)
}
