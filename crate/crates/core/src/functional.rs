//! Symbols of |A| and θ(A) assembled from the commuting projections.

use num_complex::Complex64;

use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::expr::{Expr, Params, PhasePoint};
use crate::models::ModelSpec;
use crate::report::{index_label, CheckRow};
use crate::symbol::{
    adjoint, compose, poisson, subprincipal, MatrixBatch, MatrixFn, Sampled, SymbolExpansion,
};

fn check_count(model: &ModelSpec, projections: &[SymbolExpansion]) -> Result<()> {
    if projections.len() != model.spectral.m() {
        return Err(Error::DimensionMismatch(format!(
            "{} projections for {} eigenvalues",
            projections.len(),
            model.spectral.m()
        )));
    }
    Ok(())
}

/// Σ_{j>0} A∘P_j − Σ_{j<0} A∘P_j through relative order `k`.
pub fn modulus_symbol(
    model: &ModelSpec,
    projections: &[SymbolExpansion],
    k: usize,
) -> Result<SymbolExpansion> {
    check_count(model, projections)?;
    let mut terms = Vec::with_capacity(projections.len());
    for (e, p) in model.spectral.entries().iter().zip(projections) {
        let ap = compose(&model.a, p, k)?;
        terms.push(if e.index > 0 { ap } else { ap.neg() });
    }
    SymbolExpansion::sum_all(&terms)
}

/// Σ_{j>0} P_j; zero when A has no positive eigenvalues.
pub fn heaviside_symbol(
    model: &ModelSpec,
    projections: &[SymbolExpansion],
) -> Result<SymbolExpansion> {
    check_count(model, projections)?;
    let pos: Vec<SymbolExpansion> = model
        .spectral
        .entries()
        .iter()
        .zip(projections)
        .filter(|(e, _)| e.index > 0)
        .map(|(_, p)| p.clone())
        .collect();
    if pos.is_empty() {
        let depth = projections.iter().filter_map(|p| p.depth()).min();
        return Ok(SymbolExpansion::zero(
            model.m,
            Degree::from_integer(0),
            depth,
        ));
    }
    SymbolExpansion::sum_all(&pos)
}

/// The double-sum formula for the subprincipal symbol of |A| in terms of
/// A_prin, A_sub and the spectral data.
pub fn modulus_sub_closed_form(model: &ModelSpec) -> Result<MatrixFn> {
    let sd = &model.spectral;
    let m = sd.m();
    let a_prin = model.a.principal();
    let a_sub = subprincipal(&model.a)?;
    let abs_prin = sd.modulus_principal();
    let br = &poisson(a_prin, a_prin)? - &poisson(&abs_prin, &abs_prin)?;
    let abs_h = |j: i32, h: &Expr| if j > 0 { h.clone() } else { -h };
    let mut terms = Vec::with_capacity(2 * m * m);
    for ej in sd.entries() {
        for ek in sd.entries() {
            let denom = (abs_h(ej.index, &ej.eigenvalue) + abs_h(ek.index, &ek.eigenvalue)).recip();
            let w = (&ej.eigenvalue + &ek.eigenvalue) * &denom;
            terms.push((&(&ej.projection * &a_sub) * &ek.projection).scale(&w));
            terms.push(
                (&(&ej.projection * &br) * &ek.projection)
                    .scale(&denom)
                    .scale_c(Complex64::new(0.0, 0.5)),
            );
        }
    }
    Ok(MatrixFn::sum_all(m, &terms))
}

/// Rounding allowance for the zero eigenvalues in the sign test.
const SIGN_SLACK: f64 = 1e-12;

/// Principal symbol of P_j* A P_j against h^(j) P^(j), and the sign of its
/// eigenvalues: nonnegative for j > 0, nonpositive for j < 0. This is the
/// principal-symbol form of the semidefiniteness statement only.
pub fn signdef_principal_check(
    model: &ModelSpec,
    projections: &[SymbolExpansion],
    points: &[PhasePoint],
    params: &Params,
    tol: f64,
) -> Result<Vec<CheckRow>> {
    check_count(model, projections)?;
    let mut rows = Vec::new();
    for (e, p) in model.spectral.entries().iter().zip(projections) {
        let lab = index_label(e.index);
        let q = compose(&adjoint(p, 0), &compose(&model.a, p, 0)?, 0)?.extract_component(0)?;
        let expected = e.projection.scale(&e.eigenvalue);
        let batch = MatrixBatch::new(&[q, expected]);
        let vals = batch.eval_many(points, params)?;
        let mut diff = Sampled::default();
        let mut sign = Sampled::default();
        let mut violations = 0usize;
        for v in vals {
            let Some(v) = v else {
                diff.skipped += 1;
                sign.skipped += 1;
                continue;
            };
            diff.tested += 1;
            sign.tested += 1;
            let r = (&v[0] - &v[1]).iter().map(|c| c.norm()).fold(0.0, f64::max);
            diff.max = diff.max.max(r);
            let herm = (&v[0] + v[0].adjoint()).scale(0.5);
            let scale = herm.iter().map(|c| c.norm()).fold(1.0, f64::max);
            let eig = herm.symmetric_eigenvalues();
            let bad = eig.iter().any(|&l| {
                if e.index > 0 {
                    l < -SIGN_SLACK * scale
                } else {
                    l > SIGN_SLACK * scale
                }
            });
            violations += bad as usize;
        }
        sign.max = violations as f64;
        rows.push(CheckRow::new(
            "signdef.principal",
            lab.clone(),
            Some(0),
            diff,
            tol,
        ));
        rows.push(CheckRow::new("signdef.sign", lab, Some(0), sign, 0.0));
    }
    Ok(rows)
}
