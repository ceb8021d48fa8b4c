use std::f64::consts::PI;

use num_complex::Complex64;

use super::{geometry_references, ModelParams, ModelSpec, Quantity, Reference};
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::expr::{Expr, Var};
use crate::geometry::{geometry_from_framing, to_matrix, Framing};
use crate::spectral::SpectralData;
use crate::symbol::{pauli, MatrixFn, SymbolExpansion};

/// The round unit sphere in the stereographic chart from the south pole
/// (y = 0 is mapped to x⁴ = −1), framed by the three left-invariant fields
/// pushed forward from the ambient R⁴. The chart orientation makes the
/// framing positively oriented.
pub fn s3_framing() -> Result<Framing> {
    let y: Vec<Expr> = (0..3).map(Expr::x).collect();
    let r2 = Expr::sum(y.iter().map(|v| v * v));
    let dd = &r2 + 1.0;
    let inv = dd.recip();
    let amb = [
        &y[0] * &inv * 2.0,
        &y[1] * &inv * 2.0,
        &y[2] * &inv * 2.0,
        (&r2 - 1.0) * &inv,
    ];
    let [x1, x2, x3, x4] = amb.clone();
    let ambient = [
        [-&x4, -&x3, x2.clone(), x1.clone()],
        [x3.clone(), -&x4, -&x1, x2.clone()],
        [-&x2, x1.clone(), -&x4, x3.clone()],
    ];
    // y^α = x^α/(1 − x⁴) and 1 − x⁴ = 2/(1 + |y|²)
    let half = &dd * 0.5;
    let quarter = &dd * &dd * 0.25;
    let e: Vec<Vec<Expr>> = ambient
        .iter()
        .map(|f| {
            (0..3)
                .map(|a| &f[a] * &half + &amb[a] * &f[3] * &quarter)
                .collect()
        })
        .collect();
    let conformal = (&dd * &dd).recip() * 4.0;
    let metric = (0..3)
        .map(|a| {
            (0..3)
                .map(|b| {
                    if a == b {
                        conformal.clone()
                    } else {
                        Expr::zero()
                    }
                })
                .collect()
        })
        .collect();
    Framing::new(e, metric)
}

/// Flat T³ with the framing rotating in the (x¹, x²) plane as x³ advances,
/// by the angle `twist·sin(x³)`.
pub fn t3_framing(twist: f64) -> Result<Framing> {
    let th = Expr::x(2).sin() * twist;
    let (c, s) = (th.cos(), th.sin());
    let z = Expr::zero;
    let e = vec![
        vec![c.clone(), s.clone(), z()],
        vec![-&s, c, z()],
        vec![z(), z(), Expr::one()],
    ];
    Framing::new(e, Framing::flat_metric(3))
}

/// The massless Dirac operator of a framed 3-manifold acting on half-densities.
pub fn dirac_model(fr: Framing, name: &str, params: &ModelParams) -> Result<ModelSpec> {
    if fr.d != 3 {
        return Err(Error::DimensionMismatch(format!(
            "the Dirac model needs d = 3, got {}",
            fr.d
        )));
    }
    let geo = geometry_from_framing(&fr);
    let s = pauli();
    let d = 3;
    let sig_up: Vec<MatrixFn> = (0..d)
        .map(|a| {
            MatrixFn::sum_all(
                2,
                &(0..3).map(|j| s[j].scale(&fr.e[j][a])).collect::<Vec<_>>(),
            )
        })
        .collect();
    let sig_down: Vec<MatrixFn> = (0..d)
        .map(|b| {
            MatrixFn::sum_all(
                2,
                &(0..d)
                    .map(|c| sig_up[c].scale(&geo.metric[b][c]))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let a0 = MatrixFn::sum_all(
        2,
        &(0..d)
            .map(|a| sig_up[a].scale(&Expr::xi(a)))
            .collect::<Vec<_>>(),
    );

    let mut t1 = Vec::new();
    for a in 0..d {
        for b in 0..d {
            let mut inner = vec![sig_up[b].diff(Var::X(a as u8))];
            for c in 0..d {
                inner.push(sig_up[c].scale(&geo.christoffel[b][a][c]));
            }
            let inner = MatrixFn::sum_all(2, &inner);
            t1.push(&(&sig_up[a] * &sig_down[b]) * &inner);
        }
    }
    let t1 = MatrixFn::sum_all(2, &t1).scale_re(0.25);
    let t2 = MatrixFn::sum_all(
        2,
        &(0..d)
            .flat_map(|a| (0..d).map(move |b| (a, b)))
            .map(|(a, b)| sig_up[a].scale(&geo.christoffel[b][a][b]))
            .collect::<Vec<_>>(),
    )
    .scale_re(0.5);
    let a1 = (&t1 - &t2).scale_c(Complex64::new(0.0, -1.0));
    let a = SymbolExpansion::exact(Degree::from_integer(1), vec![a0.clone(), a1])?;

    let h = Expr::sum(
        (0..d)
            .flat_map(|a| (0..d).map(move |b| (a, b)))
            .map(|(a, b)| &geo.inverse_metric[a][b] * Expr::xi(a) * Expr::xi(b)),
    )
    .sqrt();
    let id = MatrixFn::identity(2);
    let unit = a0.scale(&h.recip());
    let p_plus = (&id + &unit).scale_re(0.5);
    let p_minus = (&id - &unit).scale_re(0.5);
    let spectral = SpectralData::new(
        Degree::from_integer(1),
        vec![(-&h, p_minus)],
        vec![(h.clone(), p_plus)],
    )?;

    let kstar = geo.dual_contorsion.clone().expect("d = 3");
    let kup = geo.raise_first(&kstar);
    let ktrace = geo.trace(&kstar);
    let mut refs = vec![
        Reference::equals(
            "dirac.subprincipal",
            "",
            Quantity::Subprincipal,
            MatrixFn::scalar(2, &(&ktrace * -0.5)),
        ),
        Reference::vanishes(
            "dirac.square-principal",
            "",
            &(&a0 * &a0) - &MatrixFn::scalar(2, &(&h * &h)),
        ),
    ];
    let modulus_sub = MatrixFn::sum_all(
        2,
        &(0..d)
            .flat_map(|a| (0..d).map(move |b| (a, b)))
            .map(|(a, b)| sig_up[b].scale(&(&kup[a][b] * Expr::xi(a))))
            .collect::<Vec<_>>(),
    )
    .scale(&(h.recip() * -0.5));
    refs.push(Reference::equals(
        "dirac.modulus-sub",
        "",
        Quantity::ModulusSub,
        modulus_sub.clone(),
    ));
    refs.push(Reference::equals(
        "dirac.modulus-sub-closed-form",
        "",
        Quantity::ModulusSubClosedForm,
        modulus_sub,
    ));
    let on_sphere = name == "dirac-s3";
    if on_sphere {
        let g = to_matrix(&geo.metric);
        refs.push(Reference::vanishes(
            "geometry.dual-contorsion-s3",
            "",
            &to_matrix(&kstar) + &g,
        ));
        refs.push(Reference::equals(
            "dirac.subprincipal-s3",
            "",
            Quantity::Subprincipal,
            MatrixFn::scalar(2, &Expr::real(1.5)),
        ));
        let target = a0.scale(&(h.recip() * 0.5));
        refs.push(Reference::equals(
            "dirac.modulus-sub-s3",
            "",
            Quantity::ModulusSub,
            target.clone(),
        ));
        refs.push(Reference::equals(
            "dirac.modulus-sub-closed-form-s3",
            "",
            Quantity::ModulusSubClosedForm,
            target,
        ));
    }
    refs.extend(geometry_references(&fr, &geo));

    let (chart, sample_box) = if on_sphere {
        (
            "stereographic chart of the unit sphere S3 from the south pole".to_string(),
            vec![(-1.0, 1.0); 3],
        )
    } else {
        (
            "flat torus T3 with periodic coordinates".to_string(),
            vec![(0.0, 2.0 * PI); 3],
        )
    };
    Ok(ModelSpec {
        name: name.to_string(),
        d,
        m: 2,
        order: Degree::from_integer(1),
        a,
        spectral,
        params: *params,
        chart,
        sample_box,
        framing: Some(fr),
        geometry: Some(geo),
        references: refs,
    })
}
