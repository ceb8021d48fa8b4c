use std::f64::consts::PI;

use num_complex::Complex64;

use super::{geometry_references, Expected, ModelParams, ModelSpec, Quantity, Reference};
use crate::degree::Degree;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::geometry::{geometry_from_framing, Framing};
use crate::spectral::SpectralData;
use crate::symbol::{compose_exact, MatrixFn, SymbolExpansion};

/// Flat T² framed by (cos θ, sin θ), (−sin θ, cos θ) with θ = twist·cos(x¹).
pub fn rotating_framing_2d(twist: f64) -> Result<Framing> {
    let th = Expr::x(0).cos() * twist;
    let (c, s) = (th.cos(), th.sin());
    Framing::new(
        vec![vec![c.clone(), s.clone()], vec![-&s, c]],
        Framing::flat_metric(2),
    )
}

fn is_flat(fr: &Framing) -> bool {
    fr.metric.iter().enumerate().all(|(a, row)| {
        row.iter()
            .enumerate()
            .all(|(b, g)| g.as_const() == Some(Complex64::new((a == b) as u8 as f64, 0.0)))
    })
}

/// The operator of linear elasticity on a flat framed 2-torus, written in
/// the frame and acting on half-densities. Its full left symbol is obtained
/// by exact composition of differential symbols.
pub fn lame_model(fr: &Framing, params: &ModelParams) -> Result<ModelSpec> {
    let (lambda, mu) = (params.lambda, params.mu);
    if fr.d != 2 {
        return Err(Error::DimensionMismatch(format!(
            "the elasticity model needs d = 2, got {}",
            fr.d
        )));
    }
    if !(mu > 0.0 && lambda + mu > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Lame parameters need mu > 0 and lambda + mu > 0 (lambda = {lambda}, mu = {mu})"
        )));
    }
    if !is_flat(fr) {
        return Err(Error::Validation(
            "the elasticity model is implemented for the flat metric only".into(),
        ));
    }
    let geo = geometry_from_framing(fr);
    let xi = [Expr::xi(0), Expr::xi(1)];
    let hsq = &xi[0] * &xi[0] + &xi[1] * &xi[1];

    // with g = δ the density is 1 and the half-density conjugation is trivial
    let l = MatrixFn::from_fn(2, |a, b| {
        let diag = if a == b { &hsq * mu } else { Expr::zero() };
        diag + &xi[a] * &xi[b] * (lambda + mu)
    });
    let zero = Degree::from_integer(0);
    let b = SymbolExpansion::exact(zero, vec![MatrixFn::from_fn(2, |a, j| fr.e[j][a].clone())])?;
    let b_inv = SymbolExpansion::exact(
        zero,
        vec![MatrixFn::from_fn(2, |j, a| geo.coframe[j][a].clone())],
    )?;
    let l = SymbolExpansion::exact(Degree::from_integer(2), vec![l])?;
    let a = compose_exact(&b_inv, &compose_exact(&l, &b)?)?;

    // v_j = e_j^α ξ_α = h p_j
    let v: Vec<Expr> = (0..2)
        .map(|j| Expr::sum((0..2).map(|a| &fr.e[j][a] * &xi[a])))
        .collect();
    let vvt = MatrixFn::from_fn(2, |j, k| &v[j] * &v[k]);
    let ppt = vvt.scale(&hsq.recip());
    let id = MatrixFn::identity(2);
    let h1 = &hsq * mu;
    let h2 = &hsq * (lambda + 2.0 * mu);
    let spectral = SpectralData::new(
        Degree::from_integer(2),
        Vec::new(),
        vec![(h1, &id - &ppt), (h2, ppt)],
    )?;

    let t_up = geo.torsion_vector().expect("d = 2");
    let t_xi = Expr::sum((0..2).map(|a| &t_up[a] * &xi[a]));
    let eps = MatrixFn::from_fn(2, |j, k| {
        Expr::real(match (j, k) {
            (0, 1) => 1.0,
            (1, 0) => -1.0,
            _ => 0.0,
        })
    });
    let mut refs = vec![
        Reference::equals(
            "lame.principal",
            "",
            Quantity::Principal,
            &MatrixFn::scalar(2, &(&hsq * mu)) + &vvt.scale_re(lambda + mu),
        ),
        Reference::equals(
            "lame.subprincipal",
            "",
            Quantity::Subprincipal,
            eps.scale(&t_xi)
                .scale_c(Complex64::new(0.0, lambda + 3.0 * mu)),
        ),
        Reference::equals(
            "lame.projection-sub",
            "1",
            Quantity::ProjectionSub(1),
            MatrixFn::zero(2),
        ),
        Reference::equals(
            "lame.projection-sub",
            "2",
            Quantity::ProjectionSub(2),
            MatrixFn::zero(2),
        ),
        Reference {
            check: "lame.eigenvalue-ratio".into(),
            index: String::new(),
            // h^(2)/h^(1) − 2(1 − 1/d)
            quantity: Quantity::Given(MatrixFn::scalar(
                1,
                &Expr::real((lambda + 2.0 * mu) / mu - 1.0),
            )),
            expected: Expected::Positive,
        },
        Reference::vanishes(
            "geometry.torsion-closed",
            "",
            MatrixFn::scalar(1, &geo.torsion_curl().expect("d = 2")),
        ),
    ];
    refs.extend(geometry_references(fr, &geo));

    Ok(ModelSpec {
        name: "lame-t2".into(),
        d: 2,
        m: 2,
        order: Degree::from_integer(2),
        a,
        spectral,
        params: *params,
        chart: "flat torus T2 with periodic coordinates".into(),
        sample_box: vec![(0.0, 2.0 * PI); 2],
        framing: Some(fr.clone()),
        geometry: Some(geo),
        references: refs,
    })
}
