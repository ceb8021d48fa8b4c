use psproj_core::functional::{
    heaviside_symbol, modulus_sub_closed_form, modulus_symbol, signdef_principal_check,
};
use psproj_core::models::{build_model, ModelName, ModelParams, ModelSpec};
use psproj_core::projections::{build_projections, Variant};
use psproj_core::report::Status;
use psproj_core::symbol::{adjoint, compose, max_abs, subprincipal, MatrixFn, SymbolExpansion};
use psproj_core::Params;

fn setup(name: ModelName, k: usize) -> (ModelSpec, Vec<SymbolExpansion>) {
    let m = build_model(name, &ModelParams::default(), k).unwrap();
    let ps = build_projections(&m, k, Variant::CommutingSimplified).unwrap();
    (m, ps)
}

fn worst(mats: &[MatrixFn], m: &ModelSpec) -> f64 {
    let s = max_abs(mats, &m.sample_points(50, 12), &Params::new()).unwrap();
    assert_eq!(s.tested, 50);
    s.max
}

#[test]
fn scalar_modulus_and_heaviside() {
    let (m, ps) = setup(ModelName::ScalarTrivial, 3);
    let md = modulus_symbol(&m, &ps, 3).unwrap();
    let diff = md.sub(&m.a.with_depth(3)).unwrap();
    assert_eq!(worst(&diff.components_through(3).unwrap(), &m), 0.0);
    let th = heaviside_symbol(&m, &ps).unwrap();
    let diff = th.sub(&SymbolExpansion::identity(1)).unwrap();
    assert_eq!(worst(&diff.components_through(3).unwrap(), &m), 0.0);
    let closed = &modulus_sub_closed_form(&m).unwrap() - &subprincipal(&m.a).unwrap();
    assert!(worst(&[closed], &m) < 1e-14);
}

#[test]
fn modulus_squares_to_the_square() {
    for name in [ModelName::DiracT3, ModelName::Random2x2] {
        let (m, ps) = setup(name, 2);
        let md = modulus_symbol(&m, &ps, 2).unwrap();
        let sq = compose(&md, &md, 2)
            .unwrap()
            .sub(&compose(&m.a, &m.a, 2).unwrap())
            .unwrap();
        assert!(
            worst(&sq.components_through(2).unwrap(), &m) < 1e-9,
            "{name}"
        );
        let sub = &subprincipal(&md).unwrap() - &modulus_sub_closed_form(&m).unwrap();
        assert!(worst(&[sub], &m) < 1e-9, "{name}");
    }
}

#[test]
fn sphere_modulus_subprincipal() {
    let (m, ps) = setup(ModelName::DiracS3, 1);
    let h = &m.spectral.get(1).unwrap().eigenvalue;
    let target = m.a.principal().scale(&(h * 2.0).recip());
    let md = modulus_symbol(&m, &ps, 1).unwrap();
    assert!(worst(&[&subprincipal(&md).unwrap() - &target], &m) < 1e-8);
    assert!(worst(&[&modulus_sub_closed_form(&m).unwrap() - &target], &m) < 1e-8);
}

#[test]
fn heaviside_is_a_projection_and_complements() {
    let (m, ps) = setup(ModelName::DiracT3, 2);
    let th = heaviside_symbol(&m, &ps).unwrap();
    let idem = compose(&th, &th, 2).unwrap().sub(&th).unwrap();
    let sa = adjoint(&th, 2).sub(&th).unwrap();
    let mut mats = idem.components_through(2).unwrap();
    mats.extend(sa.components_through(2).unwrap());
    assert!(worst(&mats, &m) < 1e-9);

    let neg = m.negated();
    let pn = build_projections(&neg, 2, Variant::CommutingSimplified).unwrap();
    let total = th
        .add(&heaviside_symbol(&neg, &pn).unwrap())
        .unwrap()
        .sub(&SymbolExpansion::identity(2))
        .unwrap();
    assert!(worst(&total.components_through(2).unwrap(), &m) < 1e-9);
}

#[test]
fn sign_definite_pieces() {
    for name in [ModelName::DiracS3, ModelName::LameT2] {
        let (m, ps) = setup(name, 1);
        let rows = signdef_principal_check(&m, &ps, &m.sample_points(50, 3), &Params::new(), 1e-10)
            .unwrap();
        assert_eq!(rows.len(), 2 * m.spectral.m());
        for r in &rows {
            assert_eq!(r.status, Status::Pass, "{name} {r:?}");
            assert_eq!(r.samples, 50);
        }
    }
    // a positive-definite operator has no negative pieces, and θ(A) = Id
    let (m, ps) = setup(ModelName::LameT2, 1);
    assert_eq!(m.spectral.m_minus(), 0);
    let rows =
        signdef_principal_check(&m, &ps, &m.sample_points(5, 3), &Params::new(), 1e-10).unwrap();
    assert!(rows.iter().all(|r| !r.index.starts_with('-')));
    let th = heaviside_symbol(&m, &ps)
        .unwrap()
        .sub(&SymbolExpansion::identity(2))
        .unwrap();
    assert!(worst(&th.components_through(1).unwrap(), &m) < 1e-12);
    let nth = heaviside_symbol(&m.negated(), &ps).unwrap();
    assert!(worst(&nth.components_through(1).unwrap(), &m) == 0.0);
}

#[test]
fn projection_count_is_checked() {
    let (m, ps) = setup(ModelName::DiracT3, 1);
    assert!(modulus_symbol(&m, &ps[..1], 1).is_err());
    assert!(heaviside_symbol(&m, &ps[..1]).is_err());
}
