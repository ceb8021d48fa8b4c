mod common;

use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use psproj_core::expr::simplify;
use psproj_core::models::{build_model, ModelName, ModelParams};
use psproj_core::projections::init_base_projection;
use psproj_core::symbol::{
    adjoint, commutator, compose, generalized_poisson, max_abs, pauli, poisson, subprincipal,
    MatrixFn, SymbolExpansion,
};
use psproj_core::{Degree, Expr, Params, PhasePoint, Var};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn pt(x: &[f64], xi: &[f64]) -> PhasePoint {
    PhasePoint::new(x.to_vec(), xi.to_vec()).unwrap()
}

fn norm(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[test]
fn sqrt_derivative_matches_finite_difference() {
    let h = (Expr::xi(0) * Expr::xi(0) + Expr::xi(1) * Expr::xi(1)).sqrt();
    let at = pt(&[0.0, 0.0], &[3.0, 4.0]);
    let exact = h.diff(Var::Xi(0)).eval_at(&at).unwrap();
    let fd = common::central_difference(|q| h.eval_at(q).unwrap(), &at, true, 0, 1e-6);
    assert!((exact - fd).norm() < 1e-8);
    assert!((exact.re - 0.6).abs() < 1e-14);
}

#[derive(Clone, Debug)]
enum Tree {
    X(u8),
    Xi(u8),
    C(f64),
    Add(Box<Tree>, Box<Tree>),
    Mul(Box<Tree>, Box<Tree>),
    Sin(Box<Tree>),
    Exp(Box<Tree>),
    SqrtPos(Box<Tree>),
    RecipPos(Box<Tree>),
}

impl Tree {
    fn build(&self) -> Expr {
        match self {
            Tree::X(a) => Expr::x(*a as usize),
            Tree::Xi(a) => Expr::xi(*a as usize),
            Tree::C(c) => Expr::real(*c),
            Tree::Add(a, b) => a.build() + b.build(),
            Tree::Mul(a, b) => a.build() * b.build(),
            Tree::Sin(a) => a.build().sin(),
            Tree::Exp(a) => (a.build().sin()).exp(),
            Tree::SqrtPos(a) => {
                let e = a.build();
                (Expr::real(1.0) + &e * &e).sqrt()
            }
            Tree::RecipPos(a) => (Expr::real(2.0) + a.build().sin()).recip(),
        }
    }
}

fn tree() -> impl Strategy<Value = Tree> {
    let leaf = prop_oneof![
        (0u8..2).prop_map(Tree::X),
        (0u8..2).prop_map(Tree::Xi),
        (-2.0f64..2.0).prop_map(Tree::C),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Tree::Mul(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Tree::Sin(Box::new(a))),
            inner.clone().prop_map(|a| Tree::Exp(Box::new(a))),
            inner.clone().prop_map(|a| Tree::SqrtPos(Box::new(a))),
            inner.prop_map(|a| Tree::RecipPos(Box::new(a))),
        ]
    })
}

fn point() -> impl Strategy<Value = PhasePoint> {
    (
        prop::array::uniform2(-1.0f64..1.0),
        prop::array::uniform2(-1.0f64..1.0),
    )
        .prop_map(|(x, xi)| pt(&x, &xi))
}

fn var() -> impl Strategy<Value = (bool, usize)> {
    (any::<bool>(), 0usize..2)
}

fn as_var((momentum, a): (bool, usize)) -> Var {
    if momentum {
        Var::Xi(a as u8)
    } else {
        Var::X(a as u8)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn derivative_matches_finite_difference(t in tree(), p in point(), v in var()) {
        let e = t.build();
        let exact = e.diff(as_var(v)).eval_at(&p).unwrap();
        let fd = common::central_difference(|q| e.eval_at(q).unwrap(), &p, v.0, v.1, 1e-5);
        let scale = 1.0 + exact.norm();
        prop_assert!((exact - fd).norm() < 1e-6 * scale, "{exact} vs {fd}");
    }

    #[test]
    fn simplify_preserves_value(t in tree(), p in point()) {
        let e = t.build();
        let a = e.eval_at(&p).unwrap();
        let b = simplify(&e).eval_at(&p).unwrap();
        prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn mixed_partials_commute(t in tree(), p in point(), u in var(), v in var()) {
        let e = t.build();
        let a = e.diff(as_var(u)).diff(as_var(v)).eval_at(&p).unwrap();
        let b = e.diff(as_var(v)).diff(as_var(u)).eval_at(&p).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * (1.0 + a.norm()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let b = common::random_first_order(&mut r);
        let back = adjoint(&adjoint(&b, 3), 3).sub(&b.with_depth(3)).unwrap();
        let s = max_abs(&back.components_through(3).unwrap(), &common::points(20, seed), &Params::new()).unwrap();
        prop_assert!(s.max < 1e-9, "residual {}", s.max);
    }

    #[test]
    fn composition_is_associative_to_truncation(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let b = common::random_first_order(&mut r);
        let c = common::random_zero_order(&mut r, 3);
        let d = common::random_first_order(&mut r);
        let left = compose(&compose(&b, &c, 2).unwrap(), &d, 2).unwrap();
        let right = compose(&b, &compose(&c, &d, 2).unwrap(), 2).unwrap();
        let diff = left.sub(&right).unwrap().components_through(2).unwrap();
        let s = max_abs(&diff, &common::points(20, seed), &Params::new()).unwrap();
        prop_assert!(s.max < 1e-9, "residual {}", s.max);
    }

    #[test]
    fn subprincipal_composition_law(seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let b = common::random_first_order(&mut r);
        let c = common::random_first_order(&mut r);
        let lhs = subprincipal(&compose(&b, &c, 1).unwrap()).unwrap();
        let (bp, cp) = (b.principal(), c.principal());
        let rhs = MatrixFn::sum_all(2, &[
            bp * &subprincipal(&c).unwrap(),
            &subprincipal(&b).unwrap() * cp,
            poisson(bp, cp).unwrap().scale_c(I * 0.5),
        ]);
        let s = max_abs(&[&lhs - &rhs], &common::points(20, seed), &Params::new()).unwrap();
        prop_assert!(s.max < 1e-9, "residual {}", s.max);
    }
}

#[test]
fn generalized_bracket_term_by_term() {
    let mut r = common::rng(5);
    let b = common::random_first_order(&mut r).principal().clone();
    let c = common::random_zero_order(&mut r, 1).principal().clone();
    let d = common::random_first_order(&mut r).principal().clone();
    let value = generalized_poisson(&b, &c, &d).unwrap();
    let ev = |m: &MatrixFn, q: &PhasePoint| m.eval_at(q).unwrap();
    let fd = |m: &MatrixFn, q: &PhasePoint, momentum: bool, a: usize| {
        let step = 1e-5;
        let mut hi = q.clone();
        let mut lo = q.clone();
        if momentum {
            hi.xi[a] += step;
            lo.xi[a] -= step;
        } else {
            hi.x[a] += step;
            lo.x[a] -= step;
        }
        (ev(m, &hi) - ev(m, &lo)).unscale(2.0 * step)
    };
    for q in common::points(20, 9) {
        let cq = ev(&c, &q);
        let mut oracle = DMatrix::zeros(2, 2);
        for a in 0..2 {
            oracle += fd(&b, &q, false, a) * &cq * fd(&d, &q, true, a);
            oracle -= fd(&b, &q, true, a) * &cq * fd(&d, &q, false, a);
        }
        assert!(norm(&(ev(&value, &q) - oracle)) < 1e-6);
    }
}

#[test]
fn generalized_bracket_collapses() {
    let mut r = common::rng(6);
    let b = common::random_first_order(&mut r).principal().clone();
    let d = common::random_first_order(&mut r).principal().clone();
    let id = MatrixFn::identity(2);
    let pts = common::points(10, 1);
    let g = generalized_poisson(&b, &id, &d).unwrap();
    let diff = &g - &poisson(&b, &d).unwrap();
    assert!(max_abs(&[diff], &pts, &Params::new()).unwrap().max < 1e-12);
    let z = generalized_poisson(&id, &b, &id).unwrap();
    assert!(max_abs(&[z], &pts, &Params::new()).unwrap().max == 0.0);
}

#[test]
fn pauli_bracket_in_one_dimension() {
    let [s1, s2, s3] = pauli();
    let f = &s1.scale(&Expr::x(0)) + &s2.scale(&Expr::xi(0));
    let br = poisson(&f, &f).unwrap();
    let c = |m: &MatrixFn| m.eval_at(&pt(&[0.3], &[1.0])).unwrap();
    let oracle = &c(&s1) * &c(&s2) - &c(&s2) * &c(&s1);
    assert!(norm(&(c(&br) - &oracle)) < 1e-14);
    assert!(norm(&(oracle - c(&s3).scale(2.0).map(|z| z * I))) < 1e-14);
}

#[test]
fn bracket_of_a_function_with_itself_and_of_constants() {
    let f = MatrixFn::scalar(1, &(Expr::x(0).sin() * Expr::xi(0) * Expr::xi(1)));
    let pts = common::points(10, 2);
    assert!(
        max_abs(&[poisson(&f, &f).unwrap()], &pts, &Params::new())
            .unwrap()
            .max
            < 1e-14
    );
    let mut r = common::rng(1);
    let cm = common::random_first_order(&mut r).principal().clone();
    let z = poisson(&MatrixFn::identity(2), &cm).unwrap();
    assert!(max_abs(&[z], &pts, &Params::new()).unwrap().max == 0.0);
}

#[test]
fn commutator_with_itself_vanishes() {
    let mut r = common::rng(11);
    let b = common::random_first_order(&mut r);
    let c = commutator(&b, &b, 3).unwrap();
    let s = max_abs(
        &c.components_through(3).unwrap(),
        &common::points(20, 3),
        &Params::new(),
    )
    .unwrap();
    assert!(s.max < 1e-12);
}

#[test]
fn dirac_square_and_base_projection_commute() {
    let model = build_model(ModelName::DiracS3, &ModelParams::default(), 3).unwrap();
    let pts = model.sample_points(50, 4);
    let a = &model.a;
    let top = compose(a, a, 0).unwrap().extract_component(0).unwrap();
    let h = &model.spectral.entries()[1].eigenvalue;
    let p = Params::new();
    for q in &pts {
        let w = a.principal().eval(q, &p).unwrap();
        let h2 = h.eval(q, &p).unwrap().powi(2);
        let sq = &w * &w;
        assert!(norm(&(&sq - DMatrix::identity(2, 2) * h2)) < 1e-10);
        assert!(norm(&(top.eval(q, &p).unwrap() - sq)) < 1e-10);
    }
    for e in model.spectral.entries() {
        let p0 = init_base_projection(&e.projection, 1, None).unwrap();
        let c = commutator(a, &p0, 1).unwrap().extract_component(0).unwrap();
        assert!(max_abs(&[c], &pts, &p).unwrap().max < 1e-12);
    }
}

#[test]
fn leibniz_composition_in_one_dimension() {
    let one = |e: Expr| {
        SymbolExpansion::exact(Degree::from_integer(1), vec![MatrixFn::scalar(1, &e)]).unwrap()
    };
    let b = one(Expr::xi(0));
    let c = one(Expr::x(0) * Expr::xi(0));
    let bc = compose(&b, &c, 2).unwrap();
    let q = pt(&[0.7], &[1.3]);
    let top = bc.extract_component(0).unwrap().eval_at(&q).unwrap()[(0, 0)];
    let next = bc.extract_component(1).unwrap().eval_at(&q).unwrap()[(0, 0)];
    assert!((top - 0.7 * 1.3 * 1.3).norm() < 1e-14);
    assert!((next + I * 1.3).norm() < 1e-14);
    assert!(bc.extract_component(2).unwrap().eval_at(&q).unwrap()[(0, 0)].norm() < 1e-14);
}
