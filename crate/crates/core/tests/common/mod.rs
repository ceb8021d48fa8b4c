#![allow(dead_code)]

use num_complex::Complex64;
use psproj_core::symbol::{MatrixFn, SymbolExpansion};
use psproj_core::{Degree, Expr, PhasePoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn coef(r: &mut ChaCha8Rng) -> Expr {
    let a = r.random_range(-1.0..1.0);
    let b = r.random_range(-1.0..1.0);
    let c = r.random_range(-1.0..1.0);
    let ph = r.random_range(0.0..6.0);
    Expr::constant(Complex64::new(a, b)) + (Expr::x(0) * 1.3 + Expr::x(1) + ph).sin() * c
}

/// Random 2×2 expansion on R² with top degree 1: a degree-1 principal part
/// built from ξ₁, ξ₂ and |ξ|, then a degree-0 part.
pub fn random_first_order(r: &mut ChaCha8Rng) -> SymbolExpansion {
    let h = (Expr::xi(0) * Expr::xi(0) + Expr::xi(1) * Expr::xi(1)).sqrt();
    let p0 = MatrixFn::from_fn(2, |_, _| {
        coef(r) * Expr::xi(0) + coef(r) * Expr::xi(1) + coef(r) * &h
    });
    let p1 = MatrixFn::from_fn(2, |_, _| {
        coef(r) + coef(r) * Expr::xi(0) * Expr::xi(1) / (&h * &h)
    });
    SymbolExpansion::exact(Degree::from_integer(1), vec![p0, p1]).unwrap()
}

/// Random 2×2 expansion of top degree 0 with `n` components.
pub fn random_zero_order(r: &mut ChaCha8Rng, n: usize) -> SymbolExpansion {
    let h = (Expr::xi(0) * Expr::xi(0) + Expr::xi(1) * Expr::xi(1)).sqrt();
    let comps = (0..n)
        .map(|k| {
            let f = h.pow(-(k as i32));
            MatrixFn::from_fn(2, |_, _| (coef(r) + coef(r) * Expr::xi(0) / &h) * &f)
        })
        .collect();
    SymbolExpansion::exact(Degree::from_integer(0), comps).unwrap()
}

pub fn points(n: usize, seed: u64) -> Vec<PhasePoint> {
    psproj_core::sampling::Sampler::new(vec![(-1.0, 1.0); 2], seed).points(n)
}

/// Central difference of `f` along one phase-space coordinate.
pub fn central_difference(
    f: impl Fn(&PhasePoint) -> Complex64,
    p: &PhasePoint,
    momentum: bool,
    index: usize,
    step: f64,
) -> Complex64 {
    let shift = |s: f64| {
        let mut q = p.clone();
        if momentum {
            q.xi[index] += s;
        } else {
            q.x[index] += s;
        }
        q
    };
    (f(&shift(step)) - f(&shift(-step))) / (2.0 * step)
}
