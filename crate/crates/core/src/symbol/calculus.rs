//! Left-symbol calculus: composition, formal adjoint, brackets.

use num_complex::Complex64;

use super::expansion::min_depth;
use super::{MatrixFn, SymbolExpansion};
use crate::error::{Error, Result};
use crate::expr::{Expr, Var};

/// All multi-indices of length `d` with |α| = r, in lexicographic order.
pub fn multi_indices(d: usize, r: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, r: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == d {
            prefix.push(r);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=r).rev() {
            prefix.push(k);
            rec(d, r - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if d == 0 {
        if r == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(d, r, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// α! = Π α_i!
pub fn alpha_factorial(alpha: &[usize]) -> f64 {
    alpha.iter().map(|&a| factorial(a)).product()
}

fn vars_of(alpha: &[usize], f: impl Fn(u8) -> Var) -> Vec<Var> {
    let mut v = Vec::new();
    for (i, &a) in alpha.iter().enumerate() {
        v.extend(std::iter::repeat_n(f(i as u8), a));
    }
    v
}

/// (−i)^r / α!
fn weight(alpha: &[usize]) -> Complex64 {
    let r = alpha.iter().sum::<usize>() as i32;
    Complex64::new(0.0, -1.0).powi(r) / alpha_factorial(alpha)
}

fn dim_of(items: &[&SymbolExpansion]) -> usize {
    items
        .iter()
        .flat_map(|s| s.components().iter())
        .map(MatrixFn::max_dim)
        .max()
        .unwrap_or(0)
}

fn check_m(b: &SymbolExpansion, c: &SymbolExpansion) -> Result<()> {
    if b.m() != c.m() {
        return Err(Error::DimensionMismatch(format!(
            "composing {}x{} with {}x{}",
            b.m(),
            b.m(),
            c.m(),
            c.m()
        )));
    }
    Ok(())
}

/// Component `n` of the left composition, summed over a + b + |α| = n.
fn compose_component(b: &SymbolExpansion, c: &SymbolExpansion, n: usize, d: usize) -> MatrixFn {
    let zero = MatrixFn::zero(b.m());
    let mut terms = Vec::new();
    for a in 0..=n {
        let ba = b.components().get(a).unwrap_or(&zero);
        if ba.is_structurally_zero() {
            continue;
        }
        for bb in 0..=(n - a) {
            let cb = c.components().get(bb).unwrap_or(&zero);
            if cb.is_structurally_zero() {
                continue;
            }
            let r = n - a - bb;
            for alpha in multi_indices(d, r) {
                let db = ba.diff_many(&vars_of(&alpha, Var::Xi));
                if db.is_structurally_zero() {
                    continue;
                }
                let dc = cb.diff_many(&vars_of(&alpha, Var::X));
                if dc.is_structurally_zero() {
                    continue;
                }
                terms.push((&db * &dc).scale_c(weight(&alpha)));
            }
        }
    }
    MatrixFn::sum_all(b.m(), &terms)
}

/// Left symbol of the composition B∘C, trusted through relative order
/// min(K, depth(B), depth(C)).
pub fn compose(b: &SymbolExpansion, c: &SymbolExpansion, k: usize) -> Result<SymbolExpansion> {
    check_m(b, c)?;
    let depth = min_depth(Some(k), min_depth(b.depth(), c.depth())).unwrap();
    let d = dim_of(&[b, c]);
    let components = (0..=depth).map(|n| compose_component(b, c, n, d)).collect();
    SymbolExpansion::truncated(b.top_degree() + c.top_degree(), components, depth)
}

/// Only the component of relative order `n` of B∘C.
pub fn compose_order(b: &SymbolExpansion, c: &SymbolExpansion, n: usize) -> Result<MatrixFn> {
    check_m(b, c)?;
    if let Some(depth) = min_depth(b.depth(), c.depth()) {
        if n > depth {
            return Err(Error::TruncationExceeded {
                requested: n,
                depth,
            });
        }
    }
    Ok(compose_component(b, c, n, dim_of(&[b, c])))
}

/// Component of relative order `n` of B∘C − C∘B.
pub fn commutator_order(b: &SymbolExpansion, c: &SymbolExpansion, n: usize) -> Result<MatrixFn> {
    Ok(&compose_order(b, c, n)? - &compose_order(c, b, n)?)
}

/// Exact composition when B is a differential symbol (every component a
/// polynomial in ξ) and both factors are exact. The series terminates.
pub fn compose_exact(b: &SymbolExpansion, c: &SymbolExpansion) -> Result<SymbolExpansion> {
    check_m(b, c)?;
    if b.depth().is_some() || c.depth().is_some() {
        return Err(Error::Validation(
            "exact composition needs exact factors".into(),
        ));
    }
    let mut pmax = 0;
    for comp in b.components() {
        for e in comp.entries() {
            let p = e.xi_poly_degree().ok_or_else(|| {
                Error::Validation("exact composition needs a left factor polynomial in xi".into())
            })?;
            pmax = pmax.max(p as usize);
        }
    }
    let last = (b.len() - 1) + (c.len() - 1) + pmax;
    let d = dim_of(&[b, c]);
    let components = (0..=last).map(|n| compose_component(b, c, n, d)).collect();
    SymbolExpansion::exact(b.top_degree() + c.top_degree(), components)
}

/// Left symbol of the formal adjoint, trusted through min(K, depth(B)).
pub fn adjoint(b: &SymbolExpansion, k: usize) -> SymbolExpansion {
    let depth = min_depth(Some(k), b.depth()).unwrap();
    let d = dim_of(&[b]);
    let zero = MatrixFn::zero(b.m());
    let hs: Vec<MatrixFn> = b
        .components()
        .iter()
        .map(MatrixFn::conj_transpose)
        .collect();
    let components = (0..=depth)
        .map(|n| {
            let mut terms = Vec::new();
            for a in 0..=n {
                let ba = hs.get(a).unwrap_or(&zero);
                if ba.is_structurally_zero() {
                    continue;
                }
                for alpha in multi_indices(d, n - a) {
                    let mut vars = vars_of(&alpha, Var::X);
                    vars.extend(vars_of(&alpha, Var::Xi));
                    let t = ba.diff_many(&vars);
                    if !t.is_structurally_zero() {
                        terms.push(t.scale_c(weight(&alpha)));
                    }
                }
            }
            MatrixFn::sum_all(b.m(), &terms)
        })
        .collect();
    SymbolExpansion::truncated(b.top_degree(), components, depth).expect("consistent sizes")
}

/// compose(B, C) − compose(C, B).
pub fn commutator(b: &SymbolExpansion, c: &SymbolExpansion, k: usize) -> Result<SymbolExpansion> {
    compose(b, c, k)?.sub(&compose(c, b, k)?)
}

/// (B + B*)/2, self-adjoint through the resulting depth.
pub fn symmetrize(b: &SymbolExpansion, k: usize) -> SymbolExpansion {
    let a = adjoint(b, k);
    b.add(&a)
        .expect("adjoint keeps size and degree")
        .scale(Complex64::new(0.5, 0.0))
}

fn bracket_dim(ms: &[&MatrixFn]) -> usize {
    ms.iter().map(|m| m.max_dim()).max().unwrap_or(0)
}

/// {B, C} = Σ_α (B_{x^α} C_{ξ_α} − B_{ξ_α} C_{x^α}), order of factors kept.
pub fn poisson(b: &MatrixFn, c: &MatrixFn) -> Result<MatrixFn> {
    b.check_dims(c)?;
    let d = bracket_dim(&[b, c]);
    let mut terms = Vec::with_capacity(2 * d);
    for a in 0..d as u8 {
        terms.push(&b.diff(Var::X(a)) * &c.diff(Var::Xi(a)));
        terms.push(-(&b.diff(Var::Xi(a)) * &c.diff(Var::X(a))));
    }
    Ok(MatrixFn::sum_all(b.m(), &terms))
}

/// {B, C, D} = Σ_α (B_{x^α} C D_{ξ_α} − B_{ξ_α} C D_{x^α}).
pub fn generalized_poisson(b: &MatrixFn, c: &MatrixFn, d_: &MatrixFn) -> Result<MatrixFn> {
    b.check_dims(c)?;
    b.check_dims(d_)?;
    let d = bracket_dim(&[b, c, d_]);
    let mut terms = Vec::with_capacity(2 * d);
    for a in 0..d as u8 {
        terms.push(&(&b.diff(Var::X(a)) * c) * &d_.diff(Var::Xi(a)));
        terms.push(-(&(&b.diff(Var::Xi(a)) * c) * &d_.diff(Var::X(a))));
    }
    Ok(MatrixFn::sum_all(b.m(), &terms))
}

/// c₁ + (i/2) Σ_α ∂²c₀/∂x^α∂ξ_α.
pub fn subprincipal(b: &SymbolExpansion) -> Result<MatrixFn> {
    let c1 = b.extract_component(1)?;
    let c0 = b.principal();
    let d = c0.max_dim();
    let mixed = MatrixFn::sum_all(
        b.m(),
        &(0..d as u8)
            .map(|a| c0.diff_many(&[Var::X(a), Var::Xi(a)]))
            .collect::<Vec<_>>(),
    );
    Ok(&c1 + &mixed.scale_c(Complex64::new(0.0, 0.5)))
}

/// (i/2) Σ_α ∂²P/∂x^α∂ξ_α, the degree −1 correction that kills the
/// subprincipal symbol of a symbol with principal part `p`.
pub fn half_mixed_trace(p: &MatrixFn) -> MatrixFn {
    let d = p.max_dim();
    let terms: Vec<MatrixFn> = (0..d as u8)
        .map(|a| p.diff_many(&[Var::X(a), Var::Xi(a)]))
        .collect();
    MatrixFn::sum_all(p.m(), &terms).scale_c(Complex64::new(0.0, 0.5))
}

/// Wraps a scalar expression as a 1×1 matrix.
pub fn scalar1(e: Expr) -> MatrixFn {
    MatrixFn::scalar(1, &e)
}
