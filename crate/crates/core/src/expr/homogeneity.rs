use num_complex::Complex64;

use super::{Expr, Params, Tape, Var};
use crate::degree::Degree;
use crate::sampling::Sampler;

/// Outcome of a sampled Euler-identity check.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneityCheck {
    pub pass: bool,
    pub max_residual: f64,
    pub tested: usize,
    pub skipped: usize,
}

/// Default tolerance on |Σ ξ_α ∂e/∂ξ_α − degree·e| at unit momenta.
pub const HOMOGENEITY_TOL: f64 = 1e-10;

/// Checks Σ_α ξ_α ∂e/∂ξ_α = degree·e at `samples` points drawn with x in
/// `[-1, 1]^d` and |ξ| = 1.
pub fn check_homogeneity(e: &Expr, degree: Degree, samples: usize, seed: u64) -> HomogeneityCheck {
    let d = e.max_dim().max(1);
    let mut sampler = Sampler::unit_box(d, seed);
    check_homogeneity_with(e, degree, &mut sampler, samples, HOMOGENEITY_TOL)
}

/// Σ_α ξ_α ∂e/∂ξ_α − degree·e over `d` momentum variables.
pub fn euler_residual(e: &Expr, degree: Degree, d: usize) -> Expr {
    let euler = Expr::sum((0..d).map(|a| Expr::xi(a) * e.diff(Var::Xi(a as u8))));
    euler - e * crate::degree::to_f64(degree)
}

/// Same as [`check_homogeneity`] with a caller-supplied sampler and tolerance.
/// Points where `e` is undefined are skipped and counted.
pub fn check_homogeneity_with(
    e: &Expr,
    degree: Degree,
    sampler: &mut Sampler,
    samples: usize,
    tol: f64,
) -> HomogeneityCheck {
    let residual = euler_residual(e, degree, sampler.dim());
    let tape = Tape::compile(&[residual]);
    let params = Params::new();
    let mut max_residual: f64 = 0.0;
    let mut tested = 0;
    let mut skipped = 0;
    for p in sampler.points(samples) {
        match tape.eval(&p, &params) {
            Ok(v) => {
                tested += 1;
                let r: Complex64 = v[0];
                max_residual = max_residual.max(r.norm());
            }
            Err(_) => skipped += 1,
        }
    }
    HomogeneityCheck {
        pass: tested > 0 && max_residual <= tol,
        max_residual,
        tested,
        skipped,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn norm2() -> Expr {
        (Expr::xi(0).pow(2) + Expr::xi(1).pow(2)).sqrt()
    }

    #[test]
    fn euclidean_norm_is_degree_one() {
        let c = check_homogeneity(&norm2(), Degree::from_integer(1), 50, 1);
        assert!(c.pass, "{c:?}");
        assert!(c.max_residual < 1e-10);
    }

    #[test]
    fn ratio_is_degree_one() {
        let e = Expr::xi(0) * Expr::xi(1) / norm2();
        assert!(check_homogeneity(&e, Degree::from_integer(1), 50, 2).pass);
    }

    #[test]
    fn inhomogeneous_fails() {
        let e = Expr::x(0) + Expr::xi(0);
        let c = check_homogeneity(&e, Degree::from_integer(1), 50, 3);
        assert!(!c.pass);
    }

    #[test]
    fn undefined_points_are_skipped() {
        // sqrt(x1) is undefined on half of [-1, 1]
        let e = Expr::x(0).sqrt() * norm2();
        let c = check_homogeneity(&e, Degree::from_integer(1), 40, 4);
        assert!(c.skipped > 0);
        assert!(c.pass);
    }
}
