use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Expected, ModelParams, ModelSpec, Quantity, Reference};
use crate::degree::Degree;
use crate::error::Result;
use crate::expr::Expr;
use crate::spectral::SpectralData;
use crate::symbol::{pauli, symmetrize, MatrixFn, SymbolExpansion};

fn norm_sq(d: usize) -> Expr {
    Expr::sum((0..d).map(|a| Expr::xi(a) * Expr::xi(a)))
}

/// c₀ + Σ_α c_α sin(x^α + φ_α) with random coefficients.
fn random_trig(rng: &mut ChaCha8Rng, d: usize) -> Expr {
    let mut terms = vec![Expr::real(rng.random_range(-1.0..1.0))];
    for a in 0..d {
        let c = rng.random_range(-1.0..1.0);
        let ph = rng.random_range(0.0..2.0 * PI);
        terms.push((Expr::x(a) + ph).sin() * c);
    }
    Expr::sum(terms)
}

/// A random real function of degree 0 in ξ.
fn random_real(rng: &mut ChaCha8Rng, d: usize) -> Expr {
    let base = random_trig(rng, d);
    if d < 2 {
        return base;
    }
    let c = rng.random_range(-1.0..1.0);
    base + Expr::xi(0) * Expr::xi(d - 1) * norm_sq(d).recip() * c
}

/// A seeded Hermitian m×m matrix whose entries are smooth in x and
/// homogeneous of degree 0 in ξ.
pub fn random_hermitian_zero_order(m: usize, d: usize, seed: u64) -> MatrixFn {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![vec![Expr::zero(); m]; m];
    for i in 0..m {
        out[i][i] = random_real(&mut rng, d);
        for j in i + 1..m {
            let re = random_real(&mut rng, d);
            let im = random_real(&mut rng, d);
            out[i][j] = &re + Expr::i() * &im;
            out[j][i] = &re - Expr::i() * &im;
        }
    }
    MatrixFn::from_fn(m, |i, j| out[i][j].clone())
}

/// A seeded Hermitian matrix homogeneous of degree −2, used to perturb the
/// initial projection symbols at relative order 2.
pub fn random_tail(m: usize, d: usize, seed: u64) -> MatrixFn {
    random_hermitian_zero_order(m, d, seed).scale(&norm_sq(d).recip())
}

/// A first order 2×2 system on T² with simple eigenvalues of both signs.
/// The full symbol is made formally self-adjoint through relative order
/// `depth`, so it is trusted only that far.
pub fn random_first_order_model(params: &ModelParams, depth: usize) -> Result<ModelSpec> {
    let d = 2;
    let h = norm_sq(d).sqrt();
    let alpha = Expr::x(0).sin() + 2.0;
    let beta = Expr::x(1).cos();
    let phi = (Expr::x(0) + Expr::x(1)).sin() * params.twist;
    let s = pauli();
    let n_sigma = MatrixFn::sum_all(
        2,
        &[
            s[0].scale(&Expr::xi(0)),
            s[1].scale(&(Expr::xi(1) * phi.cos())),
            s[2].scale(&(Expr::xi(1) * phi.sin())),
        ],
    );
    let a0 = &MatrixFn::scalar(2, &(&beta * &h)) + &n_sigma.scale(&alpha);
    let a1 = random_hermitian_zero_order(2, d, params.seed);
    let one = Degree::from_integer(1);
    let raw = SymbolExpansion::exact(one, vec![a0, a1])?;
    let a = symmetrize(&raw, depth.max(1));

    let id = MatrixFn::identity(2);
    let unit = n_sigma.scale(&h.recip());
    let h_minus = (&beta - &alpha) * &h;
    let h_plus = (&beta + &alpha) * &h;
    let gap = (&h_plus - &h_minus) * h.recip() - 1.0;
    let spectral = SpectralData::new(
        one,
        vec![(h_minus, (&id - &unit).scale_re(0.5))],
        vec![(h_plus, (&id + &unit).scale_re(0.5))],
    )?;
    let refs = vec![Reference {
        check: "random.eigenvalue-gap".into(),
        index: String::new(),
        quantity: Quantity::Given(MatrixFn::scalar(1, &gap)),
        expected: Expected::Positive,
    }];
    Ok(ModelSpec {
        name: "random2x2".into(),
        d,
        m: 2,
        order: one,
        a,
        spectral,
        params: *params,
        chart: "flat torus T2 with periodic coordinates".into(),
        sample_box: vec![(0.0, 2.0 * PI); 2],
        framing: None,
        geometry: None,
        references: refs,
    })
}

/// The scalar operator −div(a grad) on T² with a = 2 + sin x¹.
pub fn scalar_trivial_model(params: &ModelParams) -> Result<ModelSpec> {
    let d = 2;
    let a = Expr::x(0).sin() + 2.0;
    let hsq = norm_sq(d);
    let two = Degree::from_integer(2);
    let sym = SymbolExpansion::exact(
        two,
        vec![
            MatrixFn::scalar(1, &(&a * &hsq)),
            MatrixFn::scalar(
                1,
                &(Expr::x(0).cos() * Expr::xi(0)).scale(Complex64::new(0.0, -1.0)),
            ),
        ],
    )?;
    let spectral = SpectralData::new(two, Vec::new(), vec![(&a * &hsq, MatrixFn::identity(1))])?;
    let zero = MatrixFn::zero(1);
    let refs = vec![
        Reference::equals(
            "scalar.subprincipal",
            "",
            Quantity::Subprincipal,
            zero.clone(),
        ),
        Reference::equals(
            "scalar.projection-sub",
            "1",
            Quantity::ProjectionSub(1),
            zero.clone(),
        ),
        Reference::equals("scalar.modulus-sub", "", Quantity::ModulusSub, zero.clone()),
        Reference::equals(
            "scalar.modulus-sub-closed-form",
            "",
            Quantity::ModulusSubClosedForm,
            zero,
        ),
    ];
    Ok(ModelSpec {
        name: "scalar-trivial".into(),
        d,
        m: 1,
        order: two,
        a: sym,
        spectral,
        params: *params,
        chart: "flat torus T2 with periodic coordinates".into(),
        sample_box: vec![(0.0, 2.0 * PI); 2],
        framing: None,
        geometry: None,
        references: refs,
    })
}
