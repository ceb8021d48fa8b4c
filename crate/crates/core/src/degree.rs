//! Homogeneity degrees are exact rationals.

pub type Degree = num_rational::Rational64;

pub fn to_f64(d: Degree) -> f64 {
    *d.numer() as f64 / *d.denom() as f64
}
