//! Symbolic-numeric construction of the pseudodifferential projections that
//! commute with an elliptic self-adjoint matrix operator, together with the
//! symbols of |A| and θ(A), on a handful of built-in geometric models.

pub mod degree;
pub mod error;
pub mod expr;
pub mod functional;
pub mod geometry;
pub mod models;
pub mod projections;
pub mod report;
pub mod sampling;
pub mod spectral;
pub mod suite;
pub mod symbol;

pub use degree::Degree;
pub use error::{Error, Result};
pub use expr::{Expr, Params, PhasePoint, Var};
