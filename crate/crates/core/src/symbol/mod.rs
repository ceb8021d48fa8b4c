//! Polyhomogeneous matrix symbols and their left-quantized calculus.

mod calculus;
mod expansion;
mod matrix;
mod sampled;

pub use calculus::{
    adjoint, alpha_factorial, commutator, commutator_order, compose, compose_exact, compose_order,
    generalized_poisson, half_mixed_trace, multi_indices, poisson, scalar1, subprincipal,
    symmetrize,
};
pub use expansion::{HomogeneousComponent, SymbolExpansion};
pub use matrix::{pauli, MatrixFn};
pub use sampled::{
    dilation_residual_each, max_abs, max_abs_diff, max_abs_each, sampled_max, MatrixBatch, Sampled,
};
