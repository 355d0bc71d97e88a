//! Conjugate parts of real harmonic functions on trees.
//!
//! A real `g` is a conjugate part of `f` when `f + ig` is holomorphic; at
//! every vertex this means `‖∇g‖ = ‖∇f‖`, `⟨∇f, ∇g⟩ = 0` and `Σ∇g = 0`.

mod bounded;
mod forced;
mod sphere;
mod sweep;

pub use bounded::{
    bounded_holomorphic_t4, contraction_residuals, solve_contraction, BoundedHolomorphic, Contraction, DEFAULT_R2,
};
pub use forced::{forced_propagation_infeasibility, ForcedCertificate, ForcedOutcome};
pub use sphere::{conjugate_step, projection_range, Completion, Projection};
pub use sweep::{
    conjugate_residual, constant_norm_harmonic, constant_norm_on_ball, find_conjugate, no_conjugate_fixture,
    random_harmonic, tree_centre, ConjugateOutcome, SweepFailure,
};

use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConjugateError {
    #[error("function is not harmonic at {vertex} (residual {residual:e})")]
    NotHarmonic { vertex: String, residual: f64 },
    #[error("graph is not a tree")]
    NotATree,
    #[error("{0}")]
    Precondition(String),
    #[error("no conjugate gradient at {vertex}: fixed component {a1} is outside [-{alpha}, {alpha}]")]
    Infeasible { vertex: String, alpha: f64, a1: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
