//! Holomorphic extension on the 3-valent tree and its relatives.
//!
//! Fixing `φ` on one edge `O′O`, every holomorphic extension is obtained
//! step by step: at `S` with predecessor `S′` the children get
//! `φ(S) + α_S(X)(φ(S) − φ(S′))` where `α_S` is a bijection of the child
//! letters onto `{−j, −j²}`. The choice of `α_S` at every vertex is the only
//! freedom, and the image always lies on a hexagonal tiling.

mod extend;
mod lattice;
mod walk;

pub use extend::{
    chain_eval, choices_of, constrained_extension, enumerate_holomorphic, extend_full, extend_on,
    extend_rooted, is_conformal, is_locally_injective, nholo_extend, nholo_multipliers,
    orientation_preserving, canonical_phi, ChoiceAssignment, Constrained, TreeFunction,
    DEFAULT_ENUMERATION_CAP,
};
pub use lattice::{all_extensions_check, hex_covering_check, normalize, CoveringReport, HexLattice, StateReport};
pub use walk::{walk_sample, Walk, WalkShift, INCIDENCE, SYMBOLS};

use thiserror::Error;

use crate::graph::GraphError;
use crate::moment::MomentError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum T3Error {
    #[error("no choice recorded at vertex {0}")]
    MissingChoice(String),
    #[error("choice at vertex {address} is not a permutation of {arity} letters")]
    BadChoice { address: String, arity: usize },
    #[error("extension needs a ball around an edge")]
    NotEdgeCentred,
    #[error("enumeration would produce 2^{log2} functions, above the cap of {cap}")]
    TooLarge { log2: u64, cap: u64 },
    #[error("function is not normalised to (0, 1) on the root edge; apply z -> (z - φ(O′)) / (φ(O) - φ(O′)) first")]
    NotNormalized,
    #[error("function is constant on the root edge")]
    Constant,
    #[error(transparent)]
    Moment(#[from] MomentError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
