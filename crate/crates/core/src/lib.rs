//! Discrete holomorphy on graphs.
//!
//! A function `φ` on the vertices of a graph is holomorphic when both `φ`
//! and `φ²` are harmonic for the simple random walk Laplacian. At a vertex
//! this says the oscillations `δ_i = φ(s_i) - φ(s)` satisfy
//! `Σδ_i = Σδ_i² = 0`. The crate provides
//!
//! - [`graph`]: finite graphs, checkers for harmonic / holomorphic /
//!   `N`-holomorphic functions, and the valency-3 decision procedure;
//! - [`moment`]: the power-sum systems solved at every extension step;
//! - [`t3`]: extension dynamics on 3-valent trees, the hexagonal covering,
//!   `N`-holomorphic functions on `T_{N+1}` and locally injective walks;
//! - [`tr3`]: the triangle graph, its two-valued dynamics and monodromy;
//! - [`conjugate`]: conjugate parts of real harmonic functions on trees;
//! - [`tree`]: word-addressed balls in regular trees;
//! - [`render`]: SVG and CSV output.

pub mod conjugate;
pub mod eisenstein;
pub mod fixtures;
pub mod graph;
pub mod moment;
pub mod render;
pub mod t3;
pub mod tr3;
pub mod tree;

use num_complex::Complex64;

pub use eisenstein::Eisenstein;
pub use graph::{Graph, GraphError, RealVertexFunction, Tolerance, VertexFunction};

/// `j = e^{2πi/3}`.
pub fn j() -> Complex64 {
    Complex64::new(-0.5, 0.866_025_403_784_438_6)
}

/// `j² = e^{4πi/3}`.
pub fn j2() -> Complex64 {
    Complex64::new(-0.5, -0.866_025_403_784_438_6)
}
