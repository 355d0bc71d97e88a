//! Holomorphic functions on the graph of triangles glued two at each vertex.
//!
//! A holomorphic function is determined by its values on one triangle and a
//! choice, at every further triangle, of which of the two solutions of the
//! power-sum equations goes to which free vertex.

mod ball;
mod triangle;

pub use ball::{
    ball_image_cloud, extend_tr3, extend_tr3_on, related_pair, BranchSelector, CloudMode, CloudPoint, Tr3Ball,
    Tr3Function, Triangle, TriangleCode, CLOUD_POINT_CAP, EXHAUSTIVE_MAX_RADIUS,
};
pub use triangle::{
    branch_monodromy, circle_loop, correspondence_residual, correspondence_residual_adjacent, fixed_point_candidates,
    fixed_point_quartic, fixed_points, involution_check, principal_sqrt, projective_step, singular_locus_distance, singular_points,
    step_M, Branch, ConformalClass, CorrespondencePoint, MarkedTriangle, Monodromy,
};

use thiserror::Error;

use crate::graph::GraphError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Tr3Error {
    #[error("(e, f) = (0, 0) has no conformal class")]
    ZeroClass,
    #[error("root matching is ambiguous at step {step}; use a finer loop")]
    Ambiguous { step: usize },
    #[error("no branch selector entry for triangle {0}")]
    MissingSelector(String),
    #[error("point cloud would hold {points} points, above the cap of {cap}")]
    TooLarge { points: u128, cap: u128 },
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
