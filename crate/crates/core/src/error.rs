//! Error type shared by every module in the crate.
//!
//! Variants are grouped by the stage that raises them: curve and domain
//! construction, meshing, density handling, homogenisation, the FEM solve,
//! and the experiment driver. All carry enough context to be actionable
//! from a CLI message without a backtrace.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("inner curve intersects or exceeds outer curve: {0}")]
    CurveIntersection(String),

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    #[error("resolution mismatch: {0}")]
    ResolutionMismatch(String),

    #[error("degenerate element: {0}")]
    DegenerateElement(String),

    #[error("unknown boundary component: {0}")]
    UnknownComponent(String),

    #[error("density components do not match domain components: {0}")]
    ComponentMismatch(String),

    #[error("bad radii: {0}")]
    BadRadii(String),

    #[error("epsilon {eps} too large for curve length {length} (need eps < length/4)")]
    EpsilonTooLarge { eps: f64, length: f64 },

    #[error("density must be >= 1 everywhere, got {0}")]
    BetaBelowOne(f64),

    #[error("perturbed boundary self-intersects: {0}")]
    SelfIntersection(String),

    #[error("unknown test function '{0}' (expected one, x, y, x2, radial)")]
    UnknownTestFunction(String),

    #[error("degenerate triangle {index}: signed area {area}")]
    DegenerateTriangle { index: usize, area: f64 },

    #[error("interior stiffness block is not positive definite: {0}")]
    SingularInterior(String),

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("eigensolve failed to converge: {0}")]
    ConvergenceFailure(String),

    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    #[error("io failure: {0}")]
    IOFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
