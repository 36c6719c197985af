use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("direction vector is zero")]
    ZeroDirection,

    #[error("direction norm is not representable exactly in this backend")]
    InexactNorm,

    #[error("dual quaternion is not a line (h^2 != -1)")]
    NotALine,

    #[error("dual quaternion is not invertible (primal part vanishes)")]
    NotInvertible,

    /// `joint` is 1-based, matching the usual h_1..h_6 labelling.
    #[error("adjacent axes parallel at joint {joint}")]
    AdjacentParallel { joint: usize },

    #[error("adjacent axes coincide at joint {joint} (h_i = +-h_(i+1))")]
    AdjacentCoincide { joint: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid bond diagram: {0}")]
    InvalidDiagram(String),

    #[error("intersection not zero-dimensional: {0}")]
    NotZeroDimensional(String),

    #[error("degenerate (bond-like) configuration: the chain product vanishes")]
    DegenerateConfiguration,

    #[error("invalid tracker configuration: {0}")]
    InvalidConfig(String),

    #[error("numerical solver failed: {0}")]
    SolverFailed(String),

    #[error("internal arithmetic error: {0}")]
    Internal(String),
}
