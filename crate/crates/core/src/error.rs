use thiserror::Error;

use crate::powerlaw::LfrParams;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex `{vertex}`")]
    SelfLoop { line: usize, vertex: String },

    #[error("line {line}: duplicate edge `{u}` -- `{v}`")]
    DuplicateEdge { line: usize, u: String, v: String },

    #[error("missing label for vertex `{0}`")]
    MissingVertex(String),

    #[error("line {line}: unknown vertex `{vertex}`")]
    UnknownVertex { line: usize, vertex: String },

    #[error("line {line}: duplicate label for vertex `{vertex}`")]
    DuplicateVertex { line: usize, vertex: String },

    #[error("graph has no edges")]
    EmptyGraph,

    #[error("partition does not match graph: {0}")]
    PartitionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate distribution: {0}")]
    DegenerateDistribution(String),

    #[error("infeasible degree parameters: {0}")]
    InfeasibleDegrees(String),

    #[error("invalid community size parameters: {0}")]
    InfeasibleSizes(String),

    #[error("assignment infeasible; consider larger c_max ({0})")]
    AssignmentInfeasible(String),

    #[error("edge rewiring did not converge: {0}")]
    RewiringFailed(String),

    #[error("mixing {achieved:.4} misses target {target:.4} by more than {tolerance}")]
    MixingOutOfTolerance {
        achieved: f64,
        target: f64,
        tolerance: f64,
    },

    #[error("LFR generation failed for estimated parameters ({params}): {source}")]
    Generation {
        params: Box<LfrParams>,
        #[source]
        source: Box<Error>,
    },

    #[error("sample too small: {0}")]
    SampleTooSmall(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of the synthetic graph generator (as opposed to bad input data).
    pub fn is_infeasible_generation(&self) -> bool {
        matches!(
            self,
            Error::InfeasibleDegrees(_)
                | Error::InfeasibleSizes(_)
                | Error::AssignmentInfeasible(_)
                | Error::RewiringFailed(_)
                | Error::MixingOutOfTolerance { .. }
                | Error::Generation { .. }
        )
    }
}
