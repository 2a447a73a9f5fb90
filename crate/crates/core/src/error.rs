use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid degree {degree} for {what} (minimum {min})")]
    InvalidDegree {
        what: &'static str,
        degree: usize,
        min: usize,
    },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("inverted element: jacobian {jacobian:.3e} at geometry node {node:?}")]
    InvertedElement { jacobian: f64, node: [usize; 3] },

    #[error("non-positive jacobian {jacobian:.3e} in element {element}")]
    NonPositiveJacobian { element: usize, jacobian: f64 },

    #[error("invalid mesh specification: {0}")]
    MeshSpec(String),

    #[error("refined elements {0} and {1} are face neighbours")]
    AdjacentRefinement(usize, usize),

    #[error("unmatched face: element {element} side {side}")]
    UnmatchedFace { element: usize, side: usize },

    #[error("face orientation mismatch between element {0} and element {1}")]
    Orientation(usize, usize),

    #[error("nonphysical state: rho = {rho:.3e}, p = {pressure:.3e}")]
    NonphysicalState { rho: f64, pressure: f64 },

    #[error("solver blow-up at step {step} (t = {time:.4e}): {reason}")]
    BlowUp {
        step: usize,
        time: f64,
        reason: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
