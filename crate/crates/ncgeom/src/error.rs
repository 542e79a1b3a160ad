use thiserror::Error;

/// Errors shared by all layers of the calculus.
#[derive(Error, Debug)]
pub enum NcError {
    #[error("torus dimension mismatch: {0} vs {1}")]
    DimMismatch(usize, usize),
    #[error("matrix size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("axis {axis} out of range for dimension {dim}")]
    AxisOutOfRange { axis: usize, dim: usize },
    #[error("matrix size must be at least 2, got {0}")]
    SizeTooSmall(usize),
    #[error("expected a traceless element (|Tr| = {0:.3e})")]
    NotTraceless(f64),
    #[error("expected an antihermitian element (residual {0:.3e})")]
    NotAntihermitian(f64),
    #[error("expected a unitary element (|U*U - 1| = {0:.3e})")]
    NotUnitary(f64),
    #[error("expected det = 1 (|det - 1| = {0:.3e})")]
    NotSpecial(f64),
    #[error("form of degree {degree} evaluated on {given} derivations")]
    WrongArity { degree: usize, given: usize },
    #[error("involution on forms is only defined for degree <= 1, got {0}")]
    DegreeUnsupported(usize),
    #[error("connection form does not satisfy the SU conditions (residual {0:.3e})")]
    NotSuConnection(f64),
    #[error("splitting is not anchor preserving (residual {0:.3e})")]
    NotAnchorPreserving(f64),
    #[error("connection lies outside the truncated parameter space (residual {0:.3e})")]
    OutsideTruncation(f64),
    #[error("non-finite action encountered during descent at iteration {0}")]
    NonFiniteAction(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, NcError>;
