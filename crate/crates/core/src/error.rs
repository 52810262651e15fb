use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Malformed or inconsistent input (variable lists, arities, matrix shapes).
    #[error("input error: {0}")]
    Input(String),

    /// Expression syntax error at a byte offset.
    #[error("syntax error at position {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("unknown identifier `{name}` at position {position}")]
    UnknownIdentifier { name: String, position: usize },

    #[error("zero denominator at position {0}")]
    ZeroDenominator(usize),

    #[error("singular matrix")]
    SingularMatrix,

    #[error("component {index} is not {expected}")]
    Grading { index: usize, expected: String },

    #[error("all components of factor {0} are zero")]
    ZeroFactor(usize),

    #[error("surface mismatch")]
    SurfaceMismatch,

    /// All components of a factor collapsed to zero after substitution.
    #[error("degenerate composition: factor {0} vanishes identically")]
    DegenerateComposition(usize),

    /// Iteration would exceed the configured degree budget.
    #[error("degree budget {budget} exceeded after iterate {completed}")]
    BudgetExceeded { completed: usize, budget: u32 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The pullback matrix does not map the nef cone into itself.
    #[error("cone preservation violated: {0}")]
    ConeViolation(String),

    #[error("nef cone is not simplicial; no dual description available")]
    UnsupportedCone,

    #[error("lattice mismatch")]
    LatticeMismatch,

    /// Randomized fiber-count trials disagreed.
    #[error("genericity failure: trial counts {0:?} disagree")]
    Genericity(alloc::vec::Vec<Option<u64>>),

    #[error("indeterminate: {0}")]
    Indeterminate(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}
