use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} exceeds the configured bound ({size} > {limit})")]
    SizeLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("subgroups live in different ambient groups")]
    AmbientMismatch,

    #[error("codomains do not match")]
    CodomainMismatch,

    #[error("map is not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("homomorphism is not surjective")]
    NotSurjective,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("subgroup is not contained in the claimed overgroup")]
    NotSubset,

    #[error("subgroup is not normalized by the overgroup")]
    NotNormalIn,

    #[error("quotient is not abelian")]
    NotAbelianQuotient,

    #[error("square does not commute")]
    NotCommuting,

    #[error("map is not a section")]
    NotASection,

    #[error("extension is not normal")]
    NotNormalExtension,

    #[error("operation requires the {0} context")]
    ModeMismatch(&'static str),

    #[error("presented group does not have class <= {0}")]
    ClassVerification(usize),

    #[error("internal consistency failure: {0}")]
    Consistency(String),

    #[error("value did not stabilize up to working class {max_class}")]
    Unstable { max_class: usize },

    #[error("comparison map at subset {subset:#b} is not surjective")]
    NotExtension { subset: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
