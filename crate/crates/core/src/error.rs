use alloc::string::String;

/// Errors produced by the constructions and protocols in this crate.
///
/// Verification routines never return an error for a failed check; failures
/// are report content. Errors here mean a precondition was not met.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("search exhausted after {tried} candidates: {what}")]
    SearchExhausted { what: &'static str, tried: u64 },
    #[error("moduli are not pairwise coprime")]
    NonCoprimeModuli,
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("unsupported modulus: {0}")]
    UnsupportedModulus(String),
    #[error("budget exceeded: {what} = {requested} > {limit}")]
    BudgetExceeded {
        what: &'static str,
        requested: u64,
        limit: u64,
    },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("unknown index {0}")]
    UnknownIndex(usize),
    #[error("sampling retries exhausted after {attempts} attempts ({diagnostics})")]
    RetryExhausted { attempts: u32, diagnostics: String },
    #[error("invalid minimal set: {0}")]
    InvalidOmega(String),
    #[error("group too small: eta = {eta} < {parties} parties")]
    GroupTooSmall { eta: usize, parties: usize },
    #[error("secret is not a unit modulo q'")]
    InvalidSecret,
    #[error("invalid access structure: {0}")]
    InvalidStructure(String),
    #[error("coalition is not authorized")]
    NotAuthorized,
    #[error("inconsistent bundle: {0}")]
    InconsistentBundle(String),
    #[error("empty input")]
    EmptyInput,
}

pub type Result<T> = core::result::Result<T, Error>;
