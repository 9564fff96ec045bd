use thiserror::Error;

/// Errors raised by the norm kernels, checkers and analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponent p = {value} is not admissible: {requirement}")]
    Exponent { value: f64, requirement: &'static str },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("negative entry {value} in {context}")]
    Negative { context: &'static str, value: f64 },

    /// T^2 - 4D came out negative by more than roundoff can explain.
    #[error("radicand T^2 - 4D = {radicand:e} is negative beyond roundoff (T = {trace:e})")]
    Radicand { radicand: f64, trace: f64 },

    #[error("length mismatch: {0}")]
    Length(String),

    /// `index` is 1-based.
    #[error("not positive semidefinite at index {index}: a*b - |c|^2 = {margin:e}")]
    NotPsd { index: usize, margin: f64 },

    /// The diagonals of A and B cannot be sorted by one common permutation.
    /// Indices are 1-based.
    #[error("diagonals of A and B are not similarly ordered (indices {i} and {j})")]
    Discordant { i: usize, j: usize },

    #[error("n = {n} exceeds the limit {max} for {what}")]
    TooLarge { what: &'static str, n: usize, max: usize },

    #[error("boundary state: {0}")]
    Boundary(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("unknown checker `{0}`")]
    UnknownChecker(String),

    #[error("checker `{checker}` cannot run on the `{family}` family")]
    Unsupported { checker: String, family: String },

    #[error("empty p grid")]
    EmptyGrid,

    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
