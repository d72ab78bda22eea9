use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Parameters fall outside the domain where a formula holds.
    #[error("validity: {0}")]
    Validity(String),

    /// A term `1/0` would enter the sum and skipping was not requested.
    #[error("singular term at j = {j}; pass skip_singular to drop it")]
    Singular { j: u64 },

    #[error("{what} = {requested} exceeds the cap {cap}")]
    CapExceeded {
        what: &'static str,
        requested: usize,
        cap: usize,
    },

    #[error("argument at the pole z = 1 (|z - 1| = {distance:e})")]
    Pole { distance: f64 },

    #[error("series constant term {magnitude:e} is too small to invert")]
    NotInvertible { magnitude: f64 },

    #[error("root finding did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("repeated root near {re} + {im}i")]
    RepeatedRoot { re: f64, im: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
