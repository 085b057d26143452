use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("distance must be positive and finite, got {0}")]
    InvalidDistance(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("invalid geometry: {0}")]
    InvalidGeometry(&'static str),

    #[error("at least two users are required, got {0}")]
    TooFewUsers(usize),

    #[error("user index {index} out of range for {users} users")]
    UserOutOfRange { index: usize, users: usize },

    #[error("{what}: expected {expected} values, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("domain error: {0}")]
    Domain(&'static str),

    #[error("source-power threshold mismatch: closed form {closed_form}, bisection {bisection}")]
    Inconsistent { closed_form: f64, bisection: f64 },
}
