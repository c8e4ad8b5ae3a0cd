use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the operation's domain (wrong dimension,
    /// non-positive cone parameter, unknown name, non-orthogonal group element...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular matrix (det = {det:e})")]
    Singular { det: f64 },

    /// A structural identity (bracket inclusion, involution, closure) failed
    /// beyond its tolerance.
    #[error("structure error: {0}")]
    Structure(String),

    #[error("numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
