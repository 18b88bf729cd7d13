use thiserror::Error;

/// Errors shared by every engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("truncation exceeded: x{matrix} needs a[{matrix},{needed_k}] but k_max = {k_max}")]
    Truncation { matrix: u32, needed_k: u32, k_max: u32 },

    #[error("resource cap exceeded: {what} (limit {limit})")]
    Resource { what: String, limit: u64 },

    #[error("unsupported model: {0}")]
    Unsupported(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }

    pub fn resource(what: impl Into<String>, limit: u64) -> Self {
        Error::Resource { what: what.into(), limit }
    }
}
