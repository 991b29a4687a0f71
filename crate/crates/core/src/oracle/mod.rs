//! External oracles: deterministic boolean predicates over (query, string) pairs.
//!
//! Every backend implements [`Oracle`]. Failures are reported as
//! [`OracleError`] and are never turned into a `false` verdict.

mod builtin;
mod cache;
mod config;
mod process;
mod table;
mod wordset;

use std::sync::Arc;

use thiserror::Error;

use crate::syntax::Query;

pub use builtin::Builtin;
pub use cache::{CacheStats, CachingOracle};
pub use config::{BackendSpec, OracleConfig, QueryRouter};
pub use process::{decode_field, encode_field, encode_request, ProcessOracle};
pub use table::TableOracle;
pub use wordset::WordSetOracle;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("no oracle bound to query <{0}>")]
    Unbound(String),
    #[error("unknown builtin oracle {0:?}")]
    UnknownBuiltin(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("oracle config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("oracle process {command:?}: {message}")]
    Process { command: String, message: String },
    #[error("oracle process {command:?} violated the protocol: {message}")]
    Protocol { command: String, message: String },
    #[error("{0}")]
    Backend(String),
}

/// A boolean predicate ♣(q, s).
///
/// Implementations must tolerate concurrent calls and should answer the same
/// (query, string) pair the same way within a run. Wrap nondeterministic
/// backends in a [`CachingOracle`].
pub trait Oracle: Send + Sync {
    fn evaluate(&self, query: &Query, text: &[u8]) -> Result<bool, OracleError>;
}

impl<T: Oracle + ?Sized> Oracle for &T {
    fn evaluate(&self, query: &Query, text: &[u8]) -> Result<bool, OracleError> {
        (**self).evaluate(query, text)
    }
}

impl<T: Oracle + ?Sized> Oracle for Box<T> {
    fn evaluate(&self, query: &Query, text: &[u8]) -> Result<bool, OracleError> {
        (**self).evaluate(query, text)
    }
}

impl<T: Oracle + ?Sized> Oracle for Arc<T> {
    fn evaluate(&self, query: &Query, text: &[u8]) -> Result<bool, OracleError> {
        (**self).evaluate(query, text)
    }
}

/// Adapts a closure into an infallible oracle.
pub struct FnOracle<F>(pub F);

impl<F> Oracle for FnOracle<F>
where
    F: Fn(&Query, &[u8]) -> bool + Send + Sync,
{
    fn evaluate(&self, query: &Query, text: &[u8]) -> Result<bool, OracleError> {
        Ok((self.0)(query, text))
    }
}
