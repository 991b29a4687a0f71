use std::collections::HashSet;
use std::path::Path;

use super::{Oracle, OracleError};
use crate::syntax::Query;

/// Accepts exactly the strings listed in a set. The query name is ignored;
/// the binding decides which set answers which query.
#[derive(Clone, Debug, Default)]
pub struct WordSetOracle {
    words: HashSet<Vec<u8>>,
}

impl WordSetOracle {
    pub fn new<I, W>(words: I) -> Self
    where
        I: IntoIterator<Item = W>,
        W: AsRef<[u8]>,
    {
        WordSetOracle {
            words: words.into_iter().map(|w| w.as_ref().to_vec()).collect(),
        }
    }

    /// Reads newline-separated entries. A trailing `\r` is dropped and blank
    /// lines are skipped.
    pub fn load(path: &Path) -> Result<Self, OracleError> {
        let data = std::fs::read(path).map_err(|source| OracleError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Ok(Self::new(
            data.split(|&b| b == b'\n')
                .map(|l| l.strip_suffix(b"\r").unwrap_or(l))
                .filter(|l| !l.is_empty()),
        ))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl Oracle for WordSetOracle {
    fn evaluate(&self, _query: &Query, text: &[u8]) -> Result<bool, OracleError> {
        Ok(self.words.contains(text))
    }
}
