use std::collections::HashMap;
use std::path::Path;

use super::process::decode_field;
use super::{Oracle, OracleError};
use crate::syntax::Query;

#[derive(Clone, Debug, Default)]
struct Entries {
    answers: HashMap<Vec<u8>, bool>,
    longest: usize,
}

/// Explicit (query, string) → answer table with a fallback for missing keys.
///
/// Strings longer than every key of their query are answered with the
/// default without hashing, so lookups cost O(1) for long windows.
#[derive(Clone, Debug, Default)]
pub struct TableOracle {
    tables: HashMap<Query, Entries>,
    default: bool,
}

impl TableOracle {
    pub fn new(default: bool) -> Self {
        TableOracle {
            tables: HashMap::new(),
            default,
        }
    }

    pub fn insert(&mut self, query: &Query, text: impl AsRef<[u8]>, answer: bool) -> &mut Self {
        let text = text.as_ref();
        let e = self.tables.entry(query.clone()).or_default();
        e.longest = e.longest.max(text.len());
        e.answers.insert(text.to_vec(), answer);
        self
    }

    pub fn with(mut self, query: &Query, text: impl AsRef<[u8]>, answer: bool) -> Self {
        self.insert(query, text, answer);
        self
    }

    /// Loads a key-value file for a single query.
    ///
    /// Each nonblank line is `key<TAB>answer` with `answer` one of `1`, `0`,
    /// `true`, `false`. Keys use the same escapes as the process protocol
    /// (`\\`, `\t`, `\n`, `\r`). Lines starting with `#` are comments.
    pub fn load(query: &Query, path: &Path, default: bool) -> Result<Self, OracleError> {
        let data = std::fs::read(path).map_err(|source| OracleError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut t = TableOracle::new(default);
        for (n, line) in data.split(|&b| b == b'\n').enumerate() {
            let line = line.strip_suffix(b"\r").unwrap_or(line);
            if line.is_empty() || line.starts_with(b"#") {
                continue;
            }
            let bad = |message: &str| OracleError::Config {
                line: n + 1,
                message: format!("{}: {message}", path.display()),
            };
            let tab = line
                .iter()
                .rposition(|&b| b == b'\t')
                .ok_or_else(|| bad("expected key<TAB>answer"))?;
            let answer = match &line[tab + 1..] {
                b"1" | b"true" => true,
                b"0" | b"false" => false,
                _ => return Err(bad("answer must be 1, 0, true or false")),
            };
            let key = decode_field(&line[..tab]).ok_or_else(|| bad("bad escape in key"))?;
            t.insert(query, key, answer);
        }
        Ok(t)
    }

    pub fn lookup(&self, query: &Query, text: &[u8]) -> bool {
        match self.tables.get(query) {
            Some(e) if text.len() <= e.longest => e.answers.get(text).copied().unwrap_or(self.default),
            _ => self.default,
        }
    }
}

impl Oracle for TableOracle {
    fn evaluate(&self, query: &Query, text: &[u8]) -> Result<bool, OracleError> {
        Ok(self.lookup(query, text))
    }
}
