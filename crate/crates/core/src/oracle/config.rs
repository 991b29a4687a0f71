//! Binding of query names to oracle backends.
//!
//! A config file holds one binding per line:
//!
//! ```text
//! # comment
//! pal        = builtin:palindrome
//! sports     = words:athletes.txt
//! registered = table:whois.tsv
//! path       = exec:./path_exists.sh fixtures
//! never      = false
//! ```
//!
//! Relative paths are resolved against the directory holding the config file,
//! and `exec:` commands run there.

use std::collections::HashMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::{Builtin, Oracle, OracleError, ProcessOracle, TableOracle, WordSetOracle};
use crate::syntax::{valid_query_name, Query};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BackendSpec {
    Builtin(Builtin),
    Words(PathBuf),
    /// Key-value file; keys that are absent answer `false`.
    Table(PathBuf),
    Exec(String),
}

impl BackendSpec {
    /// Parses the right-hand side of a binding. Paths are joined onto `base`.
    pub fn parse(spec: &str, base: &Path) -> Result<Self, String> {
        let spec = spec.trim();
        if let Ok(b) = spec.parse::<Builtin>() {
            return Ok(BackendSpec::Builtin(b));
        }
        let (kind, arg) = spec
            .split_once(':')
            .ok_or_else(|| format!("unrecognized backend {spec:?}"))?;
        let arg = arg.trim();
        if arg.is_empty() {
            return Err(format!("missing argument for {kind}:"));
        }
        match kind.trim() {
            "builtin" => arg.parse().map(BackendSpec::Builtin).map_err(|e| e.to_string()),
            "words" => Ok(BackendSpec::Words(base.join(arg))),
            "table" => Ok(BackendSpec::Table(base.join(arg))),
            "exec" => Ok(BackendSpec::Exec(arg.to_string())),
            other => Err(format!("unknown backend kind {other:?}")),
        }
    }
}

impl fmt::Display for BackendSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BackendSpec::Builtin(b) => write!(f, "builtin:{}", b.name()),
            BackendSpec::Words(p) => write!(f, "words:{}", p.display()),
            BackendSpec::Table(p) => write!(f, "table:{}", p.display()),
            BackendSpec::Exec(c) => write!(f, "exec:{c}"),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct OracleConfig {
    bindings: Vec<(Query, BackendSpec)>,
    base_dir: PathBuf,
}

impl OracleConfig {
    pub fn new(base_dir: impl Into<PathBuf>) -> Self {
        OracleConfig {
            bindings: Vec::new(),
            base_dir: base_dir.into(),
        }
    }

    pub fn load(path: &Path) -> Result<Self, OracleError> {
        let text = std::fs::read_to_string(path).map_err(|source| OracleError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        let base = if base.as_os_str().is_empty() {
            Path::new(".")
        } else {
            base
        };
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, OracleError> {
        let mut cfg = OracleConfig::new(base_dir);
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| OracleError::Config { line: n + 1, message };
            let (name, spec) = line
                .split_once('=')
                .ok_or_else(|| bad("expected `name = backend`".into()))?;
            let name = name.trim();
            if !valid_query_name(name) {
                return Err(bad(format!("invalid query name {name:?}")));
            }
            let spec = BackendSpec::parse(spec, base_dir).map_err(bad)?;
            let query = Query::new(name);
            if cfg.get(&query).is_some() {
                return Err(bad(format!("query <{name}> bound twice")));
            }
            cfg.bindings.push((query, spec));
        }
        Ok(cfg)
    }

    pub fn bind(&mut self, query: Query, spec: BackendSpec) -> &mut Self {
        self.bindings.retain(|(q, _)| *q != query);
        self.bindings.push((query, spec));
        self
    }

    pub fn get(&self, query: &Query) -> Option<&BackendSpec> {
        self.bindings.iter().find(|(q, _)| q == query).map(|(_, s)| s)
    }

    pub fn bindings(&self) -> &[(Query, BackendSpec)] {
        &self.bindings
    }

    /// Instantiates every backend. Process oracles are spawned here.
    pub fn build(&self) -> Result<QueryRouter, OracleError> {
        let mut router = QueryRouter::new();
        for (query, spec) in &self.bindings {
            let oracle: Arc<dyn Oracle> = match spec {
                BackendSpec::Builtin(b) => Arc::new(*b),
                BackendSpec::Words(p) => Arc::new(WordSetOracle::load(p)?),
                BackendSpec::Table(p) => Arc::new(TableOracle::load(query, p, false)?),
                BackendSpec::Exec(cmd) => Arc::new(ProcessOracle::spawn(cmd, Some(&self.base_dir))?),
            };
            router.route(query.clone(), oracle);
        }
        Ok(router)
    }
}

/// Dispatches each query to the backend bound to its name.
#[derive(Clone, Default)]
pub struct QueryRouter {
    routes: HashMap<Query, Arc<dyn Oracle>>,
}

impl QueryRouter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn route(&mut self, query: Query, oracle: Arc<dyn Oracle>) -> &mut Self {
        self.routes.insert(query, oracle);
        self
    }

    pub fn with(mut self, name: &str, oracle: impl Oracle + 'static) -> Self {
        self.route(Query::new(name), Arc::new(oracle));
        self
    }

    pub fn is_bound(&self, query: &Query) -> bool {
        self.routes.contains_key(query)
    }

    /// Fails with the first query (in the given order) that has no binding.
    pub fn check_bound<'a>(&self, queries: impl IntoIterator<Item = &'a Query>) -> Result<(), OracleError> {
        for q in queries {
            if !self.is_bound(q) {
                return Err(OracleError::Unbound(q.name().to_string()));
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QueryRouter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut names: Vec<_> = self.routes.keys().map(|q| q.name()).collect();
        names.sort_unstable();
        f.debug_struct("QueryRouter").field("queries", &names).finish()
    }
}

impl Oracle for QueryRouter {
    fn evaluate(&self, query: &Query, text: &[u8]) -> Result<bool, OracleError> {
        match self.routes.get(query) {
            Some(o) => o.evaluate(query, text),
            None => Err(OracleError::Unbound(query.name().to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn parses_every_backend_kind() {
        let cfg = OracleConfig::parse(
            "# bindings\n\
             pal = builtin:palindrome\n\
             yes = true\n\
             \n\
             sports = words:athletes.txt\n\
             whois = table:db/whois.tsv\n\
             path = exec:./check.sh a b\n",
            Path::new("/cfg"),
        )
        .unwrap();
        let spec = |n: &str| cfg.get(&Query::new(n)).unwrap().clone();
        assert_eq!(spec("pal"), BackendSpec::Builtin(Builtin::Palindrome));
        assert_eq!(spec("yes"), BackendSpec::Builtin(Builtin::AlwaysTrue));
        assert_eq!(spec("sports"), BackendSpec::Words("/cfg/athletes.txt".into()));
        assert_eq!(spec("whois"), BackendSpec::Table("/cfg/db/whois.tsv".into()));
        assert_eq!(spec("path"), BackendSpec::Exec("./check.sh a b".into()));
        assert_eq!(cfg.bindings().len(), 5);
    }

    #[test]
    fn reports_bad_lines() {
        let err = OracleConfig::parse("a = true\nb true\n", Path::new(".")).unwrap_err();
        assert!(matches!(err, OracleError::Config { line: 2, .. }));
        let err = OracleConfig::parse("a = bogus:x\n", Path::new(".")).unwrap_err();
        assert!(matches!(err, OracleError::Config { line: 1, .. }));
        let err = OracleConfig::parse("a = true\na = false\n", Path::new(".")).unwrap_err();
        assert!(matches!(err, OracleError::Config { line: 2, .. }));
        let err = OracleConfig::parse("a = builtin:shouty\n", Path::new(".")).unwrap_err();
        assert!(matches!(err, OracleError::Config { line: 1, .. }));
    }

    #[test]
    fn router_dispatches_and_reports_unbound() {
        let r = QueryRouter::new()
            .with("pal", Builtin::Palindrome)
            .with("no", Builtin::AlwaysFalse);
        assert!(r.evaluate(&Query::new("pal"), b"abba").unwrap());
        assert!(!r.evaluate(&Query::new("no"), b"abba").unwrap());
        assert!(matches!(
            r.evaluate(&Query::new("other"), b"x"),
            Err(OracleError::Unbound(_))
        ));
        let qs = [Query::new("pal"), Query::new("missing")];
        assert!(matches!(r.check_bound(&qs), Err(OracleError::Unbound(n)) if n == "missing"));
    }

    #[test]
    fn builds_from_files_relative_to_config() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("names.txt"), "Simone Biles\n").unwrap();
        let cfg_path = dir.path().join("oracles.cfg");
        let mut f = std::fs::File::create(&cfg_path).unwrap();
        writeln!(f, "s = words:names.txt").unwrap();
        writeln!(f, "local = exec:test -f names.txt && while read -r l; do echo 1; done").unwrap();
        drop(f);
        let router = OracleConfig::load(&cfg_path).unwrap().build().unwrap();
        assert!(router.evaluate(&Query::new("s"), b"Simone Biles").unwrap());
        assert!(router.evaluate(&Query::new("local"), b"x").unwrap());
    }
}
