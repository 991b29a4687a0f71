//! Reference evaluation of a query graph straight from the definition of a
//! feasible path. Meant for small instances and for checking the matcher.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{QueryGraph, Vertex};
use crate::oracle::{Oracle, OracleError};
use crate::snfa::{QueryId, StateLabel};

/// Default cap on configurations explored by [`eval_bruteforce`].
pub const BRUTE_FORCE_LIMIT: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum QgError {
    #[error("consecutive path vertices {0:?} and {1:?} are not joined by an edge")]
    BrokenPath(Vertex, Vertex),
    #[error("path is not well-parenthesized at position {0}")]
    NotWellParenthesized(usize),
    #[error("instance too large for brute force (more than {0} configurations)")]
    TooLarge(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Whether an explicit start-to-end style path is feasible: every
/// open(q)@i … close(q)@j pair must have its window w_i … w_{j-1} accepted.
pub fn path_feasible(g: &QueryGraph<'_>, path: &[Vertex], oracle: &dyn Oracle) -> Result<bool, QgError> {
    for pair in path.windows(2) {
        if !g.has_edge(pair[0], pair[1]) {
            return Err(QgError::BrokenPath(pair[0], pair[1]));
        }
    }
    let mut pending: Vec<(QueryId, usize)> = Vec::new();
    let mut spans: Vec<(QueryId, usize, usize)> = Vec::new();
    for (pos, &v) in path.iter().enumerate() {
        match g.label(v) {
            StateLabel::Blank => {}
            StateLabel::Open(q) => pending.push((q, v.index)),
            StateLabel::Close(q) => match pending.pop() {
                Some((p, i)) if p == q => spans.push((q, i, v.index)),
                _ => return Err(QgError::NotWellParenthesized(pos)),
            },
        }
    }
    if !pending.is_empty() {
        return Err(QgError::NotWellParenthesized(path.len()));
    }
    let w = g.input();
    for (q, i, j) in spans {
        if !oracle.evaluate(g.snfa().query(q), &w[i - 1..j - 1])? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every start → end path, or `TooLarge` once more than `limit` are found.
pub fn enumerate_paths(g: &QueryGraph<'_>, limit: usize) -> Result<Vec<Vec<Vertex>>, QgError> {
    let mut out = Vec::new();
    let mut path = vec![g.start()];
    walk(g, &mut path, &mut out, limit)?;
    Ok(out)
}

fn walk(g: &QueryGraph<'_>, path: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>, limit: usize) -> Result<(), QgError> {
    let v = *path.last().expect("nonempty path");
    if v == g.end() {
        if out.len() == limit {
            return Err(QgError::TooLarge(limit));
        }
        out.push(path.clone());
    }
    for t in g.successors(v) {
        path.push(t);
        walk(g, path, out, limit)?;
        path.pop();
    }
    Ok(())
}

/// ⟦G⟧: is some start → end path feasible?
///
/// Explores (vertex, pending opens) configurations depth-first, remembering
/// configurations already known to lead nowhere. Equivalent to checking every
/// path with [`path_feasible`] but shares work between paths with a common
/// suffix. Fails with `TooLarge` after `limit` configurations.
pub fn eval_bruteforce(g: &QueryGraph<'_>, oracle: &dyn Oracle, limit: usize) -> Result<bool, QgError> {
    let mut search = Search {
        g,
        oracle,
        limit,
        dead: HashSet::new(),
        answers: HashMap::new(),
        explored: 0,
    };
    let mut pending = Vec::new();
    search.visit(g.start(), &mut pending)
}

struct Search<'g, 'a> {
    g: &'g QueryGraph<'a>,
    oracle: &'g dyn Oracle,
    limit: usize,
    dead: HashSet<(Vertex, Vec<(QueryId, usize)>)>,
    answers: HashMap<(QueryId, usize, usize), bool>,
    explored: usize,
}

impl Search<'_, '_> {
    fn ask(&mut self, q: QueryId, i: usize, j: usize) -> Result<bool, QgError> {
        if let Some(&a) = self.answers.get(&(q, i, j)) {
            return Ok(a);
        }
        let a = self
            .oracle
            .evaluate(self.g.snfa().query(q), &self.g.input()[i - 1..j - 1])?;
        self.answers.insert((q, i, j), a);
        Ok(a)
    }

    /// `pending` already includes the label of `v`.
    fn visit(&mut self, v: Vertex, pending: &mut Vec<(QueryId, usize)>) -> Result<bool, QgError> {
        if v == self.g.end() && pending.is_empty() {
            return Ok(true);
        }
        let key = (v, pending.clone());
        if self.dead.contains(&key) {
            return Ok(false);
        }
        self.explored += 1;
        if self.explored > self.limit {
            return Err(QgError::TooLarge(self.limit));
        }
        for t in self.g.successors(v) {
            let ok = match self.g.label(t) {
                StateLabel::Blank => self.visit(t, pending)?,
                StateLabel::Open(q) => {
                    pending.push((q, t.index));
                    let ok = self.visit(t, pending)?;
                    pending.pop();
                    ok
                }
                StateLabel::Close(q) => match pending.last().copied() {
                    Some((p, i)) if p == q && self.ask(q, i, t.index)? => {
                        pending.pop();
                        let ok = self.visit(t, pending)?;
                        pending.push((p, i));
                        ok
                    }
                    _ => false,
                },
            };
            if ok {
                return Ok(true);
            }
        }
        self.dead.insert(key);
        Ok(false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Builtin, FnOracle};
    use crate::query_graph::Gadget;
    use crate::snfa::{build_snfa, compute_eps, normalize, EpsilonAnswers, Snfa};
    use crate::syntax::{parse_semre, Query};

    fn machine(p: &str, oracle: &dyn Oracle) -> (Snfa, Gadget) {
        let m = normalize(build_snfa(&parse_semre(p).unwrap()));
        let ea = EpsilonAnswers::from_oracle(&m, oracle).unwrap();
        let eps = compute_eps(&m, &ea);
        let gad = Gadget::new(&m, &eps);
        (m, gad)
    }

    fn by_paths(g: &QueryGraph<'_>, oracle: &dyn Oracle) -> bool {
        enumerate_paths(g, 100_000)
            .unwrap()
            .iter()
            .any(|p| path_feasible(g, p, oracle).unwrap())
    }

    #[test]
    fn palindrome_after_an_a() {
        let o = Builtin::Palindrome;
        let (m, gad) = machine(".*a<pal>", &o);
        for (w, expect) in [(&b"babccb"[..], true), (b"bacbcb", false)] {
            let g = QueryGraph::new(&m, &gad, w);
            assert_eq!(eval_bruteforce(&g, &o, BRUTE_FORCE_LIMIT).unwrap(), expect);
        }
    }

    #[test]
    fn windows_follow_open_and_close_indices() {
        // only "bc" is accepted, so the query must see exactly w_2 w_3
        let o = FnOracle(|_: &Query, s: &[u8]| s == b"bc");
        let (m, gad) = machine("a(..)&<q>d", &o);
        let g = QueryGraph::new(&m, &gad, b"abcd");
        assert!(eval_bruteforce(&g, &o, BRUTE_FORCE_LIMIT).unwrap());
        assert!(by_paths(&g, &o));
    }

    #[test]
    fn agrees_with_path_enumeration() {
        let oracles: [(&str, Box<dyn Oracle>); 3] = [
            ("pal", Box::new(Builtin::Palindrome)),
            ("odd", Box::new(FnOracle(|_: &Query, s: &[u8]| s.len() % 2 == 1))),
            (
                "a-first",
                Box::new(FnOracle(|_: &Query, s: &[u8]| s.first() == Some(&b'a'))),
            ),
        ];
        let patterns = ["(.*&<q>)*", "(a|b)*&<q>b", "((a.)&<q>)*", "(.*&<q>.)&<q>", "()&<q>a"];
        for (name, o) in &oracles {
            for p in patterns {
                let (m, gad) = machine(p, o.as_ref());
                for w in [&b""[..], b"a", b"ab", b"aba", b"abab"] {
                    let g = QueryGraph::new(&m, &gad, w);
                    assert_eq!(
                        eval_bruteforce(&g, o.as_ref(), BRUTE_FORCE_LIMIT).unwrap(),
                        by_paths(&g, o.as_ref()),
                        "{p} on {:?} with {name}",
                        String::from_utf8_lossy(w)
                    );
                }
            }
        }
    }

    #[test]
    fn no_path_means_false() {
        let o = Builtin::AlwaysTrue;
        let (m, gad) = machine("abc", &o);
        let g = QueryGraph::new(&m, &gad, b"xyz");
        assert!(!eval_bruteforce(&g, &o, BRUTE_FORCE_LIMIT).unwrap());
        assert!(enumerate_paths(&g, 10).unwrap().is_empty());
    }

    #[test]
    fn path_feasibility_cases() {
        let o = Builtin::AlwaysFalse;
        let (m, gad) = machine("ab", &o);
        let g = QueryGraph::new(&m, &gad, b"ab");
        let paths = enumerate_paths(&g, 10).unwrap();
        assert_eq!(paths.len(), 1);
        assert!(path_feasible(&g, &paths[0], &o).unwrap());

        let (m, gad) = machine("(ab)&<q>", &o);
        let g = QueryGraph::new(&m, &gad, b"ab");
        let paths = enumerate_paths(&g, 10).unwrap();
        assert_eq!(paths.len(), 1);
        assert!(!path_feasible(&g, &paths[0], &o).unwrap());
        assert!(path_feasible(&g, &paths[0], &Builtin::AlwaysTrue).unwrap());
        // truncated right after the open: dangling query
        let open_at = paths[0]
            .iter()
            .position(|&v| matches!(g.label(v), StateLabel::Open(_)))
            .unwrap();
        assert!(matches!(
            path_feasible(&g, &paths[0][..=open_at], &o),
            Err(QgError::NotWellParenthesized(_))
        ));
        assert!(matches!(
            path_feasible(&g, &[g.start(), g.end()], &o),
            Err(QgError::BrokenPath(..))
        ));
    }

    #[test]
    fn nested_spans_need_both_answers() {
        // outer q over "aba", inner p over "b"
        let (m, gad) = machine("(a(b)&<p>a)&<q>", &Builtin::AlwaysTrue);
        let g = QueryGraph::new(&m, &gad, b"aba");
        for (q_ok, p_ok) in [(false, false), (false, true), (true, false), (true, true)] {
            let o = FnOracle(move |q: &Query, s: &[u8]| match q.name() {
                "q" => q_ok && s == b"aba",
                _ => p_ok && s == b"b",
            });
            assert_eq!(eval_bruteforce(&g, &o, BRUTE_FORCE_LIMIT).unwrap(), q_ok && p_ok);
        }
    }

    #[test]
    fn size_guard() {
        let o = Builtin::AlwaysFalse;
        let (m, gad) = machine("(.*&<q>)*", &o);
        let g = QueryGraph::new(&m, &gad, b"aaaaaaaa");
        assert!(matches!(eval_bruteforce(&g, &o, 10), Err(QgError::TooLarge(10))));
    }
}
