use fixedbitset::FixedBitSet;

use super::{QueryId, Snfa, StateId, StateLabel};
use crate::oracle::{Oracle, OracleError};
use crate::syntax::Query;

/// The oracle's verdict on the empty string for every query of a machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsilonAnswers {
    answers: Vec<bool>,
}

impl EpsilonAnswers {
    /// Asks the oracle once per query, in query-id order.
    pub fn from_oracle(m: &Snfa, oracle: &dyn Oracle) -> Result<Self, OracleError> {
        let answers = m
            .queries()
            .iter()
            .map(|q| oracle.evaluate(q, b""))
            .collect::<Result<_, _>>()?;
        Ok(EpsilonAnswers { answers })
    }

    pub fn from_fn(m: &Snfa, f: impl FnMut(&Query) -> bool) -> Self {
        EpsilonAnswers {
            answers: m.queries().iter().map(f).collect(),
        }
    }

    pub fn uniform(m: &Snfa, answer: bool) -> Self {
        EpsilonAnswers {
            answers: vec![answer; m.queries().len()],
        }
    }

    pub fn get(&self, q: QueryId) -> bool {
        self.answers[q]
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }
}

/// Pairs (s, s′) joined by a feasible ε-path that starts with an ε-transition
/// out of s and leaves the query context unchanged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsRelation {
    n: usize,
    matrix: FixedBitSet,
}

impl EpsRelation {
    pub fn empty(n: usize) -> Self {
        EpsRelation {
            n,
            matrix: FixedBitSet::with_capacity(n * n),
        }
    }

    pub fn insert(&mut self, s: StateId, t: StateId) {
        self.matrix.insert(s * self.n + t);
    }

    pub fn contains(&self, s: StateId, t: StateId) -> bool {
        self.matrix.contains(s * self.n + t)
    }

    pub fn targets(&self, s: StateId) -> impl Iterator<Item = StateId> + '_ {
        let lo = s * self.n;
        self.matrix
            .ones()
            .skip_while(move |&b| b < lo)
            .take_while(move |&b| b < lo + self.n)
            .map(move |b| b - lo)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.matrix.ones().map(move |b| (b / self.n, b % self.n))
    }

    pub fn len(&self) -> usize {
        self.matrix.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Pending opens met so far, as a multiset with a total depth.
struct OpenSet {
    counts: Vec<u32>,
    depth: usize,
}

struct Dfs<'a> {
    m: &'a Snfa,
    ea: &'a EpsilonAnswers,
    root: StateId,
    sigma: OpenSet,
    visited: FixedBitSet,
    out: &'a mut EpsRelation,
}

impl Dfs<'_> {
    fn visit(&mut self, s: StateId) {
        for &t in self.m.eps_successors(s) {
            if self.visited.contains(t) {
                continue;
            }
            match self.m.label(t) {
                StateLabel::Open(q) => {
                    self.visited.insert(t);
                    self.sigma.counts[q] += 1;
                    self.sigma.depth += 1;
                    self.visit(t);
                    self.sigma.counts[q] -= 1;
                    self.sigma.depth -= 1;
                }
                StateLabel::Close(q) => {
                    if self.sigma.counts[q] == 0 || !self.ea.get(q) {
                        continue;
                    }
                    self.visited.insert(t);
                    self.sigma.counts[q] -= 1;
                    self.sigma.depth -= 1;
                    if self.sigma.depth == 0 {
                        self.out.insert(self.root, t);
                    }
                    self.visit(t);
                    self.sigma.counts[q] += 1;
                    self.sigma.depth += 1;
                }
                StateLabel::Blank => {
                    self.visited.insert(t);
                    if self.sigma.depth == 0 {
                        self.out.insert(self.root, t);
                    }
                    self.visit(t);
                }
            }
        }
    }
}

/// Runs one depth-first search per root state, each with its own visited
/// set, and collects every pair reached with no pending opens.
pub fn compute_eps(m: &Snfa, ea: &EpsilonAnswers) -> EpsRelation {
    let n = m.num_states();
    let mut out = EpsRelation::empty(n);
    for root in m.states() {
        let mut dfs = Dfs {
            m,
            ea,
            root,
            sigma: OpenSet {
                counts: vec![0; m.queries().len()],
                depth: 0,
            },
            visited: FixedBitSet::with_capacity(n),
            out: &mut out,
        };
        dfs.visit(root);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::Builtin;
    use crate::snfa::{build_snfa, normalize};
    use crate::syntax::{parse_semre, SemRe};
    use std::collections::HashSet;

    /// Reference: search over (state, stack of pending opens) from each
    /// ε-successor of s, without sharing visited state across paths.
    fn brute_eps(m: &Snfa, ea: &EpsilonAnswers) -> HashSet<(StateId, StateId)> {
        let mut out = HashSet::new();
        let cap = m.num_states();
        for s in m.states() {
            let mut seen = HashSet::new();
            let mut stack: Vec<(StateId, Vec<QueryId>)> = Vec::new();
            let push_label = |st: &Vec<QueryId>, t: StateId| -> Option<Vec<QueryId>> {
                let mut st = st.clone();
                match m.label(t) {
                    StateLabel::Blank => {}
                    StateLabel::Open(q) => st.push(q),
                    StateLabel::Close(q) => {
                        if st.pop() != Some(q) || !ea.get(q) {
                            return None;
                        }
                    }
                }
                (st.len() <= cap).then_some(st)
            };
            for &t in m.eps_successors(s) {
                if let Some(st) = push_label(&Vec::new(), t) {
                    stack.push((t, st));
                }
            }
            while let Some((t, st)) = stack.pop() {
                if !seen.insert((t, st.clone())) {
                    continue;
                }
                if st.is_empty() {
                    out.insert((s, t));
                }
                for &u in m.eps_successors(t) {
                    if let Some(next) = push_label(&st, u) {
                        stack.push((u, next));
                    }
                }
            }
        }
        out
    }

    fn eps_of(p: &str, ea: bool) -> (Snfa, EpsRelation, HashSet<(StateId, StateId)>) {
        let m = normalize(build_snfa(&parse_semre(p).unwrap()));
        let answers = EpsilonAnswers::uniform(&m, ea);
        let eps = compute_eps(&m, &answers);
        let brute = brute_eps(&m, &answers);
        (m, eps, brute)
    }

    #[test]
    fn epsilon_machine_relates_start_to_end() {
        let m = build_snfa(&SemRe::Epsilon);
        let eps = compute_eps(&m, &EpsilonAnswers::uniform(&m, false));
        assert!(eps.contains(m.start(), m.end()));
        assert_eq!(eps.len(), 1);
    }

    #[test]
    fn literal_machine_has_no_pairs() {
        let m = build_snfa(&SemRe::byte(b'a'));
        assert!(compute_eps(&m, &EpsilonAnswers::uniform(&m, true)).is_empty());
    }

    #[test]
    fn skipping_a_refinement_needs_epsilon_acceptance() {
        let (m, no, _) = eps_of(".*&<q>", false);
        let (_, yes, _) = eps_of(".*&<q>", true);
        let close = m.end();
        assert!(!no.pairs().any(|(_, t)| t == close));
        assert!(yes.contains(m.start(), close));
    }

    #[test]
    fn matches_reference_search() {
        let patterns = [
            "a",
            "()",
            "(()&<q>)*",
            "((a&<p>)*&<q>)*",
            "(()&<p>|b)*()&<q>",
            "((()&<p>)&<q>)*&<p>",
            "(a|()&<x>)(()*&<y>)*",
            "<q><q>",
            "(<q>*)*",
        ];
        for p in patterns {
            for ea in [false, true] {
                let (_, eps, brute) = eps_of(p, ea);
                let got: HashSet<_> = eps.pairs().collect();
                assert_eq!(got, brute, "{p} with eps answers {ea}");
            }
        }
    }

    #[test]
    fn answers_come_from_the_oracle() {
        let m = build_snfa(&parse_semre("(a&<pal>)(b&<nz>)").unwrap());
        let router = crate::oracle::QueryRouter::new()
            .with("pal", Builtin::Palindrome)
            .with("nz", Builtin::NonEmpty);
        let ea = EpsilonAnswers::from_oracle(&m, &router).unwrap();
        let pal = m.query_id(&Query::new("pal")).unwrap();
        let nz = m.query_id(&Query::new("nz")).unwrap();
        assert!(ea.get(pal));
        assert!(!ea.get(nz));
    }

    #[test]
    fn targets_iterates_one_row() {
        let mut r = EpsRelation::empty(4);
        r.insert(1, 0);
        r.insert(1, 3);
        r.insert(2, 1);
        assert_eq!(r.targets(1).collect::<Vec<_>>(), vec![0, 3]);
        assert_eq!(r.targets(0).count(), 0);
    }
}
