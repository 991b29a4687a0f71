//! Baseline: top-down memoized membership over (subexpression, start, end).

use std::collections::HashMap;
use std::time::Instant;

use super::metrics::Meter;
use super::{MatchError, MatchOutcome};
use crate::oracle::Oracle;
use crate::syntax::{CharSet, Query, SemRe};

#[derive(Clone, Debug)]
enum Node {
    Empty,
    Epsilon,
    Lit(CharSet),
    Alt(usize, usize),
    Cat(usize, usize),
    Star(usize),
    Refine(usize, usize),
}

/// A pattern flattened into an arena, reusable across lines.
#[derive(Clone, Debug)]
pub struct DpMatcher {
    nodes: Vec<Node>,
    root: usize,
    queries: Vec<Query>,
}

impl DpMatcher {
    pub fn new(r: &SemRe) -> Self {
        let mut m = DpMatcher {
            nodes: Vec::new(),
            root: 0,
            queries: Vec::new(),
        };
        m.root = m.flatten(r);
        m
    }

    fn flatten(&mut self, r: &SemRe) -> usize {
        let node = match r {
            SemRe::Empty => Node::Empty,
            SemRe::Epsilon => Node::Epsilon,
            SemRe::Lit(set) => Node::Lit(*set),
            SemRe::Alt(a, b) => Node::Alt(self.flatten(a), self.flatten(b)),
            SemRe::Cat(a, b) => Node::Cat(self.flatten(a), self.flatten(b)),
            SemRe::Star(a) => Node::Star(self.flatten(a)),
            SemRe::Refine(a, q) => {
                let inner = self.flatten(a);
                let qid = match self.queries.iter().position(|x| x == q) {
                    Some(id) => id,
                    None => {
                        self.queries.push(q.clone());
                        self.queries.len() - 1
                    }
                };
                Node::Refine(inner, qid)
            }
        };
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    pub fn is_match(&self, w: &[u8], oracle: &dyn Oracle) -> Result<MatchOutcome, MatchError> {
        self.is_match_until(w, oracle, None)
    }

    pub fn is_match_until(
        &self,
        w: &[u8],
        oracle: &dyn Oracle,
        deadline: Option<Instant>,
    ) -> Result<MatchOutcome, MatchError> {
        let started = Instant::now();
        let mut run = Run {
            m: self,
            w,
            meter: Meter::new(oracle),
            memo: HashMap::new(),
            deadline,
            steps: 0,
        };
        let matched = run.eval(self.root, 0, w.len())?;
        Ok(MatchOutcome {
            matched,
            metrics: run.meter.finish(matched, started),
        })
    }
}

struct Run<'a, 'o> {
    m: &'a DpMatcher,
    w: &'a [u8],
    meter: Meter<'o>,
    memo: HashMap<(usize, usize, usize), bool>,
    deadline: Option<Instant>,
    steps: u64,
}

impl Run<'_, '_> {
    /// Is `w[i..j]` in the language of node `x`?
    fn eval(&mut self, x: usize, i: usize, j: usize) -> Result<bool, MatchError> {
        let node = &self.m.nodes[x];
        match *node {
            Node::Empty => return Ok(false),
            Node::Epsilon => return Ok(i == j),
            Node::Lit(set) => return Ok(j == i + 1 && set.contains(self.w[i])),
            _ => {}
        }
        if let Some(&v) = self.memo.get(&(x, i, j)) {
            return Ok(v);
        }
        self.steps += 1;
        if self.steps.is_multiple_of(1024) && self.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(MatchError::Timeout);
        }
        let v = match *node {
            Node::Alt(a, b) => self.eval(a, i, j)? || self.eval(b, i, j)?,
            Node::Cat(a, b) => {
                let mut found = false;
                for k in i..=j {
                    if self.eval(a, i, k)? && self.eval(b, k, j)? {
                        found = true;
                        break;
                    }
                }
                found
            }
            Node::Star(a) => self.star(a, i, j)?,
            Node::Refine(a, q) => self.eval(a, i, j)? && self.meter.ask(&self.m.queries[q], q, self.w, i, j)?,
            Node::Empty | Node::Epsilon | Node::Lit(_) => unreachable!(),
        };
        self.memo.insert((x, i, j), v);
        Ok(v)
    }

    /// `w[i..j]` splits into nonempty blocks of `a`. Searches block
    /// boundaries depth-first with an explicit stack, shortest first block
    /// first, so the recursion depth does not grow with the line.
    fn star(&mut self, a: usize, i: usize, j: usize) -> Result<bool, MatchError> {
        if i == j {
            return Ok(true);
        }
        let mut seen = vec![false; j - i + 1];
        let mut stack = vec![i];
        while let Some(k) = stack.pop() {
            let mut next = Vec::new();
            for k2 in k + 1..=j {
                if seen[k2 - i] || !self.eval(a, k, k2)? {
                    continue;
                }
                if k2 == j {
                    return Ok(true);
                }
                seen[k2 - i] = true;
                next.push(k2);
            }
            stack.extend(next.into_iter().rev());
        }
        Ok(false)
    }
}

/// Membership by the baseline, compiling the pattern on the spot.
pub fn match_dp(r: &SemRe, w: &[u8], oracle: &dyn Oracle) -> Result<MatchOutcome, MatchError> {
    DpMatcher::new(r).is_match(w, oracle)
}
