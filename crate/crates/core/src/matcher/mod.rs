//! Matching engines.
//!
//! - [`Matcher`]: compiles a pattern into a normalized SNFA with its ε-summary
//!   and evaluates the query graph of each line lazily from the end vertex.
//! - [`DpMatcher`]: memoized recursion over (subexpression, start, end).
//! - [`match_naive`]: unmemoized recursion, for cross-checking tiny inputs.

mod dp;
mod lazy;
mod metrics;
mod naive;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use thiserror::Error;

use crate::oracle::{Oracle, OracleError};
use crate::query_graph::{Gadget, QueryGraph, Vertex};
use crate::snfa::{build_snfa, compute_eps, normalize, EpsRelation, EpsilonAnswers, Snfa, StateId, StateLabel};
use crate::syntax::SemRe;

pub use dp::{match_dp, DpMatcher};
pub use metrics::MatchMetrics;
pub use naive::{match_naive, NAIVE_MAX_LEN};

#[derive(Debug, Error)]
pub enum MatchError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("match timed out")]
    Timeout,
    #[error("input of length {len} exceeds the limit of {max}")]
    InputTooLong { len: usize, max: usize },
    #[error("cyclic dependency while evaluating {0}")]
    Cycle(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatchOutcome {
    pub matched: bool,
    pub metrics: MatchMetrics,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Engine {
    Snfa,
    Dp,
    Naive,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Snfa, Engine::Dp, Engine::Naive];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Snfa => "snfa",
            Engine::Dp => "dp",
            Engine::Naive => "naive",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "snfa" => Ok(Engine::Snfa),
            "dp" => Ok(Engine::Dp),
            "naive" => Ok(Engine::Naive),
            other => Err(format!("unknown engine {other:?} (expected snfa, dp or naive)")),
        }
    }
}

/// A pattern compiled for the query-graph engine.
///
/// Compilation asks the oracle for ♣(q, ε) once per query; those answers fix
/// the ε-summary and are reused whenever an empty window comes up later.
#[derive(Clone, Debug)]
pub struct Matcher {
    pattern: SemRe,
    snfa: Snfa,
    epsilon: EpsilonAnswers,
    eps: EpsRelation,
    gadget: Gadget,
    open_states: Vec<StateId>,
    open_index: Vec<usize>,
}

impl Matcher {
    pub fn new(r: &SemRe, oracle: &dyn Oracle) -> Result<Self, OracleError> {
        let snfa = normalize(build_snfa(r));
        let epsilon = EpsilonAnswers::from_oracle(&snfa, oracle)?;
        Ok(Self::assemble(r, snfa, epsilon))
    }

    /// Compiles with given ε-answers instead of asking an oracle.
    pub fn with_epsilon_answers(r: &SemRe, answer: impl FnMut(&crate::syntax::Query) -> bool) -> Self {
        let snfa = normalize(build_snfa(r));
        let epsilon = EpsilonAnswers::from_fn(&snfa, answer);
        Self::assemble(r, snfa, epsilon)
    }

    fn assemble(r: &SemRe, snfa: Snfa, epsilon: EpsilonAnswers) -> Self {
        let eps = compute_eps(&snfa, &epsilon);
        let gadget = Gadget::new(&snfa, &eps);
        let open_states: Vec<StateId> = snfa
            .states()
            .filter(|&s| matches!(snfa.label(s), StateLabel::Open(_)))
            .collect();
        let mut open_index = vec![usize::MAX; snfa.num_states()];
        for (k, &s) in open_states.iter().enumerate() {
            open_index[s] = k;
        }
        Matcher {
            pattern: r.clone(),
            snfa,
            epsilon,
            eps,
            gadget,
            open_states,
            open_index,
        }
    }

    pub fn pattern(&self) -> &SemRe {
        &self.pattern
    }

    pub fn snfa(&self) -> &Snfa {
        &self.snfa
    }

    pub fn eps(&self) -> &EpsRelation {
        &self.eps
    }

    pub fn epsilon_answers(&self) -> &EpsilonAnswers {
        &self.epsilon
    }

    pub fn gadget(&self) -> &Gadget {
        &self.gadget
    }

    /// Oracle calls made while compiling (one per distinct query).
    pub fn setup_calls(&self) -> usize {
        self.epsilon.len()
    }

    pub fn query_graph<'a>(&'a self, w: &'a [u8]) -> QueryGraph<'a> {
        QueryGraph::new(&self.snfa, &self.gadget, w)
    }

    pub fn is_match(&self, w: &[u8], oracle: &dyn Oracle) -> Result<MatchOutcome, MatchError> {
        self.is_match_until(w, oracle, None)
    }

    /// As [`Matcher::is_match`], failing with `Timeout` once `deadline` passes.
    pub fn is_match_until(
        &self,
        w: &[u8],
        oracle: &dyn Oracle,
        deadline: Option<Instant>,
    ) -> Result<MatchOutcome, MatchError> {
        let started = Instant::now();
        let mut eval = lazy::Eval::new(self, w, metrics::Meter::new(oracle), deadline);
        let end = eval.graph().end();
        let matched = eval.alive(end)?;
        Ok(MatchOutcome {
            matched,
            metrics: eval.meter.finish(matched, started),
        })
    }

    /// Opens the evaluation state of one line for inspecting intermediate
    /// quantities.
    pub fn inspect<'a, 'o>(&'a self, w: &'a [u8], oracle: &'o dyn Oracle) -> Inspector<'a, 'o> {
        Inspector {
            eval: lazy::Eval::new(self, w, metrics::Meter::new(oracle), None),
        }
    }
}

/// Read access to Alive, LOQ, AQ and Backref for individual vertices.
pub struct Inspector<'a, 'o> {
    eval: lazy::Eval<'a, 'o>,
}

impl<'a> Inspector<'a, '_> {
    pub fn graph(&self) -> &QueryGraph<'a> {
        self.eval.graph()
    }

    pub fn alive(&mut self, v: Vertex) -> Result<bool, MatchError> {
        self.eval.alive(v)
    }

    pub fn loq(&mut self, v: Vertex) -> Result<Vec<Vertex>, MatchError> {
        self.eval.loq(v)
    }

    pub fn aq(&mut self, v: Vertex) -> Result<Vec<Vertex>, MatchError> {
        self.eval.aq(v)
    }

    pub fn backref(&mut self, v: Vertex) -> Result<Vec<Vertex>, MatchError> {
        self.eval.backref(v)
    }
}

/// Membership by the query-graph engine, compiling the pattern on the spot.
/// The compile-time ε-questions are not counted in the returned metrics.
pub fn match_semre(r: &SemRe, w: &[u8], oracle: &dyn Oracle) -> Result<MatchOutcome, MatchError> {
    Matcher::new(r, oracle)?.is_match(w, oracle)
}
