//! Semantic NFAs: Thompson-style automata whose states may open or close an
//! oracle query.

mod build;
mod context;
mod dot;
mod eps;

use std::collections::HashMap;

use crate::syntax::{CharSet, Query};

pub use build::{build_snfa, normalize};
pub use context::{check_well_parenthesized, contexts, query_context, ContextError, QueryContext};
pub use dot::to_dot;
pub use eps::{compute_eps, EpsRelation, EpsilonAnswers};

pub type StateId = usize;

/// Dense index of a query within one machine.
pub type QueryId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StateLabel {
    Blank,
    Open(QueryId),
    Close(QueryId),
}

impl StateLabel {
    pub fn is_blank(self) -> bool {
        self == StateLabel::Blank
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransitionLabel {
    Epsilon,
    Chars(CharSet),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Transition {
    pub from: StateId,
    pub label: TransitionLabel,
    pub to: StateId,
}

/// A semantic NFA. States are dense ids in construction order.
#[derive(Clone, Debug, Default)]
pub struct Snfa {
    labels: Vec<StateLabel>,
    eps: Vec<Vec<StateId>>,
    chars: Vec<Vec<(CharSet, StateId)>>,
    queries: Vec<Query>,
    query_ids: HashMap<Query, QueryId>,
    start: StateId,
    end: StateId,
}

impl Snfa {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_state(&mut self, label: StateLabel) -> StateId {
        self.labels.push(label);
        self.eps.push(Vec::new());
        self.chars.push(Vec::new());
        self.labels.len() - 1
    }

    pub fn add_eps(&mut self, from: StateId, to: StateId) {
        self.eps[from].push(to);
    }

    pub fn add_chars(&mut self, from: StateId, set: CharSet, to: StateId) {
        self.chars[from].push((set, to));
    }

    pub fn intern_query(&mut self, query: &Query) -> QueryId {
        if let Some(&id) = self.query_ids.get(query) {
            return id;
        }
        self.queries.push(query.clone());
        self.query_ids.insert(query.clone(), self.queries.len() - 1);
        self.queries.len() - 1
    }

    pub fn open(&mut self, query: &Query) -> StateLabel {
        StateLabel::Open(self.intern_query(query))
    }

    pub fn close(&mut self, query: &Query) -> StateLabel {
        StateLabel::Close(self.intern_query(query))
    }

    pub fn set_label(&mut self, s: StateId, label: StateLabel) {
        self.labels[s] = label;
    }

    pub fn set_start(&mut self, s: StateId) {
        self.start = s;
    }

    pub fn set_end(&mut self, s: StateId) {
        self.end = s;
    }

    pub fn start(&self) -> StateId {
        self.start
    }

    pub fn end(&self) -> StateId {
        self.end
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn states(&self) -> std::ops::Range<StateId> {
        0..self.labels.len()
    }

    pub fn label(&self, s: StateId) -> StateLabel {
        self.labels[s]
    }

    pub fn labels(&self) -> &[StateLabel] {
        &self.labels
    }

    pub fn eps_successors(&self, s: StateId) -> &[StateId] {
        &self.eps[s]
    }

    pub fn char_transitions(&self, s: StateId) -> &[(CharSet, StateId)] {
        &self.chars[s]
    }

    pub fn transitions(&self) -> impl Iterator<Item = Transition> + '_ {
        self.states().flat_map(move |from| {
            let eps = self.eps[from].iter().map(move |&to| Transition {
                from,
                label: TransitionLabel::Epsilon,
                to,
            });
            let chars = self.chars[from].iter().map(move |&(set, to)| Transition {
                from,
                label: TransitionLabel::Chars(set),
                to,
            });
            eps.chain(chars)
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.eps.iter().map(Vec::len).sum::<usize>() + self.chars.iter().map(Vec::len).sum::<usize>()
    }

    pub fn queries(&self) -> &[Query] {
        &self.queries
    }

    pub fn query(&self, id: QueryId) -> &Query {
        &self.queries[id]
    }

    pub fn query_id(&self, query: &Query) -> Option<QueryId> {
        self.query_ids.get(query).copied()
    }

    /// Start is blank and every character transition lands on a blank state.
    pub fn is_normalized(&self) -> bool {
        self.labels[self.start].is_blank() && self.chars.iter().flatten().all(|&(_, to)| self.labels[to].is_blank())
    }

    pub fn describe_label(&self, label: StateLabel) -> String {
        match label {
            StateLabel::Blank => "blank".to_string(),
            StateLabel::Open(q) => format!("open({})", self.queries[q]),
            StateLabel::Close(q) => format!("close({})", self.queries[q]),
        }
    }
}
