use std::collections::VecDeque;
use std::fmt;

use super::{QueryId, Snfa, StateId, StateLabel};

/// Unbalanced query markers of a path.
///
/// `closes` lists unmatched closes in path order (innermost first);
/// `opens` lists unmatched opens in path order (outermost first).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QueryContext {
    pub closes: Vec<QueryId>,
    pub opens: Vec<QueryId>,
}

impl QueryContext {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.closes.is_empty() && self.opens.is_empty()
    }

    pub fn of_label(label: StateLabel) -> Self {
        match label {
            StateLabel::Blank => Self::empty(),
            StateLabel::Open(q) => QueryContext {
                closes: vec![],
                opens: vec![q],
            },
            StateLabel::Close(q) => QueryContext {
                closes: vec![q],
                opens: vec![],
            },
        }
    }

    /// Context of a label sequence, or `None` if some close meets an open of
    /// a different query.
    pub fn of_labels(labels: impl IntoIterator<Item = StateLabel>) -> Option<Self> {
        labels
            .into_iter()
            .try_fold(Self::empty(), |acc, l| acc.concat(&Self::of_label(l)))
    }

    /// Context of a path formed by `self`'s path followed by `next`'s.
    ///
    /// The innermost pending opens of `self` cancel against the leading closes
    /// of `next`. Returns `None` when a pair fails to match.
    pub fn concat(&self, next: &QueryContext) -> Option<QueryContext> {
        let mut opens = self.opens.clone();
        let mut k = 0;
        while k < next.closes.len() {
            match opens.last() {
                Some(&q) if q == next.closes[k] => {
                    opens.pop();
                    k += 1;
                }
                Some(_) => return None,
                None => break,
            }
        }
        let mut closes = self.closes.clone();
        closes.extend_from_slice(&next.closes[k..]);
        opens.extend_from_slice(&next.opens);
        Some(QueryContext { closes, opens })
    }

    /// Pushes one label, as `concat(of_label(label))` but in place.
    pub fn push(&mut self, label: StateLabel) -> bool {
        match label {
            StateLabel::Blank => true,
            StateLabel::Open(q) => {
                self.opens.push(q);
                true
            }
            StateLabel::Close(q) => match self.opens.last() {
                Some(&top) if top == q => {
                    self.opens.pop();
                    true
                }
                Some(_) => false,
                None => {
                    self.closes.push(q);
                    true
                }
            },
        }
    }

    pub fn display<'a>(&'a self, m: &'a Snfa) -> impl fmt::Display + 'a {
        ContextDisplay { ctx: self, m }
    }
}

struct ContextDisplay<'a> {
    ctx: &'a QueryContext,
    m: &'a Snfa,
}

impl fmt::Display for ContextDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |ids: &[QueryId], kind: &str| {
            ids.iter()
                .map(|&q| format!("{kind}({})", self.m.query(q)))
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(
            f,
            "([{}], [{}])",
            names(&self.ctx.closes, "close"),
            names(&self.ctx.opens, "open")
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContextError {
    Unreachable(StateId),
    /// A path reaches the state with a close that does not match the
    /// innermost pending open.
    Mismatched(StateId),
    /// Two paths reach the state with different contexts.
    Conflict(StateId),
}

impl fmt::Display for ContextError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContextError::Unreachable(s) => write!(f, "state {s} is unreachable"),
            ContextError::Mismatched(s) => write!(f, "mismatched close at state {s}"),
            ContextError::Conflict(s) => write!(f, "state {s} has two different query contexts"),
        }
    }
}

impl std::error::Error for ContextError {}

/// Contexts of all states reachable from the start, `None` for the rest.
///
/// Propagates contexts breadth-first over every transition; the first
/// disagreement or mismatch is reported.
pub fn contexts(m: &Snfa) -> Result<Vec<Option<QueryContext>>, ContextError> {
    let mut ctx: Vec<Option<QueryContext>> = vec![None; m.num_states()];
    let start = m.start();
    ctx[start] = Some(QueryContext::of_label(m.label(start)));
    let mut queue = VecDeque::from([start]);
    while let Some(s) = queue.pop_front() {
        let here = ctx[s].clone().expect("queued states have contexts");
        let targets = m
            .eps_successors(s)
            .iter()
            .copied()
            .chain(m.char_transitions(s).iter().map(|&(_, t)| t));
        for t in targets {
            let mut next = here.clone();
            if !next.push(m.label(t)) {
                return Err(ContextError::Mismatched(t));
            }
            match &ctx[t] {
                Some(existing) if *existing != next => return Err(ContextError::Conflict(t)),
                Some(_) => {}
                None => {
                    ctx[t] = Some(next);
                    queue.push_back(t);
                }
            }
        }
    }
    Ok(ctx)
}

pub fn query_context(m: &Snfa, s: StateId) -> Result<QueryContext, ContextError> {
    contexts(m)?.swap_remove(s).ok_or(ContextError::Unreachable(s))
}

/// True iff every reachable state has one consistent context with no
/// unmatched closes, and the end state (if reachable) has the empty context.
pub fn check_well_parenthesized(m: &Snfa) -> bool {
    let Ok(ctx) = contexts(m) else {
        return false;
    };
    let closes_ok = ctx.iter().flatten().all(|c| c.closes.is_empty());
    let end_ok = ctx[m.end()].as_ref().is_none_or(QueryContext::is_empty);
    closes_ok && end_ok
}
