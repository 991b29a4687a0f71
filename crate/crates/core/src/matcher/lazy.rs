//! Demand-driven evaluation of Alive, LOQ and Backref over the query graph.
//!
//! Work starts at the end vertex and pulls only what it needs. Each pending
//! computation is a frame on an explicit stack with a cursor into its inputs,
//! so long lines never deepen the call stack. Sets of open vertices are
//! bitsets shared copy-on-write, since most vertices just pass on the set of
//! a single predecessor.

use std::rc::Rc;
use std::time::Instant;

use fixedbitset::FixedBitSet;

use super::metrics::Meter;
use super::{MatchError, Matcher};
use crate::query_graph::{QueryGraph, Vertex};
use crate::snfa::StateLabel;

type Set = Rc<FixedBitSet>;

const UNKNOWN: u8 = 0;
const FALSE: u8 = 1;
const TRUE: u8 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Alive = 0,
    Loq = 1,
    Backref = 2,
}

struct Frame {
    kind: Kind,
    v: usize,
    started: bool,
    /// Predecessor ids, or LOQ bits for the oracle-driven cases.
    items: Vec<usize>,
    cursor: usize,
    acc: Option<Set>,
}

impl Frame {
    fn new(kind: Kind, v: usize) -> Self {
        Frame {
            kind,
            v,
            started: false,
            items: Vec::new(),
            cursor: 0,
            acc: None,
        }
    }
}

enum Step {
    Done,
    Need(Kind, usize),
}

pub(crate) struct Eval<'a, 'o> {
    m: &'a Matcher,
    g: QueryGraph<'a>,
    pub meter: Meter<'o>,
    deadline: Option<Instant>,
    states: usize,
    opens: usize,
    universe: usize,
    alive: Vec<u8>,
    loq: Vec<Option<Set>>,
    backref: Vec<Option<Set>>,
    busy: FixedBitSet,
    /// The only empty set ever stored, so emptiness is a pointer check.
    empty: Set,
    steps: u64,
}

impl<'a, 'o> Eval<'a, 'o> {
    pub fn new(m: &'a Matcher, w: &'a [u8], meter: Meter<'o>, deadline: Option<Instant>) -> Self {
        let g = m.query_graph(w);
        let nv = g.num_vertices();
        let opens = m.open_states.len();
        Eval {
            m,
            g,
            meter,
            deadline,
            states: m.snfa.num_states(),
            opens,
            universe: opens * (w.len() + 1),
            alive: vec![UNKNOWN; nv],
            loq: vec![None; nv],
            backref: vec![None; nv],
            busy: FixedBitSet::with_capacity(3 * nv),
            empty: Rc::new(FixedBitSet::with_capacity(opens * (w.len() + 1))),
            steps: 0,
        }
    }

    pub fn graph(&self) -> &QueryGraph<'a> {
        &self.g
    }

    pub fn alive(&mut self, v: Vertex) -> Result<bool, MatchError> {
        let id = self.g.id(v);
        self.run(Kind::Alive, id)?;
        Ok(self.alive[id] == TRUE)
    }

    pub fn loq(&mut self, v: Vertex) -> Result<Vec<Vertex>, MatchError> {
        let id = self.g.id(v);
        self.run(Kind::Loq, id)?;
        Ok(self.members(self.loq[id].as_ref()))
    }

    pub fn backref(&mut self, v: Vertex) -> Result<Vec<Vertex>, MatchError> {
        let id = self.g.id(v);
        self.run(Kind::Backref, id)?;
        Ok(self.members(self.backref[id].as_ref()))
    }

    /// Members of LOQ(v) whose window the oracle accepts; `v` must be a close.
    pub fn aq(&mut self, v: Vertex) -> Result<Vec<Vertex>, MatchError> {
        let StateLabel::Close(q) = self.g.label(v) else {
            return Ok(Vec::new());
        };
        let mut out = Vec::new();
        for u in self.loq(v)? {
            if self.g.label(u) == StateLabel::Open(q) && self.accepts(q, u.index, v.index)? {
                out.push(u);
            }
        }
        Ok(out)
    }

    fn members(&self, set: Option<&Set>) -> Vec<Vertex> {
        set.map(|s| s.ones().map(|b| self.open_vertex(b)).collect())
            .unwrap_or_default()
    }

    fn bit(&self, v: Vertex) -> usize {
        (v.index - 1) * self.opens + self.m.open_index[v.state]
    }

    fn open_vertex(&self, bit: usize) -> Vertex {
        Vertex::new(self.m.open_states[bit % self.opens], 2, bit / self.opens + 1)
    }

    fn vertex(&self, id: usize) -> Vertex {
        let block = id / self.states;
        Vertex::new(id % self.states, (block % 3) as u8 + 1, block / 3 + 1)
    }

    fn busy_bit(&self, kind: Kind, v: usize) -> usize {
        v * 3 + kind as usize
    }

    fn is_done(&self, kind: Kind, v: usize) -> bool {
        match kind {
            Kind::Alive => self.alive[v] != UNKNOWN,
            Kind::Loq => self.loq[v].is_some(),
            Kind::Backref => self.backref[v].is_some(),
        }
    }

    /// ♣(q, w_i … w_{j-1}) with 1-based indices.
    fn accepts(&mut self, q: usize, i: usize, j: usize) -> Result<bool, MatchError> {
        if i == j {
            return Ok(self.m.epsilon.get(q));
        }
        let query = self.m.snfa.query(q);
        Ok(self.meter.ask_once(query, q, self.g.input(), i - 1, j - 1)?)
    }

    fn run(&mut self, kind: Kind, v: usize) -> Result<(), MatchError> {
        if self.is_done(kind, v) {
            return Ok(());
        }
        let mut stack = vec![Frame::new(kind, v)];
        self.busy.insert(self.busy_bit(kind, v));
        while let Some(mut frame) = stack.pop() {
            self.steps += 1;
            if self.steps.is_multiple_of(1024) {
                if let Some(d) = self.deadline {
                    if Instant::now() >= d {
                        return Err(MatchError::Timeout);
                    }
                }
            }
            match self.step(&mut frame)? {
                Step::Done => {
                    let bit = self.busy_bit(frame.kind, frame.v);
                    self.busy.set(bit, false);
                }
                Step::Need(k, u) => {
                    let bit = self.busy_bit(k, u);
                    if self.busy.contains(bit) {
                        return Err(MatchError::Cycle(format!("{k:?} of {:?}", self.vertex(u))));
                    }
                    self.busy.insert(bit);
                    stack.push(frame);
                    stack.push(Frame::new(k, u));
                }
            }
        }
        Ok(())
    }

    fn preds(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.g.for_each_pred(self.vertex(v), |p| out.push(self.g.id(p)));
        out
    }

    fn step(&mut self, f: &mut Frame) -> Result<Step, MatchError> {
        match f.kind {
            Kind::Alive => self.step_alive(f),
            Kind::Loq => Ok(self.step_loq(f)),
            Kind::Backref => self.step_backref(f),
        }
    }

    fn step_alive(&mut self, f: &mut Frame) -> Result<Step, MatchError> {
        let v = self.vertex(f.v);
        if v == self.g.start() {
            self.alive[f.v] = TRUE;
            return Ok(Step::Done);
        }
        if let StateLabel::Close(q) = self.g.label(v) {
            // alive iff some pending open of q has an accepted window
            let Some(loq) = self.loq[f.v].clone() else {
                return Ok(Step::Need(Kind::Loq, f.v));
            };
            for b in loq.ones() {
                let u = self.open_vertex(b);
                if self.g.label(u) == StateLabel::Open(q) && self.accepts(q, u.index, v.index)? {
                    self.alive[f.v] = TRUE;
                    return Ok(Step::Done);
                }
            }
            self.alive[f.v] = FALSE;
            return Ok(Step::Done);
        }
        if !f.started {
            f.items = self.preds(f.v);
            f.started = true;
        }
        while f.cursor < f.items.len() {
            let p = f.items[f.cursor];
            match self.alive[p] {
                TRUE => {
                    self.alive[f.v] = TRUE;
                    return Ok(Step::Done);
                }
                FALSE => f.cursor += 1,
                _ => return Ok(Step::Need(Kind::Alive, p)),
            }
        }
        self.alive[f.v] = FALSE;
        Ok(Step::Done)
    }

    fn step_loq(&mut self, f: &mut Frame) -> Step {
        if !f.started {
            f.items = self.preds(f.v);
            f.started = true;
        }
        while f.cursor < f.items.len() {
            let p = f.items[f.cursor];
            let pv = self.vertex(p);
            if let StateLabel::Open(_) = self.g.label(pv) {
                match self.alive[p] {
                    UNKNOWN => return Step::Need(Kind::Alive, p),
                    TRUE => {
                        let bit = self.bit(pv);
                        self.insert(&mut f.acc, bit);
                    }
                    _ => {}
                }
            } else {
                let Some(b) = self.backref[p].clone() else {
                    return Step::Need(Kind::Backref, p);
                };
                self.merge(&mut f.acc, &b);
            }
            f.cursor += 1;
        }
        self.loq[f.v] = Some(self.finish(f.acc.take()));
        Step::Done
    }

    fn step_backref(&mut self, f: &mut Frame) -> Result<Step, MatchError> {
        let v = self.vertex(f.v);
        let Some(loq) = self.loq[f.v].clone() else {
            return Ok(Step::Need(Kind::Loq, f.v));
        };
        let StateLabel::Close(q) = self.g.label(v) else {
            self.backref[f.v] = Some(loq);
            return Ok(Step::Done);
        };
        if !f.started {
            f.items = loq
                .ones()
                .filter(|&b| self.g.label(self.open_vertex(b)) == StateLabel::Open(q))
                .collect();
            f.started = true;
        }
        while f.cursor < f.items.len() {
            let u = self.open_vertex(f.items[f.cursor]);
            let uid = self.g.id(u);
            let Some(b) = self.backref[uid].clone() else {
                return Ok(Step::Need(Kind::Backref, uid));
            };
            // an open whose backrefs are already collected adds nothing
            let covered = self.is_empty(&b) || f.acc.as_ref().is_some_and(|acc| b.is_subset(acc));
            if !covered && self.accepts(q, u.index, v.index)? {
                self.merge(&mut f.acc, &b);
            }
            f.cursor += 1;
        }
        self.backref[f.v] = Some(self.finish(f.acc.take()));
        Ok(Step::Done)
    }

    fn insert(&self, acc: &mut Option<Set>, bit: usize) {
        match acc {
            Some(s) if s.contains(bit) => {}
            Some(s) => Rc::make_mut(s).insert(bit),
            None => {
                let mut s = FixedBitSet::with_capacity(self.universe);
                s.insert(bit);
                *acc = Some(Rc::new(s));
            }
        }
    }

    fn merge(&self, acc: &mut Option<Set>, other: &Set) {
        if self.is_empty(other) {
            return;
        }
        match acc {
            None => *acc = Some(other.clone()),
            Some(s) if Rc::ptr_eq(s, other) || other.is_subset(s) => {}
            Some(s) if s.is_subset(other) => *s = other.clone(),
            Some(s) => Rc::make_mut(s).union_with(other),
        }
    }

    fn finish(&self, acc: Option<Set>) -> Set {
        acc.unwrap_or_else(|| self.empty.clone())
    }

    fn is_empty(&self, s: &Set) -> bool {
        Rc::ptr_eq(s, &self.empty)
    }
}
