//! The query graph of a machine over one input line, kept implicit.
//!
//! Each input position carries a three-layer gadget summarizing ε-paths:
//! layer 1 closes queries, layer 2 reopens them, layer 3 finishes with
//! context-neutral ε-moves. Character transitions link layer 3 at index `i`
//! to layer 1 at index `i + 1`. Vertices and edges are computed on demand
//! from per-machine adjacency tables.

mod brute;
mod dot;

use fixedbitset::FixedBitSet;

use crate::snfa::{EpsRelation, Snfa, StateId, StateLabel};
use crate::syntax::CharSet;

pub use brute::{enumerate_paths, eval_bruteforce, path_feasible, QgError, BRUTE_FORCE_LIMIT};
pub use dot::to_dot;

/// A vertex `(state, layer, index)`; `index` runs over `1..=n+1` and means
/// "before consuming w_index".
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub state: StateId,
    pub layer: u8,
    pub index: usize,
}

impl Vertex {
    pub fn new(state: StateId, layer: u8, index: usize) -> Self {
        debug_assert!((1..=3).contains(&layer) && index >= 1);
        Vertex { state, layer, index }
    }
}

/// Gadget adjacency for one machine, independent of the input line.
#[derive(Clone, Debug)]
pub struct Gadget {
    /// `pred11[s″]`: states `s` with a layer-1 edge `(s,1) → (s″,1)`.
    pred11: Vec<Vec<StateId>>,
    pred22: Vec<Vec<StateId>>,
    /// `pred23[s′]`: states `s` with `(s,2) → (s′,3)`, always including `s′`.
    pred23: Vec<Vec<StateId>>,
    succ11: Vec<Vec<StateId>>,
    succ22: Vec<Vec<StateId>>,
    succ23: Vec<Vec<StateId>>,
    /// `char_preds[s′]`: character transitions `s →set s′`.
    char_preds: Vec<Vec<(StateId, CharSet)>>,
}

impl Gadget {
    pub fn new(m: &Snfa, eps: &EpsRelation) -> Self {
        let n = m.num_states();
        let mut g = Gadget {
            pred11: vec![Vec::new(); n],
            pred22: vec![Vec::new(); n],
            pred23: vec![Vec::new(); n],
            succ11: vec![Vec::new(); n],
            succ22: vec![Vec::new(); n],
            succ23: vec![Vec::new(); n],
            char_preds: vec![Vec::new(); n],
        };
        let mut seen = FixedBitSet::with_capacity(n);
        for s in m.states() {
            // targets of an ε-edge out of s itself or out of any Eps-partner of s
            seen.clear();
            let mut reach = |t: StateId| seen.insert(t);
            for &t in m.eps_successors(s) {
                reach(t);
            }
            for mid in eps.targets(s) {
                for &t in m.eps_successors(mid) {
                    reach(t);
                }
            }
            for t in seen.ones() {
                match m.label(t) {
                    StateLabel::Close(_) => {
                        g.pred11[t].push(s);
                        g.succ11[s].push(t);
                    }
                    StateLabel::Open(_) => {
                        g.pred22[t].push(s);
                        g.succ22[s].push(t);
                    }
                    StateLabel::Blank => {}
                }
            }
            g.pred23[s].push(s);
            g.succ23[s].push(s);
            for t in eps.targets(s).filter(|&t| t != s) {
                g.pred23[t].push(s);
                g.succ23[s].push(t);
            }
            for &(set, t) in m.char_transitions(s) {
                g.char_preds[t].push((s, set));
            }
        }
        // blank states first, closes last: demand-driven evaluation then
        // settles paths through earlier indices before asking the oracle here
        let rank = |s: &StateId| match m.label(*s) {
            StateLabel::Blank => 0,
            StateLabel::Open(_) => 1,
            StateLabel::Close(_) => 2,
        };
        for list in [&mut g.pred11, &mut g.pred22, &mut g.pred23] {
            for preds in list.iter_mut() {
                preds.sort_by_key(rank);
            }
        }
        g
    }

    pub fn layer1_preds(&self, s: StateId) -> &[StateId] {
        &self.pred11[s]
    }

    pub fn layer2_preds(&self, s: StateId) -> &[StateId] {
        &self.pred22[s]
    }

    pub fn layer3_preds(&self, s: StateId) -> &[StateId] {
        &self.pred23[s]
    }

    pub fn char_preds(&self, s: StateId) -> &[(StateId, CharSet)] {
        &self.char_preds[s]
    }
}

/// The query graph of a normalized machine over input `w`.
#[derive(Clone, Copy)]
pub struct QueryGraph<'a> {
    m: &'a Snfa,
    gadget: &'a Gadget,
    w: &'a [u8],
}

impl<'a> QueryGraph<'a> {
    pub fn new(m: &'a Snfa, gadget: &'a Gadget, w: &'a [u8]) -> Self {
        QueryGraph { m, gadget, w }
    }

    pub fn snfa(&self) -> &'a Snfa {
        self.m
    }

    pub fn gadget(&self) -> &'a Gadget {
        self.gadget
    }

    pub fn input(&self) -> &'a [u8] {
        self.w
    }

    /// Length of the input line.
    pub fn n(&self) -> usize {
        self.w.len()
    }

    pub fn start(&self) -> Vertex {
        Vertex::new(self.m.start(), 1, 1)
    }

    pub fn end(&self) -> Vertex {
        Vertex::new(self.m.end(), 3, self.n() + 1)
    }

    pub fn num_vertices(&self) -> usize {
        3 * self.m.num_states() * (self.n() + 1)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v.state < self.m.num_states() && (1..=3).contains(&v.layer) && (1..=self.n() + 1).contains(&v.index)
    }

    /// Dense id in `0..num_vertices()`, ordered by (index, layer, state).
    pub fn id(&self, v: Vertex) -> usize {
        ((v.index - 1) * 3 + (v.layer as usize - 1)) * self.m.num_states() + v.state
    }

    pub fn vertex(&self, id: usize) -> Vertex {
        let s = self.m.num_states();
        let (block, state) = (id / s, id % s);
        Vertex::new(state, (block % 3) as u8 + 1, block / 3 + 1)
    }

    pub fn idx(&self, v: Vertex) -> usize {
        v.index
    }

    pub fn label(&self, v: Vertex) -> StateLabel {
        match (self.m.label(v.state), v.layer) {
            (l @ StateLabel::Close(_), 1) | (l @ StateLabel::Open(_), 2) => l,
            _ => StateLabel::Blank,
        }
    }

    /// The input byte consumed by a character edge leaving index `i`.
    pub fn char_at(&self, i: usize) -> u8 {
        self.w[i - 1]
    }

    /// Calls `f` on every predecessor of `v`, those at an earlier index first.
    pub fn for_each_pred(&self, v: Vertex, mut f: impl FnMut(Vertex)) {
        let (s, i) = (v.state, v.index);
        match v.layer {
            1 => {
                if i > 1 {
                    let a = self.char_at(i - 1);
                    for &(p, set) in &self.gadget.char_preds[s] {
                        if set.contains(a) {
                            f(Vertex::new(p, 3, i - 1));
                        }
                    }
                }
                for &p in &self.gadget.pred11[s] {
                    f(Vertex::new(p, 1, i));
                }
            }
            2 => {
                f(Vertex::new(s, 1, i));
                for &p in &self.gadget.pred22[s] {
                    f(Vertex::new(p, 2, i));
                }
            }
            _ => {
                for &p in &self.gadget.pred23[s] {
                    f(Vertex::new(p, 2, i));
                }
            }
        }
    }

    pub fn predecessors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        self.for_each_pred(v, |p| out.push(p));
        out
    }

    pub fn for_each_succ(&self, v: Vertex, mut f: impl FnMut(Vertex)) {
        let (s, i) = (v.state, v.index);
        match v.layer {
            1 => {
                for &t in &self.gadget.succ11[s] {
                    f(Vertex::new(t, 1, i));
                }
                f(Vertex::new(s, 2, i));
            }
            2 => {
                for &t in &self.gadget.succ22[s] {
                    f(Vertex::new(t, 2, i));
                }
                for &t in &self.gadget.succ23[s] {
                    f(Vertex::new(t, 3, i));
                }
            }
            _ => {
                if i <= self.n() {
                    let a = self.char_at(i);
                    for &(set, t) in self.m.char_transitions(s) {
                        if set.contains(a) {
                            f(Vertex::new(t, 1, i + 1));
                        }
                    }
                }
            }
        }
    }

    pub fn successors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = Vec::new();
        self.for_each_succ(v, |t| out.push(t));
        out
    }

    pub fn has_edge(&self, from: Vertex, to: Vertex) -> bool {
        let mut found = false;
        self.for_each_succ(from, |t| found |= t == to);
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::snfa::{build_snfa, compute_eps, normalize, EpsilonAnswers};
    use crate::syntax::parse_semre;

    fn setup(p: &str) -> (Snfa, Gadget) {
        let m = normalize(build_snfa(&parse_semre(p).unwrap()));
        let eps = compute_eps(&m, &EpsilonAnswers::uniform(&m, false));
        let g = Gadget::new(&m, &eps);
        (m, g)
    }

    #[test]
    fn start_and_end() {
        let (m, gad) = setup("a*");
        let g = QueryGraph::new(&m, &gad, b"");
        assert_eq!(g.start(), Vertex::new(m.start(), 1, 1));
        assert_eq!(g.end(), Vertex::new(m.end(), 3, 1));
        assert_eq!(g.label(g.start()), StateLabel::Blank);
        let g = QueryGraph::new(&m, &gad, b"abc");
        assert_eq!(g.end(), Vertex::new(m.end(), 3, 4));
    }

    #[test]
    fn ids_round_trip() {
        let (m, gad) = setup("(a&<q>)*");
        let g = QueryGraph::new(&m, &gad, b"aa");
        for id in 0..g.num_vertices() {
            let v = g.vertex(id);
            assert!(g.contains(v));
            assert_eq!(g.id(v), id);
        }
        assert_eq!(g.num_vertices(), 3 * m.num_states() * 3);
    }

    #[test]
    fn fixed_gadget_edges() {
        let (m, gad) = setup("(.*)&<q>");
        let g = QueryGraph::new(&m, &gad, b"abc");
        for s in m.states() {
            for i in 1..=4 {
                assert!(g.predecessors(Vertex::new(s, 2, i)).contains(&Vertex::new(s, 1, i)));
                assert!(g.predecessors(Vertex::new(s, 3, i)).contains(&Vertex::new(s, 2, i)));
            }
        }
    }

    #[test]
    fn labels_follow_layers() {
        let (m, gad) = setup("a&<q>");
        let g = QueryGraph::new(&m, &gad, b"a");
        for s in m.states() {
            for k in 1..=3 {
                let l = g.label(Vertex::new(s, k, 1));
                match m.label(s) {
                    StateLabel::Close(_) if k == 1 => assert_eq!(l, m.label(s)),
                    StateLabel::Open(_) if k == 2 => assert_eq!(l, m.label(s)),
                    _ => assert_eq!(l, StateLabel::Blank),
                }
            }
        }
    }

    #[test]
    fn character_edges_follow_the_input() {
        let (m, gad) = setup("(.*)&<q>");
        let g = QueryGraph::new(&m, &gad, b"abc");
        let (s, set) = m
            .states()
            .find_map(|s| m.char_transitions(s).first().map(|&(set, _)| (s, set)))
            .unwrap();
        assert!(set.contains(b'a'));
        let t = m.char_transitions(s)[0].1;
        assert!(g.predecessors(Vertex::new(t, 1, 2)).contains(&Vertex::new(s, 3, 1)));
        assert!(g.successors(Vertex::new(s, 3, 1)).contains(&Vertex::new(t, 1, 2)));
        assert!(g.successors(Vertex::new(s, 3, 4)).is_empty());
    }

    #[test]
    fn predecessors_mirror_successors() {
        for p in ["(a&<q>)*b", "((a|b)*&<p>)*&<q>", "<x><y>|()"] {
            let (m, gad) = setup(p);
            let g = QueryGraph::new(&m, &gad, b"ab");
            for id in 0..g.num_vertices() {
                let v = g.vertex(id);
                for u in g.predecessors(v) {
                    assert!(g.has_edge(u, v), "{p}: {u:?} -> {v:?}");
                }
                for u in g.successors(v) {
                    assert!(g.predecessors(u).contains(&v), "{p}: {v:?} -> {u:?}");
                }
            }
        }
    }
}
