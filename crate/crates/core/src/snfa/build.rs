use std::collections::HashMap;

use super::{Snfa, StateId, StateLabel};
use crate::syntax::SemRe;

/// Thompson construction extended with query markers.
///
/// Every AST node contributes exactly two states, its entry and exit,
/// allocated before the states of its children.
pub fn build_snfa(r: &SemRe) -> Snfa {
    let mut m = Snfa::new();
    let (s0, sf) = add(&mut m, r);
    m.set_start(s0);
    m.set_end(sf);
    m
}

fn add(m: &mut Snfa, r: &SemRe) -> (StateId, StateId) {
    let s0 = m.add_state(StateLabel::Blank);
    let sf = m.add_state(StateLabel::Blank);
    match r {
        SemRe::Empty => {}
        SemRe::Epsilon => m.add_eps(s0, sf),
        SemRe::Lit(set) => m.add_chars(s0, *set, sf),
        SemRe::Alt(a, b) => {
            let (a0, af) = add(m, a);
            let (b0, bf) = add(m, b);
            m.add_eps(s0, a0);
            m.add_eps(s0, b0);
            m.add_eps(af, sf);
            m.add_eps(bf, sf);
        }
        SemRe::Cat(a, b) => {
            let (a0, af) = add(m, a);
            let (b0, bf) = add(m, b);
            m.add_eps(s0, a0);
            m.add_eps(af, b0);
            m.add_eps(bf, sf);
        }
        SemRe::Star(a) => {
            let (a0, af) = add(m, a);
            m.add_eps(s0, a0);
            m.add_eps(af, s0);
            m.add_eps(s0, sf);
        }
        SemRe::Refine(a, q) => {
            let (a0, af) = add(m, a);
            let open = m.open(q);
            let close = m.close(q);
            m.set_label(s0, open);
            m.set_label(sf, close);
            m.add_eps(s0, a0);
            m.add_eps(af, sf);
        }
    }
    (s0, sf)
}

/// Makes the start state blank and every character transition land on a
/// blank state, adding fresh blank states where needed.
pub fn normalize(mut m: Snfa) -> Snfa {
    if !m.label(m.start()).is_blank() {
        let old = m.start();
        let fresh = m.add_state(StateLabel::Blank);
        m.add_eps(fresh, old);
        m.set_start(fresh);
    }
    let mut relay: HashMap<StateId, StateId> = HashMap::new();
    for s in m.states() {
        for t in 0..m.chars[s].len() {
            let (set, to) = m.chars[s][t];
            if m.label(to).is_blank() {
                continue;
            }
            let mid = match relay.get(&to) {
                Some(&mid) => mid,
                None => {
                    let mid = m.add_state(StateLabel::Blank);
                    m.add_eps(mid, to);
                    relay.insert(to, mid);
                    mid
                }
            };
            m.chars[s][t] = (set, mid);
        }
    }
    m
}
