#![allow(dead_code)]

use std::collections::HashSet;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

use semre::oracle::{Oracle, OracleError, TableOracle};
use semre::snfa::{Snfa, StateLabel};
use semre::syntax::{CharSet, Query, SemRe};

pub const LETTERS: &[u8] = b"abc";

pub fn queries(k: usize) -> Vec<Query> {
    (1..=k).map(|i| Query::new(format!("q{i}"))).collect()
}

/// A random expression of depth at most `depth` over `{a, b, c}` whose
/// refinements draw from `qs`.
pub fn random_semre(rng: &mut StdRng, depth: u32, qs: &[Query]) -> SemRe {
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..10) {
            0 => SemRe::Empty,
            1 => SemRe::Epsilon,
            2 => SemRe::set(CharSet::from_bytes(LETTERS)),
            3 => {
                let mut set = CharSet::empty();
                for &c in LETTERS {
                    if rng.gen_bool(0.5) {
                        set.insert(c);
                    }
                }
                SemRe::set(set)
            }
            _ => SemRe::byte(*LETTERS.choose(rng).unwrap()),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..10) {
        0..=2 => SemRe::cat(random_semre(rng, d, qs), random_semre(rng, d, qs)),
        3..=4 => SemRe::alt(random_semre(rng, d, qs), random_semre(rng, d, qs)),
        5..=6 => SemRe::star(random_semre(rng, d, qs)),
        _ if !qs.is_empty() => SemRe::refine(random_semre(rng, d, qs), qs.choose(rng).unwrap().clone()),
        _ => SemRe::star(random_semre(rng, d, qs)),
    }
}

pub fn random_word(rng: &mut StdRng, max_len: usize) -> Vec<u8> {
    let n = rng.gen_range(0..=max_len);
    (0..n).map(|_| *LETTERS.choose(rng).unwrap()).collect()
}

/// A table over every substring of `w` (including ε) for each query, with
/// independent coin flips; everything else answers false.
pub fn random_table(rng: &mut StdRng, qs: &[Query], w: &[u8], p_true: f64) -> TableOracle {
    let mut t = TableOracle::new(false);
    for q in qs {
        let mut seen = HashSet::new();
        for i in 0..=w.len() {
            for j in i..=w.len() {
                if seen.insert(&w[i..j]) {
                    t.insert(q, &w[i..j], rng.gen_bool(p_true));
                }
            }
        }
    }
    t
}

/// Does some feasible path labelled `w` run from start to end of `m`?
///
/// Searches (state, position, stack of (query, open position)) directly on
/// the machine, processing each state's label on entry.
pub fn snfa_accepts(m: &Snfa, w: &[u8], oracle: &dyn Oracle) -> Result<bool, OracleError> {
    type Config = (usize, usize, Vec<(usize, usize)>);
    let enter = |s: usize, pos: usize, stack: &[(usize, usize)]| -> Result<Option<Vec<(usize, usize)>>, OracleError> {
        let mut st = stack.to_vec();
        match m.label(s) {
            StateLabel::Blank => {}
            StateLabel::Open(q) => st.push((q, pos)),
            StateLabel::Close(q) => match st.pop() {
                Some((p, i)) if p == q => {
                    if !oracle.evaluate(m.query(q), &w[i..pos])? {
                        return Ok(None);
                    }
                }
                _ => return Ok(None),
            },
        }
        // nesting deeper than the state count cannot close again
        Ok((st.len() <= m.num_states()).then_some(st))
    };
    let mut seen: HashSet<Config> = HashSet::new();
    let mut todo: Vec<Config> = Vec::new();
    if let Some(st) = enter(m.start(), 0, &[])? {
        todo.push((m.start(), 0, st));
    }
    while let Some((s, pos, st)) = todo.pop() {
        if s == m.end() && pos == w.len() && st.is_empty() {
            return Ok(true);
        }
        if !seen.insert((s, pos, st.clone())) {
            continue;
        }
        for &t in m.eps_successors(s) {
            if let Some(next) = enter(t, pos, &st)? {
                todo.push((t, pos, next));
            }
        }
        if pos < w.len() {
            for &(set, t) in m.char_transitions(s) {
                if set.contains(w[pos]) {
                    if let Some(next) = enter(t, pos + 1, &st)? {
                        todo.push((t, pos + 1, next));
                    }
                }
            }
        }
    }
    Ok(false)
}

/// A word read along a random walk from start to end of `m`, ignoring
/// refinements, or `None` if the walk does not reach the end in time.
pub fn random_walk_word(rng: &mut StdRng, m: &Snfa, max_steps: usize) -> Option<Vec<u8>> {
    let mut s = m.start();
    let mut w = Vec::new();
    for _ in 0..max_steps {
        if s == m.end() && rng.gen_bool(0.7) {
            return Some(w);
        }
        let eps = m.eps_successors(s);
        let chars = m.char_transitions(s);
        let total = eps.len() + chars.len();
        if total == 0 {
            return (s == m.end()).then_some(w);
        }
        let k = rng.gen_range(0..total);
        if k < eps.len() {
            s = eps[k];
        } else {
            let (set, t) = chars[k - eps.len()];
            let options: Vec<u8> = LETTERS.iter().copied().filter(|&c| set.contains(c)).collect();
            let &c = options.choose(rng)?;
            w.push(c);
            s = t;
        }
    }
    None
}
