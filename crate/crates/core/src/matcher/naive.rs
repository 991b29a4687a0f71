//! Direct recursion on the semantics with no memo. Exponential; for tests.

use super::MatchError;
use crate::oracle::Oracle;
use crate::syntax::SemRe;

/// Longest input [`match_naive`] accepts.
pub const NAIVE_MAX_LEN: usize = 16;

pub fn match_naive(r: &SemRe, w: &[u8], oracle: &dyn Oracle) -> Result<bool, MatchError> {
    if w.len() > NAIVE_MAX_LEN {
        return Err(MatchError::InputTooLong {
            len: w.len(),
            max: NAIVE_MAX_LEN,
        });
    }
    member(r, w, oracle)
}

fn member(r: &SemRe, w: &[u8], oracle: &dyn Oracle) -> Result<bool, MatchError> {
    Ok(match r {
        SemRe::Empty => false,
        SemRe::Epsilon => w.is_empty(),
        SemRe::Lit(set) => w.len() == 1 && set.contains(w[0]),
        SemRe::Alt(a, b) => member(a, w, oracle)? || member(b, w, oracle)?,
        SemRe::Cat(a, b) => {
            for k in 0..=w.len() {
                if member(a, &w[..k], oracle)? && member(b, &w[k..], oracle)? {
                    return Ok(true);
                }
            }
            false
        }
        SemRe::Star(a) => {
            if w.is_empty() {
                return Ok(true);
            }
            for k in 1..=w.len() {
                if member(a, &w[..k], oracle)? && member(r, &w[k..], oracle)? {
                    return Ok(true);
                }
            }
            false
        }
        SemRe::Refine(a, q) => member(a, w, oracle)? && oracle.evaluate(q, w)?,
    })
}
