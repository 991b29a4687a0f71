use super::ast::{Query, SemRe};
use super::charset::Alphabet;

/// Derived forms accepted by the parser. Each expands to core constructors only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sugar {
    /// `r?` = r + ε
    Optional(SemRe),
    /// `r+` = r r*
    Plus(SemRe),
    /// `r{i,j}` = r^i + r^(i+1) + … + r^j
    Repeat(SemRe, u32, u32),
    /// `<q>` = Σ* ∧ ⟨q⟩
    Query(Query),
    /// `<+q>` = Σ+ ∧ ⟨q⟩
    NonEmptyQuery(Query),
    /// `.` = Σ
    Any,
}

pub fn expand_sugar(sugar: Sugar, alphabet: Alphabet) -> SemRe {
    match sugar {
        Sugar::Optional(r) => SemRe::alt(r, SemRe::Epsilon),
        Sugar::Plus(r) => SemRe::cat(r.clone(), SemRe::star(r)),
        Sugar::Repeat(r, lo, hi) => repeat(&r, lo, hi),
        Sugar::Query(q) => SemRe::refine(SemRe::star(SemRe::any(alphabet)), q),
        Sugar::NonEmptyQuery(q) => {
            SemRe::refine(SemRe::cat(SemRe::any(alphabet), SemRe::star(SemRe::any(alphabet))), q)
        }
        Sugar::Any => SemRe::any(alphabet),
    }
}

/// `r^k`, left-associated; `r^0 = ε`.
fn power(r: &SemRe, k: u32) -> SemRe {
    SemRe::cat_all((0..k).map(|_| r.clone()))
}

fn repeat(r: &SemRe, lo: u32, hi: u32) -> SemRe {
    assert!(lo <= hi, "repetition bounds out of order");
    (lo..=hi)
        .map(|k| power(r, k))
        .reduce(SemRe::alt)
        .expect("nonempty range")
}
