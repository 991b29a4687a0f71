use std::fmt;
use std::sync::Arc;

use super::charset::{Alphabet, CharSet};

/// Name of an oracle query. Two refinements with equal names ask the same question.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Query(Arc<str>);

impl Query {
    pub fn new(name: impl AsRef<str>) -> Self {
        let name = name.as_ref();
        assert!(!name.is_empty(), "query names must be nonempty");
        Query(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A semantic regular expression over the seven core constructors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SemRe {
    /// ⊥, the empty language.
    Empty,
    /// ε, the language containing only the empty string.
    Epsilon,
    /// One character drawn from the set.
    Lit(CharSet),
    Alt(Box<SemRe>, Box<SemRe>),
    Cat(Box<SemRe>, Box<SemRe>),
    Star(Box<SemRe>),
    /// Strings of the inner expression that the oracle accepts for the query.
    Refine(Box<SemRe>, Query),
}

impl SemRe {
    pub fn byte(b: u8) -> SemRe {
        SemRe::Lit(CharSet::singleton(b))
    }

    pub fn set(s: CharSet) -> SemRe {
        SemRe::Lit(s)
    }

    pub fn any(alphabet: Alphabet) -> SemRe {
        SemRe::Lit(alphabet.full())
    }

    /// Concatenation of single-byte literals; ε for the empty slice.
    pub fn literal(bytes: &[u8]) -> SemRe {
        bytes
            .iter()
            .map(|&b| SemRe::byte(b))
            .reduce(SemRe::cat)
            .unwrap_or(SemRe::Epsilon)
    }

    pub fn alt(a: SemRe, b: SemRe) -> SemRe {
        SemRe::Alt(Box::new(a), Box::new(b))
    }

    pub fn cat(a: SemRe, b: SemRe) -> SemRe {
        SemRe::Cat(Box::new(a), Box::new(b))
    }

    pub fn star(a: SemRe) -> SemRe {
        SemRe::Star(Box::new(a))
    }

    pub fn refine(a: SemRe, q: Query) -> SemRe {
        SemRe::Refine(Box::new(a), q)
    }

    /// Left-associated concatenation of all parts; ε when empty.
    pub fn cat_all(parts: impl IntoIterator<Item = SemRe>) -> SemRe {
        parts.into_iter().reduce(SemRe::cat).unwrap_or(SemRe::Epsilon)
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            SemRe::Empty | SemRe::Epsilon | SemRe::Lit(_) => 1,
            SemRe::Alt(a, b) | SemRe::Cat(a, b) => 1 + a.size() + b.size(),
            SemRe::Star(a) | SemRe::Refine(a, _) => 1 + a.size(),
        }
    }

    /// The classical expression left after deleting every refinement.
    pub fn skeleton(&self) -> SemRe {
        match self {
            SemRe::Empty => SemRe::Empty,
            SemRe::Epsilon => SemRe::Epsilon,
            SemRe::Lit(s) => SemRe::Lit(*s),
            SemRe::Alt(a, b) => SemRe::alt(a.skeleton(), b.skeleton()),
            SemRe::Cat(a, b) => SemRe::cat(a.skeleton(), b.skeleton()),
            SemRe::Star(a) => SemRe::star(a.skeleton()),
            SemRe::Refine(a, _) => a.skeleton(),
        }
    }

    pub fn refine_count(&self) -> usize {
        match self {
            SemRe::Empty | SemRe::Epsilon | SemRe::Lit(_) => 0,
            SemRe::Alt(a, b) | SemRe::Cat(a, b) => a.refine_count() + b.refine_count(),
            SemRe::Star(a) => a.refine_count(),
            SemRe::Refine(a, _) => 1 + a.refine_count(),
        }
    }

    /// Maximum number of refinements on any root-to-leaf path.
    pub fn refine_depth(&self) -> usize {
        match self {
            SemRe::Empty | SemRe::Epsilon | SemRe::Lit(_) => 0,
            SemRe::Alt(a, b) | SemRe::Cat(a, b) => a.refine_depth().max(b.refine_depth()),
            SemRe::Star(a) => a.refine_depth(),
            SemRe::Refine(a, _) => 1 + a.refine_depth(),
        }
    }

    /// True when some refinement sits inside another.
    pub fn is_nested(&self) -> bool {
        self.refine_depth() > 1
    }

    /// Distinct queries in first-occurrence (preorder) order.
    pub fn queries(&self) -> Vec<Query> {
        let mut out = Vec::new();
        self.collect_queries(&mut out);
        out
    }

    fn collect_queries(&self, out: &mut Vec<Query>) {
        match self {
            SemRe::Empty | SemRe::Epsilon | SemRe::Lit(_) => {}
            SemRe::Alt(a, b) | SemRe::Cat(a, b) => {
                a.collect_queries(out);
                b.collect_queries(out);
            }
            SemRe::Star(a) => a.collect_queries(out),
            SemRe::Refine(a, q) => {
                if !out.contains(q) {
                    out.push(q.clone());
                }
                a.collect_queries(out);
            }
        }
    }
}

impl fmt::Debug for SemRe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SemRe::Empty => write!(f, "Empty"),
            SemRe::Epsilon => write!(f, "Epsilon"),
            SemRe::Lit(s) => write!(f, "Lit{s:?}"),
            SemRe::Alt(a, b) => write!(f, "Alt({a:?}, {b:?})"),
            SemRe::Cat(a, b) => write!(f, "Cat({a:?}, {b:?})"),
            SemRe::Star(a) => write!(f, "Star({a:?})"),
            SemRe::Refine(a, q) => write!(f, "Refine({a:?}, {q:?})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn size_counts_nodes() {
        assert_eq!(SemRe::Epsilon.size(), 1);
        assert_eq!(SemRe::cat(SemRe::byte(b'a'), SemRe::byte(b'b')).size(), 3);
        let bare = SemRe::refine(SemRe::star(SemRe::any(Alphabet::Ascii)), Query::new("q"));
        assert_eq!(bare.size(), 3);
    }

    #[test]
    fn skeleton_strips_refinements() {
        let sigma = || SemRe::any(Alphabet::Ascii);
        let r = SemRe::refine(SemRe::star(sigma()), Query::new("q"));
        assert_eq!(r.skeleton(), SemRe::star(sigma()));

        // Σ*a(Σ*b⟨q′⟩)∧⟨q⟩ strips to Σ*a(Σ*bΣ*)
        let inner = SemRe::cat_all([
            SemRe::star(sigma()),
            SemRe::byte(b'b'),
            SemRe::refine(SemRe::star(sigma()), Query::new("q'")),
        ]);
        let nest = SemRe::cat_all([
            SemRe::star(sigma()),
            SemRe::byte(b'a'),
            SemRe::refine(inner, Query::new("q")),
        ]);
        let expect = SemRe::cat_all([
            SemRe::star(sigma()),
            SemRe::byte(b'a'),
            SemRe::cat_all([SemRe::star(sigma()), SemRe::byte(b'b'), SemRe::star(sigma())]),
        ]);
        assert_eq!(nest.skeleton(), expect);
        assert_eq!(nest.skeleton().refine_count(), 0);
        assert!(nest.is_nested());
        assert_eq!(nest.queries(), vec![Query::new("q"), Query::new("q'")]);
    }

    #[test]
    fn query_free_skeleton_is_identity() {
        let r = SemRe::star(SemRe::alt(SemRe::byte(b'a'), SemRe::Epsilon));
        assert_eq!(r.skeleton(), r);
    }
}
