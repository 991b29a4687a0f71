//! Triangle detection phrased as a single match: a graph becomes a pattern,
//! an input line and an edge oracle such that the line matches iff the graph
//! has a triangle.
//!
//! The line lists every vertex twice between separators (`#11#22#33…`). The
//! pattern picks three vertex blocks i < j < k and asks the edge query about
//! the windows i…j, j…k and the enclosing i…k; the oracle only looks at the
//! first and last vertex of each window.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::oracle::{Oracle, OracleError};
use crate::syntax::{CharSet, Query, SemRe};

/// Symbols for vertices 1, 2, … in the unary encoding. `#` is reserved.
pub const UNARY_SYMBOLS: &[u8] =
    b"1234567890ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz!\"$%&'()*+,-./:;<=>?@[\\]^_`{|}~ ";

pub const EDGE_QUERY: &str = "E";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TriangleError {
    #[error("graph has no vertices")]
    NoVertices,
    #[error("vertex {0} is out of range 1..={1}")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("unary encoding supports at most {max} vertices, graph has {n}")]
    TooManyVertices { n: usize, max: usize },
    #[error("edge list line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Simple undirected graph on vertices `1..=n`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UndirectedGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl UndirectedGraph {
    pub fn new(n: usize) -> Self {
        UndirectedGraph {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::new(n);
        for i in 1..=n {
            for j in i + 1..=n {
                g.edges.insert((i, j));
            }
        }
        g
    }

    /// The graph whose edge set is picked by `mask` over the pairs
    /// (1,2), (1,3), …, (1,n), (2,3), … in that order.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let mut g = Self::new(n);
        for (bit, (i, j)) in Self::pairs(n).enumerate() {
            if mask >> bit & 1 == 1 {
                g.edges.insert((i, j));
            }
        }
        g
    }

    pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
        (1..=n).flat_map(move |i| (i + 1..=n).map(move |j| (i, j)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), TriangleError> {
        for x in [u, v] {
            if x == 0 || x > self.n {
                return Err(TriangleError::VertexOutOfRange(x, self.n));
            }
        }
        if u == v {
            return Err(TriangleError::SelfLoop(u));
        }
        self.edges.insert((u.min(v), u.max(v)));
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Parses an edge list: one `u v` pair per line, `#` comments, and an
    /// optional `n <count>` line fixing the vertex count (otherwise the
    /// largest endpoint).
    pub fn parse_edge_list(text: &str) -> Result<Self, TriangleError> {
        let mut declared = None;
        let mut pairs = Vec::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| TriangleError::Parse { line: k + 1, message };
            let fields: Vec<&str> = line.split_whitespace().collect();
            let num = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| bad(format!("not a vertex number: {s:?}")))
            };
            match fields.as_slice() {
                ["n", count] => declared = Some(num(count)?),
                [u, v] => pairs.push((num(u)?, num(v)?, k + 1)),
                _ => return Err(bad("expected `u v` or `n <count>`".into())),
            }
        }
        let n = declared.unwrap_or_else(|| pairs.iter().map(|&(u, v, _)| u.max(v)).max().unwrap_or(0));
        let mut g = UndirectedGraph::new(n);
        for (u, v, _) in pairs {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}

impl fmt::Display for UndirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n {}", self.n)?;
        for (u, v) in &self.edges {
            writeln!(f, "{u} {v}")?;
        }
        Ok(())
    }
}

/// O(n³) scan over vertex triples.
pub fn brute_force_triangle(g: &UndirectedGraph) -> bool {
    let n = g.n();
    (1..=n).any(|i| (i + 1..=n).any(|j| g.has_edge(i, j) && (j + 1..=n).any(|k| g.has_edge(j, k) && g.has_edge(i, k))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Encoding {
    Unary,
    Binary,
}

/// Answers the edge query from the first and last vertex of a window.
#[derive(Clone, Debug)]
pub struct EdgeOracle {
    graph: UndirectedGraph,
    encoding: Encoding,
    width: usize,
}

impl EdgeOracle {
    fn vertex(&self, block: &[u8]) -> Option<usize> {
        match self.encoding {
            Encoding::Unary => {
                let pos = UNARY_SYMBOLS.iter().position(|&c| c == block[0])?;
                (pos < self.graph.n()).then_some(pos + 1)
            }
            Encoding::Binary => {
                let mut id = 0usize;
                for &c in block {
                    id = id * 2
                        + match c {
                            b'0' => 0,
                            b'1' => 1,
                            _ => return None,
                        };
                }
                (id < self.graph.n()).then_some(id + 1)
            }
        }
    }

    pub fn test(&self, window: &[u8]) -> bool {
        let b = self.width;
        if window.len() < b {
            return false;
        }
        match (self.vertex(&window[..b]), self.vertex(&window[window.len() - b..])) {
            (Some(u), Some(v)) => u != v && self.graph.has_edge(u, v),
            _ => false,
        }
    }
}

impl Oracle for EdgeOracle {
    fn evaluate(&self, _query: &Query, text: &[u8]) -> Result<bool, OracleError> {
        Ok(self.test(text))
    }
}

/// A pattern, an input line and an oracle encoding one graph.
#[derive(Clone, Debug)]
pub struct TriangleInstance {
    pub pattern: SemRe,
    pub input: Vec<u8>,
    pub oracle: EdgeOracle,
}

fn reduction_pattern(sigma: CharSet, vertex: SemRe) -> SemRe {
    let any = SemRe::set(sigma);
    let any_star = SemRe::star(any.clone());
    let hash = SemRe::byte(b'#');
    let e = Query::new(EDGE_QUERY);
    // vertex, anything, separator, vertex: first and last name the endpoints
    let span = || {
        SemRe::refine(
            SemRe::cat_all([vertex.clone(), any_star.clone(), hash.clone(), vertex.clone()]),
            e.clone(),
        )
    };
    let outer = SemRe::refine(SemRe::cat_all([vertex.clone(), span(), span(), vertex.clone()]), e);
    SemRe::cat_all([any_star.clone(), hash, outer, any_star])
}

/// Unary encoding: vertex `v` is the single symbol `UNARY_SYMBOLS[v - 1]`.
pub fn encode_instance(g: &UndirectedGraph) -> Result<TriangleInstance, TriangleError> {
    let n = g.n();
    if n == 0 {
        return Err(TriangleError::NoVertices);
    }
    if n > UNARY_SYMBOLS.len() {
        return Err(TriangleError::TooManyVertices {
            n,
            max: UNARY_SYMBOLS.len(),
        });
    }
    let symbols = &UNARY_SYMBOLS[..n];
    let mut sigma = CharSet::from_bytes(symbols);
    sigma.insert(b'#');
    let mut input = Vec::with_capacity(3 * n);
    for &c in symbols {
        input.extend_from_slice(&[b'#', c, c]);
    }
    Ok(TriangleInstance {
        pattern: reduction_pattern(sigma, SemRe::set(sigma)),
        input,
        oracle: EdgeOracle {
            graph: g.clone(),
            encoding: Encoding::Unary,
            width: 1,
        },
    })
}

/// Width of a binary vertex code: ⌈log2 n⌉, at least 1.
pub fn binary_width(n: usize) -> usize {
    let mut b = 1;
    while (1usize << b) < n {
        b += 1;
    }
    b
}

/// Binary encoding over `{0, 1, #}`: vertex `v` is `v - 1` written with
/// [`binary_width`] bits.
pub fn encode_instance_binary(g: &UndirectedGraph) -> Result<TriangleInstance, TriangleError> {
    let n = g.n();
    if n == 0 {
        return Err(TriangleError::NoVertices);
    }
    let b = binary_width(n);
    let sigma = CharSet::from_bytes(b"01#");
    let block = SemRe::cat_all(std::iter::repeat_n(SemRe::set(sigma), b));
    let mut input = Vec::with_capacity(n * (2 * b + 1));
    for v in 0..n {
        let code: Vec<u8> = (0..b)
            .rev()
            .map(|k| if v >> k & 1 == 1 { b'1' } else { b'0' })
            .collect();
        input.push(b'#');
        input.extend_from_slice(&code);
        input.extend_from_slice(&code);
    }
    Ok(TriangleInstance {
        pattern: reduction_pattern(sigma, block),
        input,
        oracle: EdgeOracle {
            graph: g.clone(),
            encoding: Encoding::Binary,
            width: b,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcher::match_semre;

    fn verdict(inst: &TriangleInstance) -> bool {
        match_semre(&inst.pattern, &inst.input, &inst.oracle).unwrap().matched
    }

    fn path3() -> UndirectedGraph {
        let mut g = UndirectedGraph::new(3);
        g.add_edge(1, 2).unwrap();
        g.add_edge(2, 3).unwrap();
        g
    }

    #[test]
    fn line_layout() {
        assert_eq!(encode_instance(&UndirectedGraph::new(3)).unwrap().input, b"#11#22#33");
        assert_eq!(
            encode_instance_binary(&UndirectedGraph::new(2)).unwrap().input,
            b"#00#11"
        );
        assert_eq!(
            encode_instance_binary(&UndirectedGraph::new(5)).unwrap().input.len(),
            5 * 7
        );
        assert_eq!(UNARY_SYMBOLS.len(), 94);
        assert!(!UNARY_SYMBOLS.contains(&b'#'));
    }

    #[test]
    fn small_graphs() {
        for enc in [encode_instance, encode_instance_binary] {
            assert!(verdict(&enc(&UndirectedGraph::complete(3)).unwrap()));
            assert!(!verdict(&enc(&path3()).unwrap()));
            assert!(!verdict(&enc(&UndirectedGraph::new(1)).unwrap()));
        }
    }

    #[test]
    fn brute_force_cases() {
        assert!(brute_force_triangle(&UndirectedGraph::complete(3)));
        assert!(!brute_force_triangle(&path3()));
        let mut c5 = UndirectedGraph::new(5);
        for i in 1..=5 {
            c5.add_edge(i, i % 5 + 1).unwrap();
        }
        assert!(!brute_force_triangle(&c5));
        let mut star = UndirectedGraph::new(6);
        for i in 2..=6 {
            star.add_edge(1, i).unwrap();
        }
        assert!(!brute_force_triangle(&star));
    }

    #[test]
    fn pattern_nests_refinements() {
        let inst = encode_instance(&UndirectedGraph::complete(3)).unwrap();
        assert!(inst.pattern.is_nested());
        assert_eq!(inst.pattern.refine_count(), 3);
    }

    #[test]
    fn edge_oracle_reads_endpoints() {
        let inst = encode_instance(&path3()).unwrap();
        assert!(inst.oracle.test(b"1#2"));
        assert!(inst.oracle.test(b"2xx3"));
        assert!(!inst.oracle.test(b"1#3"));
        assert!(!inst.oracle.test(b"1#"));
        assert!(!inst.oracle.test(b"11"));
        let bin = encode_instance_binary(&path3()).unwrap();
        assert!(bin.oracle.test(b"00#01"));
        assert!(!bin.oracle.test(b"00#10"));
        assert!(!bin.oracle.test(b"0#"));
        // code 11 is vertex 4, which does not exist
        assert!(!bin.oracle.test(b"11#10"));
    }

    #[test]
    fn errors() {
        assert_eq!(
            encode_instance(&UndirectedGraph::new(0)).unwrap_err(),
            TriangleError::NoVertices
        );
        assert!(matches!(
            encode_instance(&UndirectedGraph::new(95)),
            Err(TriangleError::TooManyVertices { .. })
        ));
        let mut g = UndirectedGraph::new(2);
        assert_eq!(g.add_edge(1, 1), Err(TriangleError::SelfLoop(1)));
        assert_eq!(g.add_edge(1, 3), Err(TriangleError::VertexOutOfRange(3, 2)));
    }

    #[test]
    fn parses_edge_lists() {
        let g =
            UndirectedGraph::parse_edge_list("# triangle plus isolated vertex\nn 4\n1 2\n2 3 # middle\n3 1\n").unwrap();
        assert_eq!((g.n(), g.num_edges()), (4, 3));
        assert!(g.has_edge(1, 3));
        let g2 = UndirectedGraph::parse_edge_list(&g.to_string()).unwrap();
        assert_eq!(g, g2);
        assert!(matches!(
            UndirectedGraph::parse_edge_list("1 2 3\n"),
            Err(TriangleError::Parse { line: 1, .. })
        ));
        assert_eq!(UndirectedGraph::parse_edge_list("").unwrap().n(), 0);
    }

    #[test]
    fn exhaustive_up_to_four_vertices() {
        for n in 1..=4 {
            let pairs = n * (n - 1) / 2;
            for mask in 0..1u64 << pairs {
                let g = UndirectedGraph::from_mask(n, mask);
                let expect = brute_force_triangle(&g);
                assert_eq!(verdict(&encode_instance(&g).unwrap()), expect, "{g}");
                assert_eq!(verdict(&encode_instance_binary(&g).unwrap()), expect, "{g}");
            }
        }
    }
}
