//! Regular expressions whose subexpressions can be refined by external
//! oracle queries: `r&<q>` matches a string when `r` matches it and the
//! oracle bound to `q` accepts it.
//!
//! ```
//! use semre::matcher::match_semre;
//! use semre::oracle::Builtin;
//! use semre::syntax::parse_semre;
//!
//! let r = parse_semre(".*a<pal>").unwrap();
//! assert!(match_semre(&r, b"babccb", &Builtin::Palindrome).unwrap().matched);
//! assert!(!match_semre(&r, b"bacbcb", &Builtin::Palindrome).unwrap().matched);
//! ```
//!
//! - [`syntax`]: abstract and concrete syntax.
//! - [`snfa`]: automata with query brackets and their ε-summary.
//! - [`query_graph`]: the layered graph of one input line.
//! - [`matcher`]: the query-graph engine and two reference engines.
//! - [`oracle`]: oracle backends, configuration and caching.
//! - [`triangle`]: triangle detection encoded as a single match.
//! - [`grep`]: the line-oriented front end behind the `semre` binary.

pub mod grep;
pub mod matcher;
pub mod oracle;
pub mod query_graph;
pub mod snfa;
pub mod syntax;
pub mod triangle;
