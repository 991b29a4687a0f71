//! Abstract syntax, concrete syntax and derived forms of semantic regular expressions.

mod ast;
mod charset;
mod parse;
mod print;
mod sugar;

pub use ast::{Query, SemRe};
pub use charset::{Alphabet, CharSet};
pub use parse::{parse_semre, parse_semre_with, valid_query_name, ParseError, ParseErrorKind, MAX_REPEAT};
pub use print::to_pattern;
pub use sugar::{expand_sugar, Sugar};
