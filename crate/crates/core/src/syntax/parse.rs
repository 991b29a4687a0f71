//! Concrete pattern syntax.
//!
//! ```text
//! alt     := cat ('|' cat)*
//! cat     := postfix*                      (empty → ε)
//! postfix := atom ('*' | '+' | '?' | '{i}' | '{i,j}' | '&<name>')*
//! atom    := char | '\' escape | '.' | '[' class ']' | '(' alt ')'
//!          | '<name>' | '<+name>' | '%empty%'
//! ```
//!
//! `()` is ε, `%empty%` is ⊥, `<q>` stands for `.*&<q>` and `<+q>` for `.+&<q>`.
//! Sugar is expanded while parsing, so the result only uses core constructors.

use thiserror::Error;

use super::ast::{Query, SemRe};
use super::charset::{Alphabet, CharSet};
use super::sugar::{expand_sugar, Sugar};

/// Upper bound on `j` in `r{i,j}`.
pub const MAX_REPEAT: u32 = 1000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("pattern error at byte {offset}: {kind}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected {0:?}")]
    Unexpected(char),
    #[error("unexpected end of pattern")]
    UnexpectedEnd,
    #[error("unclosed group")]
    UnclosedGroup,
    #[error("unclosed character class")]
    UnclosedClass,
    #[error("repetition operator without an operand")]
    NothingToRepeat,
    #[error("unknown escape \\{0}")]
    UnknownEscape(char),
    #[error("empty query name")]
    EmptyQueryName,
    #[error("invalid query name {0:?}")]
    InvalidQueryName(String),
    #[error("repetition bounds {{{min},{max}}} are out of order")]
    BadRepetition { min: u32, max: u32 },
    #[error("repetition bound {0} exceeds {MAX_REPEAT}")]
    RepetitionTooLarge(u32),
    #[error("invalid character range {0:?}-{1:?}")]
    BadRange(char, char),
}

/// Parses with the default ASCII alphabet.
pub fn parse_semre(text: &str) -> Result<SemRe, ParseError> {
    parse_semre_with(text, Alphabet::Ascii)
}

pub fn parse_semre_with(text: &str, alphabet: Alphabet) -> Result<SemRe, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        alphabet,
    };
    let r = p.alt()?;
    match p.peek() {
        None => Ok(r),
        Some(b')') => Err(p.err(ParseErrorKind::Unexpected(')'))),
        Some(c) => Err(p.err(ParseErrorKind::Unexpected(c as char))),
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    alphabet: Alphabet,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError { offset: self.pos, kind }
    }

    fn err_at(&self, offset: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { offset, kind }
    }

    fn alt(&mut self) -> Result<SemRe, ParseError> {
        let mut left = self.cat()?;
        while self.peek() == Some(b'|') {
            self.pos += 1;
            let right = self.cat()?;
            left = SemRe::alt(left, right);
        }
        Ok(left)
    }

    fn cat(&mut self) -> Result<SemRe, ParseError> {
        let mut acc: Option<SemRe> = None;
        while let Some(c) = self.peek() {
            if c == b'|' || c == b')' {
                break;
            }
            let item = self.postfix()?;
            acc = Some(match acc {
                None => item,
                Some(prev) => SemRe::cat(prev, item),
            });
        }
        Ok(acc.unwrap_or(SemRe::Epsilon))
    }

    fn postfix(&mut self) -> Result<SemRe, ParseError> {
        let mut r = self.atom()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    r = SemRe::star(r);
                }
                Some(b'+') => {
                    self.pos += 1;
                    r = expand_sugar(Sugar::Plus(r), self.alphabet);
                }
                Some(b'?') => {
                    self.pos += 1;
                    r = expand_sugar(Sugar::Optional(r), self.alphabet);
                }
                Some(b'{') => {
                    let (lo, hi) = self.bounds()?;
                    r = expand_sugar(Sugar::Repeat(r, lo, hi), self.alphabet);
                }
                Some(b'&') => {
                    let at = self.pos;
                    self.pos += 1;
                    if self.peek() != Some(b'<') {
                        return Err(self.err_at(at, ParseErrorKind::Unexpected('&')));
                    }
                    self.pos += 1;
                    let q = self.query_name()?;
                    r = SemRe::refine(r, q);
                }
                _ => return Ok(r),
            }
        }
    }

    fn atom(&mut self) -> Result<SemRe, ParseError> {
        let start = self.pos;
        let c = self.bump().ok_or_else(|| self.err(ParseErrorKind::UnexpectedEnd))?;
        match c {
            b'(' => {
                let inner = self.alt()?;
                if self.bump() != Some(b')') {
                    return Err(self.err_at(start, ParseErrorKind::UnclosedGroup));
                }
                Ok(inner)
            }
            b'[' => Ok(SemRe::Lit(self.class(start)?)),
            b'.' => Ok(expand_sugar(Sugar::Any, self.alphabet)),
            b'<' => {
                if self.peek() == Some(b'+') {
                    self.pos += 1;
                    let q = self.query_name()?;
                    Ok(expand_sugar(Sugar::NonEmptyQuery(q), self.alphabet))
                } else {
                    let q = self.query_name()?;
                    Ok(expand_sugar(Sugar::Query(q), self.alphabet))
                }
            }
            b'%' if self.src[self.pos..].starts_with(b"empty%") => {
                self.pos += b"empty%".len();
                Ok(SemRe::Empty)
            }
            b'\\' => Ok(SemRe::byte(self.escape(start)?)),
            b'*' | b'+' | b'?' | b'{' | b'&' => Err(self.err_at(start, ParseErrorKind::NothingToRepeat)),
            b']' | b'}' | b'>' => Err(self.err_at(start, ParseErrorKind::Unexpected(c as char))),
            _ => Ok(SemRe::byte(c)),
        }
    }

    /// Parses the body of an escape; `start` points at the backslash.
    fn escape(&mut self, start: usize) -> Result<u8, ParseError> {
        let c = self
            .bump()
            .ok_or_else(|| self.err_at(start, ParseErrorKind::UnexpectedEnd))?;
        Ok(match c {
            b'n' => b'\n',
            b't' => b'\t',
            b'r' => b'\r',
            b'f' => 0x0c,
            b'x' => {
                let hex = self
                    .src
                    .get(self.pos..self.pos + 2)
                    .and_then(|h| std::str::from_utf8(h).ok())
                    .and_then(|h| u8::from_str_radix(h, 16).ok())
                    .ok_or_else(|| self.err_at(start, ParseErrorKind::UnknownEscape('x')))?;
                self.pos += 2;
                hex
            }
            c if c.is_ascii_punctuation() || c == b' ' => c,
            c => return Err(self.err_at(start, ParseErrorKind::UnknownEscape(c as char))),
        })
    }

    fn class(&mut self, start: usize) -> Result<CharSet, ParseError> {
        let negated = if self.peek() == Some(b'^') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut set = CharSet::empty();
        loop {
            let at = self.pos;
            let lo = match self.bump() {
                None => return Err(self.err_at(start, ParseErrorKind::UnclosedClass)),
                Some(b']') => break,
                Some(b'\\') => self.escape(at)?,
                Some(c) => c,
            };
            let is_range = self.peek() == Some(b'-') && !matches!(self.src.get(self.pos + 1), Some(b']') | None);
            if is_range {
                self.pos += 1;
                let at_hi = self.pos;
                let hi = match self.bump() {
                    Some(b'\\') => self.escape(at_hi)?,
                    Some(c) => c,
                    None => return Err(self.err_at(start, ParseErrorKind::UnclosedClass)),
                };
                if lo > hi {
                    return Err(self.err_at(at, ParseErrorKind::BadRange(lo as char, hi as char)));
                }
                set = set.union(&CharSet::range(lo, hi));
            } else {
                set.insert(lo);
            }
        }
        Ok(if negated {
            set.complement_in(&self.alphabet.full())
        } else {
            set
        })
    }

    /// Reads `name>`; the opening `<` (and `+`, if any) is already consumed.
    fn query_name(&mut self) -> Result<Query, ParseError> {
        let start = self.pos;
        let end = match self.src[start..].iter().position(|&b| b == b'>') {
            Some(n) => start + n,
            None => {
                self.pos = self.src.len();
                return Err(self.err_at(start, ParseErrorKind::UnexpectedEnd));
            }
        };
        let raw = &self.src[start..end];
        if raw.is_empty() || raw.iter().all(u8::is_ascii_whitespace) {
            return Err(self.err_at(start, ParseErrorKind::EmptyQueryName));
        }
        let name = String::from_utf8_lossy(raw).into_owned();
        if !valid_query_name(&name) {
            return Err(self.err_at(start, ParseErrorKind::InvalidQueryName(name)));
        }
        self.pos = end + 1;
        Ok(Query::new(name))
    }

    fn bounds(&mut self) -> Result<(u32, u32), ParseError> {
        let start = self.pos;
        self.pos += 1; // '{'
        let lo = self.number(start)?;
        let hi = match self.bump() {
            Some(b'}') => lo,
            Some(b',') => {
                let hi = self.number(start)?;
                if self.bump() != Some(b'}') {
                    return Err(self.err_at(start, ParseErrorKind::Unexpected('{')));
                }
                hi
            }
            Some(c) => return Err(self.err_at(self.pos - 1, ParseErrorKind::Unexpected(c as char))),
            None => return Err(self.err(ParseErrorKind::UnexpectedEnd)),
        };
        if lo > hi {
            return Err(self.err_at(start, ParseErrorKind::BadRepetition { min: lo, max: hi }));
        }
        if hi > MAX_REPEAT {
            return Err(self.err_at(start, ParseErrorKind::RepetitionTooLarge(hi)));
        }
        Ok((lo, hi))
    }

    fn number(&mut self, start: usize) -> Result<u32, ParseError> {
        let begin = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if begin == self.pos {
            return Err(match self.peek() {
                Some(c) => self.err(ParseErrorKind::Unexpected(c as char)),
                None => self.err(ParseErrorKind::UnexpectedEnd),
            });
        }
        std::str::from_utf8(&self.src[begin..self.pos])
            .unwrap()
            .parse::<u32>()
            .map_err(|_| self.err_at(start, ParseErrorKind::RepetitionTooLarge(u32::MAX)))
    }
}

/// Names are nonempty, free of `<`, `>` and control characters, have no
/// surrounding whitespace and do not start with `+`.
pub fn valid_query_name(name: &str) -> bool {
    !name.is_empty()
        && name.trim() == name
        && !name.starts_with('+')
        && name.chars().all(|c| c != '<' && c != '>' && !c.is_control())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> SemRe {
        SemRe::any(Alphabet::Ascii)
    }

    #[test]
    fn grammar_shape() {
        let r = parse_semre("a(b|c)*").unwrap();
        let expect = SemRe::cat(
            SemRe::byte(b'a'),
            SemRe::star(SemRe::alt(SemRe::byte(b'b'), SemRe::byte(b'c'))),
        );
        assert_eq!(r, expect);
    }

    #[test]
    fn bare_query_is_sigma_star_refined() {
        let r = parse_semre("<pal>").unwrap();
        assert_eq!(r, SemRe::refine(SemRe::star(sigma()), Query::new("pal")));
        assert_eq!(r.size(), 3);
        assert_eq!(parse_semre(".*&<pal>").unwrap(), r);
    }

    #[test]
    fn nonempty_query_sugar() {
        let r = parse_semre("<+q>").unwrap();
        assert_eq!(
            r,
            SemRe::refine(SemRe::cat(sigma(), SemRe::star(sigma())), Query::new("q"))
        );
    }

    #[test]
    fn bounded_repetition() {
        let x = || SemRe::byte(b'x');
        let r = parse_semre("x{2,3}").unwrap();
        assert_eq!(
            r,
            SemRe::alt(SemRe::cat(x(), x()), SemRe::cat(SemRe::cat(x(), x()), x()))
        );
        assert_eq!(parse_semre("x{1,1}").unwrap(), x());
        assert_eq!(parse_semre("x{2}").unwrap(), SemRe::cat(x(), x()));
    }

    #[test]
    fn refinement_binds_to_preceding_atom() {
        let r = parse_semre("ab&<q>").unwrap();
        assert_eq!(
            r,
            SemRe::cat(SemRe::byte(b'a'), SemRe::refine(SemRe::byte(b'b'), Query::new("q")))
        );
        let g = parse_semre("(ab)&<q>*").unwrap();
        assert_eq!(
            g,
            SemRe::star(SemRe::refine(
                SemRe::cat(SemRe::byte(b'a'), SemRe::byte(b'b')),
                Query::new("q")
            ))
        );
    }

    #[test]
    fn empty_and_epsilon_spellings() {
        assert_eq!(parse_semre("%empty%").unwrap(), SemRe::Empty);
        assert_eq!(parse_semre("()").unwrap(), SemRe::Epsilon);
        assert_eq!(parse_semre("").unwrap(), SemRe::Epsilon);
        assert_eq!(parse_semre("%").unwrap(), SemRe::byte(b'%'));
    }

    #[test]
    fn classes_and_escapes() {
        assert_eq!(parse_semre("[a-c]").unwrap(), SemRe::Lit(CharSet::range(b'a', b'c')));
        let neg = parse_semre("[^\"\\\\]").unwrap();
        match neg {
            SemRe::Lit(s) => {
                assert_eq!(s.len(), 126);
                assert!(!s.contains(b'"') && !s.contains(b'\\'));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(parse_semre("\\n").unwrap(), SemRe::byte(b'\n'));
        assert_eq!(parse_semre("\\.").unwrap(), SemRe::byte(b'.'));
        assert_eq!(parse_semre("[a-]").unwrap(), SemRe::Lit(CharSet::from_bytes(b"a-")));
        assert_eq!(parse_semre("\\x41").unwrap(), SemRe::byte(b'A'));
    }

    #[test]
    fn negated_class_respects_alphabet() {
        match parse_semre_with("[^a]", Alphabet::Bytes).unwrap() {
            SemRe::Lit(s) => assert_eq!(s.len(), 255),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn errors_report_offsets() {
        let e = parse_semre("ab\\q").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownEscape('q'));
        assert_eq!(e.offset, 2);

        let e = parse_semre("a<>").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::EmptyQueryName);
        assert_eq!(e.offset, 2);

        let e = parse_semre("x{3,2}").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::BadRepetition { min: 3, max: 2 });

        assert_eq!(parse_semre("(ab").unwrap_err().kind, ParseErrorKind::UnclosedGroup);
        assert_eq!(parse_semre("ab)").unwrap_err().kind, ParseErrorKind::Unexpected(')'));
        assert_eq!(parse_semre("*a").unwrap_err().kind, ParseErrorKind::NothingToRepeat);
        assert_eq!(parse_semre("[ab").unwrap_err().kind, ParseErrorKind::UnclosedClass);
        assert_eq!(parse_semre("a&b").unwrap_err().kind, ParseErrorKind::Unexpected('&'));
        assert_eq!(parse_semre("<q").unwrap_err().kind, ParseErrorKind::UnexpectedEnd);
        assert!(matches!(
            parse_semre("x{2000}").unwrap_err().kind,
            ParseErrorKind::RepetitionTooLarge(2000)
        ));
    }

    #[test]
    fn query_names_may_contain_spaces() {
        let r = parse_semre("<Password or SSH key>").unwrap();
        assert_eq!(r.queries(), vec![Query::new("Password or SSH key")]);
        assert!(matches!(
            parse_semre("< q>").unwrap_err().kind,
            ParseErrorKind::InvalidQueryName(_)
        ));
    }
}
