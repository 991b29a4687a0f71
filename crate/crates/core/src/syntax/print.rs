use std::fmt::Write;

use super::ast::SemRe;
use super::charset::{Alphabet, CharSet};

/// Renders `r` in the concrete syntax accepted by [`parse_semre_with`] for the
/// same alphabet, such that parsing the output yields `r` again.
///
/// [`parse_semre_with`]: super::parse::parse_semre_with
pub fn to_pattern(r: &SemRe, alphabet: Alphabet) -> String {
    let mut out = String::new();
    write_re(r, Prec::Alt, alphabet, &mut out);
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Alt,
    Cat,
    Postfix,
}

fn write_re(r: &SemRe, ctx: Prec, alphabet: Alphabet, out: &mut String) {
    let own = match r {
        SemRe::Alt(..) => Prec::Alt,
        SemRe::Cat(..) => Prec::Cat,
        _ => Prec::Postfix,
    };
    let paren = own < ctx;
    if paren {
        out.push('(');
    }
    match r {
        SemRe::Empty => out.push_str("%empty%"),
        SemRe::Epsilon => out.push_str("()"),
        SemRe::Lit(s) => write_set(s, alphabet, out),
        SemRe::Alt(a, b) => {
            write_re(a, Prec::Alt, alphabet, out);
            out.push('|');
            write_re(b, Prec::Cat, alphabet, out);
        }
        SemRe::Cat(a, b) => {
            write_re(a, Prec::Cat, alphabet, out);
            write_re(b, Prec::Postfix, alphabet, out);
        }
        SemRe::Star(a) => {
            write_re(a, Prec::Postfix, alphabet, out);
            out.push('*');
        }
        SemRe::Refine(a, q) => {
            write_re(a, Prec::Postfix, alphabet, out);
            let _ = write!(out, "&<{}>", q.name());
        }
    }
    if paren {
        out.push(')');
    }
}

const META: &[u8] = b"\\|()[]{}<>*+?&.%";

fn write_set(s: &CharSet, alphabet: Alphabet, out: &mut String) {
    if *s == alphabet.full() {
        out.push('.');
        return;
    }
    if let Some(b) = s.as_singleton() {
        write_byte(b, META, out);
        return;
    }
    out.push('[');
    for (lo, hi) in s.ranges() {
        write_byte(lo, b"\\[]-^", out);
        if hi > lo {
            if hi > lo + 1 {
                out.push('-');
            }
            write_byte(hi, b"\\[]-^", out);
        }
    }
    out.push(']');
}

fn write_byte(b: u8, escaped: &[u8], out: &mut String) {
    match b {
        b'\n' => out.push_str("\\n"),
        b'\t' => out.push_str("\\t"),
        b'\r' => out.push_str("\\r"),
        _ if escaped.contains(&b) => {
            out.push('\\');
            out.push(b as char);
        }
        0x20..=0x7e => out.push(b as char),
        _ => {
            let _ = write!(out, "\\x{b:02X}");
        }
    }
}
