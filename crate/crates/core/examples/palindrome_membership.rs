//! Membership with a builtin oracle, and what the engine asked it.

use semre::matcher::match_semre;
use semre::oracle::Builtin;
use semre::syntax::parse_semre;

fn main() {
    // some `a` followed by a palindromic suffix
    let r = parse_semre(".*a<pal>").unwrap();
    for w in ["babccb", "bacbcb", "a", "xyz"] {
        let out = match_semre(&r, w.as_bytes(), &Builtin::Palindrome).unwrap();
        let m = out.metrics;
        println!(
            "{w:<8} {:<5}  oracle calls {}, distinct windows {}, characters sent {}",
            out.matched, m.oracle_calls, m.distinct_queries, m.submitted_chars
        );
    }
}
