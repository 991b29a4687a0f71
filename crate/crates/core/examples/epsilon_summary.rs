//! The ε-summary: which states reach which others reading nothing, given
//! how each query answers the empty string.

use semre::snfa::{build_snfa, compute_eps, normalize, EpsilonAnswers};
use semre::syntax::parse_semre;

fn main() {
    let r = parse_semre("(a?)&<q>b*").unwrap();
    let m = normalize(build_snfa(&r));
    for answer in [false, true] {
        let eps = compute_eps(&m, &EpsilonAnswers::uniform(&m, answer));
        println!("with <q>(\"\") = {answer}: {} pairs", eps.len());
        let reaches_end = eps.contains(m.start(), m.end());
        println!("  start reaches end on the empty string: {reaches_end}");
    }
}
