//! Compiling a pattern to an automaton with query brackets, then checking the
//! bracket structure. Pass `--dot` for Graphviz output.
//!
//!     cargo run --example snfa_construction -- '.*a(.*b<q2>)&<q1>' --dot | dot -Tsvg

use semre::snfa::{build_snfa, check_well_parenthesized, normalize, query_context, to_dot, StateLabel};
use semre::syntax::{parse_semre, Alphabet};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let pattern = args
        .iter()
        .find(|a| !a.starts_with("--"))
        .map_or(".*a(.*b<q2>)&<q1>", String::as_str);
    let r = parse_semre(pattern).expect("valid pattern");
    let raw = build_snfa(&r);
    let m = normalize(raw.clone());
    if args.iter().any(|a| a == "--dot") {
        print!("{}", to_dot(&m, Alphabet::Ascii));
        return;
    }
    println!(
        "pattern size {}: raw automaton has {} states, {} transitions",
        r.size(),
        raw.num_states(),
        raw.num_transitions()
    );
    println!(
        "normalized: {} states, {} transitions, start {} end {}",
        m.num_states(),
        m.num_transitions(),
        m.start(),
        m.end()
    );
    println!("well parenthesized: {}", check_well_parenthesized(&m));
    for s in m.states() {
        if m.label(s) != StateLabel::Blank {
            let ctx = query_context(&m, s).expect("reachable");
            println!(
                "  state {s:>3} {:<12} context {}",
                m.describe_label(m.label(s)),
                ctx.display(&m)
            );
        }
    }
}
