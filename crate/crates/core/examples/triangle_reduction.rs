//! Triangle detection as a single match. Prints the encoded line and pattern
//! size, and both verdicts, for a few graphs.

use semre::matcher::match_semre;
use semre::triangle::{brute_force_triangle, encode_instance, encode_instance_binary, UndirectedGraph};

fn main() {
    let mut c5 = UndirectedGraph::new(5);
    for i in 1..=5 {
        c5.add_edge(i, i % 5 + 1).unwrap();
    }
    let mut c5_chord = c5.clone();
    c5_chord.add_edge(1, 3).unwrap();
    for (name, g) in [("K4", UndirectedGraph::complete(4)), ("C5", c5), ("C5+chord", c5_chord)] {
        let unary = encode_instance(&g).unwrap();
        let binary = encode_instance_binary(&g).unwrap();
        let u = match_semre(&unary.pattern, &unary.input, &unary.oracle).unwrap();
        let b = match_semre(&binary.pattern, &binary.input, &binary.oracle).unwrap();
        println!(
            "{name:<9} line {:<16} unary {} ({} calls)  binary {} ({} calls)  brute force {}",
            String::from_utf8_lossy(&unary.input),
            u.matched,
            u.metrics.oracle_calls,
            b.matched,
            b.metrics.oracle_calls,
            brute_force_triangle(&g)
        );
    }
}
