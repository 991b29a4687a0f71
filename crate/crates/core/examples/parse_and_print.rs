//! Parsing concrete syntax, inspecting the tree, and printing it back.
//!
//!     cargo run --example parse_and_print -- '(a|b)*&<q>c{1,2}'

use semre::syntax::{parse_semre, to_pattern, Alphabet};

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "(.*a(.*b<q2>)&<q1>)".to_string());
    let r = match parse_semre(&text) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    println!("input       {text}");
    println!("printed     {}", to_pattern(&r, Alphabet::Ascii));
    println!("size        {}", r.size());
    println!(
        "queries     {:?}",
        r.queries().iter().map(|q| q.name().to_string()).collect::<Vec<_>>()
    );
    println!(
        "refinements {} (depth {}, nested: {})",
        r.refine_count(),
        r.refine_depth(),
        r.is_nested()
    );
    println!("skeleton    {}", to_pattern(&r.skeleton(), Alphabet::Ascii));

    let again = parse_semre(&to_pattern(&r, Alphabet::Ascii)).expect("printed form parses");
    assert_eq!(again, r, "print/parse round trip");
}
