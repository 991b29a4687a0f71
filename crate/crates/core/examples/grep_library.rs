//! The grep front end as a library: compile once, stream lines, collect
//! per-engine metrics.

use semre::grep::{EngineChoice, Grep, GrepOptions};
use semre::oracle::{QueryRouter, WordSetOracle};

fn main() {
    let text = "\
Lionel Messi scored twice
the meeting ran late
Serena Williams and Ada Lovelace
Ada Lovelace wrote the first program
";
    let router = QueryRouter::new().with("sports", WordSetOracle::new(["Lionel Messi", "Serena Williams"]));
    let opts = GrepOptions {
        engine: EngineChoice::All,
        ..GrepOptions::default()
    };
    let grep = Grep::new("([A-Z][a-z]+ [A-Z][a-z]+)&<sports>", router, opts).unwrap();
    let mut out = Vec::new();
    let summary = grep.run(text.as_bytes(), &mut out).unwrap();
    print!("{}", String::from_utf8(out).unwrap());
    for a in &summary.aggregates {
        println!(
            "{}: {} lines, {} matched, {:.2} oracle calls per line",
            a.engine,
            a.lines,
            a.matched_lines,
            a.calls_per_line()
        );
    }
}
