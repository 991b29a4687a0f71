//! Benchmark records for a file, one row per line and engine plus totals.
//!
//!     cargo run --example bench_records -- <input> '<pattern>' [oracles.cfg]

use std::path::PathBuf;

use semre::grep::{run_bench, EngineChoice, RunConfig};

fn main() {
    let mut args = std::env::args().skip(1);
    let (Some(input), Some(pattern)) = (args.next(), args.next()) else {
        eprintln!("usage: bench_records <input> <pattern> [oracles.cfg]");
        std::process::exit(2);
    };
    let cfg = RunConfig {
        pattern,
        input: Some(PathBuf::from(input)),
        oracle_config_path: args.next().map(PathBuf::from),
        engine: EngineChoice::All,
        ..RunConfig::default()
    };
    match run_bench(&cfg) {
        Ok((_, records)) => print!("{records}"),
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    }
}
