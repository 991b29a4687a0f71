//! Oracle calls and time as the line grows, for a pattern with one
//! refinement. Both should roughly quadruple per doubling. The table oracle
//! answers in constant time; a cache in front of it would hash every window
//! and add a factor of the line length.
//!
//!     cargo run --release --example scaling

use std::time::Instant;

use semre::matcher::Matcher;
use semre::oracle::TableOracle;
use semre::syntax::{parse_semre, Query};

fn main() {
    let r = parse_semre(".*<q>.*").unwrap();
    let q = Query::new("q");
    let oracle = TableOracle::new(false).with(&q, "never", true);
    let m = Matcher::new(&r, &oracle).unwrap();
    let mut prev: Option<(u64, f64)> = None;
    println!(
        "{:>6} {:>10} {:>10} {:>7} {:>7}",
        "|w|", "calls", "ms", "calls×", "time×"
    );
    for n in [128usize, 256, 512, 1024, 2048] {
        let w: Vec<u8> = (0..n).map(|i| if i < n / 2 { b'0' } else { b'1' }).collect();
        let t = Instant::now();
        let out = m.is_match(&w, &oracle).unwrap();
        let ms = t.elapsed().as_secs_f64() * 1e3;
        let calls = out.metrics.distinct_queries;
        let (rc, rt) = prev.map_or((f64::NAN, f64::NAN), |(c, t)| (calls as f64 / c as f64, ms / t));
        println!("{n:>6} {calls:>10} {ms:>10.2} {rc:>7.2} {rt:>7.2}");
        prev = Some((calls, ms));
    }
}
