//! The query-graph engine, the dynamic-programming baseline and the naive
//! recursion on the same inputs: same verdicts, different oracle traffic.

use semre::matcher::{match_dp, match_naive, Matcher};
use semre::oracle::{CachingOracle, FnOracle};
use semre::syntax::{parse_semre, Query};

fn main() {
    // windows whose digit sum is divisible by 3
    let div3 = FnOracle(|_: &Query, s: &[u8]| s.iter().map(|c| (c - b'0') as u32).sum::<u32>() % 3 == 0);
    let r = parse_semre(".*1([0-9]+)&<div3>1.*").unwrap();
    let m = Matcher::new(&r, &div3).unwrap();
    println!("{:<16} {:>6} {:>10} {:>10}", "line", "match", "snfa calls", "dp calls");
    for w in ["1221", "1201", "9999999", "31415926535", "1000000000001"] {
        let w = w.as_bytes();
        let lazy = m.is_match(w, &div3).unwrap();
        let dp = match_dp(&r, w, &div3).unwrap();
        assert_eq!(lazy.matched, dp.matched);
        if w.len() <= semre::matcher::NAIVE_MAX_LEN {
            assert_eq!(match_naive(&r, w, &div3).unwrap(), lazy.matched);
        }
        println!(
            "{:<16} {:>6} {:>10} {:>10}",
            String::from_utf8_lossy(w),
            lazy.matched,
            lazy.metrics.oracle_calls,
            dp.metrics.oracle_calls
        );
    }
    let cached = CachingOracle::new(&div3);
    let m = Matcher::new(&r, &cached).unwrap();
    for _ in 0..3 {
        m.is_match(b"31415926535", &cached).unwrap();
    }
    println!("three runs through a cache: {:?}", cached.stats());
}
