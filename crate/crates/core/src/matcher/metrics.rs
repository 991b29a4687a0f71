use std::time::{Duration, Instant};

use crate::oracle::{Oracle, OracleError};
use crate::syntax::Query;

/// Counters for one match of one line.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MatchMetrics {
    /// Calls issued by the engine, before any cache in front of the oracle.
    pub oracle_calls: u64,
    /// Distinct (query, start, end) windows among those calls.
    pub distinct_queries: u64,
    /// Total length of all submitted windows.
    pub submitted_chars: u64,
    pub oracle_time: Duration,
    pub wall_time: Duration,
    pub matched: bool,
}

impl MatchMetrics {
    pub fn add(&mut self, other: &MatchMetrics) {
        self.oracle_calls += other.oracle_calls;
        self.distinct_queries += other.distinct_queries;
        self.submitted_chars += other.submitted_chars;
        self.oracle_time += other.oracle_time;
        self.wall_time += other.wall_time;
    }
}

/// Forwards questions to an oracle while keeping the counters of
/// [`MatchMetrics`].
pub(crate) struct Meter<'o> {
    oracle: &'o dyn Oracle,
    /// `answers[q][i][j]`: 0 unknown, 1 false, 2 true for window `[i, j)`.
    /// Rows are allocated on first use so lines that never reach the oracle
    /// cost nothing.
    answers: Vec<Vec<Vec<u8>>>,
    distinct: u64,
    calls: u64,
    chars: u64,
    time: Duration,
}

impl<'o> Meter<'o> {
    pub fn new(oracle: &'o dyn Oracle) -> Self {
        Meter {
            oracle,
            answers: Vec::new(),
            distinct: 0,
            calls: 0,
            chars: 0,
            time: Duration::ZERO,
        }
    }

    /// Always forwards; `qid` only identifies the query for distinct counting.
    pub fn ask(&mut self, query: &Query, qid: usize, w: &[u8], i: usize, j: usize) -> Result<bool, OracleError> {
        let t = Instant::now();
        let answer = self.oracle.evaluate(query, &w[i..j]);
        self.time += t.elapsed();
        let answer = answer?;
        self.calls += 1;
        self.chars += (j - i) as u64;
        let slot = self.slot(qid, w.len(), i, j);
        if *slot == 0 {
            *slot = 1 + answer as u8;
            self.distinct += 1;
        }
        Ok(answer)
    }

    fn slot(&mut self, qid: usize, n: usize, i: usize, j: usize) -> &mut u8 {
        if self.answers.len() <= qid {
            self.answers.resize_with(qid + 1, Vec::new);
        }
        let rows = &mut self.answers[qid];
        if rows.is_empty() {
            rows.resize_with(n + 1, Vec::new);
        }
        let row = &mut rows[i];
        if row.is_empty() {
            row.resize(n + 1, 0);
        }
        &mut row[j]
    }

    /// Forwards only windows not asked before during this match.
    pub fn ask_once(&mut self, query: &Query, qid: usize, w: &[u8], i: usize, j: usize) -> Result<bool, OracleError> {
        match *self.slot(qid, w.len(), i, j) {
            0 => self.ask(query, qid, w, i, j),
            a => Ok(a == 2),
        }
    }

    pub fn finish(self, matched: bool, started: Instant) -> MatchMetrics {
        MatchMetrics {
            oracle_calls: self.calls,
            distinct_queries: self.distinct,
            submitted_chars: self.chars,
            oracle_time: self.time,
            wall_time: started.elapsed(),
            matched,
        }
    }
}
