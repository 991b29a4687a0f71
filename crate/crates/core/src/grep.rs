//! Line-oriented matching over a text file, in the manner of `grep`.
//!
//! [`Grep`] owns the compiled pattern for every selected engine and one
//! oracle cache per engine. [`run_grep`] and [`run_bench`] wrap it with file
//! handling, exit codes and the benchmark record format.

use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::matcher::{DpMatcher, Engine, MatchError, MatchMetrics, Matcher, NAIVE_MAX_LEN};
use crate::oracle::{CacheStats, CachingOracle, Oracle, OracleConfig, OracleError, QueryRouter};
use crate::syntax::{parse_semre_with, Alphabet, ParseError, SemRe};

/// Which engines a run uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineChoice {
    One(Engine),
    /// Every engine allowed by the line-length limit, cross-checked per line.
    All,
}

impl std::str::FromStr for EngineChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "all" => Ok(EngineChoice::All),
            other => other
                .parse()
                .map(EngineChoice::One)
                .map_err(|_| format!("unknown engine {other:?} (expected snfa, dp, naive or all)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub pattern: String,
    /// Oracle bindings; without a file only query-free patterns can run.
    pub oracle_config_path: Option<PathBuf>,
    /// `None` reads standard input.
    pub input: Option<PathBuf>,
    pub engine: EngineChoice,
    /// Match whole lines instead of wrapping the pattern as `.*r.*`.
    pub whole_line: bool,
    pub max_line_len: usize,
    pub ascii_only: bool,
    pub per_line_timeout: Option<Duration>,
    pub timeout: Option<Duration>,
    pub metrics_out: Option<PathBuf>,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            pattern: String::new(),
            oracle_config_path: None,
            input: None,
            engine: EngineChoice::One(Engine::Snfa),
            whole_line: false,
            max_line_len: 1000,
            ascii_only: true,
            per_line_timeout: None,
            timeout: None,
            metrics_out: None,
            jobs: 1,
        }
    }
}

#[derive(Debug, Error)]
pub enum GrepError {
    #[error("pattern: {0}")]
    Pattern(#[from] ParseError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{context}: {source}")]
    Io { context: String, source: io::Error },
    #[error("line {line}: {source}")]
    Line { line: usize, source: MatchError },
    #[error("line {line}: engines disagree ({detail})")]
    Disagreement { line: usize, detail: String },
    #[error("the naive engine needs --max-line-len of at most {NAIVE_MAX_LEN}, got {0}")]
    NaiveTooLong(usize),
    #[error("run timed out after {0:?}")]
    Timeout(Duration),
}

impl GrepError {
    fn io(context: impl Into<String>) -> impl FnOnce(io::Error) -> GrepError {
        let context = context.into();
        move |source| GrepError::Io { context, source }
    }
}

/// Outcome of one line under one engine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineReport {
    pub engine: Engine,
    /// 1-based position in the input, counting skipped lines.
    pub line_number: usize,
    pub matched: bool,
    pub timed_out: bool,
    pub oracle_calls: u64,
    pub distinct_queries: u64,
    pub submitted_chars: u64,
    pub oracle_time: Duration,
    pub elapsed: Duration,
}

/// Per-engine totals over a run.
#[derive(Clone, Debug, PartialEq)]
pub struct Aggregate {
    pub engine: Engine,
    pub lines: u64,
    pub matched_lines: u64,
    pub oracle_calls: u64,
    pub distinct_queries: u64,
    pub submitted_chars: u64,
    pub oracle_time: Duration,
    pub elapsed: Duration,
    /// Time spent on matched lines only.
    pub matched_elapsed: Duration,
    /// Calls made while compiling the pattern (ε answers for the snfa engine).
    pub setup_calls: u64,
    pub cache: CacheStats,
}

impl Aggregate {
    fn new(engine: Engine) -> Self {
        Aggregate {
            engine,
            lines: 0,
            matched_lines: 0,
            oracle_calls: 0,
            distinct_queries: 0,
            submitted_chars: 0,
            oracle_time: Duration::ZERO,
            elapsed: Duration::ZERO,
            matched_elapsed: Duration::ZERO,
            setup_calls: 0,
            cache: CacheStats::default(),
        }
    }

    fn add(&mut self, r: &LineReport) {
        self.lines += 1;
        self.matched_lines += r.matched as u64;
        self.oracle_calls += r.oracle_calls;
        self.distinct_queries += r.distinct_queries;
        self.submitted_chars += r.submitted_chars;
        self.oracle_time += r.oracle_time;
        self.elapsed += r.elapsed;
        if r.matched {
            self.matched_elapsed += r.elapsed;
        }
    }

    fn per_line(total: f64, lines: u64) -> f64 {
        if lines == 0 {
            0.0
        } else {
            total / lines as f64
        }
    }

    /// Average milliseconds per line.
    pub fn rt_total_ms(&self) -> f64 {
        Self::per_line(self.elapsed.as_secs_f64() * 1e3, self.lines)
    }

    /// Average milliseconds per matched line.
    pub fn rt_matched_ms(&self) -> f64 {
        Self::per_line(self.matched_elapsed.as_secs_f64() * 1e3, self.matched_lines)
    }

    pub fn calls_per_line(&self) -> f64 {
        Self::per_line(self.oracle_calls as f64, self.lines)
    }

    pub fn chars_per_line(&self) -> f64 {
        Self::per_line(self.submitted_chars as f64, self.lines)
    }

    /// Share of matching time spent inside the oracle.
    pub fn oracle_fraction(&self) -> f64 {
        let total = self.elapsed.as_secs_f64();
        if total == 0.0 {
            0.0
        } else {
            (self.oracle_time.as_secs_f64() / total).min(1.0)
        }
    }
}

/// Everything a run produced, apart from the printed lines.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSummary {
    pub lines_read: usize,
    pub skipped_too_long: usize,
    pub skipped_non_ascii: usize,
    /// Line numbers of matched lines, in input order.
    pub matched: Vec<usize>,
    pub timed_out: Vec<usize>,
    pub reports: Vec<LineReport>,
    pub aggregates: Vec<Aggregate>,
}

enum Compiled {
    Snfa(Box<Matcher>),
    Dp(DpMatcher),
    Naive(SemRe),
}

struct Lane {
    engine: Engine,
    compiled: Compiled,
    cache: CachingOracle<Arc<dyn Oracle>>,
    setup_calls: u64,
}

impl Lane {
    fn run(&self, w: &[u8], deadline: Option<Instant>) -> Result<MatchMetrics, MatchError> {
        match &self.compiled {
            Compiled::Snfa(m) => m.is_match_until(w, &self.cache, deadline).map(|o| o.metrics),
            Compiled::Dp(m) => m.is_match_until(w, &self.cache, deadline).map(|o| o.metrics),
            Compiled::Naive(r) => {
                let started = Instant::now();
                let matched = crate::matcher::match_naive(r, w, &self.cache)?;
                Ok(MatchMetrics {
                    matched,
                    wall_time: started.elapsed(),
                    ..MatchMetrics::default()
                })
            }
        }
    }
}

/// Options of a [`Grep`] that do not concern input and output.
#[derive(Clone, Copy, Debug)]
pub struct GrepOptions {
    pub engine: EngineChoice,
    pub whole_line: bool,
    pub max_line_len: usize,
    pub ascii_only: bool,
    pub per_line_timeout: Option<Duration>,
    pub timeout: Option<Duration>,
    pub jobs: usize,
}

impl GrepOptions {
    pub fn from_config(cfg: &RunConfig) -> Self {
        GrepOptions {
            engine: cfg.engine,
            whole_line: cfg.whole_line,
            max_line_len: cfg.max_line_len,
            ascii_only: cfg.ascii_only,
            per_line_timeout: cfg.per_line_timeout,
            timeout: cfg.timeout,
            jobs: cfg.jobs,
        }
    }
}

impl Default for GrepOptions {
    fn default() -> Self {
        GrepOptions::from_config(&RunConfig::default())
    }
}

/// A compiled search: pattern, engines and their caches.
pub struct Grep {
    pattern: SemRe,
    opts: GrepOptions,
    lanes: Vec<Lane>,
}

const BATCH: usize = 1024;

impl Grep {
    /// Parses `pattern`, pads it unless matching whole lines, checks that
    /// every query is bound, and compiles it for the selected engines.
    pub fn new(pattern: &str, router: QueryRouter, opts: GrepOptions) -> Result<Self, GrepError> {
        let alphabet = if opts.ascii_only {
            Alphabet::Ascii
        } else {
            Alphabet::Bytes
        };
        let parsed = parse_semre_with(pattern, alphabet)?;
        let pattern = if opts.whole_line {
            parsed
        } else {
            let pad = SemRe::star(SemRe::any(alphabet));
            SemRe::cat_all([pad.clone(), parsed, pad])
        };
        router.check_bound(pattern.queries().iter())?;
        Self::with_oracle(pattern, Arc::new(router), opts)
    }

    /// Compiles an already built pattern against any oracle; no padding.
    pub fn with_oracle(pattern: SemRe, oracle: Arc<dyn Oracle>, opts: GrepOptions) -> Result<Self, GrepError> {
        let engines: Vec<Engine> = match opts.engine {
            EngineChoice::One(Engine::Naive) if opts.max_line_len > NAIVE_MAX_LEN => {
                return Err(GrepError::NaiveTooLong(opts.max_line_len))
            }
            EngineChoice::One(e) => vec![e],
            EngineChoice::All if opts.max_line_len <= NAIVE_MAX_LEN => Engine::ALL.to_vec(),
            EngineChoice::All => vec![Engine::Snfa, Engine::Dp],
        };
        let mut lanes = Vec::new();
        for engine in engines {
            let cache = CachingOracle::new(oracle.clone());
            let (compiled, setup_calls) = match engine {
                Engine::Snfa => {
                    let m = Matcher::new(&pattern, &cache)?;
                    let n = m.setup_calls() as u64;
                    (Compiled::Snfa(Box::new(m)), n)
                }
                Engine::Dp => (Compiled::Dp(DpMatcher::new(&pattern)), 0),
                Engine::Naive => (Compiled::Naive(pattern.clone()), 0),
            };
            lanes.push(Lane {
                engine,
                compiled,
                cache,
                setup_calls,
            });
        }
        Ok(Grep { pattern, opts, lanes })
    }

    /// The pattern actually matched against each line.
    pub fn pattern(&self) -> &SemRe {
        &self.pattern
    }

    pub fn engines(&self) -> Vec<Engine> {
        self.lanes.iter().map(|l| l.engine).collect()
    }

    /// The query-graph matcher, when the snfa engine is selected.
    pub fn matcher(&self) -> Option<&Matcher> {
        self.lanes.iter().find_map(|l| match &l.compiled {
            Compiled::Snfa(m) => Some(&**m),
            _ => None,
        })
    }

    /// Strips the line terminator and applies the preprocessing filters.
    pub fn accepts_line(&self, line: &[u8]) -> Result<(), Skip> {
        if line.len() > self.opts.max_line_len {
            Err(Skip::TooLong)
        } else if self.opts.ascii_only && !line.is_ascii() {
            Err(Skip::NonAscii)
        } else {
            Ok(())
        }
    }

    fn match_line(
        &self,
        number: usize,
        line: &[u8],
        run_deadline: Option<Instant>,
    ) -> Result<Vec<LineReport>, GrepError> {
        let mut reports = Vec::with_capacity(self.lanes.len());
        for lane in &self.lanes {
            let line_deadline = self.opts.per_line_timeout.map(|t| Instant::now() + t);
            let deadline = match (line_deadline, run_deadline) {
                (Some(a), Some(b)) => Some(a.min(b)),
                (a, b) => a.or(b),
            };
            let started = Instant::now();
            let report = match lane.run(line, deadline) {
                Ok(m) => LineReport {
                    engine: lane.engine,
                    line_number: number,
                    matched: m.matched,
                    timed_out: false,
                    oracle_calls: m.oracle_calls,
                    distinct_queries: m.distinct_queries,
                    submitted_chars: m.submitted_chars,
                    oracle_time: m.oracle_time,
                    elapsed: m.wall_time,
                },
                Err(MatchError::Timeout) if run_deadline.is_none_or(|d| Instant::now() < d) => LineReport {
                    engine: lane.engine,
                    line_number: number,
                    matched: false,
                    timed_out: true,
                    oracle_calls: 0,
                    distinct_queries: 0,
                    submitted_chars: 0,
                    oracle_time: Duration::ZERO,
                    elapsed: started.elapsed(),
                },
                Err(MatchError::Timeout) => return Err(GrepError::Timeout(self.opts.timeout.unwrap_or_default())),
                Err(source) => return Err(GrepError::Line { line: number, source }),
            };
            reports.push(report);
        }
        let settled: Vec<&LineReport> = reports.iter().filter(|r| !r.timed_out).collect();
        if settled.windows(2).any(|p| p[0].matched != p[1].matched) {
            let detail = settled
                .iter()
                .map(|r| format!("{} {}", r.engine, r.matched))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(GrepError::Disagreement { line: number, detail });
        }
        Ok(reports)
    }

    /// Matches every line of `input`, writing matched lines verbatim (without
    /// a trailing CR) to `out` in input order.
    pub fn run(&self, input: impl BufRead, out: &mut dyn Write) -> Result<RunSummary, GrepError> {
        let run_deadline = self.opts.timeout.map(|t| Instant::now() + t);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.opts.jobs.max(1))
            .build()
            .map_err(|e| GrepError::Io {
                context: "worker pool".into(),
                source: io::Error::other(e),
            })?;
        let mut summary = RunSummary {
            lines_read: 0,
            skipped_too_long: 0,
            skipped_non_ascii: 0,
            matched: Vec::new(),
            timed_out: Vec::new(),
            reports: Vec::new(),
            aggregates: self.lanes.iter().map(|l| Aggregate::new(l.engine)).collect(),
        };
        let mut lines = input.split(b'\n');
        loop {
            let mut batch: Vec<(usize, Vec<u8>)> = Vec::with_capacity(BATCH);
            let mut eof = false;
            while batch.len() < BATCH {
                let Some(raw) = lines.next() else {
                    eof = true;
                    break;
                };
                let mut line = raw.map_err(GrepError::io("reading input"))?;
                if line.last() == Some(&b'\r') {
                    line.pop();
                }
                summary.lines_read += 1;
                match self.accepts_line(&line) {
                    Ok(()) => batch.push((summary.lines_read, line)),
                    Err(Skip::TooLong) => summary.skipped_too_long += 1,
                    Err(Skip::NonAscii) => summary.skipped_non_ascii += 1,
                }
            }
            let results: Vec<Result<Vec<LineReport>, GrepError>> = if self.opts.jobs > 1 {
                pool.install(|| {
                    batch
                        .par_iter()
                        .map(|(k, line)| self.match_line(*k, line, run_deadline))
                        .collect()
                })
            } else {
                batch
                    .iter()
                    .map(|(k, line)| self.match_line(*k, line, run_deadline))
                    .collect()
            };
            for ((k, line), result) in batch.iter().zip(results) {
                let reports = result?;
                if reports.iter().any(|r| r.timed_out) {
                    summary.timed_out.push(*k);
                }
                if reports.iter().any(|r| r.matched) {
                    summary.matched.push(*k);
                    out.write_all(line)
                        .and_then(|_| out.write_all(b"\n"))
                        .map_err(GrepError::io("writing output"))?;
                }
                for (agg, r) in summary.aggregates.iter_mut().zip(&reports) {
                    agg.add(r);
                }
                summary.reports.extend(reports);
            }
            out.flush().map_err(GrepError::io("writing output"))?;
            if eof {
                break;
            }
        }
        for (agg, lane) in summary.aggregates.iter_mut().zip(&self.lanes) {
            agg.setup_calls = lane.setup_calls;
            agg.cache = lane.cache.stats();
        }
        Ok(summary)
    }
}

/// Why a line was left out before matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Skip {
    TooLong,
    NonAscii,
}

/// Header lines of the benchmark file. Every record starts with its kind.
pub const BENCH_LINE_HEADER: &str =
    "# line\tengine\tline_number\tmatched\ttimed_out\toracle_calls\tdistinct_queries\tsubmitted_chars\toracle_us\telapsed_us";
pub const BENCH_AGGREGATE_HEADER: &str = "# aggregate\tengine\tlines\tmatched_lines\trt_total_ms\trt_matched_ms\tcalls_per_line\toracle_fraction\tchars_per_line\toracle_calls\tdistinct_queries\tsubmitted_chars\tsetup_calls\tforwarded_calls";

pub fn write_bench(summary: &RunSummary, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{BENCH_LINE_HEADER}")?;
    writeln!(out, "{BENCH_AGGREGATE_HEADER}")?;
    for r in &summary.reports {
        writeln!(
            out,
            "line\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            r.engine,
            r.line_number,
            r.matched as u8,
            r.timed_out as u8,
            r.oracle_calls,
            r.distinct_queries,
            r.submitted_chars,
            r.oracle_time.as_micros(),
            r.elapsed.as_micros()
        )?;
    }
    for a in &summary.aggregates {
        writeln!(
            out,
            "aggregate\t{}\t{}\t{}\t{:.4}\t{:.4}\t{:.3}\t{:.4}\t{:.3}\t{}\t{}\t{}\t{}\t{}",
            a.engine,
            a.lines,
            a.matched_lines,
            a.rt_total_ms(),
            a.rt_matched_ms(),
            a.calls_per_line(),
            a.oracle_fraction(),
            a.chars_per_line(),
            a.oracle_calls,
            a.distinct_queries,
            a.submitted_chars,
            a.setup_calls,
            a.cache.calls_forwarded
        )?;
    }
    Ok(())
}

/// One aggregate record read back from a benchmark file.
#[derive(Clone, Debug, PartialEq)]
pub struct AggregateRecord {
    pub engine: String,
    pub lines: u64,
    pub matched_lines: u64,
    pub oracle_calls: u64,
}

/// Reads the aggregate records of a benchmark file.
pub fn read_bench_aggregates(text: &str) -> Vec<AggregateRecord> {
    text.lines()
        .filter_map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            if f.first() != Some(&"aggregate") || f.len() < 10 {
                return None;
            }
            Some(AggregateRecord {
                engine: f[1].to_string(),
                lines: f[2].parse().ok()?,
                matched_lines: f[3].parse().ok()?,
                oracle_calls: f[9].parse().ok()?,
            })
        })
        .collect()
}

fn build_router(cfg: &RunConfig) -> Result<QueryRouter, GrepError> {
    match &cfg.oracle_config_path {
        Some(path) => Ok(OracleConfig::load(path)?.build()?),
        None => Ok(QueryRouter::new()),
    }
}

fn open_input(cfg: &RunConfig) -> Result<Box<dyn BufRead>, GrepError> {
    match &cfg.input {
        Some(path) => {
            let f = File::open(path).map_err(GrepError::io(path.display().to_string()))?;
            Ok(Box::new(BufReader::new(f)))
        }
        None => Ok(Box::new(BufReader::new(io::stdin()))),
    }
}

/// Runs a search and returns its summary; matched lines go to `out`.
pub fn run_search(cfg: &RunConfig, out: &mut dyn Write) -> Result<RunSummary, GrepError> {
    let grep = Grep::new(&cfg.pattern, build_router(cfg)?, GrepOptions::from_config(cfg))?;
    let summary = grep.run(open_input(cfg)?, out)?;
    if let Some(path) = &cfg.metrics_out {
        let ctx = path.display().to_string();
        let mut f = BufWriter::new(File::create(path).map_err(GrepError::io(ctx.clone()))?);
        write_bench(&summary, &mut f)
            .and_then(|_| f.flush())
            .map_err(GrepError::io(ctx))?;
    }
    Ok(summary)
}

/// Exit status in the `grep` convention: 0 if some line matched, 1 if none,
/// 2 on error (reported on `err`).
pub fn run_grep(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_search(cfg, out) {
        Ok(s) if s.matched.is_empty() => 1,
        Ok(_) => 0,
        Err(e) => {
            let _ = writeln!(err, "semre: {e}");
            2
        }
    }
}

/// Runs the search with benchmark output enabled and returns the records.
/// Matched lines are discarded.
pub fn run_bench(cfg: &RunConfig) -> Result<(RunSummary, String), GrepError> {
    let grep = Grep::new(&cfg.pattern, build_router(cfg)?, GrepOptions::from_config(cfg))?;
    let summary = grep.run(open_input(cfg)?, &mut io::sink())?;
    let mut buf = Vec::new();
    write_bench(&summary, &mut buf).map_err(GrepError::io("formatting records"))?;
    if let Some(path) = &cfg.metrics_out {
        std::fs::write(path, &buf).map_err(GrepError::io(path.display().to_string()))?;
    }
    Ok((summary, String::from_utf8(buf).expect("records are ASCII")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{Builtin, WordSetOracle};

    fn grep(pattern: &str, router: QueryRouter, opts: GrepOptions) -> (RunSummary, String, Grep) {
        let g = Grep::new(pattern, router, opts).unwrap();
        (g.run(&b""[..], &mut Vec::new()).unwrap(), String::new(), g)
    }

    fn run(g: &Grep, input: &str) -> (RunSummary, String) {
        let mut out = Vec::new();
        let s = g.run(input.as_bytes(), &mut out).unwrap();
        (s, String::from_utf8(out).unwrap())
    }

    #[test]
    fn word_set_substring() {
        let router = QueryRouter::new().with("sports", WordSetOracle::new(["Lionel Messi"]));
        let g = Grep::new("<sports>", router, GrepOptions::default()).unwrap();
        let (s, out) = run(&g, "hello\nLionel Messi\nnothing here\n");
        assert_eq!(out, "Lionel Messi\n");
        assert_eq!(s.matched, vec![2]);
    }

    #[test]
    fn whole_line_literal() {
        let opts = GrepOptions {
            whole_line: true,
            ..GrepOptions::default()
        };
        let g = Grep::new("a", QueryRouter::new(), opts).unwrap();
        assert_eq!(run(&g, "a\nb\naa\n").1, "a\n");
        let padded = Grep::new("a", QueryRouter::new(), GrepOptions::default()).unwrap();
        assert_eq!(run(&padded, "a\nb\naa\n").1, "a\naa\n");
    }

    #[test]
    fn filters_long_and_non_ascii_lines() {
        let g = Grep::new("a", QueryRouter::new(), GrepOptions::default()).unwrap();
        let long = "a".repeat(1001);
        let ok = "a".repeat(1000);
        let input = format!("{long}\n{ok}\ncaf\u{e9} a\r\na\r\n");
        let (s, out) = run(&g, &input);
        assert_eq!(out, format!("{ok}\na\n"));
        assert_eq!((s.skipped_too_long, s.skipped_non_ascii, s.lines_read), (1, 1, 4));
        assert_eq!(s.matched, vec![2, 4]);
    }

    #[test]
    fn unbound_query_is_an_error() {
        let err = Grep::new("<nope>", QueryRouter::new(), GrepOptions::default())
            .err()
            .unwrap();
        assert!(matches!(err, GrepError::Oracle(OracleError::Unbound(_))));
    }

    #[test]
    fn naive_needs_short_lines() {
        let opts = GrepOptions {
            engine: EngineChoice::One(Engine::Naive),
            ..GrepOptions::default()
        };
        assert!(matches!(
            Grep::new("a", QueryRouter::new(), opts).err().unwrap(),
            GrepError::NaiveTooLong(1000)
        ));
        let short = GrepOptions {
            max_line_len: 8,
            ..opts
        };
        let g = Grep::new("b<t>", QueryRouter::new().with("t", Builtin::AlwaysTrue), short).unwrap();
        assert_eq!(run(&g, "abc\nxyz\n").1, "abc\n");
    }

    #[test]
    fn engines_agree_and_aggregates_sum() {
        let router = QueryRouter::new().with("pal", Builtin::Palindrome);
        let opts = GrepOptions {
            engine: EngineChoice::All,
            whole_line: true,
            ..GrepOptions::default()
        };
        let g = Grep::new(".*a<pal>", router, opts).unwrap();
        assert_eq!(g.engines(), vec![Engine::Snfa, Engine::Dp]);
        let (s, out) = run(&g, "babccb\nbacbcb\nxyz\n\nabcba\n");
        assert_eq!(out, "babccb\nabcba\n");
        for agg in &s.aggregates {
            let mine: Vec<&LineReport> = s.reports.iter().filter(|r| r.engine == agg.engine).collect();
            assert_eq!(agg.lines as usize, mine.len());
            assert_eq!(agg.oracle_calls, mine.iter().map(|r| r.oracle_calls).sum::<u64>());
            assert_eq!(agg.submitted_chars, mine.iter().map(|r| r.submitted_chars).sum::<u64>());
            assert_eq!(agg.matched_lines, 2);
        }
    }

    #[test]
    fn parallel_output_keeps_input_order() {
        let router = QueryRouter::new().with("pal", Builtin::Palindrome);
        let input: String = (0..3000)
            .map(|i| {
                if i % 7 == 0 {
                    format!("aba{i}\n")
                } else {
                    format!("x{i}\n")
                }
            })
            .collect();
        let serial = Grep::new("<pal>", router.clone(), GrepOptions::default()).unwrap();
        let parallel = Grep::new(
            "<pal>",
            router,
            GrepOptions {
                jobs: 4,
                ..GrepOptions::default()
            },
        )
        .unwrap();
        let a = run(&serial, &input);
        let b = run(&parallel, &input);
        assert_eq!(a.1, b.1);
        assert_eq!(a.0.matched, b.0.matched);
        assert!(!a.0.matched.is_empty());
    }

    #[test]
    fn empty_input_gives_empty_aggregate() {
        let (s, _, _) = grep("a", QueryRouter::new(), GrepOptions::default());
        assert_eq!(s.lines_read, 0);
        assert_eq!(s.aggregates[0].lines, 0);
        assert_eq!(s.aggregates[0].rt_total_ms(), 0.0);
        let mut buf = Vec::new();
        write_bench(&s, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let aggs = read_bench_aggregates(&text);
        assert_eq!(aggs.len(), 1);
        assert_eq!((aggs[0].lines, aggs[0].oracle_calls), (0, 0));
    }

    #[test]
    fn engine_choice_parses() {
        assert_eq!("all".parse::<EngineChoice>().unwrap(), EngineChoice::All);
        assert_eq!("dp".parse::<EngineChoice>().unwrap(), EngineChoice::One(Engine::Dp));
        assert!("fast".parse::<EngineChoice>().is_err());
    }
}
