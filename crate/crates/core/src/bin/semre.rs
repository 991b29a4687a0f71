use std::io::{self, BufRead, BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use semre::grep::{run_grep, EngineChoice, Grep, GrepOptions, RunConfig};
use semre::matcher::{match_dp, Matcher};
use semre::oracle::{OracleConfig, QueryRouter};
use semre::syntax::Alphabet;
use semre::triangle::{
    brute_force_triangle, encode_instance, encode_instance_binary, TriangleError, TriangleInstance, UndirectedGraph,
};

#[derive(Parser)]
#[command(
    name = "semre",
    version,
    about = "Match regular expressions refined by oracle queries"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the input lines that match a pattern.
    Grep(GrepArgs),
    /// Decide whether a graph has a triangle, by reduction and by brute force.
    Triangle(TriangleArgs),
}

#[derive(clap::Args)]
struct GrepArgs {
    /// Pattern to match.
    #[arg(short = 'e', long = "pattern")]
    pattern: String,
    /// Oracle configuration binding query names to backends.
    #[arg(short = 'O', long = "oracles")]
    oracles: Option<PathBuf>,
    /// snfa, dp, naive, or all (cross-checks every engine).
    #[arg(long, default_value = "snfa")]
    engine: EngineChoice,
    /// Match whole lines instead of substrings.
    #[arg(short = 'x', long = "whole-line")]
    whole_line: bool,
    /// Skip lines longer than this many bytes.
    #[arg(long, default_value_t = 1000)]
    max_line_len: usize,
    /// Skip lines containing non-ASCII bytes (default).
    #[arg(long, overrides_with = "no_ascii_only")]
    ascii_only: bool,
    /// Keep non-ASCII lines; `.` then ranges over all bytes.
    #[arg(long, overrides_with = "ascii_only")]
    no_ascii_only: bool,
    /// Write per-line and aggregate benchmark records to this file.
    #[arg(long, value_name = "OUT")]
    bench: Option<PathBuf>,
    /// Print the compiled automaton in DOT format and exit.
    #[arg(long)]
    dump_snfa: bool,
    /// Print the query graph of the first eligible input line in DOT format and exit.
    #[arg(long)]
    dump_qg: bool,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Abort the whole run after this many seconds.
    #[arg(long, value_name = "SECS")]
    timeout: Option<f64>,
    /// Give up on a single line after this many seconds (the line does not match).
    #[arg(long, value_name = "SECS")]
    line_timeout: Option<f64>,
    /// Input file; standard input when absent.
    input: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum EncodingArg {
    Unary,
    Binary,
    Both,
}

#[derive(clap::Args)]
struct TriangleArgs {
    /// Edge list: one `u v` pair per line, optional `n <count>` line.
    edges: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    encoding: EncodingArg,
    /// Use the dp engine instead of the query-graph engine.
    #[arg(long)]
    dp: bool,
}

fn seconds(s: Option<f64>) -> Result<Option<Duration>, String> {
    s.map(|v| Duration::try_from_secs_f64(v).map_err(|e| format!("bad duration {v}: {e}")))
        .transpose()
}

fn grep(args: GrepArgs) -> Result<i32, String> {
    let cfg = RunConfig {
        pattern: args.pattern,
        oracle_config_path: args.oracles,
        input: args.input,
        engine: args.engine,
        whole_line: args.whole_line,
        max_line_len: args.max_line_len,
        ascii_only: !args.no_ascii_only,
        per_line_timeout: seconds(args.line_timeout)?,
        timeout: seconds(args.timeout)?,
        metrics_out: args.bench,
        jobs: args.jobs,
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    if args.dump_snfa || args.dump_qg {
        return dump(&cfg, args.dump_qg, &mut out).map(|_| 0);
    }
    Ok(run_grep(&cfg, &mut out, &mut io::stderr()))
}

fn dump(cfg: &RunConfig, graph: bool, out: &mut dyn Write) -> Result<(), String> {
    let router = match &cfg.oracle_config_path {
        Some(p) => OracleConfig::load(p)
            .and_then(|c| c.build())
            .map_err(|e| e.to_string())?,
        None => QueryRouter::new(),
    };
    let opts = GrepOptions {
        engine: EngineChoice::One(semre::matcher::Engine::Snfa),
        ..GrepOptions::from_config(cfg)
    };
    let g = Grep::new(&cfg.pattern, router, opts).map_err(|e| e.to_string())?;
    let m = g.matcher().expect("snfa engine selected");
    let text = if !graph {
        let alphabet = if cfg.ascii_only {
            Alphabet::Ascii
        } else {
            Alphabet::Bytes
        };
        semre::snfa::to_dot(m.snfa(), alphabet)
    } else {
        let input: Box<dyn BufRead> = match &cfg.input {
            Some(p) => Box::new(BufReader::new(
                std::fs::File::open(p).map_err(|e| format!("{}: {e}", p.display()))?,
            )),
            None => Box::new(BufReader::new(io::stdin())),
        };
        let mut line = None;
        for raw in input.split(b'\n') {
            let mut l = raw.map_err(|e| e.to_string())?;
            if l.last() == Some(&b'\r') {
                l.pop();
            }
            if g.accepts_line(&l).is_ok() {
                line = Some(l);
                break;
            }
        }
        let line = line.ok_or("no eligible input line")?;
        semre::query_graph::to_dot(&m.query_graph(&line), 20_000)
            .ok_or("query graph too large to draw (over 20000 reachable vertices)")?
    };
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())
}

type Encoder = fn(&UndirectedGraph) -> Result<TriangleInstance, TriangleError>;

fn triangle(args: TriangleArgs) -> Result<i32, String> {
    let text = std::fs::read_to_string(&args.edges).map_err(|e| format!("{}: {e}", args.edges.display()))?;
    let g = UndirectedGraph::parse_edge_list(&text).map_err(|e| e.to_string())?;
    let verdict = |b: bool| if b { "triangle" } else { "no triangle" };
    let expected = brute_force_triangle(&g);
    let mut encoders: Vec<(&str, Encoder)> = Vec::new();
    if matches!(args.encoding, EncodingArg::Unary | EncodingArg::Both) {
        encoders.push(("unary", encode_instance));
    }
    if matches!(args.encoding, EncodingArg::Binary | EncodingArg::Both) {
        encoders.push(("binary", encode_instance_binary));
    }
    let mut agree = true;
    for (name, encode) in encoders {
        let inst = encode(&g).map_err(|e| e.to_string())?;
        let outcome = if args.dp {
            match_dp(&inst.pattern, &inst.input, &inst.oracle)
        } else {
            Matcher::new(&inst.pattern, &inst.oracle)
                .map_err(Into::into)
                .and_then(|m| m.is_match(&inst.input, &inst.oracle))
        }
        .map_err(|e| e.to_string())?;
        agree &= outcome.matched == expected;
        println!(
            "reduction ({name}): {} [{} oracle calls, line length {}]",
            verdict(outcome.matched),
            outcome.metrics.oracle_calls,
            inst.input.len()
        );
    }
    println!("brute force: {}", verdict(expected));
    if !agree {
        return Err("reduction and brute force disagree".into());
    }
    Ok(if expected { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Grep(a) => grep(a),
        Command::Triangle(a) => triangle(a),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("semre: {e}");
            ExitCode::from(2)
        }
    }
}
