//! Command-line front end for the `tldlite` solver.

mod record;

pub use record::{BoundRecord, Outcome, ResultRecord};

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use sha2::{Digest, Sha256};

use tldlite::kb::{parse_kb, serialize_kb, KnowledgeBase};
use tldlite::ltl::to_text;
use tldlite::matrix::{Config, Engine, EntrySatCache, Verdict};
use tldlite::oracle::oracle_report;
use tldlite::reduction::{down_formula, entry_formula, translate};

#[derive(Parser, Debug)]
#[command(name = "tldlite", version, about = "Satisfiability of temporal DL-Lite KBs with geometric eventualities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Args, Debug, Clone, Default)]
pub struct Opts {
    /// Scan entries up to N instead of the computed s + q.
    #[arg(long, global = true, value_name = "N")]
    pub bound: Option<u32>,
    /// Keep entry satisfiability results in DIR between runs.
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Print the chain chosen at each level.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Worker threads for entry evaluation.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Evaluate entries on the calling thread only.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide satisfiability.
    Check {
        path: PathBuf,
        /// Print a JSON result record.
        #[arg(long)]
        json: bool,
    },
    /// Print the grounded LTL translation.
    Translate {
        path: PathBuf,
        /// Translate the KB with its diamonds erased.
        #[arg(long, conflicts_with = "entry")]
        down: bool,
        /// Translate the KB with its diamonds fixed at these delays.
        #[arg(long, num_args = 1..=2, value_name = "K")]
        entry: Option<Vec<u32>>,
    },
    /// Print a witness matrix as exact fractions.
    Matrix {
        path: PathBuf,
        #[arg(long, default_value_t = 3, value_name = "L")]
        size: u32,
    },
    /// Cross-check the solver against the brute-force validators.
    Oracle {
        path: PathBuf,
        /// Compare entry formulas with coordinates up to N.
        #[arg(long, default_value_t = 2, value_name = "N")]
        entries: u32,
        /// Longest lasso the bounded search tries.
        #[arg(long, default_value_t = 256, value_name = "N")]
        max_len: usize,
    },
}

/// What a command wants printed and its exit code.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Output {
    fn fail(code: i32, msg: impl std::fmt::Display) -> Output {
        Output { code, stdout: String::new(), stderr: format!("error: {msg}\n") }
    }
}

fn load(path: &Path) -> Result<KnowledgeBase, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_kb(&text).map_err(|e| format!("{}:{e}", path.display()))
}

fn config(opts: &Opts) -> Config {
    Config { parallel: !opts.sequential, bound: opts.bound, ..Config::default() }
}

fn cache_file(dir: &Path, kb: &KnowledgeBase) -> PathBuf {
    let digest = Sha256::digest(serialize_kb(kb).as_bytes());
    let name: String = digest.iter().take(16).map(|b| format!("{b:02x}")).collect();
    dir.join(format!("{name}.sat"))
}

fn engine(kb: &KnowledgeBase, opts: &Opts) -> Result<Engine, String> {
    let cache = Arc::new(EntrySatCache::new());
    if let Some(dir) = &opts.cache_dir {
        cache.load(&cache_file(dir, kb)).map_err(|e| format!("cache: {e}"))?;
    }
    Engine::with_cache(kb, config(opts), cache).map_err(|e| e.to_string())
}

fn save_cache(e: &Engine, opts: &Opts) -> Result<(), String> {
    match &opts.cache_dir {
        Some(dir) => e.cache().save(&cache_file(dir, e.kb())).map_err(|err| format!("cache: {err}")),
        None => Ok(()),
    }
}

fn trace(e: &Engine, v: &Verdict) -> String {
    let mut s = String::new();
    if e.diamonds() != 2 {
        return s;
    }
    let last = v.bound.unwrap_or(0);
    for l in 0..=last {
        match e.select_chain(l) {
            Ok(Some(c)) => {
                let cells: Vec<String> = c.iter().map(|(a, b)| format!("({a},{b})")).collect();
                let _ = writeln!(s, "level {l}: {}", cells.join(" "));
            }
            Ok(None) => {
                let _ = writeln!(s, "level {l}: no chained pair");
                break;
            }
            Err(err) => {
                let _ = writeln!(s, "level {l}: {err}");
                break;
            }
        }
    }
    s
}

fn check(path: &Path, json: bool, opts: &Opts) -> Output {
    let start = Instant::now();
    let input = path.display().to_string();
    let ms = |start: Instant| start.elapsed().as_secs_f64() * 1e3;
    let result = (|| {
        let kb = load(path)?;
        let e = engine(&kb, opts)?;
        let v = e.decide().map_err(|err| err.to_string())?;
        save_cache(&e, opts)?;
        let extra = if opts.trace { trace(&e, &v) } else { String::new() };
        Ok::<_, String>((kb, v, extra))
    })();
    let (record, extra) = match result {
        Err(msg) => (ResultRecord::error(&input, msg, ms(start)), String::new()),
        Ok((kb, v, extra)) => {
            let rec = ResultRecord {
                input,
                result: if v.sat { Outcome::Sat } else { Outcome::Unsat },
                bound: v.bound.map(|b| BoundRecord { s: v.period.map(|p| p.s), q: v.period.map(|p| p.q), b }),
                diamonds: Some(kb.diamond_count()),
                p: kb.param().map(|p| p.to_string()),
                certificate: Some(v.certificate.to_string()),
                error: None,
                elapsed_ms: ms(start),
            };
            (rec, extra)
        }
    };
    let stdout = if json { record.to_json() + "\n" } else { record.to_text() + &extra };
    let stderr = match &record.error {
        Some(e) if json => format!("error: {e}\n"),
        _ => String::new(),
    };
    Output { code: record.result.exit_code(), stdout, stderr }
}

fn translate_cmd(path: &Path, down: bool, entry: Option<&[u32]>) -> Output {
    let kb = match load(path) {
        Ok(kb) => kb,
        Err(e) => return Output::fail(2, e),
    };
    let f = match (down, entry) {
        (true, _) => down_formula(&kb),
        (_, Some(ks)) => entry_formula(&kb, ks),
        _ => translate(&kb),
    };
    match f {
        Ok(f) => Output { code: 0, stdout: to_text(&f) + "\n", stderr: String::new() },
        Err(e) => Output::fail(2, e),
    }
}

fn matrix(path: &Path, size: u32, opts: &Opts) -> Output {
    let run = || -> Result<Output, String> {
        let kb = load(path)?;
        let e = engine(&kb, opts)?;
        let v = e.decide().map_err(|err| err.to_string())?;
        if !v.sat {
            return Ok(Output::fail(1, "KB unsatisfiable"));
        }
        let m = e.build_witness(size).map_err(|err| err.to_string())?;
        save_cache(&e, opts)?;
        let mut out = m.to_string();
        if opts.trace {
            out += &trace(&e, &Verdict { bound: Some(size), ..v });
        }
        Ok(Output { code: 0, stdout: out, stderr: String::new() })
    };
    run().unwrap_or_else(|e| Output::fail(2, e))
}

fn oracle(path: &Path, entries: u32, max_len: usize, opts: &Opts) -> Output {
    let run = || -> Result<Output, String> {
        let kb = load(path)?;
        let e = engine(&kb, opts)?;
        let r = oracle_report(&e, entries, max_len).map_err(|err| err.to_string())?;
        let code = if r.agrees() { 0 } else { 1 };
        Ok(Output { code, stdout: r.to_string(), stderr: String::new() })
    };
    run().unwrap_or_else(|e| Output::fail(2, e))
}

fn dispatch(cli: &Cli) -> Output {
    let opts = &cli.opts;
    match &cli.command {
        Command::Check { path, json } => check(path, *json, opts),
        Command::Translate { path, down, entry } => translate_cmd(path, *down, entry.as_deref()),
        Command::Matrix { path, size } => matrix(path, *size, opts),
        Command::Oracle { path, entries, max_len } => oracle(path, *entries, *max_len, opts),
    }
}

pub fn run(cli: &Cli) -> Output {
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.opts.jobs {
        return match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(cli)),
            Err(e) => Output::fail(2, e),
        };
    }
    dispatch(cli)
}
