//! `kl` — Kazhdan-Lusztig polynomials, mu-coefficients, and fully
//! commutative elements for the affine symmetric group.
//!
//! Exit codes: 0 success, 1 verification/internal failure, 2 usage or parse
//! error, 3 resource-cap exceeded.

mod cachefile;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use kl_core::{
    classify_fc, decide_mu, enumerate_fc_by_length, is_fully_commutative, verify_theorem,
    AffinePermutation, Error as CoreError, GroupContext, KlCache, VerifyReport,
};

#[derive(Parser)]
#[command(
    name = "kl",
    version,
    about = "Kazhdan-Lusztig polynomials and mu-coefficients for the affine symmetric group"
)]
struct Cli {
    /// Cache file to load before and save after polynomial computation.
    /// Defaults to $KL_CACHE_DIR/kl-cache-n<N>.v1.txt when KL_CACHE_DIR is set.
    #[arg(long, global = true, value_name = "PATH")]
    cache: Option<PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Engine,
    Decider,
    Both,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the Kazhdan-Lusztig polynomial P(x, w) as its coefficient list.
    P {
        /// Rank parameter (number of generators), n >= 3.
        #[arg(long)]
        n: usize,
        /// Element spec: comma-separated generator word, or a full window.
        #[arg(long)]
        x: String,
        #[arg(long)]
        w: String,
    },
    /// Print the leading coefficient mu(x, w).
    Mu {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        x: String,
        #[arg(long)]
        w: String,
        /// engine: from the polynomial; decider: polynomial-free procedure
        /// (x must be fully commutative); both: run both and compare.
        #[arg(long, value_enum, default_value_t = Method::Engine)]
        method: Method,
    },
    /// Test full commutativity; classify the structural cases when it holds.
    Fc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        w: String,
    },
    /// Exhaustive differential sweep: engine mu in {0,1} and decider
    /// agreement for every fully commutative x below every w up to max-len.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long = "max-len")]
        max_len: usize,
        /// Worker threads for the sweep.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// List fully commutative elements up to max-len, one window per line.
    EnumFc {
        #[arg(long)]
        n: usize,
        #[arg(long = "max-len")]
        max_len: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad input: exit 2.
    Usage(String),
    /// Resource cap exceeded: exit 3.
    Resource(String),
    /// Verification or internal failure: exit 1.
    Failure(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::CapExceeded { .. } => CliError::Resource(e.to_string()),
            CoreError::InvalidGenerator { .. }
            | CoreError::RankMismatch(..)
            | CoreError::InvalidWindow { .. }
            | CoreError::Argument(_) => CliError::Usage(e.to_string()),
            CoreError::Internal(_) | CoreError::FallbackRequired(_) => {
                CliError::Failure(e.to_string())
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(CliError::Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Resource(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

/// Parses an element spec: the empty string is the identity; a list with
/// exactly n entries is tried as a window first and falls back to a word
/// (the two readings can never both be valid); anything else is a word.
fn parse_element(ctx: &GroupContext, spec: &str) -> Result<AffinePermutation, CliError> {
    let trimmed = spec.trim();
    if trimmed.is_empty() {
        return Ok(ctx.identity());
    }
    let mut values = Vec::new();
    for (pos, tok) in trimmed.split(',').enumerate() {
        let v: i64 = tok.trim().parse().map_err(|_| {
            CliError::Usage(format!(
                "element {spec:?}: entry {:?} at position {} is not an integer",
                tok.trim(),
                pos + 1
            ))
        })?;
        values.push(v);
    }
    if values.len() == ctx.rank() {
        match AffinePermutation::from_window(ctx, values.clone()) {
            Ok(w) => return Ok(w),
            Err(window_err) => {
                if let Some(w) = word_product(ctx, &values) {
                    return Ok(w);
                }
                return Err(CliError::Usage(format!("element {spec:?}: {window_err}")));
            }
        }
    }
    for (pos, &v) in values.iter().enumerate() {
        if v < 0 || v >= ctx.rank() as i64 {
            return Err(CliError::Usage(format!(
                "element {spec:?}: letter {v} at position {} out of range for n={}",
                pos + 1,
                ctx.rank()
            )));
        }
    }
    Ok(word_product(ctx, &values).expect("letters validated"))
}

fn word_product(ctx: &GroupContext, letters: &[i64]) -> Option<AffinePermutation> {
    let mut w = ctx.identity();
    for &v in letters {
        if v < 0 || v >= ctx.rank() as i64 {
            return None;
        }
        w = w.mul_gen(v as usize).ok()?;
    }
    Some(w)
}

fn cache_path(cli_cache: &Option<PathBuf>, n: usize) -> Option<PathBuf> {
    if let Some(p) = cli_cache {
        return Some(p.clone());
    }
    std::env::var_os("KL_CACHE_DIR")
        .map(|dir| PathBuf::from(dir).join(format!("kl-cache-n{n}.v1.txt")))
}

fn load_cache_if_present(path: &Option<PathBuf>, engine: &KlCache) -> Result<(), CliError> {
    if let Some(p) = path {
        if p.exists() {
            cachefile::load(p, engine)?;
        }
    }
    Ok(())
}

fn save_cache(path: &Option<PathBuf>, engine: &KlCache) -> Result<(), CliError> {
    if let Some(p) = path {
        cachefile::save(p, engine)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct POutput {
    coeffs: Vec<i64>,
}

#[derive(Serialize)]
struct MuOutput {
    mu: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    agree: Option<bool>,
}

#[derive(Serialize)]
struct FcOutput {
    fully_commutative: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    cases: Option<Vec<&'static str>>,
}

#[derive(Serialize)]
struct VerifyFailureOutput {
    x: Vec<i64>,
    w: Vec<i64>,
    kind: &'static str,
    engine_mu: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    decided: Option<u8>,
}

#[derive(Serialize)]
struct VerifyOutput {
    n: usize,
    max_len_w: usize,
    pairs_checked: u64,
    mu_zero: u64,
    mu_one: u64,
    disagreements: u64,
    fallbacks: u64,
    mu_out_of_range: u64,
    passed: bool,
    failures: Vec<VerifyFailureOutput>,
}

impl VerifyOutput {
    fn from_report(report: &VerifyReport) -> Self {
        VerifyOutput {
            n: report.n,
            max_len_w: report.max_len_w,
            pairs_checked: report.pairs_checked,
            mu_zero: report.mu_zero,
            mu_one: report.mu_one,
            disagreements: report.disagreements,
            fallbacks: report.fallbacks,
            mu_out_of_range: report.mu_out_of_range,
            passed: report.passed(),
            failures: report
                .failures
                .iter()
                .map(|f| VerifyFailureOutput {
                    x: f.x.clone(),
                    w: f.w.clone(),
                    kind: f.kind.name(),
                    engine_mu: f.engine_mu,
                    decided: f.decided,
                })
                .collect(),
        }
    }
}

fn emit_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string(value)
        .map_err(|e| CliError::Failure(format!("serialization failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn csv_escape(s: &str) -> String {
    if s.contains(',') || s.contains('"') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.cmd {
        Cmd::P { n, x, w } => {
            let ctx = GroupContext::new(n)?;
            let x = parse_element(&ctx, &x)?;
            let w = parse_element(&ctx, &w)?;
            let engine = KlCache::new(ctx);
            let path = cache_path(&cli.cache, n);
            load_cache_if_present(&path, &engine)?;
            let p = engine.polynomial(&x, &w)?;
            save_cache(&path, &engine)?;
            match cli.format {
                Format::Json => emit_json(&POutput { coeffs: p.coeffs().to_vec() })?,
                Format::Csv => {
                    println!("k,coeff");
                    for (k, c) in p.coeffs().iter().enumerate() {
                        println!("{k},{c}");
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Mu { n, x, w, method } => {
            let ctx = GroupContext::new(n)?;
            let x = parse_element(&ctx, &x)?;
            let w = parse_element(&ctx, &w)?;
            let out = match method {
                Method::Engine => {
                    let engine = KlCache::new(ctx);
                    let path = cache_path(&cli.cache, n);
                    load_cache_if_present(&path, &engine)?;
                    let m = engine.mu(&x, &w)?;
                    save_cache(&path, &engine)?;
                    MuOutput { mu: m, agree: None }
                }
                Method::Decider => {
                    let d = decide_mu(&ctx, &x, &w)?;
                    MuOutput { mu: d.value.into(), agree: None }
                }
                Method::Both => {
                    let engine = KlCache::new(ctx.clone());
                    let path = cache_path(&cli.cache, n);
                    load_cache_if_present(&path, &engine)?;
                    let m = engine.mu(&x, &w)?;
                    save_cache(&path, &engine)?;
                    let d = decide_mu(&ctx, &x, &w)?;
                    MuOutput {
                        mu: m,
                        agree: Some(i64::from(d.value) == m),
                    }
                }
            };
            match cli.format {
                Format::Json => emit_json(&out)?,
                Format::Csv => match out.agree {
                    Some(a) => println!("mu,agree\n{},{}", out.mu, a),
                    None => println!("mu\n{}", out.mu),
                },
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Fc { n, w } => {
            let ctx = GroupContext::new(n)?;
            let w = parse_element(&ctx, &w)?;
            let fc = is_fully_commutative(&ctx, &w)?;
            let cases = if fc {
                let cls = classify_fc(&ctx, &w)?;
                Some(cls.tags().iter().map(|t| t.name()).collect::<Vec<_>>())
            } else {
                None
            };
            match cli.format {
                Format::Json => emit_json(&FcOutput { fully_commutative: fc, cases })?,
                Format::Csv => {
                    println!("fully_commutative,cases");
                    let joined = cases.map(|c| c.join("|")).unwrap_or_default();
                    println!("{fc},{}", csv_escape(&joined));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify { n, max_len, jobs } => {
            let ctx = GroupContext::new(n)?;
            let engine = KlCache::new(ctx);
            let path = cache_path(&cli.cache, n);
            load_cache_if_present(&path, &engine)?;
            let report = verify_theorem(&engine, max_len, jobs.max(1))?;
            save_cache(&path, &engine)?;
            let out = VerifyOutput::from_report(&report);
            match cli.format {
                Format::Json => emit_json(&out)?,
                Format::Csv => {
                    println!(
                        "n,max_len_w,pairs_checked,mu_zero,mu_one,disagreements,fallbacks,mu_out_of_range,passed"
                    );
                    println!(
                        "{},{},{},{},{},{},{},{},{}",
                        out.n,
                        out.max_len_w,
                        out.pairs_checked,
                        out.mu_zero,
                        out.mu_one,
                        out.disagreements,
                        out.fallbacks,
                        out.mu_out_of_range,
                        out.passed
                    );
                }
            }
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Cmd::EnumFc { n, max_len } => {
            let ctx = GroupContext::new(n)?;
            let buckets = enumerate_fc_by_length(&ctx, max_len)?;
            for w in buckets.into_iter().flatten() {
                let line = w
                    .window()
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                println!("{line}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
