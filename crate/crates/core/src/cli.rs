//! Command-line front end. [`run`] parses arguments and returns everything
//! the process would print, so the binary is a thin wrapper and tests can
//! drive commands in-process.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::approx::{classify_approximation, legendre_is_convergent};
use crate::cf::{cf_expand_real, cf_from_rational, convergents, ContinuedFraction};
use crate::error::Error;
use crate::measure::{build_distribution, choose_register_size, window_mass, Mode};
use crate::modular::{mod_exp, multiplicative_order};
use crate::rational::Rational;
use crate::shor::{shor_factor, verify_period, SamplingMode, ShorConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;
pub const EXIT_EXHAUSTED: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "shorcf",
    version,
    about = "Exact continued fractions and Shor period recovery"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Continued fraction of an exact fraction p/q.
    Cf {
        #[arg(allow_hyphen_values = true)]
        fraction: String,
        /// Keep only the first terms of the expansion.
        #[arg(long)]
        max_terms: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Convergent table n, a_n, p_n, q_n.
    Convergents {
        #[arg(allow_hyphen_values = true)]
        fraction: String,
        #[command(flatten)]
        format: TableFormat,
    },
    /// Legendre criterion and best-approximation verdicts for a candidate.
    Approx {
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        candidate: String,
        #[arg(long)]
        json: bool,
    },
    /// Measurement distribution and its window mass.
    Dist(DistArgs),
    /// Factor n end to end; prints the JSON report.
    Factor {
        #[arg(long)]
        n: u64,
        #[arg(long, env = "SHOR_CF_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 25)]
        retries: usize,
        #[arg(long, value_enum, default_value_t = CliMode::Mixture)]
        mode: CliMode,
        /// Largest k for the p = kN/y fallback; defaults to n.
        #[arg(long)]
        k_max: Option<u64>,
    },
    /// Check a^p = 1 (mod n) and report the true order.
    Verify {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Args)]
#[group(multiple = false)]
pub struct TableFormat {
    #[arg(long)]
    json: bool,
    #[arg(long)]
    csv: bool,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    #[arg(long)]
    n: u64,
    /// Base whose order gives the period.
    #[arg(long, conflicts_with = "p", required_unless_present = "p")]
    a: Option<u64>,
    /// Explicit period.
    #[arg(long)]
    p: Option<u64>,
    #[arg(long, value_enum, default_value_t = CliMode::Mixture)]
    mode: CliMode,
    /// Residue class for conditional mode.
    #[arg(long, default_value_t = 0)]
    offset: u64,
    /// Output file; `.json` writes JSON, anything else CSV.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CliMode {
    Conditional,
    Mixture,
}

/// What a command printed and how it exited.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            stdout,
            stderr: String::new(),
            code: EXIT_OK,
        }
    }

    fn fail(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            stdout: String::new(),
            stderr,
            code,
        }
    }
}

enum CliError {
    Usage(String),
    Precondition(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => CliError::Usage(e.to_string()),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome::ok(text)
            } else {
                Outcome::fail(code, text)
            };
        }
    };
    let result = match cli.command {
        Command::Cf {
            fraction,
            max_terms,
            json,
        } => cmd_cf(&fraction, max_terms, json).map(Outcome::ok),
        Command::Convergents { fraction, format } => {
            cmd_convergents(&fraction, format.json, format.csv).map(Outcome::ok)
        }
        Command::Approx { x, candidate, json } => cmd_approx(&x, &candidate, json).map(Outcome::ok),
        Command::Dist(args) => cmd_dist(&args).map(Outcome::ok),
        Command::Factor {
            n,
            seed,
            retries,
            mode,
            k_max,
        } => cmd_factor(n, seed, retries, mode, k_max),
        Command::Verify { n, a, p, json } => cmd_verify(n, a, p, json).map(Outcome::ok),
    };
    match result {
        Ok(outcome) => outcome,
        Err(CliError::Usage(msg)) => Outcome::fail(EXIT_USAGE, format!("error: {msg}")),
        Err(CliError::Precondition(msg)) => Outcome::fail(EXIT_PRECONDITION, format!("error: {msg}")),
    }
}

fn parse_fraction(s: &str) -> Result<Rational, CliError> {
    Rational::from_str(s).map_err(CliError::from)
}

/// Integers go into JSON as numbers of any size.
fn big_json(v: &BigInt) -> Value {
    Value::Number(serde_json::Number::from_str(&v.to_string()).expect("integer literal"))
}

fn cmd_cf(fraction: &str, max_terms: Option<usize>, json: bool) -> Result<String, CliError> {
    let x = parse_fraction(fraction)?;
    let cf: ContinuedFraction = match max_terms {
        Some(m) => cf_expand_real(&x, m),
        None => cf_from_rational(&x),
    };
    Ok(if json {
        let coeffs: Vec<Value> = cf.coefficients().iter().map(big_json).collect();
        format!("{}\n", json!({ "coeffs": coeffs }))
    } else {
        format!("{cf}\n")
    })
}

fn cmd_convergents(fraction: &str, json: bool, csv: bool) -> Result<String, CliError> {
    let x = parse_fraction(fraction)?;
    let table = convergents(&cf_from_rational(&x));
    let rows = table
        .coefficients()
        .iter()
        .zip(table.entries())
        .enumerate()
        .map(|(n, (a, (p, q)))| (n, a, p, q));

    let mut out = String::new();
    if json {
        let items: Vec<Value> = rows
            .map(|(n, a, p, q)| json!({ "n": n, "a": big_json(a), "p": big_json(p), "q": big_json(q) }))
            .collect();
        writeln!(out, "{}", json!({ "convergents": items })).unwrap();
    } else if csv {
        out.push_str("n,a,p,q\n");
        for (n, a, p, q) in rows {
            writeln!(out, "{n},{a},{p},{q}").unwrap();
        }
    } else {
        out.push_str("n\ta\tp\tq\tvalue\n");
        for (n, a, p, q) in rows {
            writeln!(out, "{n}\t{a}\t{p}\t{q}\t{p}/{q}").unwrap();
        }
    }
    Ok(out)
}

fn cmd_approx(x: &str, cand: &str, json: bool) -> Result<String, CliError> {
    let x = parse_fraction(x)?;
    let cand = parse_fraction(cand)?;
    let legendre = legendre_is_convergent(&x, &cand);
    let verdict = classify_approximation(&x, &cand);
    if json {
        let v = json!({
            "legendre": legendre.hypothesis_holds,
            "index": legendre.convergent_index,
            "first": verdict.is_first_kind,
            "second": verdict.is_second_kind,
            "witness": verdict.witness.as_ref().map(ToString::to_string),
        });
        return Ok(format!("{v}\n"));
    }
    let mut out = format!("legendre={}", legendre.hypothesis_holds);
    if let Some(i) = legendre.convergent_index {
        write!(out, " index={i}").unwrap();
    }
    write!(
        out,
        " first={} second={}",
        verdict.is_first_kind, verdict.is_second_kind
    )
    .unwrap();
    if let Some(w) = &verdict.witness {
        write!(out, " witness={w}").unwrap();
    }
    out.push('\n');
    Ok(out)
}

fn cmd_dist(args: &DistArgs) -> Result<String, CliError> {
    let config = choose_register_size(args.n)?;
    let p = match (args.a, args.p) {
        (Some(a), _) => multiplicative_order(a, args.n)?,
        (None, Some(p)) => p,
        (None, None) => return Err(CliError::Usage("one of --a or --p is required".into())),
    };
    let mode = match args.mode {
        CliMode::Conditional => Mode::Conditional { offset: args.offset },
        CliMode::Mixture => Mode::Mixture,
    };
    let dist = build_distribution(config, p, mode)?;
    let windows = window_mass(&dist);

    if let Some(path) = &args.out {
        let body = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => dist.to_json(),
            _ => dist.to_csv(),
        };
        std::fs::write(path, body)
            .map_err(|e| CliError::Precondition(format!("cannot write {}: {e}", path.display())))?;
    }

    Ok(if args.json {
        let v = json!({
            "n": config.n,
            "N": config.size,
            "p": p,
            "mode": mode.name(),
            "window_mass": windows.total,
        });
        format!("{v}\n")
    } else {
        format!("N={} p={} window_mass={:.6}\n", config.size, p, windows.total)
    })
}

fn cmd_factor(n: u64, seed: u64, retries: usize, mode: CliMode, k_max: Option<u64>) -> Result<Outcome, CliError> {
    let config = ShorConfig {
        n,
        max_a_retries: retries,
        max_k_search: k_max.unwrap_or(n),
        seed,
        mode: match mode {
            CliMode::Conditional => SamplingMode::Conditional,
            CliMode::Mixture => SamplingMode::Mixture,
        },
    };
    let report = shor_factor(&config)?;
    let mut outcome = Outcome::ok(format!("{}\n", report.to_json()));
    if report.factors.is_none() {
        outcome.code = EXIT_EXHAUSTED;
        outcome.stderr = format!("error: {}\n", report.failure.as_deref().unwrap_or("no factor found"));
    }
    Ok(outcome)
}

fn cmd_verify(n: u64, a: u64, p: u64, json: bool) -> Result<String, CliError> {
    mod_exp(a, p, n)?;
    let verified = verify_period(a, p, n);
    let order = multiplicative_order(a, n)?;
    Ok(if json {
        format!(
            "{}\n",
            json!({ "n": n, "a": a, "p": p, "verified": verified, "order": order })
        )
    } else {
        format!("verified={verified} order={order}\n")
    })
}
