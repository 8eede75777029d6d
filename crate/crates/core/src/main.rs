//! Command-line front end: expansion, evaluation, verification suites, and
//! the Newton-basis dump.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 I/O
//! failure, 4 Newton refinement failure.

use clap::{Parser, Subcommand, ValueEnum};
use holoroot::oracle::ShiftedPolynomial;
use holoroot::polyring::{rational_to_f64, Rational};
use holoroot::taylor::build_table;
use holoroot::verify::{run_target, Target};
use holoroot::weyl::{dn_polynomial, newton_polynomial};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use std::path::PathBuf;
use std::process::exit;

#[derive(Parser)]
#[command(
    name = "holoroot",
    version,
    about = "Exact Taylor expansion of the root near -1 of the universal degree-k equation, \
             with mechanical verification of its holonomic system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build the coefficient table C_{q,r} up to order Q and export it
    Expand {
        /// Degree of the universal equation (k >= 2)
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        k: u64,
        /// Truncation order Q
        #[arg(long, default_value_t = 6)]
        order: u32,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the table here instead of stdout (the summary then moves
        /// to stdout)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the truncated root series at a parameter point and compare
    /// against a Newton-refined root
    Eval {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        k: u64,
        #[arg(long, default_value_t = 6)]
        order: u32,
        /// Comma-separated values s_1,...,s_k; each entry is an integer,
        /// a fraction p/q, or a decimal (parsed exactly)
        #[arg(long)]
        sigma: String,
    },
    /// Run a verification suite and report PASS/FAIL per named check
    Verify {
        /// identities | recurrences | annihilation | determinant | surface
        /// | newton | all
        target: Option<String>,
        /// Alias for the positional target
        #[arg(long = "target", value_name = "TARGET")]
        target_flag: Option<String>,
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        k: u64,
        #[arg(long, default_value_t = 6)]
        order: u32,
        /// Depth of the Newton-basis semidecisions
        #[arg(long, default_value_t = 12)]
        max_m: u32,
    },
    /// Dump the Newton polynomials N_m and the division family DN_m
    NewtonTable {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        k: u64,
        #[arg(long, default_value_t = 12)]
        max_m: u32,
    },
}

/// Exact rational from an integer, `p/q`, or decimal literal.
fn parse_rational(token: &str) -> Result<Rational, String> {
    let t = token.trim();
    let bad = |_| format!("cannot parse `{t}` as a rational");
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(bad)?;
        let d: BigInt = d.trim().parse().map_err(bad)?;
        if d.is_zero() {
            return Err(format!("zero denominator in `{t}`"));
        }
        Ok(Rational::new(n, d))
    } else if let Some((whole, frac)) = t.split_once('.') {
        let digits = format!("{whole}{frac}");
        let n: BigInt = digits.parse().map_err(bad)?;
        let d = BigInt::from(10u32).pow(frac.len() as u32);
        Ok(Rational::new(n, d))
    } else {
        let n: BigInt = t.parse().map_err(bad)?;
        Ok(Rational::from_integer(n))
    }
}

fn parse_sigma(raw: &str, k: usize) -> Result<Vec<Rational>, String> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != k {
        return Err(format!(
            "sigma has {} entries, expected {k}",
            parts.len()
        ));
    }
    parts.into_iter().map(parse_rational).collect()
}

fn main() {
    exit(run(Cli::parse()));
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Expand {
            k,
            order,
            format,
            out,
        } => cmd_expand(k as usize, order, format, out),
        Command::Eval { k, order, sigma } => cmd_eval(k as usize, order, &sigma),
        Command::Verify {
            target,
            target_flag,
            k,
            order,
            max_m,
        } => cmd_verify(target, target_flag, k as usize, order, max_m),
        Command::NewtonTable { k, max_m } => cmd_newton_table(k as usize, max_m),
    }
}

fn cmd_expand(k: usize, order: u32, format: Format, out: Option<PathBuf>) -> i32 {
    let table = build_table(k, order);
    let artifact = match format {
        Format::Json => {
            let mut s = table.to_json();
            s.push('\n');
            s
        }
        Format::Csv => table.to_csv(),
        Format::Text => {
            let mut s = String::new();
            for (key, c) in table.iter() {
                s.push_str(&format!("C({},{}) = {}\n", key.q, key.r, c));
            }
            s
        }
    };
    let summary = format!("k={k} Q={order} entries={}", table.len());
    match out {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, artifact) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return 3;
            }
            println!("{summary}");
        }
        None => {
            print!("{artifact}");
            eprintln!("{summary}");
        }
    }
    0
}

fn cmd_eval(k: usize, order: u32, sigma_raw: &str) -> i32 {
    let sigma = match parse_sigma(sigma_raw, k) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let sigma_c: Vec<Complex64> = sigma
        .iter()
        .map(|s| Complex64::new(rational_to_f64(s), 0.0))
        .collect();
    let basin = sigma
        .iter()
        .map(|s| rational_to_f64(s).abs())
        .fold(0.0f64, f64::max);
    if basin > 0.1 {
        eprintln!(
            "warning: max |sigma_h| = {basin} is outside the validated basin (<= 1/10); \
             the Newton refinement may leave the branch"
        );
    }
    let table = build_table(k, order);
    let series = table.root_series().evaluate_c64(&sigma_c);
    println!("series     = {series}");
    let sp = ShiftedPolynomial::new(k, sigma_c).expect("length checked above");
    match sp.newton_root() {
        Err(e) => {
            eprintln!("warning: Newton refinement failed: {e}");
            4
        }
        Ok(root) if (root + Complex64::new(1.0, 0.0)).norm() > 0.5 => {
            println!("newton     = {root}");
            eprintln!(
                "warning: Newton refinement left the branch through -1 (|root + 1| = {:e})",
                (root + Complex64::new(1.0, 0.0)).norm()
            );
            4
        }
        Ok(root) => {
            println!("newton     = {root}");
            println!("difference = {:e}", (series - root).norm());
            0
        }
    }
}

fn cmd_verify(
    positional: Option<String>,
    flag: Option<String>,
    k: usize,
    order: u32,
    max_m: u32,
) -> i32 {
    let raw = match (positional, flag) {
        (Some(a), Some(b)) if a != b => {
            eprintln!("error: conflicting targets `{a}` and `{b}`");
            return 2;
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => "all".to_string(),
    };
    let target: Target = match raw.parse() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let checks = run_target(target, k, order, max_m);
    let mut failed = 0usize;
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        if c.note.is_empty() {
            println!("{status} {}", c.name);
        } else {
            println!("{status} {} -- {}", c.name, c.note);
        }
        if !c.passed {
            failed += 1;
        }
    }
    if failed == 0 {
        println!("result: PASS ({} checks)", checks.len());
        0
    } else {
        println!("result: FAIL ({failed} of {} checks failed)", checks.len());
        1
    }
}

fn cmd_newton_table(k: usize, max_m: u32) -> i32 {
    for m in 0..=max_m {
        println!("N_{m} = {}", newton_polynomial(k, m).to_text());
    }
    for m in (-(k as i64) + 1)..=(max_m as i64) {
        println!("DN_{m} = {}", dn_polynomial(k, m).to_text());
    }
    0
}
