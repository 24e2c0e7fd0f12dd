//! `divpart` — exact diversity partitioning from the command line.
//!
//! Exit codes: 0 success, 2 invalid input, 3 infeasible instance,
//! 4 search-space guard exceeded.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num::integer::gcd;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use divpart_core::diversity::{hill_number, simpson_index, TypeVector};
use divpart_core::oracle::{
    brute_force_pmd, estimate_search_space, OracleError, SearchGuard, DEFAULT_GUARD,
};
use divpart_core::perfect::PerfectVerdict;
use divpart_core::pmd::{solve, Branch, PartitionResult, PmdError};

use divpart_cli::report::{fmt_counts, sig6, RatioJson, SolveReport};
use divpart_cli::scenarios;

const GUARD_ENV: &str = "DIVPART_GUARD";

#[derive(Parser)]
#[command(
    name = "divpart",
    version,
    about = "Partition a typed population while preserving its Simpson diversity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Simpson index, or a Hill number of a given order
    Diversity {
        /// Comma-separated counts, e.g. 12,16,20
        #[arg(long)]
        counts: String,
        /// Hill order q (a nonnegative real, or "inf"); omit for the exact Simpson index
        #[arg(long)]
        order: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write the report to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal maximin-diversity partition (two-type budgets)
    Solve {
        /// Comma-separated budget, e.g. 5,7
        #[arg(long)]
        budget: String,
        /// Number of parts
        #[arg(long)]
        parts: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Search-space guard for budgets that fall back to the oracle
        #[arg(long)]
        guard: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a perfect partition exists and construct one
    Perfect {
        #[arg(long)]
        budget: String,
        #[arg(long)]
        parts: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive ground-truth search (small instances, any dimension)
    Oracle {
        #[arg(long)]
        budget: String,
        #[arg(long)]
        parts: u64,
        /// Maximum admissible search-space size (default 10^8, or DIVPART_GUARD)
        #[arg(long)]
        guard: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a golden worked-example report: islands | table1 | tentative
    Scenario {
        name: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the solver on random coprime budgets; emits CSV
    Bench {
        /// Budgets are drawn below 2^max_bits (2..=64)
        #[arg(long, default_value_t = 32)]
        max_bits: u32,
        /// Parts are drawn from 2..=min(k_max, b1)
        #[arg(long, default_value_t = 64)]
        k_max: u64,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 2,
        }
    }

    fn infeasible(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 3,
        }
    }

    fn guard(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 4,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Diversity {
            counts,
            order,
            format,
            out,
        } => cmd_diversity(&counts, order.as_deref(), format, out),
        Command::Solve {
            budget,
            parts,
            format,
            guard,
            out,
        } => cmd_solve(&budget, parts, format, guard, out),
        Command::Perfect {
            budget,
            parts,
            format,
            out,
        } => cmd_perfect(&budget, parts, format, out),
        Command::Oracle {
            budget,
            parts,
            guard,
            format,
            out,
        } => cmd_oracle(&budget, parts, guard, format, out),
        Command::Scenario { name, out } => cmd_scenario(&name, out),
        Command::Bench {
            max_bits,
            k_max,
            trials,
            seed,
            format,
            out,
        } => cmd_bench(max_bits, k_max, trials, seed, format, out),
    }
}

fn parse_counts(raw: &str) -> Result<Vec<u128>, CliError> {
    let counts: Result<Vec<u128>, _> = raw
        .split(',')
        .map(|piece| piece.trim().parse::<u128>())
        .collect();
    let counts =
        counts.map_err(|_| CliError::invalid(format!("cannot parse counts from {raw:?}")))?;
    if counts.is_empty() {
        return Err(CliError::invalid("at least one count is required"));
    }
    Ok(counts)
}

fn parse_order(raw: &str) -> Result<f64, CliError> {
    match raw.trim() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        other => other
            .parse::<f64>()
            .map_err(|_| CliError::invalid(format!("cannot parse Hill order from {raw:?}"))),
    }
}

fn resolve_guard(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var(GUARD_ENV)
            .ok()
            .and_then(|v| v.parse::<u64>().ok())
    })
    .unwrap_or(DEFAULT_GUARD)
}

fn write_output(body: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(&path, body)
            .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn cmd_diversity(
    counts: &str,
    order: Option<&str>,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let counts = parse_counts(counts)?;
    let x = TypeVector::new(counts.clone()).map_err(|e| CliError::invalid(e.to_string()))?;
    let body = match order {
        None => {
            let d = simpson_index(&x).map_err(|e| CliError::invalid(e.to_string()))?;
            match format {
                Format::Text => format!(
                    "counts: {}\nsimpson diversity: {} (exact {})\n",
                    fmt_counts(&counts),
                    sig6(d.approx),
                    d.exact
                ),
                Format::Json => {
                    let payload = serde_json::json!({
                        "counts": counts,
                        "index": RatioJson::from_diversity(&d),
                    });
                    format!("{payload:#}\n")
                }
                Format::Csv => return Err(CliError::invalid("diversity has no csv format")),
            }
        }
        Some(raw) => {
            let q = parse_order(raw)?;
            let value = hill_number(&x, q).map_err(|e| CliError::invalid(e.to_string()))?;
            let label = if q.is_infinite() {
                "inf".to_string()
            } else {
                format!("{q}")
            };
            match format {
                Format::Text => format!(
                    "counts: {}\nhill diversity of order {label}: {}\n",
                    fmt_counts(&counts),
                    sig6(value)
                ),
                Format::Json => {
                    let payload = serde_json::json!({
                        "counts": counts,
                        "order": label,
                        "value": value,
                    });
                    format!("{payload:#}\n")
                }
                Format::Csv => return Err(CliError::invalid("diversity has no csv format")),
            }
        }
    };
    write_output(&body, out)
}

fn render_report(report: &SolveReport, format: Format) -> Result<String, CliError> {
    match format {
        Format::Text => Ok(report.to_text()),
        Format::Json => Ok(report.to_json()),
        Format::Csv => Err(CliError::invalid("solve reports have no csv format")),
    }
}

fn cmd_solve(
    budget: &str,
    parts: u64,
    format: Format,
    guard: Option<u64>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let counts = parse_counts(budget)?;
    match counts.len() {
        1 => {
            let b = TypeVector::new(counts).expect("nonempty");
            let started = Instant::now();
            let result = single_type_solve(&b, parts)?;
            let report = SolveReport::from_result(&result, started.elapsed());
            write_output(&render_report(&report, format)?, out)
        }
        2 => {
            let b1: u64 = counts[0]
                .try_into()
                .map_err(|_| CliError::invalid("solver budgets must fit 64-bit entries"))?;
            let b2: u64 = counts[1]
                .try_into()
                .map_err(|_| CliError::invalid("solver budgets must fit 64-bit entries"))?;
            let started = Instant::now();
            let result = solve(b1, b2, parts).map_err(solve_error)?;
            let report = SolveReport::from_result(&result, started.elapsed());
            write_output(&render_report(&report, format)?, out)
        }
        _ => {
            eprintln!(
                "note: exact solving covers two-type budgets; \
                 routing this {}-type instance to the exhaustive oracle",
                counts.len()
            );
            oracle_report(counts, parts, resolve_guard(guard), format, out)
        }
    }
}

fn single_type_solve(b: &TypeVector, parts: u64) -> Result<PartitionResult, CliError> {
    let total = b.counts()[0];
    if parts == 0 {
        return Err(CliError::invalid("the number of parts must be positive"));
    }
    if parts as u128 > total {
        return Err(CliError::infeasible(format!(
            "cannot form {parts} nonzero parts; at most {total} are feasible"
        )));
    }
    let witness = divpart_core::perfect::build_perfect_partition(b, parts)
        .expect("k <= b implies feasibility for a single type");
    PartitionResult::from_parts(b.clone(), parts, Branch::Perfect, witness, Vec::new())
        .map_err(|e| CliError::invalid(e.to_string()))
}

fn solve_error(e: PmdError) -> CliError {
    match e {
        PmdError::TooFewResources {
            requested,
            max_parts,
        } => CliError::infeasible(format!(
            "cannot split into {requested} parts: at most {max_parts} parts are feasible \
             for this budget"
        )),
        other => CliError::invalid(other.to_string()),
    }
}

fn cmd_perfect(
    budget: &str,
    parts: u64,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let counts = parse_counts(budget)?;
    let b = TypeVector::new(counts.clone()).expect("nonempty");
    let verdict =
        PerfectVerdict::evaluate(&b, parts).map_err(|e| CliError::invalid(e.to_string()))?;
    let body = match format {
        Format::Text => {
            let mut s = format!(
                "budget: {}   parts: {}\nmax perfect parts (gcd): {}\n",
                fmt_counts(&counts),
                parts,
                verdict.max_parts
            );
            match &verdict.witness {
                Some(witness) => {
                    s.push_str("verdict: feasible\n");
                    for (i, part) in witness.iter().enumerate() {
                        s.push_str(&format!("  part {}: {part}\n", i + 1));
                    }
                }
                None => s.push_str("verdict: infeasible\n"),
            }
            s
        }
        Format::Json => {
            let payload = serde_json::json!({
                "budget": counts,
                "k": parts,
                "max_parts": verdict.max_parts.to_string(),
                "feasible": verdict.feasible_for_k,
                "witness": verdict.witness.as_ref().map(|witness| {
                    witness.iter().map(|p| p.counts().to_vec()).collect::<Vec<_>>()
                }),
            });
            format!("{payload:#}\n")
        }
        Format::Csv => return Err(CliError::invalid("perfect verdicts have no csv format")),
    };
    write_output(&body, out)?;
    if verdict.feasible_for_k {
        Ok(())
    } else {
        Err(CliError::infeasible(format!(
            "no perfect partition with {parts} parts; at most {} are possible",
            verdict.max_parts
        )))
    }
}

fn cmd_oracle(
    budget: &str,
    parts: u64,
    guard: Option<u64>,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let counts = parse_counts(budget)?;
    oracle_report(counts, parts, resolve_guard(guard), format, out)
}

fn oracle_report(
    counts: Vec<u128>,
    parts: u64,
    guard: u64,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let b = TypeVector::new(counts).expect("nonempty");
    let estimate = estimate_search_space(&b, parts);
    if estimate > num::BigUint::from(guard) {
        return Err(CliError::guard(format!(
            "search space estimate {estimate} exceeds the guard of {guard} \
             (raise --guard or {GUARD_ENV} to force the search)"
        )));
    }
    let started = Instant::now();
    let (_, best) = brute_force_pmd(&b, parts, &SearchGuard::new(guard)).map_err(|e| match e {
        OracleError::SearchSpaceTooLarge { .. } => CliError::guard(e.to_string()),
        OracleError::NoFeasiblePartition => CliError::infeasible(e.to_string()),
    })?;
    let elapsed = started.elapsed();
    let result = PartitionResult::from_parts(b, parts, Branch::Oracle, best, Vec::new())
        .expect("oracle output is always a valid partition");
    let report = SolveReport::from_result(&result, elapsed);
    write_output(&render_report(&report, format)?, out)
}

fn cmd_scenario(name: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    let body = match name {
        "islands" => scenarios::islands(),
        "table1" => scenarios::table1(),
        "tentative" => scenarios::tentative(),
        other => {
            return Err(CliError::invalid(format!(
                "unknown scenario {other:?}; expected islands, table1 or tentative"
            )))
        }
    };
    write_output(&body, out)
}

fn cmd_bench(
    max_bits: u32,
    k_max: u64,
    trials: u64,
    seed: u64,
    format: Format,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if format != Format::Csv {
        return Err(CliError::invalid("bench emits csv only"));
    }
    if !(2..=64).contains(&max_bits) {
        return Err(CliError::invalid("max-bits must be between 2 and 64"));
    }
    if k_max < 2 || trials == 0 {
        return Err(CliError::invalid("k-max must be >= 2 and trials >= 1"));
    }
    let hi: u64 = if max_bits == 64 {
        u64::MAX
    } else {
        (1u64 << max_bits) - 1
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut csv = String::from("trial,b1,b2,k,branch,nanos\n");
    for trial in 0..trials {
        let (b1, b2) = loop {
            let a = rng.gen_range(2..=hi);
            let b = rng.gen_range(2..=hi);
            let (lo, hi_v) = if a <= b { (a, b) } else { (b, a) };
            if gcd(lo, hi_v) == 1 {
                break (lo, hi_v);
            }
        };
        let k = rng.gen_range(2..=k_max.min(b1));
        let started = Instant::now();
        let result = solve(b1, b2, k).expect("bench instances are feasible");
        let nanos = started.elapsed().as_nanos();
        csv.push_str(&format!(
            "{trial},{b1},{b2},{k},{},{nanos}\n",
            result.branch.as_str()
        ));
    }
    write_output(&csv, out)
}
