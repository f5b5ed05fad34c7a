//! `twoway` — solve, check, generate, and benchmark two-way rounding
//! instances from the command line.
//!
//! All results go to stdout as JSON (or as a table for `bench`); failures go
//! to stderr as a one-line JSON object with `kind` and `error` fields.  Exit
//! codes: 0 success, 2 bad input, 3 enumeration guard, 1 solver defect.
//! Output is bit-for-bit deterministic for fixed arguments and seeds.

use std::fs;
use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twoway_core::bench::{
    default_m_values, default_runs, run_bench, BenchParams, DEFAULT_MAX_VALUE,
};
use twoway_core::io::{instance_json, oracle_json, parse_bipartite, parse_instance, solution_json};
use twoway_core::{
    bottleneck_assignment, from_bipartite, oracle_optimal_limited, random_instance,
    solve_feasible_full, solve_fixed_full, solve_optimal_with, theorem2_instance,
    theorem3_instance, worked_example7, Error, RandomSpec, Result, ScaledProblem, SolveOptions,
};

#[derive(Parser)]
#[command(
    name = "twoway",
    version,
    about = "Exact minimum-discrepancy two-way rounding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print the rounding as JSON.
    Solve(SolveArgs),
    /// Enumerate every rounding of a small instance; exact optimum and all
    /// witnesses.
    Oracle(OracleArgs),
    /// Report the bottleneck-assignment relaxation of an instance.
    Bottleneck(InputArg),
    /// Write an instance as JSON.
    #[command(subcommand)]
    Gen(GenCommand),
    /// Seeded random-instance experiment: discrepancy statistics per block
    /// count.
    Bench(BenchArgs),
}

#[derive(Args)]
struct InputArg {
    /// Instance file; "-" reads stdin.
    input: String,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file; "-" reads stdin.
    input: String,
    /// Return the first valid rounding instead of an optimal one.
    #[arg(long)]
    feasible_only: bool,
    /// Pin element K (1-based) to BIT and round the rest around it.
    #[arg(long, value_name = "K=BIT", conflicts_with = "feasible_only")]
    fix: Option<String>,
    /// Feed the network every side arc up front instead of skipping the
    /// provably unneeded tail.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Instance file; "-" reads stdin.
    input: String,
    /// Raise or lower the element-count guard (default 24).
    #[arg(long)]
    limit: Option<usize>,
}

#[derive(Subcommand)]
enum GenCommand {
    /// Worst-case family on n = 2m+2 elements with optimum (2m+1)/(2m+2).
    Theorem2 {
        #[arg(long)]
        m: i64,
    },
    /// Shuffle family on n elements with optimum n/(n+1).
    Theorem3 {
        #[arg(long)]
        n: usize,
    },
    /// Numerators uniform in 1..=max, patched so the sum is m blocks.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = DEFAULT_MAX_VALUE)]
        max: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Instance whose valid roundings are the perfect matchings of the
    /// graph in FILE: {"m": 2, "edges": [[1, 1], [1, 2], ...]}, 1-based.
    Bipartite {
        #[arg(long)]
        file: String,
    },
    /// The seven-element walkthrough instance (d = 28, m = 3).
    Example7,
}

#[derive(Args)]
struct BenchArgs {
    /// Elements per instance.
    #[arg(long)]
    n: usize,
    /// Comma-separated block counts; default 1, 2, lg n, sqrt n, n/2.
    #[arg(long, value_delimiter = ',')]
    m_list: Option<Vec<i64>>,
    /// Instances per block count; default min(10^6/n, 10^4).
    #[arg(long)]
    runs: Option<u64>,
    /// Upper bound for the raw uniform numerators.
    #[arg(long, default_value_t = DEFAULT_MAX_VALUE)]
    max: i64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Emit CSV instead of the aligned table.
    #[arg(long)]
    csv: bool,
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::ParseValue(format!("stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Error::ParseValue(format!("{path}: {e}")))
    }
}

fn load_instance(path: &str) -> Result<ScaledProblem> {
    parse_instance(&read_input(path)?)
}

/// `"K=BIT"` with K 1-based and within the original elements.
fn parse_fix(text: &str, p: &ScaledProblem) -> Result<(usize, u8)> {
    let (k, bit) = text
        .split_once('=')
        .ok_or_else(|| Error::ParseValue(format!("--fix wants K=BIT, got {text:?}")))?;
    let k: usize = k
        .trim()
        .parse()
        .map_err(|_| Error::ParseValue(format!("--fix element {k:?} is not a number")))?;
    let bit: u8 = match bit.trim() {
        "0" => 0,
        "1" => 1,
        other => {
            return Err(Error::ParseValue(format!(
                "--fix bit {other:?} is neither 0 nor 1"
            )))
        }
    };
    if k < 1 || k > p.original_len() {
        return Err(Error::ParseValue(format!(
            "--fix element {k} outside 1..={}",
            p.original_len()
        )));
    }
    Ok((k - 1, bit))
}

fn cmd_solve(args: &SolveArgs) -> Result<String> {
    let p = load_instance(&args.input)?;
    if args.feasible_only {
        let (rounding, counters) = solve_feasible_full(&p)?;
        let report = p.discrepancy(&rounding)?;
        return Ok(solution_json(&p, &rounding, &report, false, 1, counters));
    }
    if let Some(fix) = &args.fix {
        let (k, bit) = parse_fix(fix, &p)?;
        let (rounding, counters) = solve_fixed_full(&p, k, bit)?;
        let report = p.discrepancy(&rounding)?;
        return Ok(solution_json(&p, &rounding, &report, false, 1, counters));
    }
    let options = SolveOptions {
        prune: !args.no_prune,
    };
    let sol = solve_optimal_with(&p, &options)?;
    let report = p.discrepancy(&sol.rounding)?;
    Ok(solution_json(
        &p,
        &sol.rounding,
        &report,
        true,
        sol.critical_threshold,
        sol.counters,
    ))
}

fn cmd_oracle(args: &OracleArgs) -> Result<String> {
    let p = load_instance(&args.input)?;
    let limit = args
        .limit
        .unwrap_or(twoway_core::oracle::ORACLE_ELEMENT_LIMIT);
    let res = oracle_optimal_limited(&p, limit)?;
    Ok(oracle_json(&res))
}

fn cmd_bottleneck(args: &InputArg) -> Result<String> {
    #[derive(serde::Serialize)]
    struct Out {
        value: twoway_core::Fraction,
        matching: Vec<[usize; 2]>,
        vias: Vec<usize>,
    }
    let p = load_instance(&args.input)?;
    let b = bottleneck_assignment(&p)?;
    let out = Out {
        value: b.value,
        matching: b.matching.iter().map(|&(l, r)| [l + 1, r + 1]).collect(),
        vias: b.vias.iter().map(|&k| k + 1).collect(),
    };
    Ok(serde_json::to_string_pretty(&out).expect("bottleneck serialization cannot fail"))
}

fn cmd_gen(cmd: &GenCommand) -> Result<String> {
    let p = match cmd {
        GenCommand::Theorem2 { m } => theorem2_instance(*m)?,
        GenCommand::Theorem3 { n } => theorem3_instance(*n)?,
        GenCommand::Random { n, m, max, seed } => random_instance(&RandomSpec {
            n: *n,
            m: *m,
            max_value: *max,
            seed: *seed,
        })?,
        GenCommand::Bipartite { file } => from_bipartite(&parse_bipartite(&read_input(file)?)?)?,
        GenCommand::Example7 => worked_example7(),
    };
    Ok(instance_json(&p))
}

fn cmd_bench(args: &BenchArgs) -> Result<String> {
    let params = BenchParams {
        n: args.n,
        m_values: args
            .m_list
            .clone()
            .unwrap_or_else(|| default_m_values(args.n)),
        runs: args.runs.unwrap_or_else(|| default_runs(args.n)),
        max_value: args.max,
        seed: args.seed,
    };
    let rows = run_bench(&params)?;
    Ok(if args.csv {
        twoway_core::bench::csv(&rows)
    } else {
        twoway_core::bench::table(&rows)
    })
}

fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Bottleneck(args) => cmd_bottleneck(args),
        Command::Gen(cmd) => cmd_gen(cmd),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn kind(e: &Error) -> &'static str {
    match e {
        Error::EmptyInput => "empty-input",
        Error::NonBijectiveSigma(_) => "non-bijective-sigma",
        Error::ParseValue(_) => "parse",
        Error::Overflow(_) => "overflow",
        Error::LengthMismatch { .. } => "length-mismatch",
        Error::ZeroElement { .. } => "zero-element",
        Error::InvalidProblem(_) => "invalid-problem",
        Error::BatchOrder { .. } => "batch-order",
        Error::SourceSaturated { .. } => "source-saturated",
        Error::NoResidualCycle { .. } => "no-residual-cycle",
        Error::EnumerationGuard { .. } => "enumeration-guard",
        Error::UnmatchableEdge { .. } => "unmatchable-edge",
        Error::InvalidRandomSpec(_) => "invalid-random-spec",
        Error::RejectionLimit { .. } => "rejection-limit",
        Error::Internal(_) => "internal",
    }
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::EnumerationGuard { .. } => 3,
        Error::Internal(_) => 1,
        _ => 2,
    }
}

/// Print to stdout with exactly one trailing newline, treating a closed
/// pipe downstream as a normal end.
fn emit(out: &str) -> std::io::Result<()> {
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    let result = writeln!(lock, "{}", out.trim_end_matches('\n')).and_then(|()| lock.flush());
    match result {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => match emit(&out) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                let report = serde_json::json!({ "kind": "io", "error": e.to_string() });
                let _ = writeln!(std::io::stderr(), "{report}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            let report = serde_json::json!({ "kind": kind(&e), "error": e.to_string() });
            let _ = writeln!(std::io::stderr(), "{report}");
            ExitCode::from(exit_for(&e))
        }
    }
}
