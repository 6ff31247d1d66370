use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fastexp::cli::{
    format_bench_csv, format_coefficients, format_coefficients_csv, parse_coefficients,
    random_series, run_bench, run_exp, run_verify, VerifyOptions,
};
use fastexp::{plan_parameters, plan_with_blocks, ExpConfig, Series};

#[derive(Parser)]
#[command(name = "fastexp", version, about = "Exponentials of truncated power series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute exp(f) mod x^n
    Exp(ExpArgs),
    /// Check the fast exponential against the quadratic oracles
    Verify(VerifyArgs),
    /// Time the fast path against the quadratic recurrence
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ExpFormat {
    Json,
    Csv,
    Coeffs,
}

#[derive(Clone, Copy, ValueEnum)]
enum BenchFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct ExpArgs {
    /// Coefficient file ("re im" per line); "-" reads stdin
    #[arg(required_unless_present = "random", conflicts_with = "random")]
    input: Option<PathBuf>,
    /// Use a seeded random input instead of a file
    #[arg(long, value_name = "SEED")]
    random: Option<u64>,
    /// Order of the result
    #[arg(long)]
    n: usize,
    /// Override the block-pair count (requires --m)
    #[arg(long, requires = "m")]
    s: Option<usize>,
    /// Override the block size (requires --s)
    #[arg(long, requires = "s")]
    m: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: ExpFormat,
    /// Compare against the quadratic recurrence and report the error
    #[arg(long)]
    check: bool,
    /// Also write the JSON run report to this file
    #[arg(long, value_name = "PATH")]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 512)]
    max_n: usize,
    #[arg(long, default_value_t = 20)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Perturb every result before checking (negative control)
    #[arg(long, hide = true)]
    inject_fault: bool,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_value = "64,256,1024,4096")]
    n_list: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: BenchFormat,
}

type CmdResult = Result<ExitCode, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Exp(args) => cmd_exp(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<Series, String> {
    let text = if path.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| format!("reading stdin: {e}"))?;
        buf
    } else {
        fs::read_to_string(path).map_err(|e| format!("reading {}: {e}", path.display()))?
    };
    parse_coefficients(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_exp(args: ExpArgs) -> CmdResult {
    let config = ExpConfig::default();
    let (f, seed) = match (&args.input, args.random) {
        (_, Some(seed)) => (random_series(seed, args.n), Some(seed)),
        (Some(path), None) => (read_input(path)?, None),
        (None, None) => unreachable!("clap requires an input"),
    };
    let plan = match (args.s, args.m) {
        (Some(s), Some(m)) => plan_with_blocks(args.n, s, m, &config),
        _ => plan_parameters(args.n, &config),
    }
    .map_err(|e| e.to_string())?;

    let (g, report) = run_exp(&f, &plan, &config, seed, args.check).map_err(|e| e.to_string())?;
    let report_json = serde_json::to_string_pretty(&report).map_err(|e| e.to_string())?;
    if let Some(path) = &args.report {
        fs::write(path, &report_json).map_err(|e| format!("writing {}: {e}", path.display()))?;
    }

    let body = match args.format {
        ExpFormat::Coeffs => format_coefficients(&g),
        ExpFormat::Csv => format_coefficients_csv(&g),
        ExpFormat::Json => {
            let coefficients: Vec<[f64; 2]> = g.iter().map(|c| [c.re, c.im]).collect();
            let doc = serde_json::json!({ "report": report, "coefficients": coefficients });
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
    };
    write_stdout(&body)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> CmdResult {
    let opts = VerifyOptions {
        max_n: args.max_n,
        trials: args.trials,
        seed: args.seed,
        inject_fault: args.inject_fault,
    };
    let summary = run_verify(&opts).map_err(|e| e.to_string())?;
    write_stdout(&summary.render())?;
    if summary.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("verification failed");
        Ok(ExitCode::from(1))
    }
}

fn cmd_bench(args: BenchArgs) -> CmdResult {
    let rows = run_bench(&args.n_list, args.repeat, args.seed).map_err(|e| e.to_string())?;
    let body = match args.format {
        BenchFormat::Csv => format_bench_csv(&rows),
        BenchFormat::Json => {
            let mut s = serde_json::to_string_pretty(&rows).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
    };
    write_stdout(&body)?;
    Ok(ExitCode::SUCCESS)
}

fn write_stdout(s: &str) -> Result<(), String> {
    io::stdout()
        .lock()
        .write_all(s.as_bytes())
        .map_err(|e| format!("writing output: {e}"))
}
