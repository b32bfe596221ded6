use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

use lsem_ci::confidence::{ConfidenceSet, SetWarning};
use lsem_ci::dist::RngSeed;
use lsem_ci::harness::{run_experiment, write_outputs, ExperimentConfig, FULL_REPLICATIONS};
use lsem_ci::method::{run_method, Method, MethodConfig};
use lsem_ci::model::Dataset;
use lsem_ci::pairs::{analyze_pair, fetch_pair, load_pair_by_id, load_table};
use lsem_ci::{Error, Result};

#[derive(Parser)]
#[command(name = "lsem-ci", version, about = "Confidence sets for causal effects in equal-variance linear SEMs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Confidence set for the effect of the first column on the second.
    Ci {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        method: Method,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Exchange the first two columns.
        #[arg(long)]
        swap: bool,
        /// Seed for the sample split and bootstrap resampling.
        #[arg(long, default_value_t = 0)]
        split_seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Monte Carlo coverage experiment.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// Use 10000 replications per cell.
        #[arg(long)]
        full: bool,
        #[arg(long)]
        out: PathBuf,
        /// Overrides the master seed of the config file.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Analyze cause-effect pair files `<dir>/<id>.txt` in both directions.
    Pairs {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        ids: Vec<String>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, value_delimiter = ',')]
        methods: Option<Vec<Method>>,
        #[arg(long, default_value_t = 0)]
        split_seed: u64,
        /// Download missing files from this base URL first.
        #[arg(long)]
        fetch_base: Option<String>,
    },
}

#[derive(Serialize)]
struct CiRow {
    method: Method,
    alpha: f64,
    n: usize,
    lower: Option<f64>,
    upper: Option<f64>,
    contains_zero: bool,
    empty: bool,
    torn: bool,
    warnings: String,
}

fn warning_label(w: &SetWarning) -> String {
    match w {
        SetWarning::NonContiguousAcceptance { gaps } => format!("noncontiguous:{gaps}"),
        SetWarning::ZeroGapFilled => "zero_gap_filled".into(),
        SetWarning::EmptyMisspecification => "empty".into(),
        SetWarning::OptimizerFailuresAccepted { count } => format!("optimizer_failures:{count}"),
    }
}

fn ci_row(method: Method, alpha: f64, n: usize, set: &ConfidenceSet) -> CiRow {
    CiRow {
        method,
        alpha,
        n,
        lower: set.interval.map(|iv| iv.0),
        upper: set.interval.map(|iv| iv.1),
        contains_zero: set.contains_zero,
        empty: set.is_empty(),
        torn: set.is_torn(),
        warnings: set.warnings.iter().map(warning_label).collect::<Vec<_>>().join(";"),
    }
}

fn json_string<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.into()))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ci { input, method, alpha, swap, split_seed, format } => {
            let mut data = Dataset::from_rows(&load_table(&input)?)?;
            if swap {
                data = data.swap_columns(0, 1);
            }
            let cfg = MethodConfig { alpha, ..MethodConfig::default() };
            let set = run_method(method, &data, &cfg, RngSeed::new(split_seed, 0))?;
            let row = ci_row(method, alpha, data.n(), &set);
            match format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(std::io::stdout());
                    w.serialize(&row).map_err(|e| Error::Io(e.into()))?;
                    w.flush()?;
                }
                Format::Json => println!("{}", json_string(&set)?),
            }
        }
        Command::Simulate { config, full, out, seed } => {
            let mut cfg = ExperimentConfig::load(&config)?;
            if full {
                cfg.replications = FULL_REPLICATIONS;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let (result, timings) = run_experiment(&cfg)?;
            write_outputs(&out, &result, &timings)?;
            println!("{:<10} {:<9} {:>5} {:>6} {:>8} {:>8} {:>6}", "method", "scenario", "n", "beta", "coverage", "width", "zero");
            for c in &result.cells {
                println!(
                    "{:<10} {:<9} {:>5} {:>6} {:>8.3} {:>8.4} {:>6.3}",
                    c.method.name(), c.scenario, c.n, c.beta, c.coverage, c.mean_max_width, c.zero_rate
                );
            }
            println!("wrote {}", out.display());
        }
        Command::Pairs { dir, ids, alpha, methods, split_seed, fetch_base } => {
            let methods = methods.unwrap_or_else(|| Method::ALL.to_vec());
            let cfg = MethodConfig { alpha, ..MethodConfig::default() };
            let mut reports = Vec::new();
            for id in &ids {
                if let Some(base) = &fetch_base {
                    fetch_pair(base, id, &dir)?;
                }
                for swap in [false, true] {
                    let rec = load_pair_by_id(&dir, id, swap)?;
                    let mut report = analyze_pair(&rec, &methods, &cfg, RngSeed::new(split_seed, 0))?;
                    if swap {
                        report.id.push_str(":swapped");
                    }
                    reports.push(report);
                }
            }
            println!("{}", json_string(&reports)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
