use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hft_sync::config::parse_seed;
use hft_sync::oracle::{exact_expectations, SmallConfig};
use hft_sync::report::{write_histogram_csv, write_report, write_runs_csv};
use hft_sync::{run_experiment, Error, OutputFormat, Pairing, PriceModel, Scenario, SimConfig};

#[derive(Parser)]
#[command(name = "hftsync", version, about = "Zero-intelligence two-market simulation with an HFT synchronizer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded replications and write a report.
    Simulate(SimulateArgs),
    /// Exact expectations for a tiny configuration by enumeration.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioArg {
    Base,
    Hft,
    Compare,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum PriceModelArg {
    Discrete,
    Continuous,
}

#[derive(clap::Args)]
struct SimulateArgs {
    #[arg(long, value_enum, default_value = "compare")]
    scenario: ScenarioArg,
    #[arg(long, default_value_t = 10_000)]
    steps: u64,
    #[arg(long, default_value_t = 100)]
    runs: u32,
    /// Master seed, decimal or 0x-prefixed hex.
    #[arg(long, default_value = "0", value_parser = parse_seed_arg)]
    seed: u64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    price_min: i64,
    #[arg(long, default_value_t = 200, allow_negative_numbers = true)]
    price_max: i64,
    #[arg(long, value_enum, default_value = "discrete")]
    price_model: PriceModelArg,
    #[arg(long, default_value_t = 5.0)]
    bin_width: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    out: PathBuf,
    /// CSV of every trade leg across all runs.
    #[arg(long)]
    trade_log: Option<PathBuf>,
    /// CSV of per-run observables.
    #[arg(long)]
    runs_csv: Option<PathBuf>,
    /// CSV of the price histogram per scenario.
    #[arg(long)]
    hist_csv: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// With `--scenario compare`, draw base and HFT runs from separate seed streams.
    #[arg(long)]
    unpaired: bool,
}

#[derive(clap::Args)]
struct OracleArgs {
    #[arg(long)]
    steps: u32,
    /// Comma-separated candidate prices.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    prices: Vec<i64>,
    #[arg(long)]
    hft: bool,
    /// 1 or 2 (defaults to 2 with --hft, else 1).
    #[arg(long)]
    markets: Option<u8>,
}

fn parse_seed_arg(text: &str) -> Result<u64, String> {
    parse_seed(text).map_err(|e| e.to_string())
}

fn simulate(args: SimulateArgs) -> Result<(), Error> {
    let scenario = match args.scenario {
        ScenarioArg::Base => Scenario::Base,
        ScenarioArg::Hft => Scenario::Hft,
        ScenarioArg::Compare => Scenario::Compare,
    };
    let pairing = match (scenario, args.unpaired) {
        (Scenario::Compare, false) => Pairing::Paired,
        _ => Pairing::Independent,
    };
    let cfg = SimConfig {
        steps: args.steps,
        runs: args.runs,
        price_min: args.price_min,
        price_max: args.price_max,
        price_model: match args.price_model {
            PriceModelArg::Discrete => PriceModel::Discrete,
            PriceModelArg::Continuous => PriceModel::Continuous,
        },
        hft_enabled: scenario == Scenario::Hft,
        master_seed: args.seed,
        bin_width: args.bin_width,
        format: match args.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        },
        trade_log: args.trade_log,
        workers: args.workers,
        ..Default::default()
    };
    let report = run_experiment(&cfg, scenario, pairing)?;
    write_report(&report, cfg.format, &args.out)?;
    if let Some(path) = &args.runs_csv {
        write_runs_csv(&report, path)?;
    }
    if let Some(path) = &args.hist_csv {
        write_histogram_csv(&report, path)?;
    }
    for s in &report.scenarios {
        let fmt = |m: Option<&hft_sync::metrics::MetricSummary>| {
            m.map_or("n/a".to_string(), |m| format!("{:.4} (sd {:.4})", m.mean, m.sd.unwrap_or(f64::NAN)))
        };
        eprintln!(
            "{:>4}: price {}  volatility {}  volume {}  probability {}",
            s.scenario.name(),
            fmt(s.aggregate.mean_price.as_ref()),
            fmt(s.aggregate.volatility.as_ref()),
            fmt(s.aggregate.volume.as_ref()),
            fmt(s.aggregate.txn_probability.as_ref()),
        );
    }
    eprintln!("wrote {} in {:.2}s", args.out.display(), report.wall_clock_seconds);
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<(), Error> {
    let cfg = SmallConfig {
        steps: args.steps,
        prices: args.prices,
        hft_enabled: args.hft,
        markets: args.markets.unwrap_or(if args.hft { 2 } else { 1 }),
    };
    print!("{}", exact_expectations(&cfg)?);
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Oracle(args) => oracle(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let usage = e.is_usage() || matches!(e, Error::Oracle(_));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}
