//! Replication harness: many independently seeded runs per scenario,
//! per-run observables, cross-run aggregation.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::error::Error;
use crate::metrics::{per_market_average, AggregateStats, Histogram, HistogramSpec, RunStats};
use crate::order_flow::derive_run_seed;
use crate::parallel::map_indexed;
use crate::report::{write_trade_log, TradeLogEntry};
use crate::simulation::run;

pub const SCHEMA_VERSION: u32 = 1;

/// Mixed into the master seed for the HFT scenario's independent seed stream.
const HFT_STREAM_SALT: u64 = 0x4846_545F_5354_524D;

/// What to run: one scenario, or both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Base,
    Hft,
    Compare,
}

impl Scenario {
    pub fn kinds(self) -> &'static [ScenarioKind] {
        match self {
            Scenario::Base => &[ScenarioKind::Base],
            Scenario::Hft => &[ScenarioKind::Hft],
            Scenario::Compare => &[ScenarioKind::Base, ScenarioKind::Hft],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    /// Two independent markets, no coupler.
    Base,
    /// Same markets with the HFT coupler.
    Hft,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Base => "base",
            ScenarioKind::Hft => "hft",
        }
    }

    pub fn hft_enabled(self) -> bool {
        self == ScenarioKind::Hft
    }
}

/// Whether the HFT scenario reuses the base scenario's run seeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Pairing {
    /// Separate seed streams per scenario.
    #[default]
    Independent,
    /// Run `k` of both scenarios uses the same seed.
    Paired,
}

impl Pairing {
    pub fn run_seed(self, master_seed: u64, kind: ScenarioKind, run_index: u64) -> u64 {
        let stream = match (self, kind) {
            (Pairing::Independent, ScenarioKind::Hft) => master_seed ^ HFT_STREAM_SALT,
            _ => master_seed,
        };
        derive_run_seed(stream, run_index)
    }

    fn describe(self) -> &'static str {
        match self {
            Pairing::Independent => {
                "run k seed = splitmix64(stream + (k + 1) * 0x9E3779B97F4A7C15); \
                 stream = master_seed for base, master_seed ^ 0x4846545F5354524D for hft"
            }
            Pairing::Paired => {
                "run k seed = splitmix64(master_seed + (k + 1) * 0x9E3779B97F4A7C15), \
                 shared by base and hft"
            }
        }
    }
}

/// One run's observables averaged over the two markets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRow {
    pub run: u64,
    pub seed: u64,
    pub mean_price: Option<f64>,
    pub volatility: Option<f64>,
    pub volume: f64,
    pub txn_probability: f64,
    pub order_fill_rate: f64,
    pub volume_per_market: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub scenario: ScenarioKind,
    pub hft_enabled: bool,
    pub aggregate: AggregateStats,
    pub runs: Vec<RunRow>,
    /// Transaction prices summed over runs and markets.
    pub histogram: Histogram,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub engine_version: String,
    pub config: SimConfig,
    pub pairing: Pairing,
    pub seed_derivation: String,
    pub scenarios: Vec<ScenarioReport>,
    /// Excluded from determinism comparisons.
    pub wall_clock_seconds: f64,
}

impl Report {
    pub fn scenario(&self, kind: ScenarioKind) -> Option<&ScenarioReport> {
        self.scenarios.iter().find(|s| s.scenario == kind)
    }
}

struct RunOutput {
    row: RunRow,
    stats: RunStats,
    trades: Option<Vec<TradeLogEntry>>,
}

fn run_one(
    cfg: &SimConfig,
    kind: ScenarioKind,
    run_index: u64,
    seed: u64,
    spec: &HistogramSpec,
    keep_trades: bool,
) -> Result<RunOutput, Error> {
    let result = run(cfg, seed)?;
    let per_market = result
        .trades
        .iter()
        .map(|trades| RunStats::summarize(trades, result.steps, spec))
        .collect::<Result<Vec<_>, _>>()?;
    let stats = per_market_average(&per_market[0], &per_market[1]);
    let row = RunRow {
        run: run_index,
        seed,
        mean_price: stats.mean_price,
        volatility: stats.volatility,
        volume: stats.volume,
        txn_probability: stats.txn_probability,
        order_fill_rate: stats.order_fill_rate,
        volume_per_market: [per_market[0].volume, per_market[1].volume],
    };
    let trades = keep_trades.then(|| {
        result.trades.iter().flatten().map(|&trade| TradeLogEntry { scenario: kind, run: run_index, trade }).collect()
    });
    Ok(RunOutput { row, stats, trades })
}

/// Runs `cfg.runs` replications of each scenario in `scenario` and
/// aggregates them. Writes the trade log when `cfg.trade_log` is set.
pub fn run_experiment(cfg: &SimConfig, scenario: Scenario, pairing: Pairing) -> Result<Report, Error> {
    cfg.validate()?;
    let started = Instant::now();
    let spec = HistogramSpec::from_config(cfg);
    let keep_trades = cfg.trade_log.is_some();
    let mut scenarios = Vec::new();
    let mut trade_log = Vec::new();

    for &kind in scenario.kinds() {
        let scenario_cfg = cfg.with_hft(kind.hft_enabled());
        let outputs = map_indexed(u64::from(cfg.runs), cfg.workers, |k| {
            let seed = pairing.run_seed(cfg.master_seed, kind, k);
            run_one(&scenario_cfg, kind, k, seed, &spec, keep_trades)
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

        let mut histogram = Histogram::empty(&spec)?;
        let mut rows = Vec::with_capacity(outputs.len());
        let mut stats = Vec::with_capacity(outputs.len());
        for output in outputs {
            histogram.add(&output.stats.histogram);
            rows.push(output.row);
            stats.push(output.stats);
            if let Some(trades) = output.trades {
                trade_log.extend(trades);
            }
        }
        scenarios.push(ScenarioReport {
            scenario: kind,
            hft_enabled: kind.hft_enabled(),
            aggregate: AggregateStats::collect(&stats),
            runs: rows,
            histogram,
        });
    }

    if let Some(path) = &cfg.trade_log {
        write_trade_log(&trade_log, path)?;
    }

    Ok(Report {
        schema_version: SCHEMA_VERSION,
        engine_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        pairing,
        seed_derivation: pairing.describe().to_string(),
        scenarios,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(runs: u32, steps: u64) -> SimConfig {
        SimConfig { runs, steps, ..Default::default() }
    }

    #[test]
    fn compare_runs_both_scenarios() {
        let report = run_experiment(&small(4, 500), Scenario::Compare, Pairing::Paired).unwrap();
        assert_eq!(report.scenarios.len(), 2);
        let base = report.scenario(ScenarioKind::Base).unwrap();
        let hft = report.scenario(ScenarioKind::Hft).unwrap();
        assert!(!base.hft_enabled && hft.hft_enabled);
        let seeds = |s: &ScenarioReport| s.runs.iter().map(|r| r.seed).collect::<Vec<_>>();
        assert_eq!(seeds(base), seeds(hft));
        assert_eq!(base.runs.len(), 4);
        assert_eq!(report.schema_version, 1);
    }

    #[test]
    fn independent_pairing_uses_distinct_streams() {
        let a = Pairing::Independent.run_seed(7, ScenarioKind::Base, 0);
        let b = Pairing::Independent.run_seed(7, ScenarioKind::Hft, 0);
        assert_ne!(a, b);
        assert_eq!(a, Pairing::Paired.run_seed(7, ScenarioKind::Hft, 0));
    }

    #[test]
    fn histogram_counts_every_trade_of_both_markets() {
        let report = run_experiment(&small(3, 400), Scenario::Hft, Pairing::Independent).unwrap();
        let s = &report.scenarios[0];
        let trades: f64 = s.runs.iter().map(|r| r.volume_per_market.iter().sum::<f64>()).sum();
        assert_eq!(s.histogram.total() as f64, trades);
    }

    #[test]
    fn degenerate_single_empty_run() {
        let report = run_experiment(&small(1, 0), Scenario::Base, Pairing::Independent).unwrap();
        let s = &report.scenarios[0];
        assert_eq!(s.runs[0].volume, 0.0);
        assert_eq!(s.runs[0].txn_probability, 0.0);
        let volume = s.aggregate.volume.unwrap();
        assert_eq!((volume.mean, volume.sd), (0.0, None));
        assert!(s.aggregate.mean_price.is_none());
    }

    #[test]
    fn invalid_config_is_a_usage_error() {
        let err = run_experiment(&small(0, 10), Scenario::Base, Pairing::Independent).unwrap_err();
        assert!(err.is_usage());
    }

    #[test]
    fn worker_count_does_not_change_the_report() {
        let mut cfg = small(6, 300);
        cfg.workers = Some(1);
        let mut a = run_experiment(&cfg, Scenario::Compare, Pairing::Independent).unwrap();
        cfg.workers = Some(4);
        let mut b = run_experiment(&cfg, Scenario::Compare, Pairing::Independent).unwrap();
        a.wall_clock_seconds = 0.0;
        b.wall_clock_seconds = 0.0;
        b.config.workers = a.config.workers;
        assert_eq!(a, b);
    }
}
