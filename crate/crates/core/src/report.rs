//! File outputs: JSON/CSV reports, per-run and histogram tables, trade log.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::config::OutputFormat;
use crate::error::Error;
use crate::experiment::{Report, ScenarioKind};
use crate::metrics::Metric;
use crate::simulation::Trade;

/// A trade tagged with the scenario and run that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeLogEntry {
    pub scenario: ScenarioKind,
    pub run: u64,
    pub trade: Trade,
}

fn create(path: &Path) -> Result<BufWriter<File>, Error> {
    File::create(path).map(BufWriter::new).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<File>, Error> {
    csv::Writer::from_path(path).map_err(|source| Error::Csv { path: path.to_path_buf(), source })
}

fn opt(value: Option<f64>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

pub fn to_json(report: &Report) -> serde_json::Result<String> {
    serde_json::to_string_pretty(report)
}

/// Aggregate table: a header, then one row per (scenario, metric).
pub fn to_csv(report: &Report) -> Result<String, csv::Error> {
    let mut wtr = csv::Writer::from_writer(Vec::new());
    wtr.write_record(["scenario", "metric", "n", "mean", "sd", "stderr", "ci95_lo", "ci95_hi"])?;
    for scenario in &report.scenarios {
        for metric in Metric::ALL {
            let summary = scenario.aggregate.get(metric);
            wtr.write_record([
                scenario.scenario.name().to_string(),
                metric.name().to_string(),
                summary.map_or(0, |s| s.n).to_string(),
                opt(summary.map(|s| s.mean)),
                opt(summary.and_then(|s| s.sd)),
                opt(summary.and_then(|s| s.stderr)),
                opt(summary.and_then(|s| s.ci95).map(|ci| ci[0])),
                opt(summary.and_then(|s| s.ci95).map(|ci| ci[1])),
            ])?;
        }
    }
    let bytes = wtr.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_report(report: &Report, format: OutputFormat, path: &Path) -> Result<(), Error> {
    let body = match format {
        OutputFormat::Json => to_json(report).map_err(|source| Error::Json { path: path.to_path_buf(), source })?,
        OutputFormat::Csv => to_csv(report).map_err(|source| Error::Csv { path: path.to_path_buf(), source })?,
    };
    let mut out = create(path)?;
    out.write_all(body.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// One row per run and scenario.
pub fn write_runs_csv(report: &Report, path: &Path) -> Result<(), Error> {
    let wrap = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut wtr = csv_writer(path)?;
    wtr.write_record([
        "scenario",
        "run",
        "seed",
        "mean_price",
        "volatility",
        "volume",
        "txn_probability",
        "order_fill_rate",
        "volume_market0",
        "volume_market1",
    ])
    .map_err(wrap)?;
    for scenario in &report.scenarios {
        for row in &scenario.runs {
            wtr.write_record([
                scenario.scenario.name().to_string(),
                row.run.to_string(),
                row.seed.to_string(),
                opt(row.mean_price),
                opt(row.volatility),
                row.volume.to_string(),
                row.txn_probability.to_string(),
                row.order_fill_rate.to_string(),
                row.volume_per_market[0].to_string(),
                row.volume_per_market[1].to_string(),
            ])
            .map_err(wrap)?;
        }
    }
    wtr.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Price histogram per scenario, for plotting.
pub fn write_histogram_csv(report: &Report, path: &Path) -> Result<(), Error> {
    let wrap = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut wtr = csv_writer(path)?;
    wtr.write_record(["scenario", "bin_lower", "bin_upper", "count"]).map_err(wrap)?;
    for scenario in &report.scenarios {
        for bin in &scenario.histogram.bins {
            wtr.write_record([
                scenario.scenario.name().to_string(),
                bin.lower.to_string(),
                bin.upper.to_string(),
                bin.count.to_string(),
            ])
            .map_err(wrap)?;
        }
    }
    wtr.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

/// Header plus one row per recorded trade leg.
pub fn write_trade_log(entries: &[TradeLogEntry], path: &Path) -> Result<(), Error> {
    let wrap = |source| Error::Csv { path: path.to_path_buf(), source };
    let mut wtr = csv_writer(path)?;
    wtr.write_record(["scenario", "run", "step", "market", "kind", "price", "maker_id", "taker_id"]).map_err(wrap)?;
    for e in entries {
        let t = &e.trade;
        wtr.write_record([
            e.scenario.name().to_string(),
            e.run.to_string(),
            t.step.to_string(),
            t.market.to_string(),
            t.kind.to_string(),
            t.price.to_string(),
            t.maker_id.to_string(),
            t.taker_id.to_string(),
        ])
        .map_err(wrap)?;
    }
    wtr.flush().map_err(|source| Error::Io { path: path.to_path_buf(), source })
}
