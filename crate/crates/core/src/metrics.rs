//! Per-run observables and their cross-run aggregation.
//!
//! Per market and run: mean transaction price, volatility (sample standard
//! deviation of transaction prices), volume (trade count) and transaction
//! probability (volume / steps). Cross legs contribute their midpoint price
//! once to each market's series. Two-market runs are reported as the average
//! of the two markets.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::SimConfig;
use crate::simulation::{Trade, TradeKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("no trades: mean price and volatility are undefined")]
    NoTrades,
    #[error("a single trade has no sample variance")]
    NoVariance,
    #[error("aggregation needs at least 2 runs, got {0}")]
    InsufficientRuns(usize),
    #[error("histogram needs bin_width > 0 and lo < hi (width {bin_width}, range [{lo}, {hi}])")]
    BadHistogram { bin_width: f64, lo: f64, hi: f64 },
    #[error("price {price} outside histogram range [{lo}, {hi}]")]
    OutOfRange { price: f64, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramSpec {
    pub bin_width: f64,
    pub lo: f64,
    pub hi: f64,
}

impl HistogramSpec {
    pub fn from_config(cfg: &SimConfig) -> Self {
        Self { bin_width: cfg.bin_width, lo: cfg.price_min as f64, hi: cfg.price_max as f64 }
    }

    fn bin_count(&self) -> Result<usize, MetricsError> {
        if !(self.bin_width > 0.0 && self.bin_width.is_finite() && self.lo < self.hi) {
            return Err(MetricsError::BadHistogram { bin_width: self.bin_width, lo: self.lo, hi: self.hi });
        }
        Ok(((self.hi - self.lo) / self.bin_width).ceil() as usize)
    }
}

/// `[lower, upper)`, except the last bin which is closed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bin {
    pub lower: f64,
    pub upper: f64,
    pub count: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bins: Vec<Bin>,
}

impl Histogram {
    pub fn empty(spec: &HistogramSpec) -> Result<Self, MetricsError> {
        let n = spec.bin_count()?;
        let bins = (0..n)
            .map(|k| Bin {
                lower: spec.lo + k as f64 * spec.bin_width,
                upper: if k + 1 == n { spec.hi } else { spec.lo + (k + 1) as f64 * spec.bin_width },
                count: 0,
            })
            .collect();
        Ok(Self { bins })
    }

    pub fn total(&self) -> u64 {
        self.bins.iter().map(|b| b.count).sum()
    }

    /// Adds `other`'s counts bin by bin. Both must share a layout.
    pub fn add(&mut self, other: &Histogram) {
        if self.bins.is_empty() {
            self.bins = other.bins.clone();
            return;
        }
        assert_eq!(self.bins.len(), other.bins.len(), "histogram layouts differ");
        for (mine, theirs) in self.bins.iter_mut().zip(&other.bins) {
            mine.count += theirs.count;
        }
    }
}

pub fn histogram(prices: &[f64], spec: &HistogramSpec) -> Result<Histogram, MetricsError> {
    let mut hist = Histogram::empty(spec)?;
    let last = hist.bins.len() - 1;
    for &price in prices {
        if !(spec.lo..=spec.hi).contains(&price) {
            return Err(MetricsError::OutOfRange { price, lo: spec.lo, hi: spec.hi });
        }
        let idx = (((price - spec.lo) / spec.bin_width).floor() as usize).min(last);
        hist.bins[idx].count += 1;
    }
    Ok(hist)
}

/// Mean and sample (n - 1) variance.
pub fn mean_and_variance(values: &[f64]) -> (Option<f64>, Option<f64>) {
    if values.is_empty() {
        return (None, None);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (Some(mean), None);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (Some(mean), Some(ss / (n - 1.0)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    /// `None` without trades.
    pub mean_price: Option<f64>,
    /// `None` with fewer than two trades.
    pub volatility: Option<f64>,
    /// Trade count. Fractional only after averaging two markets.
    pub volume: f64,
    pub steps: u64,
    /// `volume / steps`; zero when `steps == 0`.
    pub txn_probability: f64,
    /// Orders filled per order submitted. A local trade fills two of this
    /// market's orders, a cross leg fills one.
    pub order_fill_rate: f64,
    pub histogram: Histogram,
}

impl RunStats {
    /// Like [`run_stats`] but reports undefined moments as `None` instead of failing.
    pub fn summarize(trades: &[Trade], steps: u64, spec: &HistogramSpec) -> Result<Self, MetricsError> {
        let prices: Vec<f64> = trades.iter().map(|t| t.price.value()).collect();
        let (mean_price, variance) = mean_and_variance(&prices);
        let filled: u64 = trades
            .iter()
            .map(|t| match t.kind {
                TradeKind::Local => 2,
                TradeKind::Cross => 1,
            })
            .sum();
        let volume = trades.len() as f64;
        let per_step = |x: f64| if steps == 0 { 0.0 } else { x / steps as f64 };
        Ok(Self {
            mean_price,
            volatility: variance.map(f64::sqrt),
            volume,
            steps,
            txn_probability: per_step(volume),
            order_fill_rate: per_step(filled as f64),
            histogram: histogram(&prices, spec)?,
        })
    }
}

/// Observables for one market's trades. Fails when the mean or the sample
/// standard deviation is undefined.
pub fn run_stats(trades: &[Trade], steps: u64, spec: &HistogramSpec) -> Result<RunStats, MetricsError> {
    let stats = RunStats::summarize(trades, steps, spec)?;
    match (stats.mean_price, stats.volatility) {
        (None, _) => Err(MetricsError::NoTrades),
        (Some(_), None) => Err(MetricsError::NoVariance),
        _ => Ok(stats),
    }
}

/// Averages the scalar metrics of two markets and sums their histograms. A
/// metric missing in one market takes the other market's value.
pub fn per_market_average(first: &RunStats, second: &RunStats) -> RunStats {
    debug_assert_eq!(first.steps, second.steps);
    let avg = |a: f64, b: f64| (a + b) / 2.0;
    let avg_opt = |a: Option<f64>, b: Option<f64>| match (a, b) {
        (Some(a), Some(b)) => Some(avg(a, b)),
        (a, b) => a.or(b),
    };
    let mut hist = first.histogram.clone();
    hist.add(&second.histogram);
    RunStats {
        mean_price: avg_opt(first.mean_price, second.mean_price),
        volatility: avg_opt(first.volatility, second.volatility),
        volume: avg(first.volume, second.volume),
        steps: first.steps,
        txn_probability: avg(first.txn_probability, second.txn_probability),
        order_fill_rate: avg(first.order_fill_rate, second.order_fill_rate),
        histogram: hist,
    }
}

/// Cross-run summary of one metric. `sd`, `stderr` and `ci95` need two values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub n: usize,
    pub mean: f64,
    pub sd: Option<f64>,
    pub stderr: Option<f64>,
    /// `mean ± 2 · stderr`.
    pub ci95: Option<[f64; 2]>,
}

impl MetricSummary {
    pub fn from_values(values: &[f64]) -> Option<Self> {
        let (mean, variance) = mean_and_variance(values);
        let mean = mean?;
        let sd = variance.map(f64::sqrt);
        let stderr = sd.map(|sd| sd / (values.len() as f64).sqrt());
        Some(Self { n: values.len(), mean, sd, stderr, ci95: stderr.map(|se| [mean - 2.0 * se, mean + 2.0 * se]) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    MeanPrice,
    Volatility,
    Volume,
    TxnProbability,
    OrderFillRate,
}

impl Metric {
    pub const ALL: [Metric; 5] =
        [Metric::MeanPrice, Metric::Volatility, Metric::Volume, Metric::TxnProbability, Metric::OrderFillRate];

    pub fn name(self) -> &'static str {
        match self {
            Metric::MeanPrice => "mean_price",
            Metric::Volatility => "volatility",
            Metric::Volume => "volume",
            Metric::TxnProbability => "txn_probability",
            Metric::OrderFillRate => "order_fill_rate",
        }
    }

    pub fn of(self, stats: &RunStats) -> Option<f64> {
        match self {
            Metric::MeanPrice => stats.mean_price,
            Metric::Volatility => stats.volatility,
            Metric::Volume => Some(stats.volume),
            Metric::TxnProbability => Some(stats.txn_probability),
            Metric::OrderFillRate => Some(stats.order_fill_rate),
        }
    }
}

/// Cross-run summaries. A metric is `None` when no run defined it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub runs: usize,
    pub mean_price: Option<MetricSummary>,
    pub volatility: Option<MetricSummary>,
    pub volume: Option<MetricSummary>,
    pub txn_probability: Option<MetricSummary>,
    pub order_fill_rate: Option<MetricSummary>,
}

impl AggregateStats {
    /// Summarizes any number of runs; runs missing a metric are skipped for it.
    pub fn collect(all_runs: &[RunStats]) -> Self {
        let summary = |metric: Metric| {
            let values: Vec<f64> = all_runs.iter().filter_map(|s| metric.of(s)).collect();
            MetricSummary::from_values(&values)
        };
        Self {
            runs: all_runs.len(),
            mean_price: summary(Metric::MeanPrice),
            volatility: summary(Metric::Volatility),
            volume: summary(Metric::Volume),
            txn_probability: summary(Metric::TxnProbability),
            order_fill_rate: summary(Metric::OrderFillRate),
        }
    }

    pub fn get(&self, metric: Metric) -> Option<&MetricSummary> {
        match metric {
            Metric::MeanPrice => self.mean_price.as_ref(),
            Metric::Volatility => self.volatility.as_ref(),
            Metric::Volume => self.volume.as_ref(),
            Metric::TxnProbability => self.txn_probability.as_ref(),
            Metric::OrderFillRate => self.order_fill_rate.as_ref(),
        }
    }
}

/// Cross-run mean, sd, standard error and 95% interval per metric.
pub fn aggregate(all_runs: &[RunStats]) -> Result<AggregateStats, MetricsError> {
    if all_runs.len() < 2 {
        return Err(MetricsError::InsufficientRuns(all_runs.len()));
    }
    Ok(AggregateStats::collect(all_runs))
}
