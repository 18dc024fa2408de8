use std::path::PathBuf;

use thiserror::Error;

use crate::metrics::MetricsError;
use crate::oracle::OracleError;
use crate::order_flow::{MarketId, OrderId};

/// Rejected configuration. Surfaced before any simulation step runs.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("price bounds out of order: price_min {min} > price_max {max}")]
    PriceBounds { min: i64, max: i64 },
    #[error("runs must be at least 1")]
    NoRuns,
    #[error("bin width must be positive and finite, got {0}")]
    BinWidth(f64),
    #[error("worker count must be at least 1")]
    NoWorkers,
    #[error("script has {got} steps but the configuration asks for {expected}")]
    ScriptLength { expected: u64, got: u64 },
    #[error("invalid seed {0:?}: expected decimal or 0x-prefixed hex")]
    Seed(String),
}

/// Errors raised while stepping the markets.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("order {order} is tagged for market {got} but was sent to market {expected}")]
    MarketMismatch { order: OrderId, expected: MarketId, got: MarketId },
    #[error("order id {got} in market {market} is not above the previous id {previous}")]
    NonMonotoneId { market: MarketId, previous: OrderId, got: OrderId },
    #[error("order price {price} outside [{min}, {max}] ticks")]
    PriceOutOfRange { price: i64, min: i64, max: i64 },
    #[error("insert of order {0} would cross the book")]
    WouldCross(OrderId),
    #[error("order {order} is stamped for step {got} but submitted at step {expected}")]
    StepMismatch { order: OrderId, expected: u64, got: u64 },
    #[error("cross match is stale: books changed since it was computed")]
    StaleCross,
}

/// Top-level error for the harness and CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
}

impl Error {
    /// True for errors caused by the caller's configuration rather than the run itself.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Sim(SimError::Config(_)))
    }
}
