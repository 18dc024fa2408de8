//! Two-market zero-intelligence continuous double auction with an idealized
//! high-frequency trader that synchronizes the markets, plus the seeded Monte
//! Carlo harness used to measure liquidity, volatility and price accuracy.
//!
//! Layering, bottom-up:
//!
//! - [`order_flow`]: seeded random order stream and per-run seed derivation.
//! - [`order_book`]: one market's bid/ask lists and the maker-price matching rule.
//! - [`market`]: match-or-insert per time step, clearing the book on a trade.
//! - [`hft_coupler`]: cross-market crossing detection and the midpoint trade pair.
//! - [`simulation`]: the time-step loop over both markets.
//! - [`metrics`]: per-run observables, cross-run aggregation and histograms.
//! - [`oracle`]: exact enumeration of small configurations.
//! - [`experiment`] and [`report`]: the replication harness and its file outputs.
//!
//! With the default `parallel` feature, replications are spread over a rayon
//! pool. Without it every batch runs sequentially; results are identical either
//! way because each run owns a seed derived from its index.

pub mod config;
pub mod error;
pub mod experiment;
pub mod hft_coupler;
pub mod market;
pub mod metrics;
pub mod oracle;
pub mod order_book;
pub mod order_flow;
pub mod parallel;
pub mod report;
pub mod simulation;

pub use config::{OutputFormat, PriceModel, SimConfig};
pub use error::{ConfigError, Error, SimError};
pub use experiment::{run_experiment, Pairing, Report, Scenario};
pub use hft_coupler::{execute_cross, try_cross, CrossMatch};
pub use market::{MarketState, StepOutcome};
pub use metrics::{aggregate, histogram, per_market_average, run_stats, AggregateStats, RunStats};
pub use order_book::{Book, LocalTrade, TieBreak};
pub use order_flow::{derive_run_seed, MarketId, Order, OrderGenerator, OrderId, Side};
pub use simulation::{run, run_scripted, RunResult, Simulation, Trade, TradeKind, TradePrice};
