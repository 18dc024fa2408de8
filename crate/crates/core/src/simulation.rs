//! The per-run time-step loop.
//!
//! Each step draws one order per market from the run's generator (market 0
//! first), steps both markets, and, with HFT enabled and no local trade in
//! either market, lets the coupler take a cross-market crossing.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::SimConfig;
use crate::error::{ConfigError, SimError};
use crate::hft_coupler::{execute_cross, try_cross, CrossMatch};
use crate::market::{MarketState, OrderAccounting};
use crate::order_book::LocalTrade;
use crate::order_flow::{MarketId, Order, OrderGenerator, OrderId};

/// An exact transaction price, stored in half-ticks so cross-market midpoints
/// need no rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TradePrice {
    half_ticks: i64,
    ticks_per_unit: i64,
}

impl TradePrice {
    pub fn from_ticks(ticks: i64, ticks_per_unit: i64) -> Self {
        Self { half_ticks: 2 * ticks, ticks_per_unit }
    }

    pub fn from_half_ticks(half_ticks: i64, ticks_per_unit: i64) -> Self {
        Self { half_ticks, ticks_per_unit }
    }

    pub fn half_ticks(self) -> i64 {
        self.half_ticks
    }

    /// Price in units of the configured price range. Exact: the divisor is a
    /// power of two.
    pub fn value(self) -> f64 {
        self.half_ticks as f64 / (2 * self.ticks_per_unit) as f64
    }
}

impl fmt::Display for TradePrice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TradeKind {
    /// Incoming order met a resting order in the same market.
    Local,
    /// One leg of an HFT midpoint trade across the two markets.
    Cross,
}

impl fmt::Display for TradeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TradeKind::Local => "local",
            TradeKind::Cross => "cross",
        })
    }
}

/// A transaction as recorded by one market.
///
/// For `Local` trades `maker_id` is the resting order and `taker_id` the
/// incoming one. For `Cross` legs `maker_id` is this market's resting order
/// and `taker_id` the order in the other market it was matched against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trade {
    pub step: u64,
    pub market: MarketId,
    pub kind: TradeKind,
    pub price: TradePrice,
    pub maker_id: OrderId,
    pub taker_id: OrderId,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepReport {
    pub local: [Option<LocalTrade>; 2],
    pub cross: Option<CrossMatch>,
}

/// Both markets of one run, advanced one step at a time.
#[derive(Debug, Clone)]
pub struct Simulation {
    markets: [MarketState; 2],
    hft_enabled: bool,
    step: u64,
}

impl Simulation {
    pub fn new(cfg: &SimConfig) -> Result<Self, ConfigError> {
        cfg.validate_run()?;
        let markets =
            MarketId::BOTH.map(|id| MarketState::new(id, cfg.tie_break, cfg.ticks_per_unit(), cfg.tick_bounds()));
        Ok(Self { markets, hft_enabled: cfg.hft_enabled, step: 0 })
    }

    pub fn markets(&self) -> &[MarketState; 2] {
        &self.markets
    }

    /// Index of the next step.
    pub fn current_step(&self) -> u64 {
        self.step
    }

    /// Submits one order to each market, then runs the HFT check.
    pub fn step(&mut self, orders: [Order; 2]) -> Result<StepReport, SimError> {
        let step = self.step;
        for order in &orders {
            if order.step != step {
                return Err(SimError::StepMismatch { order: order.id, expected: step, got: order.step });
            }
        }
        let mut report = StepReport::default();
        for (slot, (market, order)) in report.local.iter_mut().zip(self.markets.iter_mut().zip(orders)) {
            *slot = market.step(order)?.trade;
        }
        if self.hft_enabled && report.local.iter().all(Option::is_none) {
            if let Some(m) = try_cross(self.markets[0].book(), self.markets[1].book()) {
                execute_cross(&mut self.markets, &m, step)?;
                report.cross = Some(m);
            }
        }
        self.step += 1;
        Ok(report)
    }

    pub fn finish(self, cfg: &SimConfig, seed: Option<u64>) -> RunResult {
        let accounting = self.markets.each_ref().map(MarketState::accounting);
        let resting_at_end = self.markets.each_ref().map(|m| m.book().len());
        RunResult {
            seed,
            steps: self.step,
            config: cfg.clone(),
            accounting,
            resting_at_end,
            trades: self.markets.map(MarketState::into_trades),
        }
    }
}

/// Everything one run produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    /// `None` for scripted runs.
    pub seed: Option<u64>,
    pub steps: u64,
    pub config: SimConfig,
    pub trades: [Vec<Trade>; 2],
    pub accounting: [OrderAccounting; 2],
    pub resting_at_end: [usize; 2],
}

impl RunResult {
    pub fn orders_submitted(&self, market: MarketId) -> u64 {
        self.accounting[market.index()].submitted
    }

    pub fn total_trades(&self) -> usize {
        self.trades.iter().map(Vec::len).sum()
    }

    /// Conservation of orders in both markets.
    pub fn accounting_balances(&self) -> bool {
        self.accounting.iter().zip(self.resting_at_end).all(|(a, resting)| a.balances(resting))
    }
}

/// Runs `cfg.steps` steps with orders drawn from a generator seeded by `seed`.
pub fn run(cfg: &SimConfig, seed: u64) -> Result<RunResult, SimError> {
    let mut sim = Simulation::new(cfg)?;
    let mut orders = OrderGenerator::from_seed(seed, cfg);
    for step in 0..cfg.steps {
        let first = orders.next_order(step, MarketId::FIRST);
        let second = orders.next_order(step, MarketId::SECOND);
        sim.step([first, second])?;
    }
    Ok(sim.finish(cfg, Some(seed)))
}

/// Runs the same loop as [`run`] on injected orders, one pair per step.
pub fn run_scripted(cfg: &SimConfig, script: &[(Order, Order)]) -> Result<RunResult, SimError> {
    if script.len() as u64 != cfg.steps {
        return Err(ConfigError::ScriptLength { expected: cfg.steps, got: script.len() as u64 }.into());
    }
    let mut sim = Simulation::new(cfg)?;
    for &(first, second) in script {
        sim.step([first, second])?;
    }
    Ok(sim.finish(cfg, None))
}
