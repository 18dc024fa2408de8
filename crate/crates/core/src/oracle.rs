//! Exact expectations for tiny configurations by exhaustive enumeration.
//!
//! Every step draws (side, price) uniformly from `2 · |prices|` outcomes per
//! market, so all `(2 · |prices|)^(markets · steps)` order sequences are
//! equally likely. Each sequence is replayed through [`run_scripted`], and the
//! outcomes are summed in exact integer arithmetic.
//!
//! With one market, the second market is fed buy orders at the lowest price;
//! with the coupler off it never trades and does not affect the first.

use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::config::SimConfig;
use crate::order_flow::{MarketId, Order, Side};
use crate::parallel::map_indexed;
use crate::simulation::run_scripted;

/// Upper bound on the number of enumerated sequences.
pub const MAX_SEQUENCES: u64 = 10_000_000;
pub const MAX_STEPS: u32 = 6;

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("enumeration would visit {0} sequences (limit {MAX_SEQUENCES})")]
    TooLarge(u128),
    #[error("invalid oracle configuration: {0}")]
    Invalid(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmallConfig {
    pub steps: u32,
    /// Distinct candidate prices, each drawn with equal probability.
    pub prices: Vec<i64>,
    pub hft_enabled: bool,
    /// 1 or 2.
    pub markets: u8,
}

impl SmallConfig {
    pub fn sequence_count(&self) -> Result<u64, OracleError> {
        if self.prices.is_empty() {
            return Err(OracleError::Invalid("price set is empty"));
        }
        let mut sorted = self.prices.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.prices.len() {
            return Err(OracleError::Invalid("prices must be distinct"));
        }
        if !(1..=2).contains(&self.markets) {
            return Err(OracleError::Invalid("markets must be 1 or 2"));
        }
        if self.markets == 1 && self.hft_enabled {
            return Err(OracleError::Invalid("the HFT coupler needs two markets"));
        }
        let outcomes = 2 * self.prices.len() as u128;
        let slots = u32::from(self.markets) * self.steps;
        let count = outcomes.checked_pow(slots).unwrap_or(u128::MAX);
        if self.steps > MAX_STEPS || count > u128::from(MAX_SEQUENCES) {
            return Err(OracleError::TooLarge(count));
        }
        Ok(count as u64)
    }

    fn sim_config(&self) -> SimConfig {
        SimConfig {
            steps: u64::from(self.steps),
            price_min: *self.prices.iter().min().expect("validated non-empty"),
            price_max: *self.prices.iter().max().expect("validated non-empty"),
            hft_enabled: self.hft_enabled,
            ..Default::default()
        }
    }

    /// Decodes sequence `index` into its per-step order pairs.
    fn script(&self, mut index: u64) -> Vec<(Order, Order)> {
        let outcomes = 2 * self.prices.len() as u64;
        let lowest = *self.prices.iter().min().expect("validated non-empty");
        let mut draw = |market: MarketId, step: u64| {
            let digit = index % outcomes;
            index /= outcomes;
            let side = if digit.is_multiple_of(2) { Side::Buy } else { Side::Sell };
            Order::new(step, market, side, self.prices[(digit / 2) as usize], step)
        };
        (0..u64::from(self.steps))
            .map(|step| {
                let first = draw(MarketId::FIRST, step);
                let second = if self.markets == 2 {
                    draw(MarketId::SECOND, step)
                } else {
                    Order::buy(step, MarketId::SECOND, lowest, step)
                };
                (first, second)
            })
            .collect()
    }
}

/// Exact sums over a block of sequences, per active market.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Totals {
    trades: i128,
    sequences_with_trade: i128,
    price_half_ticks: i128,
    price_half_ticks_sq: i128,
}

impl std::ops::Add for Totals {
    type Output = Totals;
    fn add(self, o: Totals) -> Totals {
        Totals {
            trades: self.trades + o.trades,
            sequences_with_trade: self.sequences_with_trade + o.sequences_with_trade,
            price_half_ticks: self.price_half_ticks + o.price_half_ticks,
            price_half_ticks_sq: self.price_half_ticks_sq + o.price_half_ticks_sq,
        }
    }
}

/// Exact expectations, per market (averaged over the active markets).
#[derive(Debug, Clone, PartialEq)]
pub struct ExactExpectations {
    pub sequences: u64,
    pub expected_volume: Rational,
    /// `expected_volume / steps`, zero when `steps == 0`.
    pub txn_probability: Rational,
    /// Probability that a market records at least one trade.
    pub prob_any_trade: Rational,
    /// Pooled mean trade price: expected price sum over expected volume.
    pub mean_price: Option<Rational>,
    /// Pooled (population) variance of trade prices, same weighting as `mean_price`.
    pub price_variance: Option<Rational>,
}

impl ExactExpectations {
    pub fn volatility(&self) -> Option<f64> {
        self.price_variance.map(|v| to_f64(v).sqrt())
    }
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Enumerates every order sequence of `cfg` and weighs the engine's outcomes.
pub fn exact_expectations(cfg: &SmallConfig) -> Result<ExactExpectations, OracleError> {
    let sequences = cfg.sequence_count()?;
    let sim_cfg = cfg.sim_config();
    let active = usize::from(cfg.markets);

    const BLOCK: u64 = 4096;
    let blocks = sequences.div_ceil(BLOCK);
    let totals = map_indexed(blocks, None, |block| {
        let start = block * BLOCK;
        let end = (start + BLOCK).min(sequences);
        (start..end)
            .map(|index| {
                let result =
                    run_scripted(&sim_cfg, &cfg.script(index)).expect("enumerated scripts respect the engine contract");
                result.trades[..active]
                    .iter()
                    .map(|trades| Totals {
                        trades: trades.len() as i128,
                        sequences_with_trade: i128::from(!trades.is_empty()),
                        price_half_ticks: trades.iter().map(|t| i128::from(t.price.half_ticks())).sum(),
                        price_half_ticks_sq: trades.iter().map(|t| i128::from(t.price.half_ticks()).pow(2)).sum(),
                    })
                    .fold(Totals::default(), |a, b| a + b)
            })
            .fold(Totals::default(), |a, b| a + b)
    })
    .into_iter()
    .fold(Totals::default(), |a, b| a + b);

    let weight = i128::from(sequences) * active as i128;
    let expected_volume = Rational::new(totals.trades, weight);
    let txn_probability = if cfg.steps == 0 {
        Rational::from_integer(0)
    } else {
        expected_volume / Rational::from_integer(i128::from(cfg.steps))
    };
    let (mean_price, price_variance) = if totals.trades == 0 {
        (None, None)
    } else {
        let mean = Rational::new(totals.price_half_ticks, 2 * totals.trades);
        let second_moment = Rational::new(totals.price_half_ticks_sq, 4 * totals.trades);
        (Some(mean), Some(second_moment - mean * mean))
    };
    Ok(ExactExpectations {
        sequences,
        expected_volume,
        txn_probability,
        prob_any_trade: Rational::new(totals.sequences_with_trade, weight),
        mean_price,
        price_variance,
    })
}

impl fmt::Display for ExactExpectations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |f: &mut fmt::Formatter<'_>, name: &str, value: Option<Rational>| match value {
            Some(r) => writeln!(f, "{name:<16} {r} ({})", to_f64(r)),
            None => writeln!(f, "{name:<16} undefined"),
        };
        writeln!(f, "{:<16} {}", "sequences", self.sequences)?;
        line(f, "expected_volume", Some(self.expected_volume))?;
        line(f, "txn_probability", Some(self.txn_probability))?;
        line(f, "prob_any_trade", Some(self.prob_any_trade))?;
        line(f, "mean_price", self.mean_price)?;
        line(f, "price_variance", self.price_variance)?;
        match self.volatility() {
            Some(v) => writeln!(f, "{:<16} {v}", "volatility"),
            None => writeln!(f, "{:<16} undefined", "volatility"),
        }
    }
}
