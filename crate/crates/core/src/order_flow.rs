//! Zero-intelligence order stream.
//!
//! Each order is a unit-size limit order whose side is a fair coin flip and
//! whose price is uniform over the configured bounds. Generators are seeded
//! from a 64-bit value and use ChaCha8, so a seed reproduces the same stream
//! on every platform.

use std::fmt;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::SimConfig;

pub type OrderId = u64;

/// Every order in the model carries exactly one unit.
pub const ORDER_SIZE: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Buy,
    Sell,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Buy => Side::Sell,
            Side::Sell => Side::Buy,
        }
    }
}

/// One of the two exchanges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MarketId(u8);

impl MarketId {
    pub const FIRST: MarketId = MarketId(0);
    pub const SECOND: MarketId = MarketId(1);
    pub const BOTH: [MarketId; 2] = [MarketId::FIRST, MarketId::SECOND];

    pub fn new(index: usize) -> Option<MarketId> {
        match index {
            0 => Some(MarketId::FIRST),
            1 => Some(MarketId::SECOND),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn other(self) -> MarketId {
        MarketId(1 - self.0)
    }
}

impl fmt::Display for MarketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A unit-size limit order. `price` is in ticks (see [`SimConfig::ticks_per_unit`]).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Order {
    pub id: OrderId,
    pub market: MarketId,
    pub side: Side,
    pub price: i64,
    pub step: u64,
}

impl Order {
    pub fn new(id: OrderId, market: MarketId, side: Side, price: i64, step: u64) -> Self {
        Self { id, market, side, price, step }
    }

    pub fn buy(id: OrderId, market: MarketId, price: i64, step: u64) -> Self {
        Self::new(id, market, Side::Buy, price, step)
    }

    pub fn sell(id: OrderId, market: MarketId, price: i64, step: u64) -> Self {
        Self::new(id, market, Side::Sell, price, step)
    }

    pub fn size(&self) -> u32 {
        ORDER_SIZE
    }
}

/// Draws orders for both markets from a single generator, numbering them
/// per market in submission order.
#[derive(Debug, Clone)]
pub struct OrderGenerator<R = ChaCha8Rng> {
    rng: R,
    min_tick: i64,
    max_tick: i64,
    next_ids: [OrderId; 2],
}

impl OrderGenerator<ChaCha8Rng> {
    pub fn from_seed(seed: u64, cfg: &SimConfig) -> Self {
        Self::with_rng(ChaCha8Rng::seed_from_u64(seed), cfg)
    }
}

impl<R: RngCore> OrderGenerator<R> {
    pub fn with_rng(rng: R, cfg: &SimConfig) -> Self {
        let (min_tick, max_tick) = cfg.tick_bounds();
        debug_assert!(min_tick <= max_tick);
        Self { rng, min_tick, max_tick, next_ids: [0; 2] }
    }

    pub fn next_order(&mut self, step: u64, market: MarketId) -> Order {
        let side = if self.rng.random_bool(0.5) { Side::Buy } else { Side::Sell };
        let price = self.rng.random_range(self.min_tick..=self.max_tick);
        let slot = &mut self.next_ids[market.index()];
        let id = *slot;
        *slot += 1;
        Order { id, market, side, price, step }
    }
}

/// Seed for replication `run_index` under `master_seed`.
///
/// The index is spread by the 64-bit golden-ratio constant and then passed
/// through the SplitMix64 finalizer. Both steps are bijections on `u64`, so
/// distinct indices under one master seed never collide.
pub fn derive_run_seed(master_seed: u64, run_index: u64) -> u64 {
    const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut z = master_seed.wrapping_add(run_index.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    struct MaxDraw;

    impl RngCore for MaxDraw {
        fn next_u32(&mut self) -> u32 {
            u32::MAX
        }
        fn next_u64(&mut self) -> u64 {
            u64::MAX
        }
        fn fill_bytes(&mut self, dest: &mut [u8]) {
            dest.fill(0xFF);
        }
    }

    #[test]
    fn degenerate_range_always_yields_that_price() {
        let cfg = SimConfig { price_min: 5, price_max: 5, ..Default::default() };
        let mut gen = OrderGenerator::from_seed(7, &cfg);
        for step in 0..1000 {
            assert_eq!(gen.next_order(step, MarketId::FIRST).price, 5);
        }
    }

    #[test]
    fn maximal_draw_maps_to_price_max() {
        let cfg = SimConfig::default();
        let mut gen = OrderGenerator::with_rng(MaxDraw, &cfg);
        assert_eq!(gen.next_order(0, MarketId::FIRST).price, 200);
    }

    #[test]
    fn ids_increase_per_market() {
        let cfg = SimConfig::default();
        let mut gen = OrderGenerator::from_seed(1, &cfg);
        let a0 = gen.next_order(0, MarketId::FIRST);
        let b0 = gen.next_order(0, MarketId::SECOND);
        let a1 = gen.next_order(1, MarketId::FIRST);
        assert_eq!((a0.id, b0.id, a1.id), (0, 0, 1));
        assert_eq!(a1.size(), 1);
    }

    #[test]
    fn equal_seeds_give_identical_streams() {
        let cfg = SimConfig::default();
        let mut a = OrderGenerator::from_seed(99, &cfg);
        let mut b = OrderGenerator::from_seed(99, &cfg);
        for step in 0..10_000 {
            assert_eq!(a.next_order(step, MarketId::FIRST), b.next_order(step, MarketId::FIRST));
        }
    }

    #[test]
    fn run_seeds_are_deterministic_and_distinct() {
        let s = 0xDEAD_BEEF;
        assert_ne!(derive_run_seed(s, 0), derive_run_seed(s, 1));
        assert_eq!(derive_run_seed(s, 5), derive_run_seed(s, 5));
        let seeds: HashSet<u64> = (0..10_000).map(|k| derive_run_seed(s, k)).collect();
        assert_eq!(seeds.len(), 10_000);
    }

    #[test]
    fn million_draws_match_the_uniform_law() {
        const N: usize = 1_000_000;
        let cfg = SimConfig::default();
        let mut gen = OrderGenerator::from_seed(2024, &cfg);
        let mut buys = 0usize;
        let mut sum = 0i64;
        let mut counts = [0u64; 200];
        for step in 0..N as u64 {
            let order = gen.next_order(step, MarketId::FIRST);
            assert!((1..=200).contains(&order.price));
            buys += usize::from(order.side == Side::Buy);
            sum += order.price;
            counts[(order.price - 1) as usize] += 1;
        }
        let buy_fraction = buys as f64 / N as f64;
        let mean = sum as f64 / N as f64;
        // 4 binomial sd at n = 1e6 is 0.002; 0.2 is ~3.5 sd of the uniform mean.
        assert!((buy_fraction - 0.5).abs() <= 0.002, "buy fraction {buy_fraction}");
        assert!((mean - 100.5).abs() <= 0.2, "mean price {mean}");

        let expected = N as f64 / 200.0;
        let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
        // Upper 0.001 quantile of chi-square with 199 degrees of freedom.
        assert!(chi2 < 266.386, "chi-square {chi2}");
    }
}
