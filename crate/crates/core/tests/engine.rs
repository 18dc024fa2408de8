//! Engine checks against an independent, deliberately naive reimplementation
//! of the market rules, and Monte Carlo agreement with exact enumeration.

use proptest::prelude::*;

use hft_sync::oracle::{exact_expectations, to_f64, SmallConfig};
use hft_sync::{derive_run_seed, run, run_scripted, MarketId, Order, Side, SimConfig, TradeKind};

type Draw = (Side, i64);
type Script = [(Draw, Draw)];

/// Unsorted resting lists, full scans, prices doubled to stay integral.
#[derive(Default, Clone)]
struct NaiveMarket {
    bids: Vec<i64>,
    asks: Vec<i64>,
    prices: Vec<i64>,
}

impl NaiveMarket {
    fn submit(&mut self, side: Side, price: i64) -> bool {
        let trade = match side {
            Side::Buy => self.asks.iter().copied().filter(|&a| a <= price).min(),
            Side::Sell => self.bids.iter().copied().filter(|&b| b >= price).max(),
        };
        match trade {
            Some(p) => {
                self.prices.push(2 * p);
                self.bids.clear();
                self.asks.clear();
                true
            }
            None => {
                match side {
                    Side::Buy => self.bids.push(price),
                    Side::Sell => self.asks.push(price),
                }
                false
            }
        }
    }
}

fn naive_run(script: &Script, hft: bool) -> [Vec<i64>; 2] {
    let mut m = [NaiveMarket::default(), NaiveMarket::default()];
    for &(first, second) in script {
        let t0 = m[0].submit(first.0, first.1);
        let t1 = m[1].submit(second.0, second.1);
        if hft && !t0 && !t1 {
            for (bid_side, ask_side) in [(0, 1), (1, 0)] {
                let bid = m[bid_side].bids.iter().max().copied();
                let ask = m[ask_side].asks.iter().min().copied();
                if let (Some(b), Some(a)) = (bid, ask) {
                    if b >= a {
                        for market in m.iter_mut() {
                            market.prices.push(b + a);
                            market.bids.clear();
                            market.asks.clear();
                        }
                        break;
                    }
                }
            }
        }
    }
    [m[0].prices.clone(), m[1].prices.clone()]
}

fn to_orders(script: &Script) -> Vec<(Order, Order)> {
    script
        .iter()
        .enumerate()
        .map(|(i, &(a, b))| {
            let step = i as u64;
            (Order::new(step, MarketId::FIRST, a.0, a.1, step), Order::new(step, MarketId::SECOND, b.0, b.1, step))
        })
        .collect()
}

fn side() -> impl Strategy<Value = Side> {
    prop_oneof![Just(Side::Buy), Just(Side::Sell)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn engine_matches_naive_rules(
        script in prop::collection::vec(((side(), 1i64..=12), (side(), 1i64..=12)), 0..80),
        hft in any::<bool>(),
    ) {
        let cfg = SimConfig { steps: script.len() as u64, price_min: 1, price_max: 12, hft_enabled: hft, ..Default::default() };
        let result = run_scripted(&cfg, &to_orders(&script)).unwrap();
        let expected = naive_run(&script, hft);
        for (trades, want) in result.trades.iter().zip(&expected) {
            let got: Vec<i64> = trades.iter().map(|t| t.price.half_ticks()).collect();
            prop_assert_eq!(&got, want);
        }
        prop_assert!(result.accounting_balances());
    }

    #[test]
    fn without_coupler_markets_are_independent(seed in any::<u64>()) {
        // Re-running market 0's own orders alone reproduces its trade log.
        let cfg = SimConfig { steps: 300, ..Default::default() };
        let mut gen = hft_sync::OrderGenerator::from_seed(seed, &cfg);
        let script: Vec<(Order, Order)> = (0..cfg.steps)
            .map(|s| (gen.next_order(s, MarketId::FIRST), gen.next_order(s, MarketId::SECOND)))
            .collect();
        let full = run_scripted(&cfg, &script).unwrap();
        prop_assert_eq!(&full, &run(&cfg, seed).map(|mut r| { r.seed = None; r }).unwrap());

        let lone: Vec<(Order, Order)> = script
            .iter()
            .map(|(a, _)| (*a, Order::buy(a.id, MarketId::SECOND, 1, a.step)))
            .collect();
        let isolated = run_scripted(&cfg, &lone).unwrap();
        prop_assert_eq!(&isolated.trades[0], &full.trades[0]);
    }
}

#[test]
fn scripted_replay_is_deterministic() {
    let script = to_orders(&[
        ((Side::Sell, 30), (Side::Buy, 10)),
        ((Side::Buy, 20), (Side::Buy, 40)),
        ((Side::Sell, 25), (Side::Sell, 50)),
    ]);
    let cfg = SimConfig { steps: 3, hft_enabled: true, ..Default::default() };
    let a = run_scripted(&cfg, &script).unwrap();
    let b = run_scripted(&cfg, &script).unwrap();
    assert_eq!(a, b);
    // Step 1: no local trade; market 1 bid 40 meets market 0 ask 30 at 35.
    assert_eq!(a.trades[0][0].kind, TradeKind::Cross);
    assert_eq!(a.trades[0][0].price.value(), 35.0);
    assert_eq!(a.trades[1][0].price.value(), 35.0);
    assert_eq!(a.trades[0][0].step, 1);
}

/// Hand enumeration of the two-order, one-market, prices {1, 2} case,
/// independent of both engine and oracle.
#[test]
fn hand_enumeration_of_two_orders() {
    let draws: Vec<(Side, i64)> = [Side::Buy, Side::Sell].iter().flat_map(|&s| [1, 2].map(|p| (s, p))).collect();
    let mut crossing = 0;
    for &(s1, p1) in &draws {
        for &(s2, p2) in &draws {
            crossing += match (s1, s2) {
                (Side::Buy, Side::Sell) => i32::from(p2 <= p1),
                (Side::Sell, Side::Buy) => i32::from(p2 >= p1),
                _ => 0,
            };
        }
    }
    assert_eq!((crossing, draws.len().pow(2)), (6, 16));
    let cfg = SmallConfig { steps: 2, prices: vec![1, 2], hft_enabled: false, markets: 1 };
    assert_eq!(to_f64(exact_expectations(&cfg).unwrap().prob_any_trade), 6.0 / 16.0);
}

/// Oracle expectations agree with exhaustive enumeration through the naive rules.
#[test]
fn oracle_agrees_with_naive_enumeration() {
    for (steps, prices, hft, markets) in [
        (3u32, vec![1i64, 2, 3], false, 1u8),
        (2, vec![1, 2], true, 2),
        (3, vec![1, 2], true, 2),
        (2, vec![1, 2, 3], false, 2),
    ] {
        let cfg = SmallConfig { steps, prices: prices.clone(), hft_enabled: hft, markets };
        let exact = exact_expectations(&cfg).unwrap();

        let outcomes: Vec<(Side, i64)> = prices.iter().flat_map(|&p| [(Side::Buy, p), (Side::Sell, p)]).collect();
        let slots = steps as usize * markets as usize;
        let total = outcomes.len().pow(slots as u32);
        let (mut trades, mut any) = (0usize, 0usize);
        for mut index in 0..total {
            let mut draw = || {
                let d = outcomes[index % outcomes.len()];
                index /= outcomes.len();
                d
            };
            let script: Vec<_> = (0..steps)
                .map(|_| {
                    let a = draw();
                    let b = if markets == 2 { draw() } else { (Side::Buy, prices[0]) };
                    (a, b)
                })
                .collect();
            let logs = naive_run(&script, hft);
            for log in &logs[..markets as usize] {
                trades += log.len();
                any += usize::from(!log.is_empty());
            }
        }
        let weight = (total * markets as usize) as f64;
        assert_eq!(to_f64(exact.expected_volume), trades as f64 / weight, "{cfg:?}");
        assert_eq!(to_f64(exact.prob_any_trade), any as f64 / weight, "{cfg:?}");
    }
}

/// Simulated frequencies over 1e5 seeded runs lie within 4 binomial sd of
/// the exact values.
#[test]
fn monte_carlo_agrees_with_oracle() {
    const RUNS: u64 = 100_000;
    for (steps, price_max, hft, markets) in [(2u32, 2i64, false, 1u8), (3, 3, false, 1), (2, 2, true, 2)] {
        let prices: Vec<i64> = (1..=price_max).collect();
        let exact = exact_expectations(&SmallConfig { steps, prices, hft_enabled: hft, markets }).unwrap();
        let p = to_f64(exact.prob_any_trade);

        let cfg =
            SimConfig { steps: u64::from(steps), price_min: 1, price_max, hft_enabled: hft, ..Default::default() };
        let mut hits = 0u64;
        let mut draws = 0u64;
        for k in 0..RUNS {
            let result = run(&cfg, derive_run_seed(99, k)).unwrap();
            for trades in &result.trades[..markets as usize] {
                hits += u64::from(!trades.is_empty());
                draws += 1;
            }
        }
        let freq = hits as f64 / draws as f64;
        let sd = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((freq - p).abs() <= 4.0 * sd, "steps {steps} prices 1..={price_max}: {freq} vs {p}");
    }
}
