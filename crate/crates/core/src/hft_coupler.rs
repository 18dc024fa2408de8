//! The idealized high-frequency trader.
//!
//! When neither market trades on its own but the best bid of one market meets
//! or exceeds the best ask of the other, the HFT buys from the ask and sells to
//! the bid at the midpoint of the two limits. Both legs print at the same
//! price, so its profit and inventory are always zero.
//!
//! Only one direction can ever be crossed: `b0 >= a1` and `b1 >= a0` together
//! with `a0 > b0` and `a1 > b1` would give `b0 >= a1 > b1 >= a0 > b0`.

use crate::error::SimError;
use crate::market::MarketState;
use crate::order_book::Book;
use crate::order_flow::{MarketId, Order};
use crate::simulation::{Trade, TradeKind, TradePrice};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossMatch {
    /// Market holding the bid; the ask rests in the other one.
    pub bid_market: MarketId,
    pub bid: Order,
    pub ask: Order,
    /// Midpoint of the two limits, in half-ticks.
    pub price_half_ticks: i64,
}

impl CrossMatch {
    pub fn ask_market(&self) -> MarketId {
        self.bid_market.other()
    }

    pub fn price(&self, ticks_per_unit: i64) -> TradePrice {
        TradePrice::from_half_ticks(self.price_half_ticks, ticks_per_unit)
    }
}

/// Finds the crossing between `books[0]` and `books[1]`, if any. Pure query.
pub fn try_cross(book0: &Book, book1: &Book) -> Option<CrossMatch> {
    let books = [book0, book1];
    MarketId::BOTH.into_iter().find_map(|bid_market| {
        let bid = books[bid_market.index()].best_bid_order()?;
        let ask = books[bid_market.other().index()].best_ask_order()?;
        (bid.price >= ask.price).then(|| CrossMatch {
            bid_market,
            bid: *bid,
            ask: *ask,
            price_half_ticks: bid.price + ask.price,
        })
    })
}

/// Prints both legs of `m` at its midpoint and clears both books.
///
/// Fails with [`SimError::StaleCross`] if either quote in `m` is no longer the
/// best on its side.
pub fn execute_cross(markets: &mut [MarketState; 2], m: &CrossMatch, step: u64) -> Result<(Trade, Trade), SimError> {
    let bid_idx = m.bid_market.index();
    let ask_idx = m.ask_market().index();
    if markets[bid_idx].book().best_bid_order() != Some(&m.bid)
        || markets[ask_idx].book().best_ask_order() != Some(&m.ask)
        || markets[0].ticks_per_unit() != markets[1].ticks_per_unit()
    {
        return Err(SimError::StaleCross);
    }
    let price = m.price(markets[0].ticks_per_unit());
    let leg = |market: MarketId, resting: &Order, counterpart: &Order| Trade {
        step,
        market,
        kind: TradeKind::Cross,
        price,
        maker_id: resting.id,
        taker_id: counterpart.id,
    };
    let bid_leg = leg(m.bid_market, &m.bid, &m.ask);
    let ask_leg = leg(m.ask_market(), &m.ask, &m.bid);
    markets[bid_idx].settle_cross(bid_leg);
    markets[ask_idx].settle_cross(ask_leg);
    Ok(if bid_idx == 0 { (bid_leg, ask_leg) } else { (ask_leg, bid_leg) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order_book::TieBreak;

    const A: MarketId = MarketId::FIRST;
    const B: MarketId = MarketId::SECOND;

    fn book(orders: &[Order]) -> Book {
        let mut b = Book::default();
        for &o in orders {
            b.insert(o).unwrap();
        }
        b
    }

    fn markets() -> [MarketState; 2] {
        MarketId::BOTH.map(|id| MarketState::new(id, TieBreak::TimePriority, 1, (1, 200)))
    }

    #[test]
    fn crossing_bid_and_ask_meet_at_midpoint() {
        let m = try_cross(&book(&[Order::buy(0, A, 150, 0)]), &book(&[Order::sell(0, B, 130, 0)])).unwrap();
        assert_eq!(m.bid_market, A);
        assert_eq!(m.price(1).value(), 140.0);
    }

    #[test]
    fn bid_in_second_market_is_found_too() {
        let m = try_cross(&book(&[Order::sell(0, A, 60, 0)]), &book(&[Order::buy(0, B, 80, 0)])).unwrap();
        assert_eq!(m.bid_market, B);
        assert_eq!(m.price(1).value(), 70.0);
    }

    #[test]
    fn no_crossing_no_match() {
        let b0 = book(&[Order::buy(0, A, 100, 0), Order::sell(1, A, 120, 1)]);
        let b1 = book(&[Order::buy(0, B, 90, 0), Order::sell(1, B, 101, 1)]);
        assert!(try_cross(&b0, &b1).is_none());
        assert!(try_cross(&Book::default(), &Book::default()).is_none());
    }

    #[test]
    fn odd_sum_gives_half_tick() {
        let m = try_cross(&book(&[Order::buy(0, A, 141, 0)]), &book(&[Order::sell(0, B, 140, 0)])).unwrap();
        assert_eq!(m.price(1).value(), 140.5);
        assert_eq!(m.price_half_ticks, 281);
    }

    #[test]
    fn execution_prints_both_legs_and_clears() {
        let mut ms = markets();
        ms[0].step(Order::buy(0, A, 150, 0)).unwrap();
        ms[0].step(Order::buy(1, A, 20, 0)).unwrap();
        ms[1].step(Order::sell(0, B, 130, 0)).unwrap();
        let m = try_cross(ms[0].book(), ms[1].book()).unwrap();
        let (t0, t1) = execute_cross(&mut ms, &m, 3).unwrap();
        assert_eq!(t0.price, t1.price);
        assert_eq!(t0.price.value(), 140.0);
        assert_eq!((t0.step, t1.step), (3, 3));
        assert_eq!((t0.maker_id, t0.taker_id), (0, 0));
        assert!(ms.iter().all(|s| s.book().is_empty()));

        // Buyer pays no more than the bid, seller receives no less than the ask.
        assert!(t0.price.value() <= 150.0 && t1.price.value() >= 130.0);
        // Received from the bid side minus paid to the ask side.
        assert_eq!(t0.price.half_ticks() - t1.price.half_ticks(), 0);

        let acct = ms[0].accounting();
        assert_eq!((acct.consumed, acct.discarded), (1, 1));
    }

    #[test]
    fn stale_match_is_rejected() {
        let mut ms = markets();
        ms[0].step(Order::buy(0, A, 150, 0)).unwrap();
        ms[1].step(Order::sell(0, B, 130, 0)).unwrap();
        let m = try_cross(ms[0].book(), ms[1].book()).unwrap();
        ms[0].step(Order::buy(1, A, 160, 1)).unwrap();
        assert_eq!(execute_cross(&mut ms, &m, 1), Err(SimError::StaleCross));
    }
}
