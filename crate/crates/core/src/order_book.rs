//! Single-market limit order book.
//!
//! Bids are kept best-first (highest price), asks best-first (lowest price);
//! equal prices are ordered by arrival id according to the [`TieBreak`]. An
//! incoming order only ever meets the best opposing quote because every trade
//! clears the whole book, so there is no depth walking.

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::order_flow::{MarketId, Order, OrderId, Side};

/// Ordering among resting orders at the same price.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TieBreak {
    /// Earliest arrival first (lowest id).
    #[default]
    TimePriority,
    /// Latest arrival first. Only exists to show the choice is immaterial.
    ReverseTime,
}

/// A trade between an incoming order and a resting one, at the resting order's price.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalTrade {
    /// Maker's limit price, in ticks.
    pub price: i64,
    pub maker_id: OrderId,
    pub taker_id: OrderId,
    pub taker_side: Side,
    pub market: MarketId,
    pub step: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Book {
    bids: Vec<Order>,
    asks: Vec<Order>,
    tie_break: TieBreak,
}

impl Book {
    pub fn new(tie_break: TieBreak) -> Self {
        Self { bids: Vec::new(), asks: Vec::new(), tie_break }
    }

    pub fn tie_break(&self) -> TieBreak {
        self.tie_break
    }

    /// Resting bids, best first.
    pub fn bids(&self) -> &[Order] {
        &self.bids
    }

    /// Resting asks, best first.
    pub fn asks(&self) -> &[Order] {
        &self.asks
    }

    pub fn len(&self) -> usize {
        self.bids.len() + self.asks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bids.is_empty() && self.asks.is_empty()
    }

    pub fn best_bid(&self) -> Option<i64> {
        self.bids.first().map(|o| o.price)
    }

    pub fn best_ask(&self) -> Option<i64> {
        self.asks.first().map(|o| o.price)
    }

    pub fn best_bid_order(&self) -> Option<&Order> {
        self.bids.first()
    }

    pub fn best_ask_order(&self) -> Option<&Order> {
        self.asks.first()
    }

    /// True if the best bid meets or exceeds the best ask.
    pub fn is_crossed(&self) -> bool {
        matches!((self.best_bid(), self.best_ask()), (Some(b), Some(a)) if b >= a)
    }

    /// The trade `incoming` would make against the best opposing quote, if any.
    /// Does not modify the book.
    pub fn match_incoming(&self, incoming: &Order) -> Option<LocalTrade> {
        let maker = match incoming.side {
            Side::Buy => self.asks.first().filter(|ask| incoming.price >= ask.price),
            Side::Sell => self.bids.first().filter(|bid| incoming.price <= bid.price),
        }?;
        Some(LocalTrade {
            price: maker.price,
            maker_id: maker.id,
            taker_id: incoming.id,
            taker_side: incoming.side,
            market: incoming.market,
            step: incoming.step,
        })
    }

    /// Rests `order` on its side. Fails if it would cross the opposite side;
    /// callers must check [`Book::match_incoming`] first.
    pub fn insert(&mut self, order: Order) -> Result<(), SimError> {
        if self.match_incoming(&order).is_some() {
            return Err(SimError::WouldCross(order.id));
        }
        let tie_break = self.tie_break;
        let queue = match order.side {
            Side::Buy => &mut self.bids,
            Side::Sell => &mut self.asks,
        };
        let at = queue.partition_point(|resting| {
            let better_price = match order.side {
                Side::Buy => resting.price > order.price,
                Side::Sell => resting.price < order.price,
            };
            better_price || (resting.price == order.price && ranks_first(tie_break, resting.id, order.id))
        });
        queue.insert(at, order);
        Ok(())
    }

    /// Discards every resting order.
    pub fn clear(&mut self) {
        self.bids.clear();
        self.asks.clear();
    }
}

fn ranks_first(tie_break: TieBreak, resting: OrderId, new: OrderId) -> bool {
    match tie_break {
        TieBreak::TimePriority => resting < new,
        TieBreak::ReverseTime => resting > new,
    }
}
