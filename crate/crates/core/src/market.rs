//! One exchange's per-step semantics: an incoming order either trades against
//! the best opposing quote, after which the whole book is discarded, or rests.

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::order_book::{Book, LocalTrade, TieBreak};
use crate::order_flow::{MarketId, Order, OrderId};
use crate::simulation::{Trade, TradeKind, TradePrice};

/// Where each submitted order ended up.
///
/// `submitted == consumed + discarded + resting` holds after every step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderAccounting {
    pub submitted: u64,
    /// Orders that were a side of a trade.
    pub consumed: u64,
    /// Resting orders thrown away when a trade cleared the book.
    pub discarded: u64,
}

impl OrderAccounting {
    pub fn balances(&self, resting: usize) -> bool {
        self.submitted == self.consumed + self.discarded + resting as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StepOutcome {
    pub trade: Option<LocalTrade>,
}

impl StepOutcome {
    pub fn traded_locally(&self) -> bool {
        self.trade.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct MarketState {
    id: MarketId,
    book: Book,
    ticks_per_unit: i64,
    min_tick: i64,
    max_tick: i64,
    /// Lowest id the next submitted order may carry.
    next_order_id: OrderId,
    trades: Vec<Trade>,
    accounting: OrderAccounting,
}

impl MarketState {
    pub fn new(id: MarketId, tie_break: TieBreak, ticks_per_unit: i64, tick_bounds: (i64, i64)) -> Self {
        Self {
            id,
            book: Book::new(tie_break),
            ticks_per_unit,
            min_tick: tick_bounds.0,
            max_tick: tick_bounds.1,
            next_order_id: 0,
            trades: Vec::new(),
            accounting: OrderAccounting::default(),
        }
    }

    pub fn id(&self) -> MarketId {
        self.id
    }

    pub fn book(&self) -> &Book {
        &self.book
    }

    pub fn trades(&self) -> &[Trade] {
        &self.trades
    }

    pub fn into_trades(self) -> Vec<Trade> {
        self.trades
    }

    pub fn accounting(&self) -> OrderAccounting {
        self.accounting
    }

    pub fn ticks_per_unit(&self) -> i64 {
        self.ticks_per_unit
    }

    /// Matches `incoming` or rests it. A trade consumes the incoming order and
    /// clears this market's book.
    pub fn step(&mut self, incoming: Order) -> Result<StepOutcome, SimError> {
        if incoming.market != self.id {
            return Err(SimError::MarketMismatch { order: incoming.id, expected: self.id, got: incoming.market });
        }
        if incoming.id < self.next_order_id {
            return Err(SimError::NonMonotoneId {
                market: self.id,
                previous: self.next_order_id.saturating_sub(1),
                got: incoming.id,
            });
        }
        if !(self.min_tick..=self.max_tick).contains(&incoming.price) {
            return Err(SimError::PriceOutOfRange { price: incoming.price, min: self.min_tick, max: self.max_tick });
        }
        self.next_order_id = incoming.id + 1;
        self.accounting.submitted += 1;

        match self.book.match_incoming(&incoming) {
            Some(local) => {
                self.trades.push(Trade {
                    step: local.step,
                    market: self.id,
                    kind: TradeKind::Local,
                    price: TradePrice::from_ticks(local.price, self.ticks_per_unit),
                    maker_id: local.maker_id,
                    taker_id: local.taker_id,
                });
                self.accounting.consumed += 2;
                self.accounting.discarded += self.book.len() as u64 - 1;
                self.book.clear();
                Ok(StepOutcome { trade: Some(local) })
            }
            None => {
                self.book.insert(incoming)?;
                Ok(StepOutcome { trade: None })
            }
        }
    }

    /// Records one side of a cross-market trade and clears the book.
    pub(crate) fn settle_cross(&mut self, trade: Trade) {
        debug_assert_eq!(trade.market, self.id);
        self.trades.push(trade);
        self.accounting.consumed += 1;
        self.accounting.discarded += self.book.len() as u64 - 1;
        self.book.clear();
    }
}
