//! Simulation and experiment configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::order_book::TieBreak;

/// Sub-ticks per price unit used when prices are drawn from the continuous
/// range. A power of two keeps every price and half-price exact in `f64`.
pub const CONTINUOUS_TICKS_PER_UNIT: i64 = 1 << 20;

/// How limit prices are drawn from `[price_min, price_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PriceModel {
    /// Uniform over the integers.
    #[default]
    Discrete,
    /// Uniform over the real interval, on a grid of
    /// [`CONTINUOUS_TICKS_PER_UNIT`] sub-ticks per unit.
    Continuous,
}

impl PriceModel {
    pub fn ticks_per_unit(self) -> i64 {
        match self {
            PriceModel::Discrete => 1,
            PriceModel::Continuous => CONTINUOUS_TICKS_PER_UNIT,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub steps: u64,
    pub runs: u32,
    pub price_min: i64,
    pub price_max: i64,
    pub price_model: PriceModel,
    pub hft_enabled: bool,
    pub master_seed: u64,
    pub bin_width: f64,
    pub format: OutputFormat,
    pub trade_log: Option<PathBuf>,
    /// `None` lets the pool pick one worker per core. Not echoed in reports:
    /// it never changes results.
    #[serde(skip)]
    pub workers: Option<usize>,
    pub tie_break: TieBreak,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            steps: 10_000,
            runs: 100,
            price_min: 1,
            price_max: 200,
            price_model: PriceModel::Discrete,
            hft_enabled: false,
            master_seed: 0,
            bin_width: 5.0,
            format: OutputFormat::Json,
            trade_log: None,
            workers: None,
            tie_break: TieBreak::TimePriority,
        }
    }
}

impl SimConfig {
    /// Checks everything a single run depends on.
    pub fn validate_run(&self) -> Result<(), ConfigError> {
        if self.price_min > self.price_max {
            return Err(ConfigError::PriceBounds { min: self.price_min, max: self.price_max });
        }
        if !(self.bin_width.is_finite() && self.bin_width > 0.0) {
            return Err(ConfigError::BinWidth(self.bin_width));
        }
        Ok(())
    }

    /// Checks the full experiment configuration.
    pub fn validate(&self) -> Result<(), ConfigError> {
        self.validate_run()?;
        if self.runs == 0 {
            return Err(ConfigError::NoRuns);
        }
        if self.workers == Some(0) {
            return Err(ConfigError::NoWorkers);
        }
        Ok(())
    }

    pub fn ticks_per_unit(&self) -> i64 {
        self.price_model.ticks_per_unit()
    }

    /// Inclusive price bounds in ticks.
    pub fn tick_bounds(&self) -> (i64, i64) {
        let scale = self.ticks_per_unit();
        (self.price_min * scale, self.price_max * scale)
    }

    pub fn with_hft(&self, hft_enabled: bool) -> Self {
        Self { hft_enabled, ..self.clone() }
    }
}

/// Parses a seed written in decimal or as `0x`-prefixed hex.
pub fn parse_seed(text: &str) -> Result<u64, ConfigError> {
    let trimmed = text.trim();
    let parsed = match trimmed.strip_prefix("0x").or_else(|| trimmed.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => trimmed.parse(),
    };
    parsed.map_err(|_| ConfigError::Seed(text.to_string()))
}
