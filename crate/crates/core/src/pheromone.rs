use crate::{EvaporationKind, PolicyConfig, Time};

/// Concentration stored for one (destination, next hop) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pheromone {
    pub value: f64,
    /// Time at which `value` was last brought up to date.
    pub last_update: Time,
}

impl Pheromone {
    pub fn new(value: f64, now: Time) -> Self {
        Self {
            value,
            last_update: now,
        }
    }

    /// Value this entry would have at `now`, without touching the entry.
    pub fn value_at(&self, now: Time, cfg: &PolicyConfig) -> f64 {
        evaporated_value(self.value, now.saturating_sub(self.last_update), cfg)
    }
}

/// Applies the configured evaporation policy to `value` over `elapsed`.
///
/// The result is never negative. An elapsed time of zero returns `value`
/// unchanged.
pub fn evaporated_value(value: f64, elapsed: Time, cfg: &PolicyConfig) -> f64 {
    if elapsed == Time::ZERO {
        return value;
    }
    let intervals = elapsed.as_micros() as f64 / cfg.evap_interval.as_micros() as f64;
    match cfg.evaporation {
        EvaporationKind::Exponential => value * cfg.evap_q.powf(intervals),
        EvaporationKind::Linear => (value - cfg.evap_m * intervals).max(0.0),
    }
}
