use thiserror::Error;

use crate::Time;

/// How pheromone decays between two observations of an entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvaporationKind {
    /// `φ · q^(Δt/τ)`
    #[default]
    Exponential,
    /// `max(0, φ − m · Δt/τ)`
    Linear,
}

/// Every tunable constant of the routing algorithm.
///
/// The defaults are the ones used throughout the guide and the test suite;
/// scenario files may override any of them.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyConfig {
    pub evaporation: EvaporationKind,
    /// Exponential decay factor per evaporation interval, in `(0, 1]`.
    pub evap_q: f64,
    /// Linear decrement per evaporation interval.
    pub evap_m: f64,
    /// Evaporation interval τ. Also the period of the evaporation tick.
    pub evap_interval: Time,
    /// Entries that fall below this value are removed.
    pub removal_threshold: f64,
    /// Additive reinforcement Δφ applied per relayed data packet.
    pub reinforcement: f64,
    /// Pheromone installed by an ant that traversed a single hop.
    pub initial_pheromone: f64,
    /// Forwarding exponent α.
    pub alpha: f64,
    pub initial_ttl: u32,
    /// Discovery attempts allowed after the first one before queued data is
    /// dropped.
    pub discovery_retries: u32,
    /// Capacity of the duplicate-detection set.
    pub dedup_capacity: usize,
    /// Data packets buffered per destination while a discovery is running.
    pub pending_capacity: usize,
    /// How long a source waits for a backward ant before retrying.
    pub discovery_timeout: Time,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self {
            evaporation: EvaporationKind::Exponential,
            evap_q: 0.9,
            evap_m: 0.1,
            evap_interval: Time::from_secs(1),
            removal_threshold: 0.01,
            reinforcement: 0.1,
            initial_pheromone: 1.0,
            alpha: 1.0,
            initial_ttl: 30,
            discovery_retries: 2,
            dedup_capacity: 256,
            pending_capacity: 64,
            discovery_timeout: Time::from_secs(1),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid policy parameter `{field}`: {reason}")]
pub struct PolicyError {
    pub field: &'static str,
    pub reason: String,
}

fn reject(field: &'static str, reason: impl Into<String>) -> Result<(), PolicyError> {
    Err(PolicyError {
        field,
        reason: reason.into(),
    })
}

impl PolicyConfig {
    pub fn validate(&self) -> Result<(), PolicyError> {
        if !(self.evap_q > 0.0 && self.evap_q <= 1.0) {
            return reject("evap_q", format!("{} is not in (0, 1]", self.evap_q));
        }
        if !(self.evap_m >= 0.0 && self.evap_m.is_finite()) {
            return reject("evap_m", format!("{} is not a finite non-negative number", self.evap_m));
        }
        if self.evap_interval == Time::ZERO {
            return reject("evap_interval", "must be positive");
        }
        if !(self.removal_threshold > 0.0 && self.removal_threshold.is_finite()) {
            return reject("removal_threshold", "must be positive");
        }
        if !(self.reinforcement > 0.0 && self.reinforcement.is_finite()) {
            return reject("reinforcement", "must be positive");
        }
        if !(self.initial_pheromone > 0.0 && self.initial_pheromone.is_finite()) {
            return reject("initial_pheromone", "must be positive");
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return reject("alpha", format!("{} is not a finite non-negative number", self.alpha));
        }
        if self.initial_ttl < 1 {
            return reject("initial_ttl", "must be at least 1");
        }
        if self.dedup_capacity < 1 {
            return reject("dedup_capacity", "must be at least 1");
        }
        if self.pending_capacity < 1 {
            return reject("pending_capacity", "must be at least 1");
        }
        if self.discovery_timeout == Time::ZERO {
            return reject("discovery_timeout", "must be positive");
        }
        Ok(())
    }
}
