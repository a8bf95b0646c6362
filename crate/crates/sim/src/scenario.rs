use ara_core::{PolicyConfig, PolicyError, Time};
use thiserror::Error;

use crate::{LinkChange, LinkModel, MobilityModel, TopologyError, TopologySpec, TrafficFlow};

/// Everything a single simulation run needs, apart from the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub topology: TopologySpec,
    pub links: LinkModel,
    pub link_changes: Vec<LinkChange>,
    pub mobility: MobilityModel,
    pub flows: Vec<TrafficFlow>,
    pub policy: PolicyConfig,
    pub duration: Time,
    /// Pheromone sampling period; `None` disables the trace.
    pub trace_interval: Option<Time>,
}

impl Scenario {
    /// Static, lossless scenario on `topology` with default policy and no
    /// traffic.
    pub fn new(topology: TopologySpec, duration: Time) -> Self {
        Self {
            topology,
            links: LinkModel::default(),
            link_changes: Vec::new(),
            mobility: MobilityModel::Static,
            flows: Vec::new(),
            policy: PolicyConfig::default(),
            duration,
            trace_interval: Some(Time::from_secs(1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error(transparent)]
    Policy(#[from] PolicyError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

fn config(msg: impl Into<String>) -> SimError {
    SimError::Config(msg.into())
}

fn check_prob(what: &str, p: f64) -> Result<(), SimError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(config(format!("{what}: delivery probability {p} is not in [0, 1]")))
    }
}

impl Scenario {
    /// Checks everything that can be checked before the first event.
    pub fn validate(&self) -> Result<(), SimError> {
        self.policy.validate()?;
        if self.duration == Time::ZERO {
            return Err(config("duration must be positive"));
        }
        let n = self.topology.node_count();
        let exists = |a: ara_core::Address| a.index() < n;

        check_prob("links", self.links.default.delivery_prob)?;
        if self.links.default.latency == Time::ZERO {
            return Err(config("links: latency must be positive"));
        }
        let overrides = self.links.overrides.iter().map(|o| ("link override", o));
        let changes = self.link_changes.iter().map(|c| ("link change", &c.change));
        for (what, o) in overrides.chain(changes) {
            if !exists(o.from) || !exists(o.to) {
                return Err(config(format!(
                    "{what} {} -> {} references an unknown node",
                    o.from, o.to
                )));
            }
            if let Some(p) = o.delivery_prob {
                check_prob(what, p)?;
            }
            if o.latency == Some(Time::ZERO) {
                return Err(config(format!("{what}: latency must be positive")));
            }
        }

        for (i, f) in self.flows.iter().enumerate() {
            if !exists(f.source) || !exists(f.destination) {
                return Err(config(format!("flow {i} references an unknown node")));
            }
            if f.source == f.destination {
                return Err(config(format!("flow {i}: source equals destination")));
            }
            if !(f.rate > 0.0 && f.rate.is_finite()) {
                return Err(config(format!("flow {i}: rate must be positive")));
            }
            if f.start >= f.end {
                return Err(config(format!("flow {i}: start must be before end")));
            }
            if f.end > self.duration {
                return Err(config(format!("flow {i}: end is after the scenario duration")));
            }
        }

        if let MobilityModel::RandomWaypoint(m) = &self.mobility {
            if !self.topology.is_geometric() {
                return Err(config(
                    "mobility needs a geometric topology (line, grid or random_geometric)",
                ));
            }
            if !(m.speed_min > 0.0 && m.speed_min <= m.speed_max && m.speed_max.is_finite()) {
                return Err(config("mobility: need 0 < speed_min <= speed_max"));
            }
            if m.interval == Time::ZERO {
                return Err(config("mobility: update interval must be positive"));
            }
            if !(m.width > 0.0 && m.height > 0.0) {
                return Err(config("mobility: area must be positive"));
            }
        }
        if self.trace_interval == Some(Time::ZERO) {
            return Err(config("trace interval must be positive"));
        }
        Ok(())
    }
}
