//! Scenario files.
//!
//! A scenario is a TOML document. Unknown keys are rejected, and every
//! omitted policy parameter takes the routing core's default.

use std::fmt;

use ara_core::{Address, EvaporationKind, PolicyConfig, Time};
use ara_sim::{
    LinkChange, LinkModel, LinkOverride, LinkParams, MobilityModel, Position, RandomWaypoint, Scenario, TopologySpec,
    TrafficFlow,
};
use serde::{Deserialize, Serialize};

use crate::units::{Metres, Seconds};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub repetitions: u32,
    pub duration: Seconds,
    /// Pheromone sampling period; `0` turns tracing off.
    #[serde(default = "one_second")]
    pub trace_interval: Seconds,
    pub topology: TopologyConfig,
    #[serde(default)]
    pub links: LinksConfig,
    #[serde(default, rename = "link_change", skip_serializing_if = "Vec::is_empty")]
    pub link_changes: Vec<LinkChangeConfig>,
    #[serde(default)]
    pub mobility: MobilityConfig,
    #[serde(default, rename = "flow")]
    pub flows: Vec<FlowConfig>,
    #[serde(default)]
    pub policy: PolicyToml,
    #[serde(default, skip_serializing)]
    pub sweep: Vec<SweepAxis>,
}

fn one() -> u32 {
    1
}

fn one_second() -> Seconds {
    Seconds(Time::from_secs(1))
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TopologyConfig {
    Line {
        nodes: usize,
        spacing: Metres,
        comm_range: Metres,
    },
    Grid {
        rows: usize,
        cols: usize,
        spacing: Metres,
        comm_range: Metres,
    },
    Diamond {
        short_relays: usize,
        long_relays: usize,
    },
    RandomGeometric {
        nodes: usize,
        width: Metres,
        height: Metres,
        comm_range: Metres,
    },
    Explicit {
        nodes: usize,
        edges: Vec<[u32; 2]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        positions: Option<Vec<[f64; 2]>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinksConfig {
    #[serde(default = "certain")]
    pub delivery_prob: f64,
    #[serde(default = "one_ms")]
    pub latency: Seconds,
    #[serde(default, rename = "override", skip_serializing_if = "Vec::is_empty")]
    pub overrides: Vec<OverrideConfig>,
}

fn certain() -> f64 {
    1.0
}

fn one_ms() -> Seconds {
    Seconds(Time::from_millis(1))
}

impl Default for LinksConfig {
    fn default() -> Self {
        Self {
            delivery_prob: certain(),
            latency: one_ms(),
            overrides: Vec::new(),
        }
    }
}

/// Per-edge impairment. With `symmetric = false` only `from -> to` changes,
/// which is how one-way links are written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OverrideConfig {
    pub from: u32,
    pub to: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delivery_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency: Option<Seconds>,
    #[serde(default = "yes")]
    pub symmetric: bool,
}

impl OverrideConfig {
    fn to_sim(&self) -> LinkOverride {
        LinkOverride {
            from: Address::new(self.from),
            to: Address::new(self.to),
            delivery_prob: self.delivery_prob,
            latency: self.latency.map(|s| s.0),
            symmetric: self.symmetric,
        }
    }
}

/// An override that takes effect mid-run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkChangeConfig {
    pub at: Seconds,
    pub from: u32,
    pub to: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delivery_prob: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub latency: Option<Seconds>,
    #[serde(default = "yes")]
    pub symmetric: bool,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MobilityConfig {
    #[default]
    Static,
    RandomWaypoint {
        speed_min: f64,
        speed_max: f64,
        #[serde(default = "zero")]
        pause: Seconds,
        #[serde(default = "one_second")]
        interval: Seconds,
        width: Metres,
        height: Metres,
    },
}

fn zero() -> Seconds {
    Seconds(Time::ZERO)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowConfig {
    pub source: u32,
    pub destination: u32,
    /// Packets per second.
    pub rate: f64,
    #[serde(default = "payload")]
    pub payload_size: u32,
    #[serde(default = "zero")]
    pub start: Seconds,
    /// Defaults to the end of the run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<Seconds>,
}

fn payload() -> u32 {
    512
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvaporationName {
    Exponential,
    Linear,
}

/// Mirror of [`PolicyConfig`] with units and defaults for file input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PolicyToml {
    pub evaporation: EvaporationName,
    pub evap_q: f64,
    pub evap_m: f64,
    pub evap_interval: Seconds,
    pub removal_threshold: f64,
    pub reinforcement: f64,
    pub initial_pheromone: f64,
    pub alpha: f64,
    pub initial_ttl: u32,
    pub discovery_retries: u32,
    pub discovery_timeout: Seconds,
    pub dedup_capacity: usize,
    pub pending_capacity: usize,
}

impl Default for PolicyToml {
    fn default() -> Self {
        Self::from(&PolicyConfig::default())
    }
}

impl From<&PolicyConfig> for PolicyToml {
    fn from(p: &PolicyConfig) -> Self {
        Self {
            evaporation: match p.evaporation {
                EvaporationKind::Exponential => EvaporationName::Exponential,
                EvaporationKind::Linear => EvaporationName::Linear,
            },
            evap_q: p.evap_q,
            evap_m: p.evap_m,
            evap_interval: Seconds(p.evap_interval),
            removal_threshold: p.removal_threshold,
            reinforcement: p.reinforcement,
            initial_pheromone: p.initial_pheromone,
            alpha: p.alpha,
            initial_ttl: p.initial_ttl,
            discovery_retries: p.discovery_retries,
            discovery_timeout: Seconds(p.discovery_timeout),
            dedup_capacity: p.dedup_capacity,
            pending_capacity: p.pending_capacity,
        }
    }
}

impl PolicyToml {
    pub fn to_policy(&self) -> PolicyConfig {
        PolicyConfig {
            evaporation: match self.evaporation {
                EvaporationName::Exponential => EvaporationKind::Exponential,
                EvaporationName::Linear => EvaporationKind::Linear,
            },
            evap_q: self.evap_q,
            evap_m: self.evap_m,
            evap_interval: self.evap_interval.0,
            removal_threshold: self.removal_threshold,
            reinforcement: self.reinforcement,
            initial_pheromone: self.initial_pheromone,
            alpha: self.alpha,
            initial_ttl: self.initial_ttl,
            discovery_retries: self.discovery_retries,
            discovery_timeout: self.discovery_timeout.0,
            dedup_capacity: self.dedup_capacity,
            pending_capacity: self.pending_capacity,
        }
    }
}

/// One sweep dimension: a dotted path into the scenario (`policy.alpha`,
/// `flow.0.rate`) and the values it takes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub path: String,
    pub values: Vec<toml::Value>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    #[serde(default)]
    sweep: Vec<SweepAxis>,
}

/// A rejected scenario or sweep file.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            line: None,
            key: None,
            message: message.into(),
        }
    }

    fn from_toml(text: &str, err: &toml::de::Error) -> Self {
        let message = err.message().to_string();
        let line = err
            .span()
            .map(|s| text[..s.start.min(text.len())].matches('\n').count() + 1);
        let key = quoted_after(&message, "unknown field `").or_else(|| {
            let l = text.lines().nth(line? - 1)?;
            let (lhs, _) = l.split_once('=')?;
            Some(lhs.trim().trim_matches('"').to_string())
        });
        Self { line, key, message }
    }
}

fn quoted_after(message: &str, prefix: &str) -> Option<String> {
    let rest = &message[message.find(prefix)? + prefix.len()..];
    Some(rest[..rest.find('`')?].to_string())
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "key `{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Parses and validates a scenario file.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| ConfigError::from_toml(text, &e))?;
    cfg.to_scenario()?;
    Ok(cfg)
}

/// Parses a file holding only `[[sweep]]` tables.
pub fn parse_sweep(text: &str) -> Result<Vec<SweepAxis>, ConfigError> {
    let f: SweepFile = toml::from_str(text).map_err(|e| ConfigError::from_toml(text, &e))?;
    Ok(f.sweep)
}

impl ScenarioConfig {
    /// Builds the simulator input, checking every cross-reference.
    pub fn to_scenario(&self) -> Result<Scenario, ConfigError> {
        if self.repetitions == 0 {
            return Err(ConfigError {
                line: None,
                key: Some("repetitions".into()),
                message: "must be at least 1".into(),
            });
        }
        let topology = match &self.topology {
            TopologyConfig::Line {
                nodes,
                spacing,
                comm_range,
            } => TopologySpec::Line {
                nodes: *nodes,
                spacing: spacing.0,
                comm_range: comm_range.0,
            },
            TopologyConfig::Grid {
                rows,
                cols,
                spacing,
                comm_range,
            } => TopologySpec::Grid {
                rows: *rows,
                cols: *cols,
                spacing: spacing.0,
                comm_range: comm_range.0,
            },
            TopologyConfig::Diamond {
                short_relays,
                long_relays,
            } => TopologySpec::Diamond {
                short_relays: *short_relays,
                long_relays: *long_relays,
            },
            TopologyConfig::RandomGeometric {
                nodes,
                width,
                height,
                comm_range,
            } => TopologySpec::RandomGeometric {
                nodes: *nodes,
                width: width.0,
                height: height.0,
                comm_range: comm_range.0,
            },
            TopologyConfig::Explicit {
                nodes,
                edges,
                positions,
            } => TopologySpec::Explicit {
                nodes: *nodes,
                edges: edges.iter().map(|e| (e[0], e[1])).collect(),
                positions: positions
                    .as_ref()
                    .map(|ps| ps.iter().map(|p| Position::new(p[0], p[1])).collect()),
            },
        };
        let duration = self.duration.0;
        let mut s = Scenario::new(topology, duration);
        s.links = LinkModel {
            default: LinkParams {
                delivery_prob: self.links.delivery_prob,
                latency: self.links.latency.0,
            },
            overrides: self.links.overrides.iter().map(OverrideConfig::to_sim).collect(),
        };
        s.link_changes = self
            .link_changes
            .iter()
            .map(|c| LinkChange {
                at: c.at.0,
                change: LinkOverride {
                    from: Address::new(c.from),
                    to: Address::new(c.to),
                    delivery_prob: c.delivery_prob,
                    latency: c.latency.map(|s| s.0),
                    symmetric: c.symmetric,
                },
            })
            .collect();
        s.mobility = match &self.mobility {
            MobilityConfig::Static => MobilityModel::Static,
            MobilityConfig::RandomWaypoint {
                speed_min,
                speed_max,
                pause,
                interval,
                width,
                height,
            } => MobilityModel::RandomWaypoint(RandomWaypoint {
                speed_min: *speed_min,
                speed_max: *speed_max,
                pause: pause.0,
                interval: interval.0,
                width: width.0,
                height: height.0,
            }),
        };
        s.flows = self
            .flows
            .iter()
            .map(|f| TrafficFlow {
                source: Address::new(f.source),
                destination: Address::new(f.destination),
                rate: f.rate,
                payload_size: f.payload_size,
                start: f.start.0,
                end: f.end.map_or(duration, |e| e.0),
            })
            .collect();
        s.policy = self.policy.to_policy();
        s.trace_interval = (self.trace_interval.0 > Time::ZERO).then_some(self.trace_interval.0);
        s.validate().map_err(|e| ConfigError::invalid(e.to_string()))?;
        Ok(s)
    }
}
