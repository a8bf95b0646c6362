//! Deterministic discrete-event simulator for the ant-routing core.
//!
//! Links are unit-disk (or explicitly listed) directed edges, each with its
//! own delivery probability and latency, so lossy and asymmetric links are
//! both expressible. There is no MAC contention: concurrent transmissions
//! never interfere. Time is integer microseconds and every random draw comes
//! from a single seeded stream, which makes runs replayable bit for bit.

mod engine;
mod event;
mod link;
mod mobility;
mod rng;
mod scenario;
mod topology;
mod traffic;

pub use engine::{run, RunOutput, Simulation};
pub use event::{Event, EventKind, EventQueue};
pub use link::{LinkChange, LinkModel, LinkOverride, LinkParams, LinkTable, Neighbor, Network};
pub use mobility::{Leg, MobilityModel, MobilityState, RandomWaypoint};
pub use rng::SimRng;
pub use scenario::{Scenario, SimError};
pub use topology::{
    build_topology, component_count, geometric_edges, Position, Topology, TopologyError, TopologySpec, TopologyWarning,
};
pub use traffic::TrafficFlow;
