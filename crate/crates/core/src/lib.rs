//! Ant-colony routing core.
//!
//! Every node runs the same state machine ([`NodeState`]). Forward ants
//! flood a route request and backward ants answer it; both leave pheromone
//! pointing back the way they came. Data packets pick their next hop at
//! random, weighted by pheromone, and reinforce the entries they use.
//! Pheromone evaporates over time, so routes that stop carrying traffic
//! eventually disappear.
//!
//! The core owns no clock and no random source. A backend feeds it packets
//! along with the current [`Time`] and uniform draws, and interprets the
//! returned [`Action`]s.

mod address;
mod dedup;
mod node;
mod packet;
mod pheromone;
mod policy;
mod table;
mod time;

pub use address::Address;
pub use dedup::SeenSet;
pub use node::{Action, ActionList, DropReason, NodeState};
pub use packet::{Packet, PacketKind};
pub use pheromone::{evaporated_value, Pheromone};
pub use policy::{EvaporationKind, PolicyConfig, PolicyError};
pub use table::{NoRoute, RoutingTable};
pub use time::Time;
