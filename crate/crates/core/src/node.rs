use std::collections::{BTreeMap, VecDeque};

use crate::{Address, Packet, PacketKind, PolicyConfig, RoutingTable, SeenSet, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DropReason {
    Duplicate,
    TtlExpired,
    NoRoute,
}

impl DropReason {
    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::Duplicate => "duplicate",
            DropReason::TtlExpired => "ttl-expired",
            DropReason::NoRoute => "no-route",
        }
    }
}

/// What the backend has to do on behalf of a node.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    /// Transmit to every neighbour.
    Broadcast(Packet),
    Unicast {
        next_hop: Address,
        packet: Packet,
    },
    /// DATA reached its destination.
    Deliver(Packet),
    /// A backward ant from `destination` arrived at the node that asked.
    RouteEstablished {
        destination: Address,
    },
    /// DATA leaving the pending queue. The backend feeds it back through
    /// [`NodeState::handle_data`] with no previous hop and a fresh draw.
    Release(Packet),
    /// Call [`NodeState::discovery_timeout`] after `after` has elapsed.
    ArmDiscoveryTimer {
        destination: Address,
        generation: u64,
        after: Time,
    },
    Drop {
        packet: Packet,
        reason: DropReason,
    },
}

pub type ActionList = Vec<Action>;

#[derive(Debug, Clone, Default)]
struct PendingDiscovery {
    queue: VecDeque<Packet>,
    attempts: u32,
    /// Sequence number of the outstanding FANT, if a discovery is running.
    generation: Option<u64>,
}

/// Routing state owned by a single node.
#[derive(Debug, Clone)]
pub struct NodeState {
    addr: Address,
    policy: PolicyConfig,
    table: RoutingTable,
    seen: SeenSet,
    seq_counter: u64,
    pending: BTreeMap<Address, PendingDiscovery>,
}

impl NodeState {
    pub fn new(addr: Address, policy: PolicyConfig) -> Self {
        assert!(!addr.is_broadcast(), "a node cannot own the broadcast address");
        let seen = SeenSet::new(policy.dedup_capacity);
        Self {
            addr,
            policy,
            table: RoutingTable::new(),
            seen,
            seq_counter: 0,
            pending: BTreeMap::new(),
        }
    }

    pub fn address(&self) -> Address {
        self.addr
    }

    pub fn policy(&self) -> &PolicyConfig {
        &self.policy
    }

    pub fn table(&self) -> &RoutingTable {
        &self.table
    }

    /// Direct table access for backends and tests that seed routes by hand.
    pub fn table_mut(&mut self) -> &mut RoutingTable {
        &mut self.table
    }

    pub fn seen(&self) -> &SeenSet {
        &self.seen
    }

    pub fn seq_counter(&self) -> u64 {
        self.seq_counter
    }

    /// DATA packets waiting for a route, in destination then arrival order.
    pub fn pending_packets(&self) -> impl Iterator<Item = &Packet> + '_ {
        self.pending.values().flat_map(|p| p.queue.iter())
    }

    pub fn discovery_in_progress(&self, dest: Address) -> bool {
        self.pending.get(&dest).is_some_and(|p| p.generation.is_some())
    }

    fn next_seq(&mut self) -> u64 {
        let seq = self.seq_counter;
        self.seq_counter += 1;
        seq
    }

    /// Builds a new forward ant for `dest` and marks it as seen locally, so
    /// echoes of it are dropped. The caller broadcasts it.
    pub fn initiate_route_discovery(&mut self, dest: Address) -> Packet {
        assert_ne!(dest, self.addr, "route discovery towards self");
        let seq = self.next_seq();
        self.seen.insert(self.addr, seq);
        Packet::ant(PacketKind::Fant, self.addr, dest, seq, self.policy.initial_ttl)
    }

    /// Evaporation tick: brings the whole table up to `now`.
    pub fn evaporate(&mut self, now: Time) {
        self.table.evaporate(now, &self.policy);
    }

    /// Processes a forward or backward ant received from `prev_hop`.
    pub fn process_ant(&mut self, pkt: Packet, prev_hop: Address, now: Time) -> ActionList {
        debug_assert!(pkt.kind.is_ant());
        if pkt.source == self.addr || !self.seen.insert(pkt.source, pkt.seq) {
            return vec![Action::Drop {
                packet: pkt,
                reason: DropReason::Duplicate,
            }];
        }

        self.install_backward_entry(&pkt, prev_hop, now);

        if pkt.destination == self.addr {
            return match pkt.kind {
                PacketKind::Fant => {
                    let seq = self.next_seq();
                    self.seen.insert(self.addr, seq);
                    let bant = Packet::ant(PacketKind::Bant, self.addr, pkt.source, seq, self.policy.initial_ttl);
                    vec![Action::Broadcast(bant)]
                }
                _ => self.complete_discovery(pkt.source),
            };
        }

        if pkt.ttl > 1 {
            vec![Action::Broadcast(pkt.relayed())]
        } else {
            vec![Action::Drop {
                packet: pkt,
                reason: DropReason::TtlExpired,
            }]
        }
    }

    fn install_backward_entry(&mut self, pkt: &Packet, prev_hop: Address, now: Time) {
        if prev_hop == self.addr || prev_hop.is_broadcast() {
            return;
        }
        let hops = f64::from(pkt.hop_count.saturating_add(1)).max(1.0);
        let value = self.policy.initial_pheromone / hops;
        self.table.evaporate_destination(pkt.source, now, &self.policy);
        if value >= self.policy.removal_threshold {
            self.table.install(pkt.source, prev_hop, value, now);
        }
    }

    fn complete_discovery(&mut self, destination: Address) -> ActionList {
        let mut actions = vec![Action::RouteEstablished { destination }];
        if let Some(pending) = self.pending.remove(&destination) {
            actions.extend(pending.queue.into_iter().map(Action::Release));
        }
        actions
    }

    /// Forwards, delivers, queues or drops a DATA packet.
    ///
    /// `prev_hop` is `None` for packets originated (or released) locally.
    /// `u` is a uniform draw in `[0, 1)` used for the next-hop choice.
    pub fn handle_data(&mut self, pkt: Packet, prev_hop: Option<Address>, now: Time, u: f64) -> ActionList {
        debug_assert_eq!(pkt.kind, PacketKind::Data);
        if pkt.destination == self.addr {
            return vec![Action::Deliver(pkt)];
        }
        if pkt.ttl <= 1 {
            return vec![Action::Drop {
                packet: pkt,
                reason: DropReason::TtlExpired,
            }];
        }

        self.table.evaporate_destination(pkt.destination, now, &self.policy);
        match self.table.select_next_hop(pkt.destination, u, self.policy.alpha) {
            Ok(hop) => {
                if let Some(prev) = prev_hop {
                    self.table.evaporate_destination(pkt.source, now, &self.policy);
                    self.table.reinforce(pkt.source, prev, &self.policy);
                }
                self.table.reinforce(pkt.destination, hop, &self.policy);
                vec![Action::Unicast {
                    next_hop: hop,
                    packet: pkt.relayed(),
                }]
            }
            Err(_) if prev_hop.is_none() && pkt.source == self.addr => self.queue_for_discovery(pkt),
            Err(_) => {
                let mut actions = Vec::with_capacity(2);
                if let Some(prev) = prev_hop {
                    let rf = Packet::route_failure(pkt.source, pkt.destination, pkt.seq, self.policy.initial_ttl);
                    actions.push(Action::Unicast {
                        next_hop: prev,
                        packet: rf,
                    });
                }
                actions.push(Action::Drop {
                    packet: pkt,
                    reason: DropReason::NoRoute,
                });
                actions
            }
        }
    }

    fn max_attempts(&self) -> u32 {
        1 + self.policy.discovery_retries
    }

    fn queue_for_discovery(&mut self, pkt: Packet) -> ActionList {
        let dest = pkt.destination;
        let max_attempts = self.max_attempts();
        let capacity = self.policy.pending_capacity;
        let pending = self.pending.entry(dest).or_default();
        let mut actions = Vec::new();

        if pending.generation.is_none() && pending.attempts >= max_attempts {
            actions.push(Action::Drop {
                packet: pkt,
                reason: DropReason::NoRoute,
            });
            return actions;
        }
        if pending.queue.len() >= capacity {
            if let Some(oldest) = pending.queue.pop_front() {
                actions.push(Action::Drop {
                    packet: oldest,
                    reason: DropReason::NoRoute,
                });
            }
        }
        pending.queue.push_back(pkt);
        if pending.generation.is_none() {
            actions.extend(self.start_discovery(dest));
        }
        actions
    }

    fn start_discovery(&mut self, dest: Address) -> ActionList {
        let fant = self.initiate_route_discovery(dest);
        let generation = fant.seq;
        let pending = self.pending.entry(dest).or_default();
        pending.attempts += 1;
        pending.generation = Some(generation);
        vec![
            Action::Broadcast(fant),
            Action::ArmDiscoveryTimer {
                destination: dest,
                generation,
                after: self.policy.discovery_timeout,
            },
        ]
    }

    /// Handles an expired discovery timer. Stale timers (for a generation
    /// that already completed or was superseded) are ignored.
    pub fn discovery_timeout(&mut self, dest: Address, generation: u64, now: Time) -> ActionList {
        match self.pending.get(&dest) {
            Some(p) if p.generation == Some(generation) => {}
            _ => return Vec::new(),
        }
        self.table.evaporate_destination(dest, now, &self.policy);
        if self.table.has_route(dest) {
            // learned from some other ant in the meantime
            return self.complete_discovery(dest);
        }
        let attempts = self.pending[&dest].attempts;
        if attempts < self.max_attempts() {
            return self.start_discovery(dest);
        }
        let pending = self.pending.remove(&dest).unwrap_or_default();
        pending
            .queue
            .into_iter()
            .map(|packet| Action::Drop {
                packet,
                reason: DropReason::NoRoute,
            })
            .collect()
    }

    /// Handles a ROUTE_FAILURE received from `prev_hop`. The packet's
    /// destination is the unreachable node, its source the node whose
    /// traffic was affected.
    pub fn handle_route_failure(&mut self, pkt: Packet, prev_hop: Address, now: Time) -> ActionList {
        debug_assert_eq!(pkt.kind, PacketKind::RouteFailure);
        let dest = pkt.destination;
        if dest == self.addr {
            return Vec::new();
        }
        self.table.remove(dest, prev_hop);
        self.table.evaporate_destination(dest, now, &self.policy);
        if self.table.has_route(dest) {
            return Vec::new();
        }

        if pkt.source == self.addr {
            let pending = self.pending.get(&dest);
            let running = pending.is_some_and(|p| p.generation.is_some());
            let attempts = pending.map_or(0, |p| p.attempts);
            if !running && attempts < self.max_attempts() {
                return self.start_discovery(dest);
            }
            return Vec::new();
        }

        self.table.evaporate_destination(pkt.source, now, &self.policy);
        match self.table.best_next_hop(pkt.source, Some(prev_hop)) {
            Some(up) if pkt.ttl > 1 => vec![Action::Unicast {
                next_hop: up,
                packet: pkt.relayed(),
            }],
            Some(_) => vec![Action::Drop {
                packet: pkt,
                reason: DropReason::TtlExpired,
            }],
            None => vec![Action::Drop {
                packet: pkt,
                reason: DropReason::NoRoute,
            }],
        }
    }

    /// Link-layer feedback: unicasting `lost` to `failed_hop` did not
    /// succeed. Treated like a ROUTE_FAILURE reported by that neighbour.
    pub fn handle_link_failure(&mut self, lost: &Packet, failed_hop: Address, now: Time) -> ActionList {
        let rf = Packet::route_failure(lost.source, lost.destination, lost.seq, self.policy.initial_ttl);
        self.handle_route_failure(rf, failed_hop, now)
    }
}
