use std::collections::VecDeque;

use ara_core::{Action, ActionList, Address, NodeState, Packet, PacketKind, Time};
use ara_metrics::{DropCause, MetricsSnapshot, PheromoneTrace, Record, Recorder, TraceRow};

use crate::{
    build_topology, geometric_edges, Event, EventKind, EventQueue, LinkTable, MobilityModel, MobilityState, Network,
    Position, Scenario, SimError, SimRng, TopologyWarning,
};

/// What a finished run hands back.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub snapshot: MetricsSnapshot,
    pub trace: PheromoneTrace,
    pub warnings: Vec<TopologyWarning>,
    /// One line per executed event, when enabled.
    pub event_log: Option<Vec<String>>,
}

/// Runs `scenario` with `seed` to completion.
pub fn run(scenario: &Scenario, seed: u64) -> Result<RunOutput, SimError> {
    let mut sim = Simulation::new(scenario.clone(), seed)?;
    sim.run_to_end();
    Ok(sim.into_output())
}

/// One deterministic simulation run.
///
/// All randomness comes from one [`SimRng`] and is consumed in this order:
/// node placement (random geometric topologies), initial mobility legs,
/// then, as events execute: one Bernoulli draw per neighbour and broadcast
/// (ascending receiver address), one Bernoulli draw per unicast over an
/// existing edge, one uniform draw each time the routing core handles a
/// DATA packet (emission, arrival or release from the pending queue), and
/// three draws per new mobility leg.
pub struct Simulation {
    scenario: Scenario,
    now: Time,
    queue: EventQueue,
    rng: SimRng,
    nodes: Vec<NodeState>,
    positions: Vec<Position>,
    static_edges: Option<Vec<(Address, Address)>>,
    links: LinkTable,
    network: Network,
    mobility: Option<MobilityState>,
    recorder: Recorder,
    trace: Option<PheromoneTrace>,
    event_log: Option<Vec<String>>,
    warnings: Vec<TopologyWarning>,
    finished: bool,
}

impl Simulation {
    pub fn new(scenario: Scenario, seed: u64) -> Result<Self, SimError> {
        scenario.validate()?;
        let mut rng = SimRng::new(seed);
        let topology = build_topology(&scenario.topology, &mut rng)?;
        let n = topology.node_count();
        let nodes = (0..n)
            .map(|i| NodeState::new(Address::new(i as u32), scenario.policy.clone()))
            .collect();
        let links = LinkTable::new(&scenario.links);
        let network = Network::new(n, &topology.edges, &links);
        let static_edges = (!scenario.topology.is_geometric()).then(|| topology.edges.clone());
        let mobility = match &scenario.mobility {
            MobilityModel::Static => None,
            MobilityModel::RandomWaypoint(m) => Some(MobilityState::init(m.clone(), n, &mut rng)),
        };
        let flows: Vec<_> = scenario.flows.iter().map(|f| (f.source, f.destination)).collect();

        let mut sim = Self {
            now: Time::ZERO,
            queue: EventQueue::new(),
            rng,
            nodes,
            positions: topology.positions,
            static_edges,
            links,
            network,
            mobility,
            recorder: Recorder::new(&flows),
            trace: scenario.trace_interval.map(|_| PheromoneTrace::new()),
            event_log: None,
            warnings: topology.warnings,
            finished: false,
            scenario,
        };
        sim.schedule_initial();
        Ok(sim)
    }

    fn schedule_initial(&mut self) {
        let q = &mut self.queue;
        q.schedule(self.scenario.duration, EventKind::SimEnd);
        for (index, change) in self.scenario.link_changes.iter().enumerate() {
            q.schedule(change.at, EventKind::LinkChange { index });
        }
        if self.trace.is_some() {
            q.schedule(Time::ZERO, EventKind::TraceSample);
        }
        q.schedule(self.scenario.policy.evap_interval, EventKind::EvapTick);
        if let Some(m) = &self.mobility {
            q.schedule(m.model().interval, EventKind::MobilityStep);
        }
        for (flow, f) in self.scenario.flows.iter().enumerate() {
            if let Some(t) = f.emission_time(0) {
                q.schedule(t, EventKind::TrafficEmit { flow, index: 0 });
            }
        }
    }

    /// Turns off metric collection. Routing behaviour is unaffected.
    pub fn disable_metrics(&mut self) {
        self.recorder = Recorder::disabled();
    }

    pub fn enable_event_log(&mut self) {
        self.event_log.get_or_insert_with(Vec::new);
    }

    pub fn now(&self) -> Time {
        self.now
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    pub fn node(&self, addr: Address) -> &NodeState {
        &self.nodes[addr.index()]
    }

    pub fn nodes(&self) -> &[NodeState] {
        &self.nodes
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn network(&self) -> &Network {
        &self.network
    }

    pub fn warnings(&self) -> &[TopologyWarning] {
        &self.warnings
    }

    pub fn snapshot(&self) -> MetricsSnapshot {
        self.recorder.snapshot()
    }

    pub fn trace(&self) -> Option<&PheromoneTrace> {
        self.trace.as_ref()
    }

    pub fn event_log(&self) -> Option<&[String]> {
        self.event_log.as_deref()
    }

    /// DATA packets still alive, per flow, counted from the event queue and
    /// the nodes' pending queues rather than from the recorder.
    pub fn in_flight_data(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.scenario.flows.len()];
        for e in self.queue.iter() {
            if let EventKind::FrameArrival { packet, .. } = &e.kind {
                if packet.kind == PacketKind::Data {
                    counts[packet.flow as usize] += 1;
                }
            }
        }
        for n in &self.nodes {
            for p in n.pending_packets() {
                counts[p.flow as usize] += 1;
            }
        }
        counts
    }

    /// Executes the next event. Returns `false` once the run has ended.
    pub fn step(&mut self) -> bool {
        if self.finished {
            return false;
        }
        let Some(event) = self.queue.pop() else {
            self.finished = true;
            return false;
        };
        debug_assert!(event.time >= self.now, "event scheduled in the past");
        self.now = event.time;
        if let Some(log) = &mut self.event_log {
            log.push(format!("{} {} {}", event.time.as_micros(), event.seq, event.kind));
        }
        self.dispatch(event);
        !self.finished
    }

    /// Runs events up to and including time `t`.
    pub fn run_until(&mut self, t: Time) {
        while !self.finished && self.queue.peek_time().is_some_and(|next| next <= t) {
            self.step();
        }
    }

    pub fn run_to_end(&mut self) {
        while self.step() {}
    }

    pub fn into_output(self) -> RunOutput {
        RunOutput {
            snapshot: self.recorder.snapshot(),
            trace: self.trace.unwrap_or_default(),
            warnings: self.warnings,
            event_log: self.event_log,
        }
    }

    fn dispatch(&mut self, event: Event) {
        let now = self.now;
        match event.kind {
            EventKind::FrameArrival {
                receiver,
                sender,
                intended,
                packet,
            } => {
                if intended.is_some_and(|i| i != receiver) {
                    return;
                }
                let actions = match packet.kind {
                    PacketKind::Fant | PacketKind::Bant => {
                        self.nodes[receiver.index()].process_ant(packet, sender, now)
                    }
                    PacketKind::Data => {
                        let u = self.rng.unit();
                        self.nodes[receiver.index()].handle_data(packet, Some(sender), now, u)
                    }
                    PacketKind::RouteFailure => self.nodes[receiver.index()].handle_route_failure(packet, sender, now),
                };
                self.apply(receiver, actions);
            }
            EventKind::UnicastFailed {
                sender,
                failed_hop,
                packet,
            } => {
                let actions = self.nodes[sender.index()].handle_link_failure(&packet, failed_hop, now);
                self.apply(sender, actions);
            }
            EventKind::EvapTick => {
                for n in &mut self.nodes {
                    n.evaporate(now);
                }
                self.queue
                    .schedule(now + self.scenario.policy.evap_interval, EventKind::EvapTick);
            }
            EventKind::TrafficEmit { flow, index } => self.emit(flow, index),
            EventKind::MobilityStep => {
                if let Some(m) = &mut self.mobility {
                    m.step(&mut self.positions, &mut self.rng, now);
                    let interval = m.model().interval;
                    self.rebuild_network();
                    self.queue.schedule(now + interval, EventKind::MobilityStep);
                }
            }
            EventKind::TraceSample => {
                self.sample_trace();
                if let Some(interval) = self.scenario.trace_interval {
                    self.queue.schedule(now + interval, EventKind::TraceSample);
                }
            }
            EventKind::DiscoveryTimeout {
                node,
                destination,
                generation,
            } => {
                let actions = self.nodes[node.index()].discovery_timeout(destination, generation, now);
                self.apply(node, actions);
            }
            EventKind::LinkChange { index } => {
                let change = self.scenario.link_changes[index].change.clone();
                self.links.apply(&change);
                self.rebuild_network();
            }
            EventKind::SimEnd => self.finished = true,
        }
    }

    fn rebuild_network(&mut self) {
        let n = self.nodes.len();
        self.network = match &self.static_edges {
            Some(edges) => Network::new(n, edges, &self.links),
            None => {
                let range = self.scenario.topology.comm_range().expect("geometric topology");
                Network::new(n, &geometric_edges(&self.positions, range), &self.links)
            }
        };
    }

    fn emit(&mut self, flow: usize, index: u64) {
        let f = &self.scenario.flows[flow];
        let (source, destination, payload) = (f.source, f.destination, f.payload_size);
        if let Some(t) = f.emission_time(index + 1) {
            self.queue
                .schedule(t, EventKind::TrafficEmit { flow, index: index + 1 });
        }
        let pkt = Packet::data(
            source,
            destination,
            index,
            self.scenario.policy.initial_ttl,
            payload,
            self.now,
            flow as u32,
        );
        self.recorder.record(Record::DataSent { flow: flow as u32 });
        let u = self.rng.unit();
        let actions = self.nodes[source.index()].handle_data(pkt, None, self.now, u);
        self.apply(source, actions);
    }

    fn apply(&mut self, node: Address, actions: ActionList) {
        let now = self.now;
        let mut work: VecDeque<Action> = actions.into();
        while let Some(action) = work.pop_front() {
            match action {
                Action::Broadcast(p) => {
                    self.broadcast_frame(node, p);
                }
                Action::Unicast { next_hop, packet } => self.unicast(node, next_hop, packet),
                Action::Deliver(p) => {
                    if p.kind == PacketKind::Data {
                        self.recorder.record(Record::DataDelivered {
                            flow: p.flow,
                            seq: p.seq,
                            sent_at: p.created_at,
                            hops: p.hop_count,
                            latency: now - p.created_at,
                        });
                    }
                }
                Action::RouteEstablished { .. } => {}
                Action::Release(p) => {
                    let u = self.rng.unit();
                    let more = self.nodes[node.index()].handle_data(p, None, now, u);
                    for a in more.into_iter().rev() {
                        work.push_front(a);
                    }
                }
                Action::ArmDiscoveryTimer {
                    destination,
                    generation,
                    after,
                } => {
                    self.queue.schedule(
                        now + after,
                        EventKind::DiscoveryTimeout {
                            node,
                            destination,
                            generation,
                        },
                    );
                }
                Action::Drop { packet, reason } => {
                    if packet.kind == PacketKind::Data {
                        self.recorder.record(Record::DataDropped {
                            flow: packet.flow,
                            cause: DropCause::from_reason(reason),
                            hops: packet.hop_count,
                        });
                    } else {
                        self.recorder.record(Record::ControlDropped {
                            reason,
                            hops: packet.hop_count,
                        });
                    }
                }
            }
        }
    }

    fn record_control_tx(&mut self, sender: Address, p: &Packet) {
        if p.kind.is_control() {
            self.recorder.record(Record::ControlTx {
                kind: p.kind,
                source: p.source,
                seq: p.seq,
                originated: p.source == sender && p.hop_count == 0,
            });
        }
    }

    /// Transmits `packet` from `sender` to all its current neighbours: one
    /// Bernoulli draw per outgoing edge in ascending receiver order, each
    /// success scheduling a frame arrival after that edge's latency. Returns
    /// how many arrivals were scheduled.
    pub fn broadcast_frame(&mut self, sender: Address, packet: Packet) -> usize {
        self.record_control_tx(sender, &packet);
        let now = self.now;
        let mut scheduled = 0;
        for i in 0..self.network.neighbors(sender).len() {
            let n = self.network.neighbors(sender)[i];
            if self.rng.bernoulli(n.params.delivery_prob) {
                self.queue.schedule(
                    now + n.params.latency,
                    EventKind::FrameArrival {
                        receiver: n.addr,
                        sender,
                        intended: None,
                        packet: packet.clone(),
                    },
                );
                scheduled += 1;
            } else if packet.kind.is_control() {
                self.recorder.record(Record::ControlLost);
            }
        }
        scheduled
    }

    /// A failed DATA unicast is counted as a loss and reported back to the
    /// sender after twice the link latency (an unanswered acknowledgement).
    fn unicast(&mut self, sender: Address, next_hop: Address, packet: Packet) {
        self.record_control_tx(sender, &packet);
        let now = self.now;
        let link = self.network.link(sender, next_hop).copied();
        let (delivered, latency) = match link {
            Some(n) => (self.rng.bernoulli(n.params.delivery_prob), n.params.latency),
            None => (false, self.links.default_params().latency),
        };
        if delivered {
            self.queue.schedule(
                now + latency,
                EventKind::FrameArrival {
                    receiver: next_hop,
                    sender,
                    intended: Some(next_hop),
                    packet,
                },
            );
            return;
        }
        if packet.kind == PacketKind::Data {
            self.recorder.record(Record::DataDropped {
                flow: packet.flow,
                cause: DropCause::Loss,
                hops: packet.hop_count,
            });
            self.queue.schedule(
                now + latency + latency,
                EventKind::UnicastFailed {
                    sender,
                    failed_hop: next_hop,
                    packet,
                },
            );
        } else {
            self.recorder.record(Record::ControlLost);
        }
    }

    fn sample_trace(&mut self) {
        let Some(trace) = &mut self.trace else { return };
        let now = self.now;
        for node in &self.nodes {
            let policy = node.policy();
            for (destination, next_hop, p) in node.table().iter() {
                let value = p.value_at(now, policy);
                if value >= policy.removal_threshold {
                    trace.push(TraceRow {
                        time: now,
                        node: node.address(),
                        destination,
                        next_hop,
                        pheromone: value,
                    });
                }
            }
        }
    }
}
