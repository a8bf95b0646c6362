use std::collections::HashMap;

use ara_core::{Address, DropReason, PacketKind, Time};

use crate::{DeliveryRecord, FlowStats, MetricsSnapshot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DropCause {
    /// Frame lost on a link.
    Loss,
    Ttl,
    NoRoute,
}

impl DropCause {
    pub fn from_reason(reason: DropReason) -> Self {
        match reason {
            DropReason::TtlExpired => DropCause::Ttl,
            DropReason::NoRoute | DropReason::Duplicate => DropCause::NoRoute,
        }
    }
}

/// Something worth counting.
#[derive(Debug, Clone, PartialEq)]
pub enum Record {
    DataSent {
        flow: u32,
    },
    DataDelivered {
        flow: u32,
        seq: u64,
        sent_at: Time,
        hops: u32,
        latency: Time,
    },
    DataDropped {
        flow: u32,
        cause: DropCause,
        hops: u32,
    },
    /// One transmission of a control packet. `originated` marks the first
    /// transmission by the packet's source.
    ControlTx {
        kind: PacketKind,
        source: Address,
        seq: u64,
        originated: bool,
    },
    ControlDropped {
        reason: DropReason,
        hops: u32,
    },
    ControlLost,
}

/// Accumulates [`Record`]s for one run.
///
/// A disabled recorder ignores everything; routing behaviour never depends
/// on what is recorded.
#[derive(Debug, Clone)]
pub struct Recorder {
    enabled: bool,
    snapshot: MetricsSnapshot,
    fant_tx: HashMap<(Address, u64), u64>,
}

impl Recorder {
    /// `flows` lists (source, destination) per flow index.
    pub fn new(flows: &[(Address, Address)]) -> Self {
        let flows = flows
            .iter()
            .enumerate()
            .map(|(i, (s, d))| FlowStats {
                flow: i as u32,
                source: Some(*s),
                destination: Some(*d),
                ..Default::default()
            })
            .collect();
        Self {
            enabled: true,
            snapshot: MetricsSnapshot {
                flows,
                ..Default::default()
            },
            fant_tx: HashMap::new(),
        }
    }

    pub fn disabled() -> Self {
        Self {
            enabled: false,
            ..Self::new(&[])
        }
    }

    pub fn is_enabled(&self) -> bool {
        self.enabled
    }

    fn flow(&mut self, flow: u32) -> &mut FlowStats {
        let idx = flow as usize;
        if idx >= self.snapshot.flows.len() {
            let start = self.snapshot.flows.len() as u32;
            self.snapshot.flows.extend((start..=flow).map(|f| FlowStats {
                flow: f,
                ..Default::default()
            }));
        }
        &mut self.snapshot.flows[idx]
    }

    pub fn record(&mut self, record: Record) {
        if !self.enabled {
            return;
        }
        match record {
            Record::DataSent { flow } => self.flow(flow).sent += 1,
            Record::DataDelivered {
                flow,
                seq,
                sent_at,
                hops,
                latency,
            } => {
                let f = self.flow(flow);
                f.delivered += 1;
                f.hop_sum += u64::from(hops);
                f.latency_sum += latency;
                self.snapshot.deliveries.push(DeliveryRecord {
                    flow,
                    seq,
                    sent_at,
                    hops,
                    latency,
                });
                self.note_hops(hops);
            }
            Record::DataDropped { flow, cause, hops } => {
                let f = self.flow(flow);
                match cause {
                    DropCause::Loss => f.dropped_loss += 1,
                    DropCause::Ttl => f.dropped_ttl += 1,
                    DropCause::NoRoute => f.dropped_no_route += 1,
                }
                self.note_hops(hops);
            }
            Record::ControlTx {
                kind,
                source,
                seq,
                originated,
            } => {
                let c = &mut self.snapshot.control;
                match kind {
                    PacketKind::Fant => {
                        c.fant_tx += 1;
                        if originated {
                            self.snapshot.discoveries += 1;
                        }
                        let n = self.fant_tx.entry((source, seq)).or_insert(0);
                        *n += 1;
                        self.snapshot.max_fant_tx_per_discovery = self.snapshot.max_fant_tx_per_discovery.max(*n);
                    }
                    PacketKind::Bant => c.bant_tx += 1,
                    PacketKind::RouteFailure => c.route_failure_tx += 1,
                    PacketKind::Data => debug_assert!(false, "DATA is not a control packet"),
                }
            }
            Record::ControlDropped { reason, hops } => {
                let c = &mut self.snapshot.control;
                match reason {
                    DropReason::Duplicate => c.duplicate_drops += 1,
                    DropReason::TtlExpired => c.ttl_drops += 1,
                    DropReason::NoRoute => c.no_route_drops += 1,
                }
                self.note_hops(hops);
            }
            Record::ControlLost => self.snapshot.control.lost += 1,
        }
    }

    fn note_hops(&mut self, hops: u32) {
        self.snapshot.max_hop_count = self.snapshot.max_hop_count.max(hops);
    }

    /// FANT transmissions counted so far for one generation.
    pub fn fant_transmissions(&self, source: Address, seq: u64) -> u64 {
        self.fant_tx.get(&(source, seq)).copied().unwrap_or(0)
    }

    /// Current counters. Packets sent but not yet delivered or dropped are
    /// reported as in flight.
    pub fn snapshot(&self) -> MetricsSnapshot {
        let mut snap = self.snapshot.clone();
        for f in &mut snap.flows {
            f.in_flight = f.sent - f.delivered - f.dropped();
        }
        snap
    }
}
