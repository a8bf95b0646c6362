use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;

use ara_core::{Address, Packet, Time};

#[derive(Debug, Clone, PartialEq)]
pub enum EventKind {
    FrameArrival {
        receiver: Address,
        sender: Address,
        /// Set for unicast frames; other receivers discard them.
        intended: Option<Address>,
        packet: Packet,
    },
    /// Link-layer feedback to `sender`: the unicast of `packet` to
    /// `failed_hop` was not acknowledged.
    UnicastFailed {
        sender: Address,
        failed_hop: Address,
        packet: Packet,
    },
    EvapTick,
    TrafficEmit {
        flow: usize,
        index: u64,
    },
    MobilityStep,
    TraceSample,
    DiscoveryTimeout {
        node: Address,
        destination: Address,
        generation: u64,
    },
    LinkChange {
        index: usize,
    },
    SimEnd,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pkt = |f: &mut fmt::Formatter<'_>, p: &Packet| {
            write!(
                f,
                "{} {}->{} seq={} ttl={} hops={}",
                p.kind.as_str(),
                p.source,
                p.destination,
                p.seq,
                p.ttl,
                p.hop_count
            )
        };
        match self {
            EventKind::FrameArrival {
                receiver,
                sender,
                packet,
                ..
            } => {
                write!(f, "arrival {sender}->{receiver} ")?;
                pkt(f, packet)
            }
            EventKind::UnicastFailed {
                sender,
                failed_hop,
                packet,
            } => {
                write!(f, "unicast-failed {sender}->{failed_hop} ")?;
                pkt(f, packet)
            }
            EventKind::EvapTick => f.write_str("evap-tick"),
            EventKind::TrafficEmit { flow, index } => write!(f, "emit flow={flow} index={index}"),
            EventKind::MobilityStep => f.write_str("mobility"),
            EventKind::TraceSample => f.write_str("trace"),
            EventKind::DiscoveryTimeout {
                node,
                destination,
                generation,
            } => write!(f, "discovery-timeout {node} dest={destination} gen={generation}"),
            EventKind::LinkChange { index } => write!(f, "link-change {index}"),
            EventKind::SimEnd => f.write_str("end"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Event {
    pub time: Time,
    /// Insertion order; breaks ties between events at the same time.
    pub seq: u64,
    pub kind: EventKind,
}

impl PartialEq for Event {
    fn eq(&self, other: &Self) -> bool {
        (self.time, self.seq) == (other.time, other.seq)
    }
}

impl Eq for Event {}

impl PartialOrd for Event {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Event {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.time, self.seq).cmp(&(other.time, other.seq))
    }
}

/// Min-queue over `(time, seq)`.
#[derive(Debug, Default)]
pub struct EventQueue {
    heap: BinaryHeap<Reverse<Event>>,
    next_seq: u64,
}

impl EventQueue {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn schedule(&mut self, time: Time, kind: EventKind) -> u64 {
        let seq = self.next_seq;
        self.next_seq += 1;
        self.heap.push(Reverse(Event { time, seq, kind }));
        seq
    }

    pub fn pop(&mut self) -> Option<Event> {
        self.heap.pop().map(|Reverse(e)| e)
    }

    pub fn peek_time(&self) -> Option<Time> {
        self.heap.peek().map(|Reverse(e)| e.time)
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Pending events in no particular order.
    pub fn iter(&self) -> impl Iterator<Item = &Event> + '_ {
        self.heap.iter().map(|Reverse(e)| e)
    }
}
