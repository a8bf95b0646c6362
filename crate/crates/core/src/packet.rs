use crate::{Address, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PacketKind {
    /// Forward ant: route request flooded by a source.
    Fant,
    /// Backward ant: reply flooded by the destination of a FANT.
    Bant,
    Data,
    /// Tells the upstream node that `destination` is no longer reachable
    /// through the sender.
    RouteFailure,
}

impl PacketKind {
    pub fn is_ant(self) -> bool {
        matches!(self, PacketKind::Fant | PacketKind::Bant)
    }

    pub fn is_control(self) -> bool {
        !matches!(self, PacketKind::Data)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PacketKind::Fant => "FANT",
            PacketKind::Bant => "BANT",
            PacketKind::Data => "DATA",
            PacketKind::RouteFailure => "ROUTE_FAILURE",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Packet {
    pub kind: PacketKind,
    pub source: Address,
    pub destination: Address,
    pub seq: u64,
    /// Remaining hop budget.
    pub ttl: u32,
    pub hop_count: u32,
    /// Bytes of application payload, DATA only.
    pub payload_size: u32,
    /// Creation time at the source, DATA only.
    pub created_at: Time,
    /// Backend bookkeeping (the simulator stores the flow index here). The
    /// core carries it unchanged.
    pub flow: u32,
}

impl Packet {
    pub fn ant(kind: PacketKind, source: Address, destination: Address, seq: u64, ttl: u32) -> Self {
        debug_assert!(kind.is_ant());
        Self {
            kind,
            source,
            destination,
            seq,
            ttl,
            hop_count: 0,
            payload_size: 0,
            created_at: Time::ZERO,
            flow: 0,
        }
    }

    pub fn data(
        source: Address,
        destination: Address,
        seq: u64,
        ttl: u32,
        payload_size: u32,
        created_at: Time,
        flow: u32,
    ) -> Self {
        Self {
            kind: PacketKind::Data,
            source,
            destination,
            seq,
            ttl,
            hop_count: 0,
            payload_size,
            created_at,
            flow,
        }
    }

    pub fn route_failure(data_source: Address, unreachable: Address, seq: u64, ttl: u32) -> Self {
        Self {
            kind: PacketKind::RouteFailure,
            source: data_source,
            destination: unreachable,
            seq,
            ttl,
            hop_count: 0,
            payload_size: 0,
            created_at: Time::ZERO,
            flow: 0,
        }
    }

    /// Copy of this packet after one more hop: `hop_count + 1`, `ttl − 1`.
    pub fn relayed(&self) -> Self {
        Self {
            ttl: self.ttl.saturating_sub(1),
            hop_count: self.hop_count + 1,
            ..self.clone()
        }
    }
}
