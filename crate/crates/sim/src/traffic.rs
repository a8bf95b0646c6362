use ara_core::{Address, Time};

/// Constant-bit-rate flow.
#[derive(Debug, Clone, PartialEq)]
pub struct TrafficFlow {
    pub source: Address,
    pub destination: Address,
    /// Packets per second.
    pub rate: f64,
    pub payload_size: u32,
    pub start: Time,
    /// Exclusive: no packet is emitted at or after `end`.
    pub end: Time,
}

impl TrafficFlow {
    /// Emission time of the `index`-th packet, if it falls before `end`.
    pub fn emission_time(&self, index: u64) -> Option<Time> {
        let offset = Time::from_secs_f64(index as f64 / self.rate);
        let t = self.start + offset;
        (t < self.end).then_some(t)
    }

    /// Number of packets the flow emits over its lifetime.
    pub fn packet_count(&self) -> u64 {
        let mut n = 0;
        while self.emission_time(n).is_some() {
            n += 1;
        }
        n
    }
}
