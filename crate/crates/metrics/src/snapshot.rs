use ara_core::{Address, Time};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FlowStats {
    pub flow: u32,
    pub source: Option<Address>,
    pub destination: Option<Address>,
    pub sent: u64,
    pub delivered: u64,
    pub dropped_loss: u64,
    pub dropped_ttl: u64,
    pub dropped_no_route: u64,
    /// Sent but neither delivered nor dropped when the run ended.
    pub in_flight: u64,
    pub hop_sum: u64,
    pub latency_sum: Time,
}

impl FlowStats {
    pub fn dropped(&self) -> u64 {
        self.dropped_loss + self.dropped_ttl + self.dropped_no_route
    }

    /// `delivered / sent`, zero when nothing was sent.
    pub fn delivery_ratio(&self) -> f64 {
        if self.sent == 0 {
            0.0
        } else {
            self.delivered as f64 / self.sent as f64
        }
    }

    pub fn mean_hop_count(&self) -> f64 {
        if self.delivered == 0 {
            0.0
        } else {
            self.hop_sum as f64 / self.delivered as f64
        }
    }

    pub fn mean_latency_ms(&self) -> f64 {
        if self.delivered == 0 {
            0.0
        } else {
            self.latency_sum.as_millis_f64() / self.delivered as f64
        }
    }

    /// sent = delivered + dropped (all causes) + in flight
    pub fn conserved(&self) -> bool {
        self.sent == self.delivered + self.dropped() + self.in_flight
    }

    fn add(&mut self, other: &FlowStats) {
        self.sent += other.sent;
        self.delivered += other.delivered;
        self.dropped_loss += other.dropped_loss;
        self.dropped_ttl += other.dropped_ttl;
        self.dropped_no_route += other.dropped_no_route;
        self.in_flight += other.in_flight;
        self.hop_sum += other.hop_sum;
        self.latency_sum += other.latency_sum;
    }
}

/// Control-plane transmissions and drops.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControlStats {
    pub fant_tx: u64,
    pub bant_tx: u64,
    pub route_failure_tx: u64,
    /// Ants discarded as duplicates.
    pub duplicate_drops: u64,
    /// Control packets discarded because their TTL ran out.
    pub ttl_drops: u64,
    /// ROUTE_FAILUREs that found no upstream hop.
    pub no_route_drops: u64,
    /// Control frames lost on a link.
    pub lost: u64,
}

impl ControlStats {
    pub fn total_tx(&self) -> u64 {
        self.fant_tx + self.bant_tx + self.route_failure_tx
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeliveryRecord {
    pub flow: u32,
    pub seq: u64,
    pub sent_at: Time,
    pub hops: u32,
    pub latency: Time,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct MetricsSnapshot {
    pub flows: Vec<FlowStats>,
    pub control: ControlStats,
    /// One record per delivered DATA packet, in delivery order.
    pub deliveries: Vec<DeliveryRecord>,
    /// Route discoveries started (FANTs originated by a source).
    pub discoveries: u64,
    /// Largest number of FANT transmissions of any single generation.
    pub max_fant_tx_per_discovery: u64,
    /// Largest hop count seen on any delivered or dropped packet.
    pub max_hop_count: u32,
}

impl MetricsSnapshot {
    pub fn aggregate(&self) -> FlowStats {
        let mut total = FlowStats::default();
        for f in &self.flows {
            total.add(f);
        }
        total
    }

    pub fn delivery_ratio(&self) -> f64 {
        self.aggregate().delivery_ratio()
    }

    /// Control packets transmitted per delivered DATA packet. With no
    /// deliveries the denominator is taken as one.
    pub fn control_overhead(&self) -> f64 {
        self.control.total_tx() as f64 / self.aggregate().delivered.max(1) as f64
    }

    pub fn mean_hop_count(&self) -> f64 {
        self.aggregate().mean_hop_count()
    }

    pub fn conserved(&self) -> bool {
        self.flows.iter().all(FlowStats::conserved) && self.aggregate().conserved()
    }
}
