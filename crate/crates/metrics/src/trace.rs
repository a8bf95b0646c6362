use ara_core::{Address, Time};

#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    pub time: Time,
    pub node: Address,
    pub destination: Address,
    pub next_hop: Address,
    pub pheromone: f64,
}

/// Pheromone samples, nondecreasing in time.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PheromoneTrace {
    rows: Vec<TraceRow>,
}

impl PheromoneTrace {
    pub fn new() -> Self {
        Self::default()
    }

    /// # Panics
    ///
    /// If `row` is older than the last pushed row.
    pub fn push(&mut self, row: TraceRow) {
        if let Some(last) = self.rows.last() {
            assert!(row.time >= last.time, "trace rows must be pushed in time order");
        }
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[TraceRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Samples of one (node, destination, next hop) entry over time.
    pub fn series(&self, node: Address, destination: Address, next_hop: Address) -> Vec<(Time, f64)> {
        self.rows
            .iter()
            .filter(|r| r.node == node && r.destination == destination && r.next_hop == next_hop)
            .map(|r| (r.time, r.pheromone))
            .collect()
    }
}
