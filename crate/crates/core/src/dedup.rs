use std::collections::{HashSet, VecDeque};

use crate::Address;

/// Bounded set of `(source, seq)` ant generations already processed.
///
/// Once full, inserting a new generation evicts the oldest one.
#[derive(Debug, Clone)]
pub struct SeenSet {
    capacity: usize,
    order: VecDeque<(Address, u64)>,
    members: HashSet<(Address, u64)>,
}

impl SeenSet {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0, "dedup capacity must be positive");
        Self {
            capacity,
            order: VecDeque::with_capacity(capacity),
            members: HashSet::with_capacity(capacity),
        }
    }

    pub fn contains(&self, source: Address, seq: u64) -> bool {
        self.members.contains(&(source, seq))
    }

    /// Returns `false` if the generation was already present.
    pub fn insert(&mut self, source: Address, seq: u64) -> bool {
        if !self.members.insert((source, seq)) {
            return false;
        }
        if self.order.len() == self.capacity {
            if let Some(oldest) = self.order.pop_front() {
                self.members.remove(&oldest);
            }
        }
        self.order.push_back((source, seq));
        true
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }
}
