use std::collections::BTreeMap;

use thiserror::Error;

use crate::{Address, Pheromone, PolicyConfig, Time};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("no route to {0}")]
pub struct NoRoute(pub Address);

/// Per-destination pheromone entries, keyed by next hop.
///
/// Both levels are ordered by [`Address`], which is the documented candidate
/// order for next-hop selection. A destination is removed as soon as its
/// last entry goes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RoutingTable {
    routes: BTreeMap<Address, BTreeMap<Address, Pheromone>>,
}

impl RoutingTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.routes.is_empty()
    }

    /// Number of (destination, next hop) entries.
    pub fn len(&self) -> usize {
        self.routes.values().map(BTreeMap::len).sum()
    }

    pub fn destinations(&self) -> impl Iterator<Item = Address> + '_ {
        self.routes.keys().copied()
    }

    pub fn has_route(&self, dest: Address) -> bool {
        self.routes.contains_key(&dest)
    }

    pub fn entries(&self, dest: Address) -> impl Iterator<Item = (Address, Pheromone)> + '_ {
        self.routes
            .get(&dest)
            .into_iter()
            .flat_map(|hops| hops.iter().map(|(a, p)| (*a, *p)))
    }

    /// All entries as `(destination, next hop, pheromone)` in address order.
    pub fn iter(&self) -> impl Iterator<Item = (Address, Address, Pheromone)> + '_ {
        self.routes
            .iter()
            .flat_map(|(d, hops)| hops.iter().map(move |(h, p)| (*d, *h, *p)))
    }

    pub fn get(&self, dest: Address, hop: Address) -> Option<Pheromone> {
        self.routes.get(&dest)?.get(&hop).copied()
    }

    pub fn value(&self, dest: Address, hop: Address) -> Option<f64> {
        self.get(dest, hop).map(|p| p.value)
    }

    /// Sets `(dest, hop)` to `max(existing, value)` and stamps it with `now`.
    ///
    /// Callers are expected to have evaporated the entry up to `now` first.
    pub fn install(&mut self, dest: Address, hop: Address, value: f64, now: Time) {
        assert!(!hop.is_broadcast(), "broadcast address used as next hop");
        let slot = self
            .routes
            .entry(dest)
            .or_default()
            .entry(hop)
            .or_insert(Pheromone::new(value, now));
        slot.value = slot.value.max(value);
        slot.last_update = now;
    }

    /// Adds `Δφ` to an existing entry. Missing entries are left alone:
    /// only ants create routes. Returns whether an entry was reinforced.
    pub fn reinforce(&mut self, dest: Address, hop: Address, cfg: &PolicyConfig) -> bool {
        match self.routes.get_mut(&dest).and_then(|hops| hops.get_mut(&hop)) {
            Some(p) => {
                p.value += cfg.reinforcement;
                true
            }
            None => false,
        }
    }

    pub fn remove(&mut self, dest: Address, hop: Address) -> Option<Pheromone> {
        let hops = self.routes.get_mut(&dest)?;
        let removed = hops.remove(&hop);
        if hops.is_empty() {
            self.routes.remove(&dest);
        }
        removed
    }

    /// Evaporates every entry up to `now`, dropping those that fall below
    /// the removal threshold.
    pub fn evaporate(&mut self, now: Time, cfg: &PolicyConfig) {
        self.routes.retain(|_, hops| {
            evaporate_hops(hops, now, cfg);
            !hops.is_empty()
        });
    }

    /// Same as [`evaporate`](Self::evaporate), restricted to one destination.
    pub fn evaporate_destination(&mut self, dest: Address, now: Time, cfg: &PolicyConfig) {
        if let Some(hops) = self.routes.get_mut(&dest) {
            evaporate_hops(hops, now, cfg);
            if hops.is_empty() {
                self.routes.remove(&dest);
            }
        }
    }

    /// Forwarding probabilities `φ_i^α / Σ_j φ_j^α` in candidate order.
    pub fn forwarding_distribution(&self, dest: Address, alpha: f64) -> Result<Vec<(Address, f64)>, NoRoute> {
        let hops = self.routes.get(&dest).ok_or(NoRoute(dest))?;
        let weights: Vec<(Address, f64)> = hops.iter().map(|(a, p)| (*a, p.value.powf(alpha))).collect();
        let total: f64 = weights.iter().map(|(_, w)| w).sum();
        Ok(weights.into_iter().map(|(a, w)| (a, w / total)).collect())
    }

    /// Picks a next hop for `dest` using the uniform draw `u ∈ [0, 1)`.
    ///
    /// Candidates are walked in ascending address order and the first one
    /// whose cumulative probability exceeds `u` wins.
    pub fn select_next_hop(&self, dest: Address, u: f64, alpha: f64) -> Result<Address, NoRoute> {
        let hops = self.routes.get(&dest).ok_or(NoRoute(dest))?;
        if hops.len() == 1 {
            return Ok(*hops.keys().next().unwrap());
        }
        let total: f64 = hops.values().map(|p| p.value.powf(alpha)).sum();
        let mut cumulative = 0.0;
        let mut last = Address::BROADCAST;
        for (addr, p) in hops {
            cumulative += p.value.powf(alpha);
            if cumulative / total > u {
                return Ok(*addr);
            }
            last = *addr;
        }
        // rounding left the sum just short of u
        Ok(last)
    }

    /// Deterministic choice: highest pheromone, lowest address on ties.
    pub fn best_next_hop(&self, dest: Address, exclude: Option<Address>) -> Option<Address> {
        let mut best: Option<(Address, f64)> = None;
        for (addr, p) in self.routes.get(&dest)? {
            if Some(*addr) == exclude {
                continue;
            }
            if best.is_none_or(|(_, v)| p.value > v) {
                best = Some((*addr, p.value));
            }
        }
        best.map(|(a, _)| a)
    }
}

fn evaporate_hops(hops: &mut BTreeMap<Address, Pheromone>, now: Time, cfg: &PolicyConfig) {
    hops.retain(|_, p| {
        let v = p.value_at(now, cfg);
        if v < cfg.removal_threshold {
            return false;
        }
        p.value = v;
        p.last_update = p.last_update.max(now);
        true
    });
}
