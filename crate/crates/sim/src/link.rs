use std::collections::BTreeMap;

use ara_core::{Address, Time};

/// Per directed edge impairment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkParams {
    pub delivery_prob: f64,
    pub latency: Time,
}

impl Default for LinkParams {
    fn default() -> Self {
        Self {
            delivery_prob: 1.0,
            latency: Time::from_millis(1),
        }
    }
}

/// Changes the parameters of `from → to`, and of `to → from` as well when
/// `symmetric` is set. Unset fields keep their current value.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkOverride {
    pub from: Address,
    pub to: Address,
    pub delivery_prob: Option<f64>,
    pub latency: Option<Time>,
    pub symmetric: bool,
}

/// A [`LinkOverride`] applied at a given simulation time.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkChange {
    pub at: Time,
    pub change: LinkOverride,
}

/// Defaults for every edge plus per-edge overrides.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinkModel {
    pub default: LinkParams,
    pub overrides: Vec<LinkOverride>,
}

/// Resolved per-directed-edge parameters that differ from the default.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinkTable {
    default: LinkParams,
    edges: BTreeMap<(Address, Address), LinkParams>,
}

impl LinkTable {
    pub fn new(model: &LinkModel) -> Self {
        let mut table = Self {
            default: model.default,
            edges: BTreeMap::new(),
        };
        for o in &model.overrides {
            table.apply(o);
        }
        table
    }

    pub fn apply(&mut self, o: &LinkOverride) {
        let mut set = |from: Address, to: Address| {
            let default = self.default;
            let p = self.edges.entry((from, to)).or_insert(default);
            if let Some(prob) = o.delivery_prob {
                p.delivery_prob = prob;
            }
            if let Some(lat) = o.latency {
                p.latency = lat;
            }
        };
        set(o.from, o.to);
        if o.symmetric {
            set(o.to, o.from);
        }
    }

    pub fn params(&self, from: Address, to: Address) -> LinkParams {
        self.edges.get(&(from, to)).copied().unwrap_or(self.default)
    }

    pub fn default_params(&self) -> LinkParams {
        self.default
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Neighbor {
    pub addr: Address,
    pub params: LinkParams,
}

/// Adjacency lists with resolved link parameters, sorted by receiver.
#[derive(Debug, Clone, Default)]
pub struct Network {
    adjacency: Vec<Vec<Neighbor>>,
}

impl Network {
    pub fn new(nodes: usize, edges: &[(Address, Address)], links: &LinkTable) -> Self {
        let mut adjacency = vec![Vec::new(); nodes];
        for &(u, v) in edges {
            adjacency[u.index()].push(Neighbor {
                addr: v,
                params: links.params(u, v),
            });
        }
        for list in &mut adjacency {
            list.sort_by_key(|n| n.addr);
            list.dedup_by_key(|n| n.addr);
        }
        Self { adjacency }
    }

    pub fn neighbors(&self, node: Address) -> &[Neighbor] {
        &self.adjacency[node.index()]
    }

    pub fn link(&self, from: Address, to: Address) -> Option<&Neighbor> {
        let list = &self.adjacency[from.index()];
        list.binary_search_by_key(&to, |n| n.addr).ok().map(|i| &list[i])
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Address, Address)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |n| (Address::new(u as u32), n.addr)))
    }
}
