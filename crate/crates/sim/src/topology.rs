use std::collections::BTreeSet;

use ara_core::Address;
use thiserror::Error;

use crate::SimRng;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Relative slack on the unit-disk test, so that nodes placed exactly one
/// range apart stay connected despite rounding.
const RANGE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum TopologySpec {
    /// Nodes on the x axis, `spacing` metres apart.
    Line {
        nodes: usize,
        spacing: f64,
        comm_range: f64,
    },
    /// Row-major grid; node `r * cols + c` sits at `(c, r) * spacing`.
    Grid {
        rows: usize,
        cols: usize,
        spacing: f64,
        comm_range: f64,
    },
    /// Two disjoint paths between node 0 and the last node, through
    /// `short_relays` and `long_relays` intermediate nodes. Short-path
    /// relays get the lower addresses.
    Diamond { short_relays: usize, long_relays: usize },
    /// Uniform placement in `[0, width] × [0, height]`.
    RandomGeometric {
        nodes: usize,
        width: f64,
        height: f64,
        comm_range: f64,
    },
    /// Undirected edge list between nodes `0..nodes`.
    Explicit {
        nodes: usize,
        edges: Vec<(u32, u32)>,
        positions: Option<Vec<Position>>,
    },
}

impl TopologySpec {
    pub fn node_count(&self) -> usize {
        match self {
            TopologySpec::Line { nodes, .. } => *nodes,
            TopologySpec::Grid { rows, cols, .. } => rows * cols,
            TopologySpec::Diamond {
                short_relays,
                long_relays,
            } => 2 + short_relays + long_relays,
            TopologySpec::RandomGeometric { nodes, .. } => *nodes,
            TopologySpec::Explicit { nodes, .. } => *nodes,
        }
    }

    /// Communication range for kinds whose edges come from geometry.
    pub fn comm_range(&self) -> Option<f64> {
        match self {
            TopologySpec::Line { comm_range, .. }
            | TopologySpec::Grid { comm_range, .. }
            | TopologySpec::RandomGeometric { comm_range, .. } => Some(*comm_range),
            _ => None,
        }
    }

    pub fn is_geometric(&self) -> bool {
        self.comm_range().is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TopologyWarning {
    /// The undirected connectivity graph has more than one component.
    Disconnected { components: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopologyError {
    #[error("topology needs at least 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("communication range must be positive, got {0}")]
    InvalidRange(f64),
    #[error("invalid topology parameter: {0}")]
    InvalidParameter(String),
    #[error("edge ({0}, {1}) references a node outside 0..{2}")]
    BadEdge(u32, u32, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    pub positions: Vec<Position>,
    /// Directed edges, sorted and without self loops.
    pub edges: Vec<(Address, Address)>,
    pub comm_range: Option<f64>,
    pub warnings: Vec<TopologyWarning>,
}

impl Topology {
    pub fn node_count(&self) -> usize {
        self.positions.len()
    }
}

/// Directed unit-disk edges: `(u, v)` exists iff `u ≠ v` and
/// `distance(u, v) ≤ range`.
pub fn geometric_edges(positions: &[Position], range: f64) -> Vec<(Address, Address)> {
    let limit = range * (1.0 + RANGE_SLACK);
    let mut edges = Vec::new();
    for (i, p) in positions.iter().enumerate() {
        for (j, q) in positions.iter().enumerate() {
            if i != j && p.distance(q) <= limit {
                edges.push((Address::new(i as u32), Address::new(j as u32)));
            }
        }
    }
    edges
}

/// Number of connected components of the undirected version of `edges`.
pub fn component_count(nodes: usize, edges: &[(Address, Address)]) -> usize {
    let mut parent: Vec<usize> = (0..nodes).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut components = nodes;
    for (u, v) in edges {
        let (a, b) = (find(&mut parent, u.index()), find(&mut parent, v.index()));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    components
}

fn check_range(range: f64) -> Result<(), TopologyError> {
    if range > 0.0 && range.is_finite() {
        Ok(())
    } else {
        Err(TopologyError::InvalidRange(range))
    }
}

fn check_positive(name: &str, v: f64) -> Result<(), TopologyError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(TopologyError::InvalidParameter(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

/// Places the nodes of `spec` and derives the directed edge set.
///
/// Random placement consumes two draws per node (x then y), in address
/// order. A disconnected result is reported as a warning, not an error.
pub fn build_topology(spec: &TopologySpec, rng: &mut SimRng) -> Result<Topology, TopologyError> {
    let n = spec.node_count();
    if n < 2 {
        return Err(TopologyError::TooFewNodes(n));
    }
    let (positions, edges) = match spec {
        TopologySpec::Line {
            spacing, comm_range, ..
        } => {
            check_range(*comm_range)?;
            check_positive("spacing", *spacing)?;
            let positions: Vec<_> = (0..n).map(|i| Position::new(i as f64 * spacing, 0.0)).collect();
            let edges = geometric_edges(&positions, *comm_range);
            (positions, edges)
        }
        TopologySpec::Grid {
            cols,
            spacing,
            comm_range,
            ..
        } => {
            check_range(*comm_range)?;
            check_positive("spacing", *spacing)?;
            let positions: Vec<_> = (0..n)
                .map(|i| Position::new((i % cols) as f64 * spacing, (i / cols) as f64 * spacing))
                .collect();
            let edges = geometric_edges(&positions, *comm_range);
            (positions, edges)
        }
        TopologySpec::RandomGeometric {
            width,
            height,
            comm_range,
            ..
        } => {
            check_range(*comm_range)?;
            check_positive("width", *width)?;
            check_positive("height", *height)?;
            let positions: Vec<_> = (0..n)
                .map(|_| {
                    let x = rng.uniform(0.0, *width);
                    let y = rng.uniform(0.0, *height);
                    Position::new(x, y)
                })
                .collect();
            let edges = geometric_edges(&positions, *comm_range);
            (positions, edges)
        }
        TopologySpec::Diamond {
            short_relays,
            long_relays,
        } => {
            if *short_relays == 0 || *long_relays == 0 {
                return Err(TopologyError::InvalidParameter(
                    "diamond needs at least one relay on each path".into(),
                ));
            }
            let dest = n - 1;
            let short: Vec<usize> = (1..=*short_relays).collect();
            let long: Vec<usize> = (short_relays + 1..=short_relays + long_relays).collect();
            let mut pairs = Vec::new();
            for path in [&short, &long] {
                let mut prev = 0;
                for &hop in path.iter() {
                    pairs.push((prev, hop));
                    prev = hop;
                }
                pairs.push((prev, dest));
            }
            let mut positions = vec![Position::default(); n];
            let width = (short.len().max(long.len()) + 1) as f64;
            positions[dest] = Position::new(width, 0.0);
            for (k, &i) in short.iter().enumerate() {
                positions[i] = Position::new((k + 1) as f64 * width / (short.len() + 1) as f64, 1.0);
            }
            for (k, &i) in long.iter().enumerate() {
                positions[i] = Position::new((k + 1) as f64 * width / (long.len() + 1) as f64, -1.0);
            }
            (positions, undirected(&pairs))
        }
        TopologySpec::Explicit { edges, positions, .. } => {
            for &(u, v) in edges {
                if u as usize >= n || v as usize >= n || u == v {
                    return Err(TopologyError::BadEdge(u, v, n));
                }
            }
            let positions = match positions {
                Some(p) if p.len() == n => p.clone(),
                Some(p) => {
                    return Err(TopologyError::InvalidParameter(format!(
                        "{} positions given for {n} nodes",
                        p.len()
                    )))
                }
                None => (0..n).map(|i| Position::new(i as f64, 0.0)).collect(),
            };
            let pairs: Vec<(usize, usize)> = edges.iter().map(|&(u, v)| (u as usize, v as usize)).collect();
            (positions, undirected(&pairs))
        }
    };
    let components = component_count(n, &edges);
    let warnings = if components > 1 {
        vec![TopologyWarning::Disconnected { components }]
    } else {
        Vec::new()
    };
    Ok(Topology {
        positions,
        edges,
        comm_range: spec.comm_range(),
        warnings,
    })
}

fn undirected(pairs: &[(usize, usize)]) -> Vec<(Address, Address)> {
    let set: BTreeSet<(Address, Address)> = pairs
        .iter()
        .flat_map(|&(u, v)| {
            let (u, v) = (Address::new(u as u32), Address::new(v as u32));
            [(u, v), (v, u)]
        })
        .collect();
    set.into_iter().collect()
}
