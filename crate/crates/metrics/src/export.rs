use std::fs;
use std::io;
use std::path::Path;

use crate::{MetricsSnapshot, PheromoneTrace};

pub const SUMMARY_HEADER: &[&str] = &[
    "run",
    "combination",
    "repetition",
    "seed",
    "status",
    "sent",
    "delivered",
    "dropped_loss",
    "dropped_ttl",
    "dropped_no_route",
    "in_flight",
    "delivery_ratio",
    "fant_tx",
    "bant_tx",
    "route_failure_tx",
    "control_overhead",
    "mean_hop_count",
    "mean_latency_ms",
    "discoveries",
];

pub const FLOWS_HEADER: &[&str] = &[
    "flow",
    "source",
    "destination",
    "sent",
    "delivered",
    "dropped_loss",
    "dropped_ttl",
    "dropped_no_route",
    "in_flight",
    "delivery_ratio",
    "mean_hop_count",
    "mean_latency_ms",
];

pub const TRACE_HEADER: &[&str] = &["time_s", "node", "destination", "next_hop", "pheromone"];

/// One line of `summary.csv`. Failed runs have no snapshot; their metric
/// columns are left empty and `status` carries the error.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub run: usize,
    pub combination: usize,
    pub repetition: usize,
    pub seed: u64,
    pub status: String,
    pub snapshot: Option<MetricsSnapshot>,
}

fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> Vec<u8> {
    w.into_inner().expect("in-memory CSV writer cannot fail")
}

pub fn summary_csv(rows: &[SummaryRow]) -> Vec<u8> {
    let mut w = writer();
    w.write_record(SUMMARY_HEADER).unwrap();
    for row in rows {
        let mut rec = vec![
            row.run.to_string(),
            row.combination.to_string(),
            row.repetition.to_string(),
            row.seed.to_string(),
            row.status.clone(),
        ];
        match &row.snapshot {
            Some(s) => {
                let agg = s.aggregate();
                rec.extend([
                    agg.sent.to_string(),
                    agg.delivered.to_string(),
                    agg.dropped_loss.to_string(),
                    agg.dropped_ttl.to_string(),
                    agg.dropped_no_route.to_string(),
                    agg.in_flight.to_string(),
                    fixed(agg.delivery_ratio()),
                    s.control.fant_tx.to_string(),
                    s.control.bant_tx.to_string(),
                    s.control.route_failure_tx.to_string(),
                    fixed(s.control_overhead()),
                    fixed(agg.mean_hop_count()),
                    fixed(agg.mean_latency_ms()),
                    s.discoveries.to_string(),
                ]);
            }
            None => rec.extend(std::iter::repeat_n(String::new(), SUMMARY_HEADER.len() - 5)),
        }
        w.write_record(&rec).unwrap();
    }
    finish(w)
}

pub fn flows_csv(snapshot: &MetricsSnapshot) -> Vec<u8> {
    let addr = |a: Option<ara_core::Address>| a.map(|a| a.to_string()).unwrap_or_default();
    let mut w = writer();
    w.write_record(FLOWS_HEADER).unwrap();
    for f in &snapshot.flows {
        w.write_record([
            f.flow.to_string(),
            addr(f.source),
            addr(f.destination),
            f.sent.to_string(),
            f.delivered.to_string(),
            f.dropped_loss.to_string(),
            f.dropped_ttl.to_string(),
            f.dropped_no_route.to_string(),
            f.in_flight.to_string(),
            fixed(f.delivery_ratio()),
            fixed(f.mean_hop_count()),
            fixed(f.mean_latency_ms()),
        ])
        .unwrap();
    }
    finish(w)
}

pub fn trace_csv(trace: &PheromoneTrace) -> Vec<u8> {
    let mut w = writer();
    w.write_record(TRACE_HEADER).unwrap();
    for r in trace.rows() {
        w.write_record([
            fixed(r.time.as_secs_f64()),
            r.node.to_string(),
            r.destination.to_string(),
            r.next_hop.to_string(),
            fixed(r.pheromone),
        ])
        .unwrap();
    }
    finish(w)
}

/// Writes `bytes` to `path`, creating parent directories.
pub fn write_file(path: &Path, bytes: &[u8]) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, bytes)
}
