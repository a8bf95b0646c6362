//! Run statistics for the ant-routing simulator.
//!
//! A [`Recorder`] collects counters while a run executes and produces a
//! [`MetricsSnapshot`] at the end. Pheromone evolution is sampled into a
//! [`PheromoneTrace`]. Both export to CSV with a fixed column order and six
//! decimal places, so two identical runs produce identical bytes.

mod export;
mod recorder;
mod snapshot;
mod trace;

pub use export::{
    flows_csv, summary_csv, trace_csv, write_file, SummaryRow, FLOWS_HEADER, SUMMARY_HEADER, TRACE_HEADER,
};
pub use recorder::{DropCause, Record, Recorder};
pub use snapshot::{ControlStats, DeliveryRecord, FlowStats, MetricsSnapshot};
pub use trace::{PheromoneTrace, TraceRow};
