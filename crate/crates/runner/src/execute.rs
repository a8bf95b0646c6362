use std::io;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use ara_metrics::{flows_csv, summary_csv, trace_csv, write_file, SummaryRow};
use ara_sim::RunOutput;

use crate::sweep::{Assignment, RunSpec};

/// Outcome of one run. Errors are kept as text so a campaign can report
/// them alongside the successes.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub index: usize,
    pub combination: usize,
    pub repetition: u32,
    pub seed: u64,
    pub outcome: Result<RunOutput, String>,
}

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Stat {
    pub mean: f64,
    pub sd: f64,
}

impl Stat {
    /// `sd` uses the n - 1 denominator and is 0 for a single sample. An empty
    /// sample gives NaN for both.
    pub fn of(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        if xs.is_empty() {
            return Self {
                mean: f64::NAN,
                sd: f64::NAN,
            };
        }
        let mean = xs.iter().sum::<f64>() / n;
        let sd = if xs.len() < 2 {
            0.0
        } else {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        Self { mean, sd }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub combination: usize,
    pub assignments: Vec<Assignment>,
    pub runs: usize,
    pub failed: usize,
    pub delivery_ratio: Stat,
    /// Control transmissions per delivered DATA packet.
    pub control_overhead: Stat,
    pub mean_hop_count: Stat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Campaign {
    pub results: Vec<RunResult>,
    pub aggregates: Vec<Aggregate>,
}

impl Campaign {
    pub fn all_succeeded(&self) -> bool {
        self.results.iter().all(|r| r.outcome.is_ok())
    }

    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| r.outcome.is_err()).count()
    }
}

fn run_one(spec: &RunSpec) -> RunResult {
    let outcome = catch_unwind(AssertUnwindSafe(|| {
        let scenario = spec.config.to_scenario().map_err(|e| e.to_string())?;
        ara_sim::run(&scenario, spec.seed).map_err(|e| e.to_string())
    }))
    .unwrap_or_else(|panic| {
        let msg = panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "run panicked".into());
        Err(msg)
    });
    RunResult {
        index: spec.index,
        combination: spec.combination,
        repetition: spec.repetition,
        seed: spec.seed,
        outcome,
    }
}

/// Runs the expanded list on `parallelism` threads. Each run is single-threaded and
/// shares nothing with the others, so the result does not depend on the
/// thread count.
pub fn execute(runs: &[RunSpec], parallelism: usize) -> Campaign {
    assert!(parallelism >= 1, "parallelism must be at least 1");
    let results: Vec<RunResult> = if parallelism == 1 {
        runs.iter().map(run_one).collect()
    } else {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(parallelism)
            .build()
            .expect("thread pool");
        pool.install(|| runs.par_iter().map(run_one).collect())
    };
    let aggregates = aggregate(runs, &results);
    Campaign { results, aggregates }
}

fn aggregate(runs: &[RunSpec], results: &[RunResult]) -> Vec<Aggregate> {
    let combos = runs.iter().map(|r| r.combination + 1).max().unwrap_or(0);
    (0..combos)
        .map(|c| {
            let members: Vec<&RunResult> = results.iter().filter(|r| r.combination == c).collect();
            let ok: Vec<&RunOutput> = members.iter().filter_map(|r| r.outcome.as_ref().ok()).collect();
            let stat = |f: fn(&RunOutput) -> f64| Stat::of(&ok.iter().map(|o| f(o)).collect::<Vec<_>>());
            Aggregate {
                combination: c,
                assignments: runs
                    .iter()
                    .find(|r| r.combination == c)
                    .map(|r| r.assignments.clone())
                    .unwrap_or_default(),
                runs: members.len(),
                failed: members.len() - ok.len(),
                delivery_ratio: stat(|o| o.snapshot.delivery_ratio()),
                control_overhead: stat(|o| o.snapshot.control_overhead()),
                mean_hop_count: stat(|o| o.snapshot.mean_hop_count()),
            }
        })
        .collect()
}

pub const AGGREGATE_HEADER: &[&str] = &[
    "combination",
    "parameters",
    "runs",
    "failed",
    "delivery_ratio_mean",
    "delivery_ratio_sd",
    "control_overhead_mean",
    "control_overhead_sd",
    "mean_hop_count_mean",
    "mean_hop_count_sd",
];

pub fn aggregate_csv(aggregates: &[Aggregate]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(AGGREGATE_HEADER).expect("in-memory write");
    for a in aggregates {
        let params: Vec<String> = a.assignments.iter().map(|x| x.to_string()).collect();
        let f = |x: f64| format!("{x:.6}");
        w.write_record([
            a.combination.to_string(),
            params.join(";"),
            a.runs.to_string(),
            a.failed.to_string(),
            f(a.delivery_ratio.mean),
            f(a.delivery_ratio.sd),
            f(a.control_overhead.mean),
            f(a.control_overhead.sd),
            f(a.mean_hop_count.mean),
            f(a.mean_hop_count.sd),
        ])
        .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn summary_rows(campaign: &Campaign) -> Vec<SummaryRow> {
    campaign
        .results
        .iter()
        .map(|r| SummaryRow {
            run: r.index,
            combination: r.combination,
            repetition: r.repetition as usize,
            seed: r.seed,
            status: match &r.outcome {
                Ok(_) => "ok".into(),
                Err(e) => format!("error: {e}"),
            },
            snapshot: r.outcome.as_ref().ok().map(|o| o.snapshot.clone()),
        })
        .collect()
}

/// Writes the campaign under `dir`:
///
/// ```text
/// summary.csv                      one row per run
/// aggregate.csv                    one row per sweep combination
/// runs/<combination>/<repetition>/ flows.csv, pheromone_trace.csv, or error.txt
/// ```
pub fn write_outputs(dir: &Path, campaign: &Campaign) -> io::Result<()> {
    write_file(&dir.join("summary.csv"), &summary_csv(&summary_rows(campaign)))?;
    write_file(&dir.join("aggregate.csv"), &aggregate_csv(&campaign.aggregates))?;
    for r in &campaign.results {
        let run_dir = dir
            .join("runs")
            .join(r.combination.to_string())
            .join(r.repetition.to_string());
        match &r.outcome {
            Ok(out) => {
                write_file(&run_dir.join("flows.csv"), &flows_csv(&out.snapshot))?;
                write_file(&run_dir.join("pheromone_trace.csv"), &trace_csv(&out.trace))?;
            }
            Err(e) => write_file(&run_dir.join("error.txt"), format!("{e}\n").as_bytes())?,
        }
    }
    Ok(())
}
