use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use ara_runner::{execute, expand_sweep, parse_scenario, parse_sweep, write_outputs};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "ara", version, about = "Ant-routing simulation campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario, optionally swept over parameter values.
    Run {
        scenario: PathBuf,
        /// Extra `[[sweep]]` axes, appended to any in the scenario file.
        #[arg(long)]
        sweep: Option<PathBuf>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        parallel: u64,
        /// Base seed; overrides `seed` in the scenario file.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let Command::Run {
        scenario,
        sweep,
        out,
        parallel,
        seed,
    } = Cli::parse().command;

    let prepared = (|| {
        let mut cfg = parse_scenario(&read(&scenario)?).map_err(|e| format!("{}: {e}", scenario.display()))?;
        if let Some(seed) = seed {
            cfg.seed = seed;
        }
        let mut axes = std::mem::take(&mut cfg.sweep);
        if let Some(path) = &sweep {
            axes.extend(parse_sweep(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?);
        }
        expand_sweep(&cfg, &axes).map_err(|e| e.to_string())
    })();
    let runs = match prepared {
        Ok(runs) => runs,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };

    let started = Instant::now();
    let campaign = execute(&runs, parallel as usize);
    if let Err(e) = write_outputs(&out, &campaign) {
        eprintln!("error: writing {}: {e}", out.display());
        return ExitCode::from(2);
    }
    for r in &campaign.results {
        if let Err(e) = &r.outcome {
            eprintln!(
                "run {} (combination {}, seed {}) failed: {e}",
                r.index, r.combination, r.seed
            );
        }
    }
    eprintln!(
        "{} runs, {} failed, {:.2} s wall clock, results in {}",
        campaign.results.len(),
        campaign.failures(),
        started.elapsed().as_secs_f64(),
        out.display()
    );
    if campaign.all_succeeded() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
