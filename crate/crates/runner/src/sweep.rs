use std::fmt;

use toml::Value;

use crate::config::{ConfigError, ScenarioConfig, SweepAxis};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SweepError {
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("sweep axis `{0}` has no values")]
    EmptyAxis(String),
    #[error("`{path}` = {value}: {source}")]
    Invalid {
        path: String,
        value: String,
        source: ConfigError,
    },
}

/// One expanded run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub index: usize,
    pub combination: usize,
    pub repetition: u32,
    pub seed: u64,
    pub assignments: Vec<Assignment>,
    pub config: ScenarioConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub path: String,
    pub value: Value,
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::String(s) => write!(f, "{}={s}", self.path),
            v => write!(f, "{}={v}", self.path),
        }
    }
}

/// Expands the cartesian product of `axes` (last axis varies fastest),
/// repeating each combination `config.repetitions` times. Run `i` gets seed
/// `config.seed + i`.
pub fn expand_sweep(config: &ScenarioConfig, axes: &[SweepAxis]) -> Result<Vec<RunSpec>, SweepError> {
    let base = Value::try_from(config).expect("scenario config serializes");
    for axis in axes {
        if axis.values.is_empty() {
            return Err(SweepError::EmptyAxis(axis.path.clone()));
        }
        if lookup(&base, &axis.path).is_none() {
            return Err(SweepError::UnknownParameter(axis.path.clone()));
        }
    }

    let combinations: usize = axes.iter().map(|a| a.values.len()).product();
    let reps = config.repetitions as usize;
    let mut runs = Vec::with_capacity(combinations * reps);
    for combination in 0..combinations {
        let mut digits = Vec::with_capacity(axes.len());
        let mut rest = combination;
        for axis in axes.iter().rev() {
            digits.push(rest % axis.values.len());
            rest /= axis.values.len();
        }
        digits.reverse();

        let mut doc = base.clone();
        let assignments: Vec<Assignment> = axes
            .iter()
            .zip(&digits)
            .map(|(axis, &d)| Assignment {
                path: axis.path.clone(),
                value: axis.values[d].clone(),
            })
            .collect();
        for a in &assignments {
            *lookup_mut(&mut doc, &a.path).expect("path checked above") = a.value.clone();
        }
        let invalid = |a: Option<&Assignment>, source: ConfigError| SweepError::Invalid {
            path: a.map_or_else(String::new, |a| a.path.clone()),
            value: a.map_or_else(String::new, |a| a.value.to_string()),
            source,
        };
        let text = toml::to_string(&doc).expect("toml value serializes");
        let mut swept: ScenarioConfig =
            toml::from_str(&text).map_err(|e| invalid(assignments.first(), ConfigError::invalid(e.message())))?;
        swept.to_scenario().map_err(|e| invalid(assignments.first(), e))?;
        swept.repetitions = config.repetitions;

        for repetition in 0..config.repetitions {
            let index = runs.len();
            runs.push(RunSpec {
                index,
                combination,
                repetition,
                seed: config.seed.wrapping_add(index as u64),
                assignments: assignments.clone(),
                config: swept.clone(),
            });
        }
    }
    Ok(runs)
}

fn lookup<'a>(v: &'a Value, path: &str) -> Option<&'a Value> {
    path.split('.').try_fold(v, |v, seg| match v {
        Value::Table(t) => t.get(seg),
        Value::Array(a) => a.get(seg.parse::<usize>().ok()?),
        _ => None,
    })
}

fn lookup_mut<'a>(v: &'a mut Value, path: &str) -> Option<&'a mut Value> {
    path.split('.').try_fold(v, |v, seg| match v {
        Value::Table(t) => t.get_mut(seg),
        Value::Array(a) => a.get_mut(seg.parse::<usize>().ok()?),
        _ => None,
    })
}
