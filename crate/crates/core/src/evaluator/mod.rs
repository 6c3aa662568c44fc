// SPDX-License-Identifier: Apache-2.0

//! Black-box evaluation of design points.
//!
//! Evaluators report raw resource counts; the harness divides them by the
//! declared capacities. `error` and `timeout` outcomes are ordinary records,
//! only harness faults (I/O on the point file, a command that cannot be
//! spawned) surface as [`HarnessError`].

mod subprocess;
pub mod synthetic;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design_space::{DesignPoint, DesignSpace};
use crate::pareto::{weighted_resource, Objectives, ResourceRatios, ResourceWeights};

pub use synthetic::Fixture;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
    Timeout,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Error => "error",
            Status::Timeout => "timeout",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub point_id: String,
    pub status: Status,
    pub latency_us: Option<f64>,
    pub ratios: Option<ResourceRatios>,
    pub wall_time_s: f64,
}

impl EvaluationRecord {
    pub fn failed(point_id: String, status: Status, wall_time_s: f64) -> Self {
        debug_assert!(status != Status::Ok);
        EvaluationRecord {
            point_id,
            status,
            latency_us: None,
            ratios: None,
            wall_time_s,
        }
    }

    pub fn objectives(&self, weights: &ResourceWeights) -> Option<Objectives> {
        match (self.status, self.latency_us, &self.ratios) {
            (Status::Ok, Some(lat), Some(r)) => {
                Some(Objectives::new(lat, weighted_resource(r, weights)))
            }
            _ => None,
        }
    }
}

/// Resource counts as reported by a tool.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawReport {
    pub latency_us: f64,
    pub lut: f64,
    pub ff: f64,
    pub dsp: f64,
    pub bram: f64,
}

/// Available amount of each resource on the target device.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Capacities {
    pub lut: u64,
    pub ff: u64,
    pub dsp: u64,
    pub bram: u64,
}

impl Default for Capacities {
    /// A Zynq-7020-sized device.
    fn default() -> Self {
        Capacities {
            lut: 53200,
            ff: 106400,
            dsp: 220,
            bram: 280,
        }
    }
}

impl Capacities {
    pub fn ratios(&self, r: &RawReport) -> ResourceRatios {
        ResourceRatios {
            lut: r.lut / self.lut as f64,
            ff: r.ff / self.ff as f64,
            dsp: r.dsp / self.dsp as f64,
            bram: r.bram / self.bram as f64,
        }
    }

    pub fn is_valid(&self) -> bool {
        self.lut > 0 && self.ff > 0 && self.dsp > 0 && self.bram > 0
    }
}

impl FromStr for Capacities {
    type Err = String;

    /// `lut,ff,dsp,bram`
    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<u64> = s
            .split(',')
            .map(|p| p.trim().parse::<u64>())
            .collect::<Result<_, _>>()
            .map_err(|e| format!("bad capacity list `{s}`: {e}"))?;
        match parts[..] {
            [lut, ff, dsp, bram] => {
                let caps = Capacities { lut, ff, dsp, bram };
                if caps.is_valid() {
                    Ok(caps)
                } else {
                    Err("capacities must be positive".into())
                }
            }
            _ => Err(format!("expected four capacities, got `{s}`")),
        }
    }
}

/// What an evaluator produced, before normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Outcome {
    Ok(RawReport),
    Error,
    Timeout,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("failed to write point file: {0}")]
    PointFile(#[source] std::io::Error),
    #[error("failed to launch `{command}`: {source}")]
    Spawn {
        command: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to monitor evaluator process: {0}")]
    Wait(#[source] std::io::Error),
    #[error("design space has {size} points, above the brute-force limit of {limit}")]
    SpaceTooLarge { size: u64, limit: u64 },
    #[error("{0}")]
    Other(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("evaluator must be `subprocess:TEMPLATE` or `synthetic:FIXTURE`, got `{0}`")]
    Syntax(String),
    #[error("command template must contain `{{point_file}}`")]
    MissingPlaceholder,
    #[error("unknown synthetic fixture `{0}`")]
    UnknownFixture(String),
    #[error("timeout must be positive")]
    BadTimeout,
    #[error("capacities must be positive")]
    BadCapacities,
}

/// How to evaluate points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EvaluatorSpec {
    Subprocess {
        command_template: String,
        timeout_s: f64,
        available: Capacities,
    },
    Synthetic {
        fixture: Fixture,
        available: Capacities,
    },
}

pub const POINT_FILE_PLACEHOLDER: &str = "{point_file}";
pub const DEFAULT_TIMEOUT_S: f64 = 3600.0;

impl EvaluatorSpec {
    /// Parses `subprocess:TEMPLATE` or `synthetic:FIXTURE`.
    pub fn parse(text: &str, timeout_s: f64, available: Capacities) -> Result<Self, SpecError> {
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| SpecError::Syntax(text.to_string()))?;
        let spec = match kind {
            "subprocess" => EvaluatorSpec::Subprocess {
                command_template: rest.to_string(),
                timeout_s,
                available,
            },
            "synthetic" => EvaluatorSpec::Synthetic {
                fixture: rest
                    .parse()
                    .map_err(|_| SpecError::UnknownFixture(rest.to_string()))?,
                available,
            },
            _ => return Err(SpecError::Syntax(text.to_string())),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn synthetic(fixture: Fixture) -> Self {
        EvaluatorSpec::Synthetic {
            fixture,
            available: Capacities::default(),
        }
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        match self {
            EvaluatorSpec::Subprocess {
                command_template,
                timeout_s,
                available,
            } => {
                if !command_template.contains(POINT_FILE_PLACEHOLDER) {
                    return Err(SpecError::MissingPlaceholder);
                }
                if !(timeout_s.is_finite() && *timeout_s > 0.0) {
                    return Err(SpecError::BadTimeout);
                }
                if !available.is_valid() {
                    return Err(SpecError::BadCapacities);
                }
            }
            EvaluatorSpec::Synthetic { available, .. } => {
                if !available.is_valid() {
                    return Err(SpecError::BadCapacities);
                }
            }
        }
        Ok(())
    }

    pub fn available(&self) -> Capacities {
        match self {
            EvaluatorSpec::Subprocess { available, .. }
            | EvaluatorSpec::Synthetic { available, .. } => *available,
        }
    }
}

impl fmt::Display for EvaluatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvaluatorSpec::Subprocess {
                command_template, ..
            } => write!(f, "subprocess:{command_template}"),
            EvaluatorSpec::Synthetic { fixture, .. } => write!(f, "synthetic:{fixture}"),
        }
    }
}

/// Something that turns a design point into an evaluation record.
pub trait Evaluator {
    fn evaluate(
        &mut self,
        point: &DesignPoint,
        space: &DesignSpace,
    ) -> Result<EvaluationRecord, HarnessError>;
}

impl Evaluator for EvaluatorSpec {
    fn evaluate(
        &mut self,
        point: &DesignPoint,
        space: &DesignSpace,
    ) -> Result<EvaluationRecord, HarnessError> {
        evaluate(self, point, space)
    }
}

/// Normalizes an outcome into a record.
pub fn make_record(
    point: &DesignPoint,
    outcome: Outcome,
    available: &Capacities,
    wall_time_s: f64,
) -> EvaluationRecord {
    let point_id = point.id();
    match outcome {
        Outcome::Ok(raw) => {
            let ratios = available.ratios(&raw);
            let sane = raw.latency_us.is_finite()
                && raw.latency_us > 0.0
                && ratios.iter().all(|v| v.is_finite() && v >= 0.0);
            if sane {
                EvaluationRecord {
                    point_id,
                    status: Status::Ok,
                    latency_us: Some(raw.latency_us),
                    ratios: Some(ratios),
                    wall_time_s,
                }
            } else {
                EvaluationRecord::failed(point_id, Status::Error, wall_time_s)
            }
        }
        Outcome::Error => EvaluationRecord::failed(point_id, Status::Error, wall_time_s),
        Outcome::Timeout => EvaluationRecord::failed(point_id, Status::Timeout, wall_time_s),
    }
}

pub fn evaluate(
    spec: &EvaluatorSpec,
    point: &DesignPoint,
    space: &DesignSpace,
) -> Result<EvaluationRecord, HarnessError> {
    match spec {
        EvaluatorSpec::Synthetic { fixture, available } => {
            // Synthetic records report zero wall time so they stay byte-identical.
            Ok(make_record(point, fixture.evaluate(point), available, 0.0))
        }
        EvaluatorSpec::Subprocess {
            command_template,
            timeout_s,
            available,
        } => {
            let _ = space;
            let (outcome, wall) = subprocess::run(command_template, *timeout_s, point)?;
            Ok(make_record(point, outcome, available, wall))
        }
    }
}

/// Parses a tool's result JSON. The whole output is tried first, then the
/// last non-empty line, so tools may log before printing the result.
pub fn parse_result(stdout: &str) -> Outcome {
    #[derive(Deserialize)]
    struct ResultJson {
        status: String,
        latency_us: Option<f64>,
        lut: Option<f64>,
        ff: Option<f64>,
        dsp: Option<f64>,
        bram: Option<f64>,
    }

    let parsed = serde_json::from_str::<ResultJson>(stdout.trim()).or_else(|e| {
        match stdout.lines().rev().find(|l| !l.trim().is_empty()) {
            Some(last) => serde_json::from_str::<ResultJson>(last.trim()),
            None => Err(e),
        }
    });
    let Ok(r) = parsed else {
        return Outcome::Error;
    };
    match r.status.as_str() {
        "ok" => match (r.latency_us, r.lut, r.ff, r.dsp, r.bram) {
            (Some(latency_us), Some(lut), Some(ff), Some(dsp), Some(bram)) => {
                Outcome::Ok(RawReport {
                    latency_us,
                    lut,
                    ff,
                    dsp,
                    bram,
                })
            }
            _ => Outcome::Error,
        },
        "timeout" => Outcome::Timeout,
        _ => Outcome::Error,
    }
}

/// Largest space [`brute_force`] will enumerate.
pub const BRUTE_FORCE_LIMIT: u64 = 100_000;

/// Evaluates every point of a synthetic fixture's space.
pub fn brute_force(
    fixture: Fixture,
    space: &DesignSpace,
    available: &Capacities,
) -> Result<Vec<(DesignPoint, EvaluationRecord)>, HarnessError> {
    let size = space.size();
    if size > BRUTE_FORCE_LIMIT {
        return Err(HarnessError::SpaceTooLarge {
            size,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    Ok(space
        .enumerate()
        .into_iter()
        .map(|p| {
            let record = make_record(&p, fixture.evaluate(&p), available, 0.0);
            (p, record)
        })
        .collect())
}
