// SPDX-License-Identifier: Apache-2.0

//! Deterministic stand-ins for an HLS tool.
//!
//! Both fixtures model nested loops streaming over partitioned arrays. The
//! number of usable parallel memory ports limits how much an inner unroll
//! helps, pipelining an outer loop only synthesizes when the loop nested
//! inside it is fully parallel, and too much replication makes synthesis
//! time out. Clock period is 10 ns.
//!
//! `S1`: loops `L1` (outer, 64 iterations) and `L2` (inner, 64 iterations,
//! stride-1 access to `A1`), array `A1`.
//!
//! `S2`: loops `L1`, `L2`, `L3` (32 iterations each, `L3` innermost) and
//! arrays `A1`, `A2` in one partitioning group, both read by `L3`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Outcome, RawReport};
use crate::design_space::{Assignment, DesignPoint, DirectiveConfig};

const CYCLE_US: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Fixture {
    S1,
    S2,
}

impl Fixture {
    pub fn name(self) -> &'static str {
        match self {
            Fixture::S1 => "S1",
            Fixture::S2 => "S2",
        }
    }

    /// Knob file describing the fixture's design space.
    pub fn knob_csv(self) -> &'static str {
        match self {
            Fixture::S1 => include_str!("../../fixtures/s1.csv"),
            Fixture::S2 => include_str!("../../fixtures/s2.csv"),
        }
    }

    pub fn evaluate(self, point: &DesignPoint) -> Outcome {
        match self {
            Fixture::S1 => eval_s1(point),
            Fixture::S2 => eval_s2(point),
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Fixture {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s.to_ascii_uppercase().as_str() {
            "S1" => Ok(Fixture::S1),
            "S2" => Ok(Fixture::S2),
            _ => Err(()),
        }
    }
}

fn unroll_factor(a: Assignment) -> u64 {
    if a.config == DirectiveConfig::Unroll {
        a.factor as u64
    } else {
        1
    }
}

/// Parallel ports an array offers after partitioning.
fn ports(a: Assignment, full: u64) -> u64 {
    match a.config {
        DirectiveConfig::Cyclic => a.factor as u64,
        DirectiveConfig::Complete => full,
        _ => 1,
    }
}

fn bram_blocks(a: Assignment) -> u64 {
    match a.config {
        DirectiveConfig::Complete => 0,
        DirectiveConfig::Cyclic | DirectiveConfig::Block => a.factor as u64,
        _ => 1,
    }
}

fn report(cycles: u64, dsp: u64, ff: u64, lut: u64, bram: u64) -> Outcome {
    Outcome::Ok(RawReport {
        latency_us: cycles as f64 * CYCLE_US,
        lut: lut as f64,
        ff: ff as f64,
        dsp: dsp as f64,
        bram: bram as f64,
    })
}

pub fn eval_s1(point: &DesignPoint) -> Outcome {
    const TRIP: u64 = 64;
    let (Some(l1), Some(l2), Some(a1)) = (point.get("L1"), point.get("L2"), point.get("A1")) else {
        return Outcome::Error;
    };

    let effective = unroll_factor(l2).min(ports(a1, TRIP));
    let inner = match l2.config {
        DirectiveConfig::Pipeline => 74,
        DirectiveConfig::Unroll => 2 * TRIP.div_ceil(effective),
        _ => 192,
    };
    let (cycles, replication) = match l1.config {
        DirectiveConfig::Pipeline => {
            if effective != TRIP {
                return Outcome::Error;
            }
            (74 + inner, TRIP)
        }
        DirectiveConfig::Unroll => {
            let f1 = l1.factor as u64;
            (TRIP.div_ceil(f1) * inner, f1 * effective)
        }
        _ => (TRIP * inner, effective),
    };
    if replication > 256 {
        return Outcome::Timeout;
    }

    let complete = a1.config == DirectiveConfig::Complete;
    report(
        cycles,
        2 * replication,
        500 + 80 * replication + if complete { 1152 } else { 0 },
        800 + 120 * replication,
        bram_blocks(a1),
    )
}

pub fn eval_s2(point: &DesignPoint) -> Outcome {
    const TRIP: u64 = 32;
    let knobs = ["L1", "L2", "L3", "A1", "A2"].map(|k| point.get(k));
    let [Some(l1), Some(l2), Some(l3), Some(a1), Some(a2)] = knobs else {
        return Outcome::Error;
    };

    let effective = unroll_factor(l3).min(ports(a1, TRIP).min(ports(a2, TRIP)));
    let c3 = match l3.config {
        DirectiveConfig::Pipeline => 40,
        DirectiveConfig::Unroll => 3 * TRIP.div_ceil(effective),
        _ => 96,
    };
    let (c2, r2) = match l2.config {
        DirectiveConfig::Pipeline => {
            if effective != TRIP {
                return Outcome::Error;
            }
            (40 + c3, TRIP)
        }
        DirectiveConfig::Unroll => {
            let f2 = l2.factor as u64;
            (TRIP.div_ceil(f2) * c3, f2 * effective)
        }
        _ => (TRIP * c3, effective),
    };
    let (cycles, replication) = match l1.config {
        DirectiveConfig::Pipeline => {
            if l2.config != DirectiveConfig::Pipeline {
                return Outcome::Error;
            }
            (40 + c2, TRIP * r2)
        }
        DirectiveConfig::Unroll => {
            let f1 = l1.factor as u64;
            (TRIP.div_ceil(f1) * c2, f1 * r2)
        }
        _ => (TRIP * c2, r2),
    };
    if replication > 512 {
        return Outcome::Timeout;
    }

    let completes = [a1, a2]
        .iter()
        .filter(|a| a.config == DirectiveConfig::Complete)
        .count() as u64;
    report(
        cycles,
        3 * replication,
        400 + 60 * replication + 1024 * completes,
        600 + 90 * replication,
        bram_blocks(a1) + bram_blocks(a2),
    )
}
