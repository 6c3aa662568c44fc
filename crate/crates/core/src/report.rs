// SPDX-License-Identifier: Apache-2.0

//! Comparing frontiers of finished runs.

use std::fmt::Write;

use crate::explorer::default_reference;
use crate::pareto::{FrontierEntry, Objectives, ParetoFrontier};

/// Frontier entry farthest from the chord joining the two endpoints, with
/// both axes scaled to the frontier's extent. Frontiers of one or two points
/// return their lowest-latency entry.
pub fn elbow(frontier: &ParetoFrontier) -> Option<&FrontierEntry> {
    let e = frontier.entries();
    let (first, last) = (e.first()?, e.last()?);
    let span_l = last.objectives.latency - first.objectives.latency;
    let span_r = first.objectives.resource - last.objectives.resource;
    if e.len() < 3 || span_l <= 0.0 || span_r <= 0.0 {
        return Some(first);
    }
    // Normalized, the endpoints are (0, 1) and (1, 0); the chord is x + y = 1.
    let distance = |o: &Objectives| {
        let x = (o.latency - first.objectives.latency) / span_l;
        let y = (o.resource - last.objectives.resource) / span_r;
        (1.0 - x - y) / std::f64::consts::SQRT_2
    };
    let mut best = first;
    let mut best_d = f64::NEG_INFINITY;
    for entry in e {
        let d = distance(&entry.objectives);
        if d > best_d {
            best = entry;
            best_d = d;
        }
    }
    Some(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRow {
    pub name: String,
    pub frontier_size: usize,
    pub min_latency: Option<FrontierEntry>,
    pub elbow: Option<FrontierEntry>,
    pub hypervolume: f64,
    /// Run hypervolume over oracle hypervolume.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub reference: Objectives,
    pub oracle_hypervolume: Option<f64>,
    pub rows: Vec<RunRow>,
}

/// Summarizes `runs` against a shared reference point, by default 1.1 times
/// the largest latency and resource over every frontier given.
pub fn compare(
    runs: &[(String, ParetoFrontier)],
    oracle: Option<&ParetoFrontier>,
    reference: Option<Objectives>,
) -> Comparison {
    let reference = reference.unwrap_or_else(|| {
        default_reference(
            runs.iter()
                .map(|(_, f)| f)
                .chain(oracle)
                .flat_map(|f| f.entries().iter().map(|e| e.objectives)),
        )
    });
    let oracle_hypervolume = oracle.map(|o| o.hypervolume(&reference));
    let rows = runs
        .iter()
        .map(|(name, f)| {
            let hv = f.hypervolume(&reference);
            RunRow {
                name: name.clone(),
                frontier_size: f.len(),
                min_latency: f.entries().first().cloned(),
                elbow: elbow(f).cloned(),
                hypervolume: hv,
                ratio: oracle_hypervolume.map(|o| if o > 0.0 { hv / o } else { f64::NAN }),
            }
        })
        .collect();
    Comparison {
        reference,
        oracle_hypervolume,
        rows,
    }
}

fn point(e: &Option<FrontierEntry>) -> String {
    match e {
        Some(e) => format!("{:.4}/{:.4}", e.objectives.latency, e.objectives.resource),
        None => "-".into(),
    }
}

impl Comparison {
    pub fn table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "reference: latency {:.6} us, resource {:.6}",
            self.reference.latency, self.reference.resource
        );
        if let Some(o) = self.oracle_hypervolume {
            let _ = writeln!(out, "oracle hypervolume: {o:.6}");
        }
        let _ = writeln!(
            out,
            "{:<24} {:>5} {:>22} {:>22} {:>12} {:>8}",
            "run", "size", "min latency (us/res)", "elbow (us/res)", "hypervolume", "ratio"
        );
        for r in &self.rows {
            let ratio = r.ratio.map_or("-".to_string(), |x| format!("{x:.4}"));
            let _ = writeln!(
                out,
                "{:<24} {:>5} {:>22} {:>22} {:>12.6} {:>8}",
                r.name,
                r.frontier_size,
                point(&r.min_latency),
                point(&r.elbow),
                r.hypervolume,
                ratio
            );
        }
        out
    }
}

/// All frontiers in one CSV, tagged with their source.
pub fn comparison_csv(
    runs: &[(String, ParetoFrontier)],
    oracle: Option<&ParetoFrontier>,
) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["source", "latency_us", "weighted_resource", "point_id"])
        .expect("in-memory write");
    let tagged = runs
        .iter()
        .map(|(n, f)| (n.as_str(), f))
        .chain(oracle.map(|o| ("oracle", o)));
    for (name, f) in tagged {
        for e in f.entries() {
            w.write_record([
                name,
                &e.objectives.latency.to_string(),
                &e.objectives.resource.to_string(),
                &e.point_id,
            ])
            .expect("in-memory write");
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("fields are UTF-8")
}
