// SPDX-License-Identifier: Apache-2.0

//! Two-objective Pareto bookkeeping: latency versus weighted resource usage.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ResourceKind {
    Lut = 0,
    Ff = 1,
    Dsp = 2,
    Bram = 3,
}

impl ResourceKind {
    pub const ALL: [ResourceKind; 4] = [
        ResourceKind::Lut,
        ResourceKind::Ff,
        ResourceKind::Dsp,
        ResourceKind::Bram,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ResourceKind::Lut => "lut",
            ResourceKind::Ff => "ff",
            ResourceKind::Dsp => "dsp",
            ResourceKind::Bram => "bram",
        }
    }
}

/// Consumed fraction of each resource type; above 1 means over budget.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ResourceRatios {
    pub lut: f64,
    pub ff: f64,
    pub dsp: f64,
    pub bram: f64,
}

impl ResourceRatios {
    pub fn new(lut: f64, ff: f64, dsp: f64, bram: f64) -> Self {
        ResourceRatios { lut, ff, dsp, bram }
    }

    pub fn get(&self, kind: ResourceKind) -> f64 {
        match kind {
            ResourceKind::Lut => self.lut,
            ResourceKind::Ff => self.ff,
            ResourceKind::Dsp => self.dsp,
            ResourceKind::Bram => self.bram,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> {
        [self.lut, self.ff, self.dsp, self.bram].into_iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResourceWeights {
    pub lut: f64,
    pub ff: f64,
    pub dsp: f64,
    pub bram: f64,
}

impl Default for ResourceWeights {
    /// DSP and BRAM are the scarce resources on typical FPGAs.
    fn default() -> Self {
        ResourceWeights {
            lut: 0.1,
            ff: 0.1,
            dsp: 0.4,
            bram: 0.4,
        }
    }
}

impl ResourceWeights {
    pub fn is_valid(&self) -> bool {
        let w = [self.lut, self.ff, self.dsp, self.bram];
        w.iter().all(|v| v.is_finite() && *v >= 0.0) && w.iter().sum::<f64>() > 0.0
    }
}

pub fn weighted_resource(r: &ResourceRatios, w: &ResourceWeights) -> f64 {
    w.lut * r.lut + w.ff * r.ff + w.dsp * r.dsp + w.bram * r.bram
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Objectives {
    /// Microseconds.
    pub latency: f64,
    /// Weighted resource usage.
    pub resource: f64,
}

impl Objectives {
    pub fn new(latency: f64, resource: f64) -> Self {
        Objectives { latency, resource }
    }
}

/// Strict in both objectives.
pub fn dominates(a: &Objectives, b: &Objectives) -> bool {
    a.latency < b.latency && a.resource < b.resource
}

/// `a` is at least as good as `b` in both objectives and they differ.
fn covers(a: &Objectives, b: &Objectives) -> bool {
    a.latency <= b.latency && a.resource <= b.resource && a != b
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierEntry {
    pub objectives: Objectives,
    pub point_id: String,
}

/// Result of projecting a latency onto the frontier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Projection {
    /// The latency is below every frontier entry.
    BelowMin,
    Resource(f64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrontierError {
    #[error("cannot project onto an empty frontier")]
    Empty,
    #[error("line {line}: {message}")]
    Csv { line: u64, message: String },
}

/// Non-dominated set sorted by latency, resources strictly decreasing.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ParetoFrontier {
    entries: Vec<FrontierEntry>,
}

impl ParetoFrontier {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a frontier by inserting every item in order.
    pub fn from_objectives<I, S>(items: I) -> Self
    where
        I: IntoIterator<Item = (Objectives, S)>,
        S: Into<String>,
    {
        let mut f = ParetoFrontier::new();
        for (obj, id) in items {
            f.update(obj, id);
        }
        f
    }

    pub fn entries(&self) -> &[FrontierEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.entries.iter().any(|e| e.point_id == id)
    }

    /// Inserts `obj` unless an existing entry dominates or ties it.
    ///
    /// Equal-latency entries keep the lower resource and equal-resource
    /// entries keep the lower latency, which keeps the list strictly
    /// monotone. Returns whether the frontier changed.
    pub fn update(&mut self, obj: Objectives, id: impl Into<String>) -> bool {
        if !(obj.latency.is_finite() && obj.resource.is_finite()) {
            return false;
        }
        if self
            .entries
            .iter()
            .any(|e| e.objectives == obj || covers(&e.objectives, &obj))
        {
            return false;
        }
        self.entries.retain(|e| !covers(&obj, &e.objectives));
        let at = self
            .entries
            .partition_point(|e| e.objectives.latency < obj.latency);
        self.entries.insert(
            at,
            FrontierEntry {
                objectives: obj,
                point_id: id.into(),
            },
        );
        true
    }

    /// Latency-wise projection: linear interpolation between the bracketing
    /// entries, clamped to the last entry above the maximum latency.
    pub fn project(&self, latency: f64) -> Result<Projection, FrontierError> {
        let first = self.entries.first().ok_or(FrontierError::Empty)?;
        if latency < first.objectives.latency {
            return Ok(Projection::BelowMin);
        }
        let upper = self
            .entries
            .partition_point(|e| e.objectives.latency <= latency);
        if upper == self.entries.len() {
            return Ok(Projection::Resource(
                self.entries[upper - 1].objectives.resource,
            ));
        }
        let lo = &self.entries[upper - 1].objectives;
        let hi = &self.entries[upper].objectives;
        let t = (latency - lo.latency) / (hi.latency - lo.latency);
        Ok(Projection::Resource(
            lo.resource + t * (hi.resource - lo.resource),
        ))
    }

    /// Area dominated by the frontier and bounded by `reference`. Entries that
    /// do not strictly dominate the reference are ignored.
    pub fn hypervolume(&self, reference: &Objectives) -> f64 {
        hypervolume(self.entries.iter().map(|e| e.objectives), reference)
    }

    /// `latency_us,weighted_resource,point_id`, sorted by latency.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["latency_us", "weighted_resource", "point_id"])
            .expect("in-memory write");
        for e in &self.entries {
            w.write_record([
                e.objectives.latency.to_string().as_str(),
                &e.objectives.resource.to_string(),
                &e.point_id,
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("fields are UTF-8")
    }

    /// Reads the CSV written by [`to_csv`](Self::to_csv). Rows are
    /// re-inserted, so a file holding dominated rows yields their frontier.
    pub fn from_csv(text: &str) -> Result<Self, FrontierError> {
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let csv_err = |line: u64, message: String| FrontierError::Csv { line, message };
        let headers = reader
            .headers()
            .map_err(|e| csv_err(1, e.to_string()))?
            .clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| csv_err(1, format!("missing column `{name}`")))
        };
        let (lat_col, res_col, id_col) = (
            col("latency_us")?,
            col("weighted_resource")?,
            col("point_id")?,
        );

        let mut frontier = ParetoFrontier::new();
        for record in reader.records() {
            let record =
                record.map_err(|e| csv_err(e.position().map_or(0, |p| p.line()), e.to_string()))?;
            let line = record.position().map_or(0, |p| p.line());
            let num = |i: usize| -> Result<f64, FrontierError> {
                record
                    .get(i)
                    .and_then(|v| v.parse::<f64>().ok())
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| csv_err(line, format!("bad number in column {}", i + 1)))
            };
            let obj = Objectives::new(num(lat_col)?, num(res_col)?);
            let id = record.get(id_col).unwrap_or_default().to_string();
            frontier.update(obj, id);
        }
        Ok(frontier)
    }
}

/// Latency-sorted sweep over any set of objective pairs; dominated pairs add
/// nothing.
pub fn hypervolume(points: impl IntoIterator<Item = Objectives>, reference: &Objectives) -> f64 {
    let mut pts: Vec<Objectives> = points
        .into_iter()
        .filter(|p| p.latency < reference.latency && p.resource < reference.resource)
        .collect();
    pts.sort_by(|a, b| {
        a.latency
            .total_cmp(&b.latency)
            .then(a.resource.total_cmp(&b.resource))
    });
    let mut area = 0.0;
    let mut ceiling = reference.resource;
    for p in pts {
        if p.resource < ceiling {
            area += (reference.latency - p.latency) * (ceiling - p.resource);
            ceiling = p.resource;
        }
    }
    area
}
