// SPDX-License-Identifier: Apache-2.0

//! Append-only store of evaluated points.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::design_space::{DesignPoint, DesignSpace, FeatureVector};
use crate::evaluator::{EvaluationRecord, Status};
use crate::pareto::{Objectives, ParetoFrontier, ResourceWeights};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub point: DesignPoint,
    pub record: EvaluationRecord,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Sample>", into = "Vec<Sample>")]
pub struct Dataset {
    samples: Vec<Sample>,
    /// point id -> first index
    index: HashMap<String, usize>,
}

impl From<Vec<Sample>> for Dataset {
    fn from(samples: Vec<Sample>) -> Self {
        let mut d = Dataset::default();
        for s in samples {
            d.push(s.point, s.record);
        }
        d
    }
}

impl From<Dataset> for Vec<Sample> {
    fn from(d: Dataset) -> Self {
        d.samples
    }
}

impl Dataset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, point: DesignPoint, record: EvaluationRecord) {
        self.index
            .entry(record.point_id.clone())
            .or_insert(self.samples.len());
        self.samples.push(Sample { point, record });
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn contains_id(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn contains(&self, point: &DesignPoint) -> bool {
        self.contains_id(&point.id())
    }

    pub fn get(&self, id: &str) -> Option<&Sample> {
        self.index.get(id).map(|&i| &self.samples[i])
    }

    pub fn count_status(&self, status: Status) -> usize {
        self.samples
            .iter()
            .filter(|s| s.record.status == status)
            .count()
    }

    /// Samples with objective values, paired with them.
    pub fn evaluated_ok(
        &self,
        weights: ResourceWeights,
    ) -> impl Iterator<Item = (&Sample, Objectives)> + '_ {
        self.samples
            .iter()
            .filter_map(move |s| s.record.objectives(&weights).map(|o| (s, o)))
    }

    /// Frontier of all successful records, rebuilt from scratch.
    pub fn frontier(&self, weights: &ResourceWeights) -> ParetoFrontier {
        ParetoFrontier::from_objectives(
            self.evaluated_ok(*weights)
                .map(|(s, o)| (o, s.record.point_id.clone())),
        )
    }

    /// Encoded rows for model training.
    pub fn training_rows(&self, space: &DesignSpace) -> Vec<(FeatureVector, EvaluationRecord)> {
        self.samples
            .iter()
            .map(|s| (space.encode_unchecked(&s.point), s.record.clone()))
            .collect()
    }
}
