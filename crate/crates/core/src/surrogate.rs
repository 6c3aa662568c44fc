// SPDX-License-Identifier: Apache-2.0

//! Random decision forests used as surrogate models.
//!
//! Regressors split on variance reduction, the classifier on Gini impurity.
//! Every tree sees a bootstrap sample drawn from its own stream, derived from
//! `ForestParams::seed` and the tree index, so fitting is reproducible.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::design_space::FeatureVector;
use crate::evaluator::{EvaluationRecord, Status};
use crate::pareto::{ResourceKind, ResourceRatios};

#[derive(Debug, Error, PartialEq)]
pub enum ForestError {
    #[error("cannot fit a forest on an empty dataset")]
    EmptyDataset,
    #[error("{features} feature rows but {targets} targets")]
    TargetCount { features: usize, targets: usize },
    #[error("feature length mismatch: expected {expected}, got {got}")]
    FeatureLength { expected: usize, got: usize },
    #[error("invalid forest parameters: {0}")]
    Params(String),
}

/// How many features are drawn as split candidates at every node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeaturesPerSplit {
    All,
    /// `ceil(sqrt(n_features))`
    Sqrt,
    #[serde(untagged)]
    Count(usize),
}

impl FeaturesPerSplit {
    fn resolve(self, n_features: usize) -> usize {
        let k = match self {
            FeaturesPerSplit::All => n_features,
            FeaturesPerSplit::Sqrt => (n_features as f64).sqrt().ceil() as usize,
            FeaturesPerSplit::Count(k) => k,
        };
        k.clamp(1, n_features.max(1))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestParams {
    pub n_trees: usize,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub bootstrap_fraction: f64,
    pub features_per_split: FeaturesPerSplit,
    pub seed: u64,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 50,
            max_depth: 12,
            min_samples_leaf: 1,
            bootstrap_fraction: 1.0,
            features_per_split: FeaturesPerSplit::Sqrt,
            seed: 0,
        }
    }
}

impl ForestParams {
    pub fn validate(&self) -> Result<(), ForestError> {
        if self.n_trees == 0 || self.max_depth == 0 || self.min_samples_leaf == 0 {
            return Err(ForestError::Params(
                "n_trees, max_depth and min_samples_leaf must be at least 1".into(),
            ));
        }
        if !(self.bootstrap_fraction > 0.0 && self.bootstrap_fraction <= 1.0) {
            return Err(ForestError::Params(
                "bootstrap_fraction must lie in (0, 1]".into(),
            ));
        }
        if self.features_per_split == FeaturesPerSplit::Count(0) {
            return Err(ForestError::Params(
                "features_per_split must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// A binary decision tree; `x[feature] <= threshold` descends left.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecisionTree {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<DecisionTree>,
        right: Box<DecisionTree>,
    },
    Leaf {
        value: f64,
    },
}

impl DecisionTree {
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut node = self;
        loop {
            match node {
                DecisionTree::Leaf { value } => return *value,
                DecisionTree::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if x[*feature] <= *threshold {
                        left
                    } else {
                        right
                    };
                }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            DecisionTree::Leaf { .. } => 0,
            DecisionTree::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ForestKind {
    Regressor,
    Classifier,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub kind: ForestKind,
    pub params: ForestParams,
    pub n_features: usize,
    pub trees: Vec<DecisionTree>,
}

impl Forest {
    /// Mean of the per-tree leaf values.
    pub fn predict(&self, x: &FeatureVector) -> Result<f64, ForestError> {
        if x.len() != self.n_features {
            return Err(ForestError::FeatureLength {
                expected: self.n_features,
                got: x.len(),
            });
        }
        let sum: f64 = self.trees.iter().map(|t| t.predict(x.as_slice())).sum();
        let mean = sum / self.trees.len() as f64;
        Ok(match self.kind {
            ForestKind::Regressor => mean,
            ForestKind::Classifier => mean.clamp(0.0, 1.0),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("forest serializes")
    }
}

pub fn fit_regressor(
    x: &[FeatureVector],
    y: &[f64],
    params: &ForestParams,
) -> Result<Forest, ForestError> {
    fit(x, y, params, ForestKind::Regressor)
}

/// `labels` are `true` for the positive class.
pub fn fit_classifier(
    x: &[FeatureVector],
    labels: &[bool],
    params: &ForestParams,
) -> Result<Forest, ForestError> {
    let y: Vec<f64> = labels.iter().map(|&l| if l { 1.0 } else { 0.0 }).collect();
    fit(x, &y, params, ForestKind::Classifier)
}

pub fn predict_regressor(model: &Forest, x: &FeatureVector) -> Result<f64, ForestError> {
    model.predict(x)
}

pub fn predict_proba(model: &Forest, x: &FeatureVector) -> Result<f64, ForestError> {
    model.predict(x)
}

fn fit(
    x: &[FeatureVector],
    y: &[f64],
    params: &ForestParams,
    kind: ForestKind,
) -> Result<Forest, ForestError> {
    params.validate()?;
    if x.is_empty() {
        return Err(ForestError::EmptyDataset);
    }
    if x.len() != y.len() {
        return Err(ForestError::TargetCount {
            features: x.len(),
            targets: y.len(),
        });
    }
    let n_features = x[0].len();
    if let Some(bad) = x.iter().find(|r| r.len() != n_features) {
        return Err(ForestError::FeatureLength {
            expected: n_features,
            got: bad.len(),
        });
    }

    let rows: Vec<&[f64]> = x.iter().map(FeatureVector::as_slice).collect();
    let builder = TreeBuilder {
        rows: &rows,
        targets: y,
        kind,
        max_depth: params.max_depth,
        min_samples_leaf: params.min_samples_leaf,
        features_per_split: params.features_per_split.resolve(n_features),
    };
    let sample_size = ((params.bootstrap_fraction * x.len() as f64).round() as usize).max(1);

    let trees = (0..params.n_trees)
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
            rng.set_stream(t as u64);
            let sample: Vec<usize> = (0..sample_size)
                .map(|_| rng.random_range(0..x.len()))
                .collect();
            builder.build(sample, 0, &mut rng)
        })
        .collect();

    Ok(Forest {
        kind,
        params: params.clone(),
        n_features,
        trees,
    })
}

struct TreeBuilder<'a> {
    rows: &'a [&'a [f64]],
    targets: &'a [f64],
    kind: ForestKind,
    max_depth: usize,
    min_samples_leaf: usize,
    features_per_split: usize,
}

/// Running sufficient statistics for one side of a split.
#[derive(Clone, Copy, Default)]
struct Stats {
    n: f64,
    sum: f64,
    sum_sq: f64,
}

impl Stats {
    fn add(&mut self, y: f64) {
        self.n += 1.0;
        self.sum += y;
        self.sum_sq += y * y;
    }

    fn sub(&mut self, y: f64) {
        self.n -= 1.0;
        self.sum -= y;
        self.sum_sq -= y * y;
    }

    /// Node impurity weighted by sample count.
    fn weighted_impurity(&self, kind: ForestKind) -> f64 {
        if self.n == 0.0 {
            return 0.0;
        }
        match kind {
            // Sum of squared errors around the mean.
            ForestKind::Regressor => (self.sum_sq - self.sum * self.sum / self.n).max(0.0),
            // n * Gini, with sum = positive count.
            ForestKind::Classifier => {
                let p = self.sum / self.n;
                self.n * 2.0 * p * (1.0 - p)
            }
        }
    }
}

struct BestSplit {
    score: f64,
    feature: usize,
    threshold: f64,
}

impl TreeBuilder<'_> {
    fn leaf(&self, sample: &[usize]) -> DecisionTree {
        let sum: f64 = sample.iter().map(|&i| self.targets[i]).sum();
        DecisionTree::Leaf {
            value: sum / sample.len() as f64,
        }
    }

    fn build(&self, sample: Vec<usize>, depth: usize, rng: &mut ChaCha8Rng) -> DecisionTree {
        let first = self.targets[sample[0]];
        let pure = sample.iter().all(|&i| self.targets[i] == first);
        if pure || depth >= self.max_depth || sample.len() < 2 * self.min_samples_leaf {
            return self.leaf(&sample);
        }

        let n_features = self.rows[sample[0]].len();
        let mut candidates: Vec<usize> = (0..n_features)
            .filter(|&f| {
                let v = self.rows[sample[0]][f];
                sample.iter().any(|&i| self.rows[i][f] != v)
            })
            .collect();
        if candidates.is_empty() {
            return self.leaf(&sample);
        }
        if candidates.len() > self.features_per_split {
            let (chosen, _) = candidates.partial_shuffle(rng, self.features_per_split);
            let mut chosen = chosen.to_vec();
            chosen.sort_unstable();
            candidates = chosen;
        }

        let mut total = Stats::default();
        for &i in &sample {
            total.add(self.targets[i]);
        }

        let mut best: Option<BestSplit> = None;
        let mut order = sample.clone();
        for &feature in &candidates {
            order.sort_by(|&a, &b| self.rows[a][feature].total_cmp(&self.rows[b][feature]));
            let mut left = Stats::default();
            let mut right = total;
            for pos in 0..order.len() - 1 {
                let y = self.targets[order[pos]];
                left.add(y);
                right.sub(y);
                let here = self.rows[order[pos]][feature];
                let next = self.rows[order[pos + 1]][feature];
                if here == next {
                    continue;
                }
                let n_left = pos + 1;
                if n_left < self.min_samples_leaf || order.len() - n_left < self.min_samples_leaf {
                    continue;
                }
                let score = left.weighted_impurity(self.kind) + right.weighted_impurity(self.kind);
                // Strict improvement keeps the lowest feature, then lowest threshold, on ties.
                if best.as_ref().is_none_or(|b| score < b.score - 1e-12) {
                    best = Some(BestSplit {
                        score,
                        feature,
                        threshold: 0.5 * (here + next),
                    });
                }
            }
        }

        let Some(split) = best else {
            return self.leaf(&sample);
        };
        let (left, right): (Vec<usize>, Vec<usize>) = sample
            .into_iter()
            .partition(|&i| self.rows[i][split.feature] <= split.threshold);
        DecisionTree::Split {
            feature: split.feature,
            threshold: split.threshold,
            left: Box::new(self.build(left, depth + 1, rng)),
            right: Box::new(self.build(right, depth + 1, rng)),
        }
    }
}

/// What the surrogate models say about one encoded point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    /// Predicted latency (microseconds) and resource ratios, absent when no
    /// successful evaluation has been seen yet.
    pub objectives: Option<(f64, ResourceRatios)>,
    pub p_timeout: f64,
}

/// Anything that can score an encoded design point.
pub trait Surrogate {
    fn predict(&self, x: &FeatureVector) -> Prediction;
}

/// Latency and resource regressors plus the timeout/error classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateBundle {
    pub latency_model: Option<Forest>,
    /// LUT, FF, DSP, BRAM in that order.
    pub resource_models: Option<[Forest; 4]>,
    pub timeout_model: Forest,
    pub regression_rows: usize,
    pub classifier_rows: usize,
}

impl SurrogateBundle {
    pub fn regressors_available(&self) -> bool {
        self.latency_model.is_some() && self.resource_models.is_some()
    }
}

impl Surrogate for SurrogateBundle {
    fn predict(&self, x: &FeatureVector) -> Prediction {
        let p_timeout = self.timeout_model.predict(x).unwrap_or(0.0);
        let objectives = match (&self.latency_model, &self.resource_models) {
            (Some(lat), Some(res)) => {
                let ratio = |k: ResourceKind| res[k as usize].predict(x).unwrap_or(0.0).max(0.0);
                lat.predict(x).ok().map(|latency| {
                    (
                        latency,
                        ResourceRatios {
                            lut: ratio(ResourceKind::Lut),
                            ff: ratio(ResourceKind::Ff),
                            dsp: ratio(ResourceKind::Dsp),
                            bram: ratio(ResourceKind::Bram),
                        },
                    )
                })
            }
            _ => None,
        };
        Prediction {
            objectives,
            p_timeout,
        }
    }
}

/// Rebuilds every model from scratch.
///
/// Regressors see only `ok` records; the classifier sees all of them with
/// label 1 for `error` and `timeout`.
pub fn retrain_bundle(
    data: &[(FeatureVector, EvaluationRecord)],
    params: &ForestParams,
) -> Result<SurrogateBundle, ForestError> {
    let features: Vec<FeatureVector> = data.iter().map(|(x, _)| x.clone()).collect();
    let labels: Vec<bool> = data.iter().map(|(_, r)| r.status != Status::Ok).collect();
    let timeout_model = fit_classifier(&features, &labels, params)?;

    let mut ok_x = Vec::new();
    let mut latency = Vec::new();
    let mut ratios: [Vec<f64>; 4] = Default::default();
    for (x, r) in data {
        if let (Status::Ok, Some(lat), Some(rr)) = (r.status, r.latency_us, r.ratios) {
            ok_x.push(x.clone());
            latency.push(lat);
            for kind in ResourceKind::ALL {
                ratios[kind as usize].push(rr.get(kind));
            }
        }
    }

    let (latency_model, resource_models) = if ok_x.is_empty() {
        (None, None)
    } else {
        let lat = fit_regressor(&ok_x, &latency, params)?;
        let fit_kind = |k: ResourceKind| fit_regressor(&ok_x, &ratios[k as usize], params);
        let res = [
            fit_kind(ResourceKind::Lut)?,
            fit_kind(ResourceKind::Ff)?,
            fit_kind(ResourceKind::Dsp)?,
            fit_kind(ResourceKind::Bram)?,
        ];
        (Some(lat), Some(res))
    };

    Ok(SurrogateBundle {
        latency_model,
        resource_models,
        timeout_model,
        regression_rows: ok_x.len(),
        classifier_rows: data.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(v: &[f64]) -> FeatureVector {
        FeatureVector(v.to_vec())
    }

    fn exact_params() -> ForestParams {
        ForestParams {
            n_trees: 1,
            bootstrap_fraction: 1.0,
            features_per_split: FeaturesPerSplit::All,
            ..ForestParams::default()
        }
    }

    fn mse(model: &Forest, x: &[FeatureVector], y: &[f64]) -> f64 {
        x.iter()
            .zip(y)
            .map(|(xi, yi)| (model.predict(xi).unwrap() - yi).powi(2))
            .sum::<f64>()
            / y.len() as f64
    }

    fn step_fixture() -> (Vec<FeatureVector>, Vec<f64>) {
        let x: Vec<FeatureVector> = (0..100).map(|i| fv(&[i as f64 * 0.1])).collect();
        let y = x
            .iter()
            .map(|v| if v.0[0] < 5.0 { 0.0 } else { 10.0 })
            .collect();
        (x, y)
    }

    #[test]
    fn constant_targets_predict_constant() {
        let x: Vec<_> = (0..10)
            .map(|i| fv(&[i as f64, (i * 7 % 3) as f64]))
            .collect();
        let model = fit_regressor(&x, &[3.5; 10], &ForestParams::default()).unwrap();
        for q in [[-5.0, 0.0], [4.5, 2.0], [100.0, -1.0]] {
            assert_eq!(model.predict(&fv(&q)).unwrap(), 3.5);
        }
    }

    #[test]
    fn step_function_fit() {
        let (x, y) = step_fixture();
        let params = ForestParams {
            features_per_split: FeaturesPerSplit::All,
            ..ForestParams::default()
        };
        let model = fit_regressor(&x, &y, &params).unwrap();
        let mut abs_err = 0.0;
        for (xi, yi) in x.iter().zip(&y) {
            let err = (model.predict(xi).unwrap() - yi).abs();
            abs_err += err;
            // Points next to the step are out of bag in about a third of the
            // trees and land on the wrong side there.
            if (xi.0[0] - 4.95).abs() > 0.3 {
                assert!(err <= 0.5, "x {} err {err}", xi.0[0]);
            }
        }
        assert!(abs_err / 100.0 <= 0.5);
    }

    #[test]
    fn xor_needs_depth_two() {
        let mut x = Vec::new();
        let mut y = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                x.push(fv(&[a as f64, b as f64]));
                y.push(if (a < 2) ^ (b < 2) { 1.0 } else { 0.0 });
            }
        }
        let shallow = fit_regressor(
            &x,
            &y,
            &ForestParams {
                max_depth: 1,
                ..exact_params()
            },
        )
        .unwrap();
        let deep = fit_regressor(
            &x,
            &y,
            &ForestParams {
                max_depth: 2,
                ..exact_params()
            },
        )
        .unwrap();
        let shallow_mse = mse(&shallow, &x, &y);
        assert!(shallow_mse > 0.0);
        assert!(mse(&deep, &x, &y) < shallow_mse);
    }

    #[test]
    fn prediction_is_mean_of_trees() {
        let single = Forest {
            kind: ForestKind::Regressor,
            params: ForestParams::default(),
            n_features: 1,
            trees: vec![DecisionTree::Leaf { value: 7.0 }],
        };
        assert_eq!(single.predict(&fv(&[0.0])).unwrap(), 7.0);
        let pair = Forest {
            trees: vec![
                DecisionTree::Leaf { value: 4.0 },
                DecisionTree::Leaf { value: 6.0 },
            ],
            ..single.clone()
        };
        assert_eq!(pair.predict(&fv(&[0.0])).unwrap(), 5.0);
        let proba = Forest {
            kind: ForestKind::Classifier,
            trees: vec![
                DecisionTree::Leaf { value: 0.2 },
                DecisionTree::Leaf { value: 0.6 },
            ],
            ..single.clone()
        };
        assert!((predict_proba(&proba, &fv(&[1.0])).unwrap() - 0.4).abs() < 1e-12);
        assert_eq!(
            single.predict(&fv(&[0.0, 1.0])),
            Err(ForestError::FeatureLength {
                expected: 1,
                got: 2
            })
        );
    }

    #[test]
    fn predictions_bounded_by_training_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let x: Vec<_> = (0..60)
            .map(|_| fv(&[rng.random_range(0.0..10.0), rng.random_range(0.0..3.0)]))
            .collect();
        let y: Vec<f64> = x.iter().map(|v| v.0[0].sin() * 4.0 + v.0[1]).collect();
        let (lo, hi) = y
            .iter()
            .fold((f64::MAX, f64::MIN), |(l, h), &v| (l.min(v), h.max(v)));
        let model = fit_regressor(&x, &y, &ForestParams::default()).unwrap();
        for _ in 0..1000 {
            let q = fv(&[rng.random_range(-5.0..15.0), rng.random_range(-1.0..4.0)]);
            let p = predict_regressor(&model, &q).unwrap();
            assert!(p >= lo - 1e-12 && p <= hi + 1e-12);
        }
    }

    #[test]
    fn classifier_edge_cases() {
        let x: Vec<_> = (0..100).map(|i| fv(&[i as f64 * 0.1])).collect();
        let zeros = fit_classifier(&x, &[false; 100], &ForestParams::default()).unwrap();
        let ones = fit_classifier(&x, &[true; 100], &ForestParams::default()).unwrap();
        for q in [-1.0, 3.3, 50.0] {
            assert_eq!(predict_proba(&zeros, &fv(&[q])).unwrap(), 0.0);
            assert_eq!(predict_proba(&ones, &fv(&[q])).unwrap(), 1.0);
        }

        let labels: Vec<bool> = x.iter().map(|v| v.0[0] >= 5.0).collect();
        let model = fit_classifier(&x, &labels, &ForestParams::default()).unwrap();
        for (xi, &li) in x.iter().zip(&labels) {
            assert_eq!(model.predict(xi).unwrap() >= 0.5, li);
        }
    }

    #[test]
    fn classifier_output_in_unit_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x: Vec<_> = (0..80)
            .map(|_| fv(&[rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]))
            .collect();
        let labels: Vec<bool> = (0..80).map(|_| rng.random_bool(0.3)).collect();
        let model = fit_classifier(&x, &labels, &ForestParams::default()).unwrap();
        for _ in 0..10_000 {
            let q = fv(&[rng.random_range(-1.0..2.0), rng.random_range(-1.0..2.0)]);
            let p = model.predict(&q).unwrap();
            assert!((0.0..=1.0).contains(&p));
        }
    }

    #[test]
    fn fitting_errors() {
        let p = ForestParams::default();
        assert_eq!(fit_regressor(&[], &[], &p), Err(ForestError::EmptyDataset));
        assert!(matches!(
            fit_regressor(&[fv(&[1.0]), fv(&[1.0, 2.0])], &[0.0, 1.0], &p),
            Err(ForestError::FeatureLength { .. })
        ));
        assert!(matches!(
            fit_regressor(&[fv(&[1.0])], &[0.0, 1.0], &p),
            Err(ForestError::TargetCount { .. })
        ));
        let bad = ForestParams {
            n_trees: 0,
            ..ForestParams::default()
        };
        assert!(matches!(
            fit_regressor(&[fv(&[1.0])], &[0.0], &bad),
            Err(ForestError::Params(_))
        ));
    }

    #[test]
    fn bagging_does_not_hurt_step_fit() {
        let (x, y) = step_fixture();
        let mut single = 0.0;
        let mut bagged = 0.0;
        for seed in 0..20 {
            let one = ForestParams {
                n_trees: 1,
                seed,
                ..ForestParams::default()
            };
            let fifty = ForestParams {
                seed,
                ..ForestParams::default()
            };
            single += mse(&fit_regressor(&x, &y, &one).unwrap(), &x, &y);
            let forest = fit_regressor(&x, &y, &fifty).unwrap();
            let m = mse(&forest, &x, &y);
            bagged += m;
            // The mean of the trees is never worse than the trees on average.
            let per_tree: f64 = forest
                .trees
                .iter()
                .map(|t| {
                    x.iter()
                        .zip(&y)
                        .map(|(xi, yi)| (t.predict(&xi.0) - yi).powi(2))
                        .sum::<f64>()
                        / y.len() as f64
                })
                .sum::<f64>()
                / forest.trees.len() as f64;
            assert!(m <= per_tree + 1e-9);
        }
        assert!(bagged <= single * 1.1);
    }

    #[test]
    fn min_samples_leaf_respected() {
        let (x, y) = step_fixture();
        let model = fit_regressor(
            &x,
            &y,
            &ForestParams {
                min_samples_leaf: 60,
                ..exact_params()
            },
        )
        .unwrap();
        assert_eq!(model.trees[0].depth(), 0);
    }

    #[test]
    fn json_dump_uses_node_fields() {
        let (x, y) = step_fixture();
        let model = fit_regressor(&x, &y, &exact_params()).unwrap();
        let json = model.to_json();
        let root = &json["trees"][0];
        assert_eq!(root["feature"], 0);
        assert!((root["threshold"].as_f64().unwrap() - 4.95).abs() < 1e-9);
        assert_eq!(root["left"]["value"], 0.0);
        assert_eq!(root["right"]["value"], 10.0);
        let back: Forest = serde_json::from_value(json).unwrap();
        assert_eq!(back, model);
    }
}
