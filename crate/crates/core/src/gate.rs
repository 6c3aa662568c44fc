// SPDX-License-Identifier: Apache-2.0

//! Soft-boundary evaluation gate.
//!
//! A proposed point is not accepted or rejected outright. Its predicted
//! resource overuse, its predicted distance above the frontier and its
//! predicted failure probability each shrink a probability, and the product
//! of the three decides a single Bernoulli draw.

use log::warn;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::design_space::{DesignPoint, DesignSpace};
use crate::pareto::{
    weighted_resource, ParetoFrontier, Projection, ResourceRatios, ResourceWeights,
};
use crate::surrogate::Surrogate;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateParams {
    /// Slack multiplier on the projected frontier resource.
    pub delta: f64,
    pub weights: ResourceWeights,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateResult {
    pub p_budget: f64,
    pub p_pareto: f64,
    pub p_timeout: f64,
    pub p_eval: f64,
    pub r_pred: f64,
    pub predicted_latency: Option<f64>,
    /// Projected frontier resource; `None` when the predicted latency lies
    /// below the frontier.
    pub r_pareto: Option<f64>,
    /// Set when no regressor was available and the point passes unconditionally.
    pub passthrough: bool,
}

impl GateResult {
    pub fn passthrough() -> Self {
        GateResult {
            p_budget: 1.0,
            p_pareto: 1.0,
            p_timeout: 0.0,
            p_eval: 1.0,
            r_pred: 0.0,
            predicted_latency: None,
            r_pareto: None,
            passthrough: true,
        }
    }
}

/// `1 - min(1, sum of per-type overuse)`.
pub fn p_budget(r: &ResourceRatios) -> f64 {
    let overuse: f64 = r.iter().map(|v| (v - 1.0).max(0.0)).sum();
    1.0 - overuse.min(1.0)
}

/// `1 - min(1, max(0, (r_pred - delta * r_pareto) / r_pareto))`; a point
/// projecting below the frontier (or onto a zero-resource entry) scores 1.
pub fn p_pareto(r_pred: f64, r_pareto: Projection, delta: f64) -> f64 {
    match r_pareto {
        Projection::BelowMin => 1.0,
        Projection::Resource(rp) if rp <= 0.0 => {
            warn!("projected frontier resource is {rp}; treating as below the frontier");
            1.0
        }
        Projection::Resource(rp) => {
            let excess = ((r_pred - delta * rp) / rp).max(0.0);
            1.0 - excess.min(1.0)
        }
    }
}

pub fn p_eval(p_budget: f64, p_pareto: f64, p_timeout: f64) -> f64 {
    p_budget * p_pareto * (1.0 - p_timeout)
}

/// Scores `point` against the current models and frontier.
pub fn get_prob_eval(
    surrogate: &dyn Surrogate,
    frontier: &ParetoFrontier,
    point: &DesignPoint,
    space: &DesignSpace,
    gate: &GateParams,
) -> GateResult {
    debug_assert!(space.is_valid(point));
    let x = space.encode_unchecked(point);
    let prediction = surrogate.predict(&x);
    let Some((latency, ratios)) = prediction.objectives else {
        return GateResult::passthrough();
    };

    let p_timeout = prediction.p_timeout.clamp(0.0, 1.0);
    let r_pred = weighted_resource(&ratios, &gate.weights);
    let projection = frontier.project(latency).unwrap_or(Projection::BelowMin);
    let pb = p_budget(&ratios);
    let pp = p_pareto(r_pred, projection, gate.delta);
    GateResult {
        p_budget: pb,
        p_pareto: pp,
        p_timeout,
        p_eval: p_eval(pb, pp, p_timeout),
        r_pred,
        predicted_latency: Some(latency),
        r_pareto: match projection {
            Projection::BelowMin => None,
            Projection::Resource(r) => Some(r),
        },
        passthrough: false,
    }
}

/// Bernoulli draw with success probability `p`.
pub fn accept<R: Rng + ?Sized>(p: f64, rng: &mut R) -> bool {
    rng.random::<f64>() < p
}
