// SPDX-License-Identifier: Apache-2.0

//! Design-space exploration for high-level-synthesis directives.
//!
//! A run samples a handful of directive configurations at random, then
//! repeatedly trains random-forest surrogates on everything evaluated so far,
//! lets a Thompson-sampling bandit pick one of three proposal engines, and
//! sends the proposal to the (expensive) evaluator only if a probabilistic
//! gate built from the surrogate predictions accepts it. The output is the
//! latency/resource Pareto frontier.

pub mod bandit;
pub mod dataset;
pub mod design_space;
pub mod evaluator;
pub mod explorer;
pub mod gate;
pub mod pareto;
pub mod proposal;
pub mod report;
pub mod rng;
pub mod surrogate;

pub use bandit::{ArmState, Engine};
pub use dataset::{Dataset, Sample};
pub use design_space::{
    parse_knob_file, Assignment, DesignPoint, DesignSpace, DirectiveConfig, FeatureVector,
    KnobFileError, KnobKind, KnobSpec, SpaceError,
};
pub use evaluator::{
    brute_force, Capacities, EvaluationRecord, Evaluator, EvaluatorSpec, Fixture, HarnessError,
    Status,
};
pub use explorer::{
    CheckpointError, ConfigError, Explorer, ExplorerConfig, ExplorerError, RunReport, RunState,
};
pub use gate::{get_prob_eval, GateParams, GateResult};
pub use pareto::{
    dominates, hypervolume, weighted_resource, Objectives, ParetoFrontier, ResourceRatios,
    ResourceWeights,
};
pub use surrogate::{Forest, ForestParams, SurrogateBundle};
