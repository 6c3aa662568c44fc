// SPDX-License-Identifier: Apache-2.0

//! The exploration loop: initial random sampling, then retrain, select an
//! engine, propose, gate, evaluate and book-keep until the budget is spent.

use std::fs;
use std::io::{self, Write};
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use log::{debug, info};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bandit::{select_arm, ArmState, Engine};
use crate::dataset::Dataset;
use crate::design_space::{DesignPoint, DesignSpace, KnobSpec, SpaceError};
use crate::evaluator::{
    EvaluationRecord, Evaluator, EvaluatorSpec, HarnessError, SpecError, Status,
};
use crate::gate::{accept, GateParams, GateResult};
use crate::pareto::{Objectives, ParetoFrontier, ResourceWeights};
use crate::proposal::{
    propose_evolutionary, propose_mutational, propose_random, Context, EvolutionParams, Proposal,
};
use crate::rng::{derive_seed, Streams};
use crate::surrogate::{retrain_bundle, ForestError, ForestParams, SurrogateBundle};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExplorerConfig {
    pub n_init: usize,
    /// Evaluator calls, including initial samples and failures.
    pub max_points: usize,
    pub time_budget_s: Option<f64>,
    pub weights: ResourceWeights,
    pub delta_evolutionary: f64,
    pub delta_mutational: f64,
    pub delta_random: f64,
    pub evolution: EvolutionParams,
    pub n_mutants: usize,
    /// Sliding window per arm; `null` keeps the whole history.
    pub bandit_window: Option<usize>,
    pub forest: ForestParams,
    pub seed: u64,
    pub max_proposal_retries: usize,
    /// Engines the bandit chooses from. Must include `random`.
    pub engines: Vec<Engine>,
    /// Iterations, evaluated or not, are capped at this multiple of
    /// `max_points`.
    pub iteration_cap_factor: usize,
    /// Hypervolume reference written to the summary; defaults to 1.1 times
    /// the largest successful latency and resource in the dataset.
    pub reference: Option<Objectives>,
}

impl Default for ExplorerConfig {
    fn default() -> Self {
        ExplorerConfig {
            n_init: 20,
            max_points: 170,
            time_budget_s: None,
            weights: ResourceWeights::default(),
            delta_evolutionary: 1.0,
            delta_mutational: 1.0,
            delta_random: 1.5,
            evolution: EvolutionParams::default(),
            n_mutants: 30,
            bandit_window: Some(50),
            forest: ForestParams::default(),
            seed: 0,
            max_proposal_retries: 20,
            engines: Engine::ALL.to_vec(),
            iteration_cap_factor: 10,
            reference: None,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("n_init must be at least 1")]
    NoInit,
    #[error("n_init ({n_init}) must be smaller than max_points ({max_points})")]
    InitExceedsBudget { n_init: usize, max_points: usize },
    #[error("time_budget_s must be positive")]
    TimeBudget,
    #[error("resource weights must be non-negative and finite")]
    Weights,
    #[error("{0} must be positive and finite")]
    Delta(&'static str),
    #[error("evolution parameters out of range")]
    Evolution,
    #[error("n_mutants must be at least 1")]
    Mutants,
    #[error("iteration_cap_factor must be at least 1")]
    IterationCap,
    #[error("engines must be distinct and include random")]
    Engines,
    #[error("reference point must be finite")]
    Reference,
    #[error(transparent)]
    Forest(#[from] ForestError),
    #[error(transparent)]
    Evaluator(#[from] SpecError),
}

impl ExplorerConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_init == 0 {
            return Err(ConfigError::NoInit);
        }
        if self.n_init > self.max_points {
            return Err(ConfigError::InitExceedsBudget {
                n_init: self.n_init,
                max_points: self.max_points,
            });
        }
        if self.time_budget_s.is_some_and(|t| t.is_nan() || t <= 0.0) {
            return Err(ConfigError::TimeBudget);
        }
        if !self.weights.is_valid() {
            return Err(ConfigError::Weights);
        }
        for (name, d) in [
            ("delta_evolutionary", self.delta_evolutionary),
            ("delta_mutational", self.delta_mutational),
            ("delta_random", self.delta_random),
        ] {
            if !(d.is_finite() && d > 0.0) {
                return Err(ConfigError::Delta(name));
            }
        }
        if !self.evolution.is_valid() {
            return Err(ConfigError::Evolution);
        }
        if self.n_mutants == 0 {
            return Err(ConfigError::Mutants);
        }
        if self.iteration_cap_factor == 0 {
            return Err(ConfigError::IterationCap);
        }
        let distinct = self
            .engines
            .iter()
            .enumerate()
            .all(|(i, e)| !self.engines[..i].contains(e));
        if !distinct || !self.engines.contains(&Engine::Random) {
            return Err(ConfigError::Engines);
        }
        if self
            .reference
            .is_some_and(|r| !(r.latency.is_finite() && r.resource.is_finite()))
        {
            return Err(ConfigError::Reference);
        }
        self.forest.validate()?;
        Ok(())
    }

    fn delta(&self, engine: Engine) -> f64 {
        match engine {
            Engine::Random => self.delta_random,
            Engine::Evolutionary => self.delta_evolutionary,
            Engine::Mutational => self.delta_mutational,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Init,
    Explore,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmSnapshot {
    pub method: Engine,
    pub alpha: f64,
    pub beta: f64,
    pub attempts: u64,
    pub successes: u64,
}

impl From<&ArmState> for ArmSnapshot {
    fn from(a: &ArmState) -> Self {
        ArmSnapshot {
            method: a.method,
            alpha: a.alpha(),
            beta: a.beta_param(),
            attempts: a.total_attempts(),
            successes: a.total_successes(),
        }
    }
}

/// One line of the run history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub iteration: usize,
    pub phase: Phase,
    pub method: Option<Engine>,
    pub point_id: String,
    pub knobs: DesignPoint,
    pub candidates: usize,
    pub duplicate: bool,
    pub gate: Option<GateResult>,
    pub accepted: bool,
    pub evaluation: Option<EvaluationRecord>,
    pub pushed: bool,
    pub evaluations: usize,
    pub frontier_size: usize,
    pub arms: Vec<ArmSnapshot>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Budget,
    TimeBudget,
    IterationCap,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunState {
    pub dataset: Dataset,
    pub frontier: ParetoFrontier,
    pub arms: Vec<ArmState>,
    /// Evaluator calls so far.
    pub evaluations: usize,
    /// Iterations after initial sampling, evaluated or not.
    pub explore_iterations: usize,
    pub elapsed_s: f64,
    pub history: Vec<HistoryEntry>,
    pub stop: Option<StopReason>,
    streams: Streams,
    /// Rebuilt on demand; keyed by the dataset length it was trained on.
    #[serde(skip)]
    bundle: Option<(usize, Arc<SurrogateBundle>)>,
}

impl PartialEq for RunState {
    fn eq(&self, other: &Self) -> bool {
        self.dataset == other.dataset
            && self.frontier == other.frontier
            && self.arms == other.arms
            && self.evaluations == other.evaluations
            && self.explore_iterations == other.explore_iterations
            && self.elapsed_s == other.elapsed_s
            && self.history == other.history
            && self.stop == other.stop
            && self.streams == other.streams
    }
}

impl RunState {
    fn new(config: &ExplorerConfig) -> Self {
        RunState {
            dataset: Dataset::new(),
            frontier: ParetoFrontier::new(),
            arms: config
                .engines
                .iter()
                .map(|&e| ArmState::new(e, config.bandit_window))
                .collect(),
            evaluations: 0,
            explore_iterations: 0,
            elapsed_s: 0.0,
            history: Vec::new(),
            stop: None,
            streams: Streams::new(config.seed),
            bundle: None,
        }
    }

    /// Set when every evaluation so far has failed.
    pub fn no_frontier(&self) -> bool {
        self.frontier.is_empty()
    }

    pub fn phase(&self, config: &ExplorerConfig) -> Phase {
        if self.evaluations < config.n_init && self.explore_iterations == 0 {
            Phase::Init
        } else {
            Phase::Explore
        }
    }
}

#[derive(Debug, Error)]
pub enum CheckpointError {
    #[error("cannot access checkpoint: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt checkpoint: {0}")]
    Corrupt(#[source] serde_json::Error),
    #[error("checkpoint version {found} is not supported (expected {expected})")]
    Version { found: u32, expected: u32 },
    #[error("checkpoint knob list is invalid: {0}")]
    Space(#[from] SpaceError),
    #[error("checkpoint configuration is invalid: {0}")]
    Config(#[from] ConfigError),
    #[error("checkpoint state is inconsistent: {0}")]
    Inconsistent(&'static str),
}

#[derive(Debug, Error)]
pub enum ExplorerError {
    #[error("evaluation harness failed: {0}")]
    Harness(#[from] HarnessError),
    #[error("model training failed: {0}")]
    Model(#[from] ForestError),
}

#[derive(Serialize, Deserialize)]
struct Checkpoint {
    version: u32,
    config: ExplorerConfig,
    knobs: Vec<KnobSpec>,
    evaluator: EvaluatorSpec,
    state: RunState,
}

#[derive(Deserialize)]
struct VersionProbe {
    version: u32,
}

/// An exploration in progress.
#[derive(Debug, Clone)]
pub struct Explorer {
    config: ExplorerConfig,
    space: DesignSpace,
    evaluator: EvaluatorSpec,
    state: RunState,
}

impl Explorer {
    pub fn new(
        config: ExplorerConfig,
        space: DesignSpace,
        evaluator: EvaluatorSpec,
    ) -> Result<Self, ConfigError> {
        config.validate()?;
        evaluator.validate()?;
        let state = RunState::new(&config);
        Ok(Explorer {
            config,
            space,
            evaluator,
            state,
        })
    }

    pub fn config(&self) -> &ExplorerConfig {
        &self.config
    }

    pub fn space(&self) -> &DesignSpace {
        &self.space
    }

    pub fn evaluator(&self) -> &EvaluatorSpec {
        &self.evaluator
    }

    pub fn state(&self) -> &RunState {
        &self.state
    }

    /// Why the run stopped, or `None` while work remains.
    pub fn stop_reason(&self) -> Option<StopReason> {
        if self.state.evaluations >= self.config.max_points {
            Some(StopReason::Budget)
        } else if self
            .config
            .time_budget_s
            .is_some_and(|t| self.state.elapsed_s >= t)
        {
            Some(StopReason::TimeBudget)
        } else if self.state.history.len()
            >= self.config.iteration_cap_factor * self.config.max_points
        {
            Some(StopReason::IterationCap)
        } else {
            None
        }
    }

    /// Replaces the evaluation and time budgets, e.g. to extend a resumed run.
    pub fn set_budget(
        &mut self,
        max_points: Option<usize>,
        time_budget_s: Option<f64>,
    ) -> Result<(), ConfigError> {
        let mut config = self.config.clone();
        if let Some(m) = max_points {
            config.max_points = m;
        }
        if let Some(t) = time_budget_s {
            config.time_budget_s = Some(t);
        }
        config.validate()?;
        self.config = config;
        self.state.stop = self.stop_reason();
        Ok(())
    }

    pub fn is_finished(&self) -> bool {
        self.stop_reason().is_some()
    }

    /// Runs to completion with the configured evaluator.
    pub fn run(&mut self) -> Result<RunReport, ExplorerError> {
        let mut evaluator = self.evaluator.clone();
        self.run_with(&mut evaluator)
    }

    pub fn run_with(&mut self, evaluator: &mut dyn Evaluator) -> Result<RunReport, ExplorerError> {
        while !self.is_finished() {
            self.step(evaluator)?;
        }
        Ok(self.report())
    }

    /// Runs until `iterations` history entries exist or the run finishes.
    pub fn run_until(
        &mut self,
        iterations: usize,
        evaluator: &mut dyn Evaluator,
    ) -> Result<(), ExplorerError> {
        while !self.is_finished() && self.state.history.len() < iterations {
            self.step(evaluator)?;
        }
        Ok(())
    }

    /// One initial sample or one exploration iteration. On error the state is
    /// left as it was before the call.
    pub fn step(&mut self, evaluator: &mut dyn Evaluator) -> Result<(), ExplorerError> {
        let started = Instant::now();
        let streams = self.state.streams.clone();
        let result = match self.state.phase(&self.config) {
            Phase::Init => self.init_step(evaluator),
            Phase::Explore => self.explore_step(evaluator),
        };
        if result.is_err() {
            self.state.streams = streams;
        }
        self.state.elapsed_s += started.elapsed().as_secs_f64();
        self.state.stop = self.stop_reason();
        result
    }

    fn init_step(&mut self, evaluator: &mut dyn Evaluator) -> Result<(), ExplorerError> {
        let rng = &mut self.state.streams.sampling;
        let mut point = self.space.random_point(rng);
        let mut draws = 1;
        while self.state.dataset.contains(&point) && draws <= self.config.max_proposal_retries {
            point = self.space.random_point(rng);
            draws += 1;
        }
        let duplicate = self.state.dataset.contains(&point);
        let record = evaluator.evaluate(&point, &self.space)?;
        let pushed = self.book(&point, &record);
        debug!(
            "init {}: {} {}",
            self.state.evaluations,
            point.id(),
            record.status.name()
        );
        self.log(
            Phase::Init,
            None,
            point,
            draws,
            duplicate,
            None,
            true,
            Some(record),
            pushed,
        );
        Ok(())
    }

    fn explore_step(&mut self, evaluator: &mut dyn Evaluator) -> Result<(), ExplorerError> {
        let bundle = self.bundle()?;
        let state = &mut self.state;

        let arm = if state.frontier.is_empty() {
            state
                .arms
                .iter()
                .position(|a| a.method == Engine::Random)
                .expect("random engine is always enabled")
        } else {
            select_arm(&state.arms, &mut state.streams.bandit)
        };
        let engine = state.arms[arm].method;

        let ctx = Context {
            space: &self.space,
            surrogate: bundle.as_ref(),
            frontier: &state.frontier,
            dataset: &state.dataset,
            weights: self.config.weights,
        };
        let gate = GateParams {
            delta: self.config.delta(engine),
            weights: self.config.weights,
        };
        let rng = &mut state.streams.engines;
        let proposal: Proposal = match engine {
            Engine::Random => propose_random(&ctx, &gate, self.config.max_proposal_retries, rng),
            Engine::Evolutionary => propose_evolutionary(&ctx, &self.config.evolution, &gate, rng),
            Engine::Mutational => propose_mutational(
                &ctx,
                self.config.n_mutants,
                self.config.evolution.mutation_rate,
                &gate,
                rng,
            ),
        };

        let accepted = !proposal.duplicate && accept(proposal.gate.p_eval, &mut state.streams.gate);
        let (record, pushed) = if accepted {
            let record = evaluator.evaluate(&proposal.point, &self.space)?;
            let pushed = self.book(&proposal.point, &record);
            (Some(record), pushed)
        } else {
            (None, false)
        };
        let success = record.as_ref().is_some_and(|r| r.status == Status::Ok) && pushed;
        self.state.arms[arm].record_outcome(success);
        self.state.explore_iterations += 1;
        debug!(
            "iteration {}: {engine} p_eval {:.3} accepted {accepted} pushed {pushed}",
            self.state.explore_iterations, proposal.gate.p_eval
        );
        self.log(
            Phase::Explore,
            Some(engine),
            proposal.point,
            proposal.candidates,
            proposal.duplicate,
            Some(proposal.gate),
            accepted,
            record,
            pushed,
        );
        Ok(())
    }

    /// Appends an evaluation and reports whether it changed the frontier.
    fn book(&mut self, point: &DesignPoint, record: &EvaluationRecord) -> bool {
        let state = &mut self.state;
        state.evaluations += 1;
        state.dataset.push(point.clone(), record.clone());
        match record.objectives(&self.config.weights) {
            Some(obj) => state.frontier.update(obj, record.point_id.clone()),
            None => false,
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn log(
        &mut self,
        phase: Phase,
        method: Option<Engine>,
        point: DesignPoint,
        candidates: usize,
        duplicate: bool,
        gate: Option<GateResult>,
        accepted: bool,
        evaluation: Option<EvaluationRecord>,
        pushed: bool,
    ) {
        let state = &mut self.state;
        state.history.push(HistoryEntry {
            iteration: state.history.len(),
            phase,
            method,
            point_id: point.id(),
            knobs: point,
            candidates,
            duplicate,
            gate,
            accepted,
            evaluation,
            pushed,
            evaluations: state.evaluations,
            frontier_size: state.frontier.len(),
            arms: state.arms.iter().map(ArmSnapshot::from).collect(),
        });
    }

    /// Models trained on the current dataset. Training is a pure function of
    /// the dataset, so a cached bundle is reused until the dataset grows.
    fn bundle(&mut self) -> Result<Arc<SurrogateBundle>, ForestError> {
        let n = self.state.dataset.len();
        if let Some((rows, b)) = &self.state.bundle {
            if *rows == n {
                return Ok(Arc::clone(b));
            }
        }
        let mut params = self.config.forest.clone();
        params.seed = derive_seed(self.config.seed, "forest")
            .wrapping_add(params.seed)
            .wrapping_add(n as u64);
        let rows = self.state.dataset.training_rows(&self.space);
        let b = Arc::new(retrain_bundle(&rows, &params)?);
        self.state.bundle = Some((n, Arc::clone(&b)));
        Ok(b)
    }

    pub fn checkpoint(&self, path: &Path) -> Result<(), CheckpointError> {
        let body = serde_json::to_vec(&Checkpoint {
            version: CHECKPOINT_VERSION,
            config: self.config.clone(),
            knobs: self.space.knobs().to_vec(),
            evaluator: self.evaluator.clone(),
            state: self.state.clone(),
        })
        .expect("run state serializes");
        let tmp = path.with_extension("tmp");
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&body)?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        info!("checkpoint written to {}", path.display());
        Ok(())
    }

    pub fn resume(path: &Path) -> Result<Self, CheckpointError> {
        let text = fs::read_to_string(path)?;
        Self::from_checkpoint(&text)
    }

    pub fn from_checkpoint(text: &str) -> Result<Self, CheckpointError> {
        let probe: VersionProbe = serde_json::from_str(text).map_err(CheckpointError::Corrupt)?;
        if probe.version != CHECKPOINT_VERSION {
            return Err(CheckpointError::Version {
                found: probe.version,
                expected: CHECKPOINT_VERSION,
            });
        }
        let cp: Checkpoint = serde_json::from_str(text).map_err(CheckpointError::Corrupt)?;
        cp.config.validate()?;
        cp.evaluator.validate().map_err(ConfigError::from)?;
        let space = DesignSpace::new(cp.knobs)?;
        check_state(&cp.config, &space, &cp.state).map_err(CheckpointError::Inconsistent)?;
        Ok(Explorer {
            config: cp.config,
            space,
            evaluator: cp.evaluator,
            state: cp.state,
        })
    }

    pub fn report(&self) -> RunReport {
        let reference = self.config.reference.unwrap_or_else(|| {
            default_reference(
                self.state
                    .dataset
                    .evaluated_ok(self.config.weights)
                    .map(|(_, o)| o),
            )
        });
        RunReport {
            frontier: self.state.frontier.clone(),
            dataset: self.state.dataset.clone(),
            arms: self.state.arms.iter().map(ArmSnapshot::from).collect(),
            history: self.state.history.clone(),
            reference,
            seed: self.config.seed,
            stop: self.stop_reason(),
        }
    }
}

/// Cross-checks a deserialized run state against its configuration and space.
fn check_state(
    config: &ExplorerConfig,
    space: &DesignSpace,
    state: &RunState,
) -> Result<(), &'static str> {
    let methods: Vec<Engine> = state.arms.iter().map(|a| a.method).collect();
    if methods != config.engines {
        return Err("arms do not match the configured engines");
    }
    if state
        .arms
        .iter()
        .any(|a| !a.is_consistent() || a.capacity != config.bandit_window)
    {
        return Err("arm counters disagree with their windows");
    }
    if state.evaluations != state.dataset.len() {
        return Err("evaluation count differs from the dataset");
    }
    if state.history.len() < state.evaluations || state.explore_iterations > state.history.len() {
        return Err("history is shorter than the evaluation count");
    }
    for s in state.dataset.samples() {
        if !space.validate(&s.point).is_empty() || s.record.point_id != s.point.id() {
            return Err("dataset holds a point outside the design space");
        }
    }
    if state.frontier != state.dataset.frontier(&config.weights) {
        return Err("frontier differs from the one implied by the dataset");
    }
    Ok(())
}

/// 1.1 times the largest latency and resource among `points`.
pub fn default_reference(points: impl IntoIterator<Item = Objectives>) -> Objectives {
    let (l, r) = points.into_iter().fold((0.0f64, 0.0f64), |(l, r), o| {
        (l.max(o.latency), r.max(o.resource))
    });
    Objectives::new(1.1 * l, 1.1 * r)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatusCounts {
    pub ok: usize,
    pub error: usize,
    pub timeout: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArmSummary {
    pub method: Engine,
    pub attempts: u64,
    pub successes: u64,
    pub success_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub seed: u64,
    pub evaluations: usize,
    pub iterations: usize,
    pub stop: Option<StopReason>,
    pub status_counts: StatusCounts,
    pub arms: Vec<ArmSummary>,
    pub frontier_size: usize,
    pub reference: Objectives,
    pub hypervolume: f64,
}

/// Everything a finished run produces.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub frontier: ParetoFrontier,
    pub dataset: Dataset,
    pub arms: Vec<ArmSnapshot>,
    pub history: Vec<HistoryEntry>,
    pub reference: Objectives,
    pub seed: u64,
    pub stop: Option<StopReason>,
}

impl RunReport {
    pub fn hypervolume(&self) -> f64 {
        self.frontier.hypervolume(&self.reference)
    }

    pub fn history_jsonl(&self) -> String {
        let mut out = String::new();
        for h in &self.history {
            out.push_str(&serde_json::to_string(h).expect("history serializes"));
            out.push('\n');
        }
        out
    }

    pub fn summary(&self) -> Summary {
        Summary {
            seed: self.seed,
            evaluations: self.dataset.len(),
            iterations: self.history.len(),
            stop: self.stop,
            status_counts: StatusCounts {
                ok: self.dataset.count_status(Status::Ok),
                error: self.dataset.count_status(Status::Error),
                timeout: self.dataset.count_status(Status::Timeout),
            },
            arms: self
                .arms
                .iter()
                .map(|a| ArmSummary {
                    method: a.method,
                    attempts: a.attempts,
                    successes: a.successes,
                    success_rate: if a.attempts == 0 {
                        0.0
                    } else {
                        a.successes as f64 / a.attempts as f64
                    },
                })
                .collect(),
            frontier_size: self.frontier.len(),
            reference: self.reference,
            hypervolume: self.hypervolume(),
        }
    }

    /// Writes `pareto.csv`, `history.jsonl` and `summary.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("pareto.csv"), self.frontier.to_csv())?;
        fs::write(dir.join("history.jsonl"), self.history_jsonl())?;
        let mut summary =
            serde_json::to_string_pretty(&self.summary()).expect("summary serializes");
        summary.push('\n');
        fs::write(dir.join("summary.json"), summary)?;
        Ok(())
    }
}
