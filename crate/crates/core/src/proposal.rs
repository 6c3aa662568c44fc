// SPDX-License-Identifier: Apache-2.0

//! The three point-proposal engines.
//!
//! All engines share the surrogate models, the frontier and the evaluated
//! dataset. Every candidate is scored with the evaluation gate; the
//! evolutionary and mutational engines return their best-scoring candidate
//! that has not been evaluated yet.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bandit::Engine;
use crate::dataset::{Dataset, Sample};
use crate::design_space::{DesignPoint, DesignSpace};
use crate::gate::{get_prob_eval, GateParams, GateResult};
use crate::pareto::{ParetoFrontier, Projection, ResourceWeights};
use crate::surrogate::Surrogate;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolutionParams {
    pub n_families: usize,
    pub n_offspring: usize,
    pub mutation_rate: f64,
    /// Population admits points using at most this multiple of the
    /// projected frontier resource.
    pub population_threshold: f64,
}

impl Default for EvolutionParams {
    fn default() -> Self {
        EvolutionParams {
            n_families: 5,
            n_offspring: 10,
            mutation_rate: 0.1,
            population_threshold: 1.2,
        }
    }
}

impl EvolutionParams {
    pub fn is_valid(&self) -> bool {
        self.n_families >= 1
            && self.n_offspring >= 1
            && (0.0..=1.0).contains(&self.mutation_rate)
            && self.population_threshold >= 1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Proposal {
    pub point: DesignPoint,
    pub gate: GateResult,
    pub engine: Engine,
    /// Every candidate was already evaluated.
    pub duplicate: bool,
    pub candidates: usize,
}

/// Shared read-only inputs of the engines.
pub struct Context<'a> {
    pub space: &'a DesignSpace,
    pub surrogate: &'a dyn Surrogate,
    pub frontier: &'a ParetoFrontier,
    pub dataset: &'a Dataset,
    pub weights: ResourceWeights,
}

impl Context<'_> {
    fn score(&self, point: &DesignPoint, gate: &GateParams) -> GateResult {
        get_prob_eval(self.surrogate, self.frontier, point, self.space, gate)
    }

    /// First not-yet-evaluated candidate with maximal `p_eval`, or the first
    /// overall maximum flagged as duplicate.
    fn pick_best(&self, engine: Engine, candidates: Vec<(DesignPoint, GateResult)>) -> Proposal {
        let total = candidates.len();
        let argmax = |fresh_only: bool| {
            let mut best: Option<usize> = None;
            for (i, (p, g)) in candidates.iter().enumerate() {
                if fresh_only && self.dataset.contains(p) {
                    continue;
                }
                if best.is_none_or(|b| g.p_eval > candidates[b].1.p_eval) {
                    best = Some(i);
                }
            }
            best
        };
        let (index, duplicate) = match argmax(true) {
            Some(i) => (i, false),
            None => (argmax(false).expect("at least one candidate"), true),
        };
        let (point, gate) = candidates.into_iter().nth(index).expect("index in range");
        Proposal {
            point,
            gate,
            engine,
            duplicate,
            candidates: total,
        }
    }
}

/// Evaluated points close enough to the frontier to breed from.
pub fn select_population<'a>(
    dataset: &'a Dataset,
    frontier: &ParetoFrontier,
    weights: &ResourceWeights,
    threshold: f64,
) -> Vec<&'a Sample> {
    dataset
        .evaluated_ok(*weights)
        .filter(|(_, obj)| match frontier.project(obj.latency) {
            Ok(Projection::Resource(r)) => obj.resource <= threshold * r,
            Ok(Projection::BelowMin) => true,
            Err(_) => false,
        })
        .map(|(s, _)| s)
        .collect()
}

/// Uniform crossover; a group takes its partitioning config from one parent.
pub fn crossover<R: Rng + ?Sized>(
    father: &DesignPoint,
    mother: &DesignPoint,
    space: &DesignSpace,
    rng: &mut R,
) -> DesignPoint {
    let knobs = space.knobs();
    let mut child = DesignPoint::default();
    let mut done = vec![false; knobs.len()];
    for i in 0..knobs.len() {
        if done[i] {
            continue;
        }
        let group = space.group_of(i);
        let coin = |rng: &mut R| if rng.random_bool(0.5) { father } else { mother };
        if group.len() == 1 {
            let id = &knobs[i].id;
            if let Some(a) = coin(rng).get(id) {
                child.set(id, a);
            }
            done[i] = true;
            continue;
        }
        let type_parent = coin(rng);
        let config = type_parent.get(&knobs[group[0]].id).map(|a| a.config);
        for m in group {
            let id = &knobs[m].id;
            let pick = coin(rng)
                .get(id)
                .filter(|a| Some(a.config) == config)
                .or_else(|| type_parent.get(id));
            if let Some(a) = pick {
                child.set(id, a);
            }
            done[m] = true;
        }
    }
    child
}

/// Each knob changes with probability `rate` to a different valid value.
/// Changing a grouped array's config moves its whole group.
pub fn mutate<R: Rng + ?Sized>(
    point: &DesignPoint,
    space: &DesignSpace,
    rate: f64,
    rng: &mut R,
) -> DesignPoint {
    let mut out = point.clone();
    let knobs = space.knobs();
    let mut moved = vec![false; knobs.len()];
    for (i, k) in knobs.iter().enumerate() {
        let options = k.options();
        if options.len() < 2 || moved[i] || !rng.random_bool(rate) {
            continue;
        }
        let current = out.get(&k.id);
        let choices: Vec<_> = options
            .into_iter()
            .filter(|o| Some(*o) != current)
            .collect();
        let next = choices[rng.random_range(0..choices.len())];
        out.set(&k.id, next);
        moved[i] = true;
        if current.is_some_and(|c| c.config != next.config) {
            let before = out.clone();
            space.align_group(&mut out, i, rng);
            for m in space.group_of(i) {
                if out.get(&knobs[m].id) != before.get(&knobs[m].id) {
                    moved[m] = true;
                }
            }
        }
    }
    out
}

/// A random point, redrawn up to `max_retries` times while it duplicates an
/// evaluated one.
pub fn propose_random<R: Rng + ?Sized>(
    ctx: &Context<'_>,
    gate: &GateParams,
    max_retries: usize,
    rng: &mut R,
) -> Proposal {
    let mut point = ctx.space.random_point(rng);
    let mut draws = 1;
    while ctx.dataset.contains(&point) && draws <= max_retries {
        point = ctx.space.random_point(rng);
        draws += 1;
    }
    let duplicate = ctx.dataset.contains(&point);
    let gate = ctx.score(&point, gate);
    Proposal {
        point,
        gate,
        engine: Engine::Random,
        duplicate,
        candidates: draws,
    }
}

/// Frontier entries with the two latencies closest to `latency`.
fn neighbors(frontier: &ParetoFrontier, latency: f64) -> Vec<&str> {
    let mut ranked: Vec<(f64, usize)> = frontier
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| ((e.objectives.latency - latency).abs(), i))
        .collect();
    ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    ranked
        .iter()
        .take(2)
        .map(|&(_, i)| frontier.entries()[i].point_id.as_str())
        .collect()
}

/// Breeds population members with neighboring frontier points and returns
/// the best of `2 * n_families * n_offspring` offspring and mutants.
pub fn propose_evolutionary<R: Rng + ?Sized>(
    ctx: &Context<'_>,
    params: &EvolutionParams,
    gate: &GateParams,
    rng: &mut R,
) -> Proposal {
    let mut population: Vec<&Sample> = select_population(
        ctx.dataset,
        ctx.frontier,
        &ctx.weights,
        params.population_threshold,
    );
    if population.is_empty() {
        population = ctx
            .frontier
            .entries()
            .iter()
            .filter_map(|e| ctx.dataset.get(&e.point_id))
            .collect();
    }
    assert!(
        !population.is_empty(),
        "evolutionary engine needs a frontier"
    );

    let mut candidates = Vec::with_capacity(2 * params.n_families * params.n_offspring);
    for _ in 0..params.n_families {
        let father = population[rng.random_range(0..population.len())];
        let latency = father
            .record
            .latency_us
            .expect("population members were evaluated");
        let near = neighbors(ctx.frontier, latency);
        let mother = near
            .get(rng.random_range(0..near.len().max(1)))
            .and_then(|id| ctx.dataset.get(id))
            .unwrap_or(father);
        for _ in 0..params.n_offspring {
            let offspring = crossover(&father.point, &mother.point, ctx.space, rng);
            let g = ctx.score(&offspring, gate);
            let mutant = mutate(&offspring, ctx.space, params.mutation_rate, rng);
            let gm = ctx.score(&mutant, gate);
            candidates.push((offspring, g));
            candidates.push((mutant, gm));
        }
    }
    ctx.pick_best(Engine::Evolutionary, candidates)
}

/// Mutates one random frontier point `n_mutants` times and returns the best
/// mutant.
pub fn propose_mutational<R: Rng + ?Sized>(
    ctx: &Context<'_>,
    n_mutants: usize,
    mutation_rate: f64,
    gate: &GateParams,
    rng: &mut R,
) -> Proposal {
    let entries = ctx.frontier.entries();
    assert!(!entries.is_empty(), "mutational engine needs a frontier");
    let base_id = &entries[rng.random_range(0..entries.len())].point_id;
    let base = &ctx
        .dataset
        .get(base_id)
        .expect("frontier points are in the dataset")
        .point;
    let candidates = (0..n_mutants.max(1))
        .map(|_| {
            let m = mutate(base, ctx.space, mutation_rate, rng);
            let g = ctx.score(&m, gate);
            (m, g)
        })
        .collect();
    ctx.pick_best(Engine::Mutational, candidates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design_space::{Assignment, DirectiveConfig, FeatureVector};
    use crate::evaluator::{make_record, Capacities, Fixture, Outcome, RawReport};
    use crate::gate::stub::predicting;
    use crate::pareto::{Objectives, ResourceRatios};
    use crate::surrogate::Prediction;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn s1() -> DesignSpace {
        DesignSpace::from_csv(Fixture::S1.knob_csv()).unwrap()
    }

    fn s2() -> DesignSpace {
        DesignSpace::from_csv(Fixture::S2.knob_csv()).unwrap()
    }

    fn gate(delta: f64) -> GateParams {
        GateParams {
            delta,
            weights: ResourceWeights::default(),
        }
    }

    /// Dataset entry whose weighted resource is exactly `resource` (all DSP).
    fn sample(dataset: &mut Dataset, point: DesignPoint, latency: f64, resource: f64) {
        let caps = Capacities {
            lut: 1,
            ff: 1,
            dsp: 1,
            bram: 1,
        };
        let raw = RawReport {
            latency_us: latency,
            lut: 0.0,
            ff: 0.0,
            dsp: resource / 0.4,
            bram: 0.0,
        };
        dataset.push(
            point.clone(),
            make_record(&point, Outcome::Ok(raw), &caps, 0.0),
        );
    }

    fn distinct_points(space: &DesignSpace, n: usize, seed: u64) -> Vec<DesignPoint> {
        let mut r = rng(seed);
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        while out.len() < n {
            let p = space.random_point(&mut r);
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        out
    }

    struct ById<'a> {
        space: &'a DesignSpace,
        favourite: DesignPoint,
    }

    impl Surrogate for ById<'_> {
        fn predict(&self, x: &FeatureVector) -> Prediction {
            let hit = *x == self.space.encode(&self.favourite).unwrap();
            Prediction {
                objectives: Some((
                    1.0,
                    ResourceRatios::new(0.0, 0.0, if hit { 0.0 } else { 9.0 }, 0.0),
                )),
                p_timeout: 0.0,
            }
        }
    }

    #[test]
    fn population_threshold() {
        let space = s1();
        let pts = distinct_points(&space, 4, 1);
        let mut data = Dataset::new();
        sample(&mut data, pts[0].clone(), 10.0, 0.5);
        sample(&mut data, pts[1].clone(), 20.0, 0.3);
        sample(&mut data, pts[2].clone(), 15.0, 0.45);
        sample(&mut data, pts[3].clone(), 15.0, 0.6);
        let w = ResourceWeights::default();
        let frontier = ParetoFrontier::from_objectives([
            (Objectives::new(10.0, 0.5), pts[0].id()),
            (Objectives::new(20.0, 0.3), pts[1].id()),
        ]);
        let pop: Vec<String> = select_population(&data, &frontier, &w, 1.2)
            .iter()
            .map(|s| s.record.point_id.clone())
            .collect();
        assert_eq!(pop, vec![pts[0].id(), pts[1].id(), pts[2].id()]);
    }

    #[test]
    fn crossover_properties() {
        let space = s2();
        let pts = distinct_points(&space, 2, 5);
        let mut r = rng(2);
        assert_eq!(crossover(&pts[0], &pts[0], &space, &mut r), pts[0]);

        for _ in 0..2000 {
            let child = crossover(&pts[0], &pts[1], &space, &mut r);
            assert!(space.is_valid(&child), "{}", child.describe());
            for k in space.knobs() {
                let v = child.get(&k.id);
                assert!(v == pts[0].get(&k.id) || v == pts[1].get(&k.id));
            }
        }
    }

    #[test]
    fn crossover_inherits_evenly() {
        let space = s1();
        let mut father = DesignPoint::default();
        let mut mother = DesignPoint::default();
        for id in ["L1", "L2"] {
            father.set(id, Assignment::plain(DirectiveConfig::None));
            mother.set(id, Assignment::new(DirectiveConfig::Unroll, 4));
        }
        father.set("A1", Assignment::plain(DirectiveConfig::None));
        mother.set("A1", Assignment::new(DirectiveConfig::Cyclic, 8));
        let mut r = rng(3);
        let n = 10_000;
        let mut from_father = [0usize; 3];
        for _ in 0..n {
            let c = crossover(&father, &mother, &space, &mut r);
            for (i, id) in ["L1", "L2", "A1"].iter().enumerate() {
                from_father[i] += (c.get(id) == father.get(id)) as usize;
            }
        }
        for f in from_father {
            assert!((f as f64 / n as f64 - 0.5).abs() <= 0.02);
        }
    }

    #[test]
    fn mutation_rates() {
        let space = s1();
        let p = space.random_point(&mut rng(4));
        let mut r = rng(5);
        assert_eq!(mutate(&p, &space, 0.0, &mut r), p);
        let m = mutate(&p, &space, 1.0, &mut r);
        for k in space.knobs() {
            assert_ne!(m.get(&k.id), p.get(&k.id));
        }
        // Grouped space stays valid and every knob moves at rate 1.
        let g = s2();
        for seed in 0..200 {
            let p = g.random_point(&mut rng(seed));
            let m = mutate(&p, &g, 1.0, &mut r);
            assert!(g.is_valid(&m));
            for k in g.knobs() {
                assert_ne!(
                    m.get(&k.id),
                    p.get(&k.id),
                    "{} -> {}",
                    p.describe(),
                    m.describe()
                );
            }
        }
    }

    #[test]
    fn mutation_count_is_binomial() {
        let mut text = String::from("id,kind,group,configs,factors\n");
        for i in 0..10 {
            text.push_str(&format!("l{i},loop,,none|pipeline|unroll,2|4|8\n"));
        }
        let space = DesignSpace::from_csv(&text).unwrap();
        let p = space.random_point(&mut rng(6));
        let mut r = rng(7);
        let n = 10_000;
        let changed: usize = (0..n)
            .map(|_| {
                let m = mutate(&p, &space, 0.1, &mut r);
                space
                    .knobs()
                    .iter()
                    .filter(|k| m.get(&k.id) != p.get(&k.id))
                    .count()
            })
            .sum();
        assert!((changed as f64 / n as f64 - 1.0).abs() <= 0.1);
    }

    #[test]
    fn single_option_knob_never_mutates() {
        let space =
            DesignSpace::from_csv("id,kind,group,configs,factors\nl,loop,,pipeline,\n").unwrap();
        let p = space.random_point(&mut rng(0));
        assert_eq!(mutate(&p, &space, 1.0, &mut rng(1)), p);
    }

    #[test]
    fn random_engine() {
        let space =
            DesignSpace::from_csv("id,kind,group,configs,factors\nl,loop,,pipeline,\n").unwrap();
        let stub = predicting(1.0, ResourceRatios::default(), 0.0);
        let data = Dataset::new();
        let frontier = ParetoFrontier::new();
        let ctx = Context {
            space: &space,
            surrogate: &stub,
            frontier: &frontier,
            dataset: &data,
            weights: ResourceWeights::default(),
        };
        let p = propose_random(&ctx, &gate(1.5), 20, &mut rng(0));
        assert_eq!(
            p.point.get("l"),
            Some(Assignment::plain(DirectiveConfig::Pipeline))
        );
        assert_eq!(p.gate.p_eval, 1.0);
        assert!(!p.duplicate);

        let mut data = Dataset::new();
        sample(&mut data, p.point.clone(), 1.0, 0.1);
        let ctx = Context {
            dataset: &data,
            ..ctx
        };
        assert!(propose_random(&ctx, &gate(1.5), 20, &mut rng(0)).duplicate);
    }

    #[test]
    fn evolutionary_trace_without_mutation() {
        let space = s1();
        let pts = distinct_points(&space, 2, 9);
        let mut data = Dataset::new();
        sample(&mut data, pts[0].clone(), 10.0, 0.5);
        sample(&mut data, pts[1].clone(), 20.0, 0.3);
        let frontier = data.frontier(&ResourceWeights::default());
        let stub = predicting(1.0, ResourceRatios::default(), 0.0);
        let ctx = Context {
            space: &space,
            surrogate: &stub,
            frontier: &frontier,
            dataset: &data,
            weights: ResourceWeights::default(),
        };
        let params = EvolutionParams {
            n_families: 1,
            n_offspring: 1,
            mutation_rate: 0.0,
            ..EvolutionParams::default()
        };
        for seed in 0..50 {
            let p = propose_evolutionary(&ctx, &params, &gate(1.0), &mut rng(seed));
            assert_eq!(p.candidates, 2);
            // Replay the draws: father, mother, crossover.
            let mut r = rng(seed);
            let pop = select_population(&data, &frontier, &ctx.weights, 1.2);
            let father = pop[r.random_range(0..pop.len())];
            let near = neighbors(&frontier, father.record.latency_us.unwrap());
            let mother = data.get(near[r.random_range(0..near.len())]).unwrap();
            let child = crossover(&father.point, &mother.point, &space, &mut r);
            assert_eq!(p.point, child);
            for k in space.knobs() {
                let v = p.point.get(&k.id);
                assert!(pts.iter().any(|q| q.get(&k.id) == v));
            }
        }

        let params = EvolutionParams::default();
        let p = propose_evolutionary(&ctx, &params, &gate(1.0), &mut rng(1));
        assert_eq!(p.candidates, 2 * params.n_families * params.n_offspring);
        assert!(space.is_valid(&p.point));
    }

    #[test]
    fn evolutionary_single_parent_is_duplicate() {
        let space = s1();
        let base = space.random_point(&mut rng(3));
        let mut data = Dataset::new();
        sample(&mut data, base.clone(), 10.0, 0.5);
        let frontier = data.frontier(&ResourceWeights::default());
        let stub = predicting(1.0, ResourceRatios::default(), 0.0);
        let ctx = Context {
            space: &space,
            surrogate: &stub,
            frontier: &frontier,
            dataset: &data,
            weights: ResourceWeights::default(),
        };
        let params = EvolutionParams {
            mutation_rate: 0.0,
            ..EvolutionParams::default()
        };
        let p = propose_evolutionary(&ctx, &params, &gate(1.0), &mut rng(0));
        assert!(p.duplicate);
        assert_eq!(p.point, base);
    }

    #[test]
    fn mutational_engine() {
        let single =
            DesignSpace::from_csv("id,kind,group,configs,factors\nl,loop,,pipeline,\n").unwrap();
        let base = single.random_point(&mut rng(0));
        let mut data = Dataset::new();
        sample(&mut data, base, 1.0, 0.1);
        let frontier = data.frontier(&ResourceWeights::default());
        let stub = predicting(1.0, ResourceRatios::default(), 0.0);
        let ctx = Context {
            space: &single,
            surrogate: &stub,
            frontier: &frontier,
            dataset: &data,
            weights: ResourceWeights::default(),
        };
        let p = propose_mutational(&ctx, 30, 0.1, &gate(1.0), &mut rng(1));
        assert!(p.duplicate);
        assert_eq!(p.candidates, 30);

        // Only one specific mutant scores above zero.
        let space = s2();
        let base = space.random_point(&mut rng(2));
        let mut data = Dataset::new();
        sample(&mut data, base.clone(), 1.0, 0.1);
        let frontier = data.frontier(&ResourceWeights::default());
        let mut replay = rng(4);
        let _ = replay.random_range(0..1usize);
        let mutants: Vec<_> = (0..30)
            .map(|_| mutate(&base, &space, 0.3, &mut replay))
            .collect();
        let favourite = mutants
            .iter()
            .rev()
            .find(|m| **m != base)
            .expect("some mutant differs")
            .clone();
        let stub = ById {
            space: &space,
            favourite: favourite.clone(),
        };
        let ctx = Context {
            space: &space,
            surrogate: &stub,
            frontier: &frontier,
            dataset: &data,
            weights: ResourceWeights::default(),
        };
        let p = propose_mutational(&ctx, 30, 0.3, &gate(1.0), &mut rng(4));
        assert_eq!(p.candidates, 30);
        assert_eq!(p.point, favourite);
        assert_eq!(p.gate.p_eval, 1.0);
        assert!(!p.duplicate);
    }
}
