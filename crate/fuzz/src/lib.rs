// SPDX-License-Identifier: Apache-2.0

//! Fuzz target bodies. Kept in a library so the corpus can be replayed by a
//! plain `cargo test` without libFuzzer.

use hls_dse::evaluator::{make_record, parse_result};
use hls_dse::{
    dominates, parse_knob_file, Capacities, DesignPoint, DesignSpace, EvaluatorSpec, Explorer,
    ExplorerConfig, Fixture, ParetoFrontier, Status,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Spaces at most this large are enumerated in full.
const ENUMERATE_LIMIT: u64 = 256;

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

fn s1() -> DesignSpace {
    DesignSpace::from_csv(Fixture::S1.knob_csv()).expect("fixture parses")
}

/// Knob files either fail cleanly or yield a space whose sampled points are
/// valid and encode to the advertised length.
pub fn knob_file(data: &[u8]) {
    let Some(text) = text(data) else { return };
    let Ok(knobs) = parse_knob_file(text) else {
        return;
    };
    let Ok(space) = DesignSpace::new(knobs) else {
        return;
    };
    assert!(space.size() >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(data.len() as u64);
    for _ in 0..8 {
        let p = space.random_point(&mut rng);
        assert!(
            space.validate(&p).is_empty(),
            "sampled point violates its space"
        );
        let x = space.encode(&p).expect("valid points encode");
        assert_eq!(x.len(), space.feature_len());
    }
    if space.size() <= ENUMERATE_LIMIT {
        let all = space.enumerate();
        assert_eq!(all.len() as u64, space.size());
        assert!(all.iter().all(|p| space.validate(p).is_empty()));
    }
}

/// Any tool output becomes a record that obeys the record invariants.
pub fn eval_result(data: &[u8]) {
    let Some(text) = text(data) else { return };
    let outcome = parse_result(text);
    let record = make_record(
        &DesignPoint::default(),
        outcome,
        &Capacities::default(),
        0.0,
    );
    match record.status {
        Status::Ok => {
            let lat = record.latency_us.expect("ok records carry latency");
            assert!(lat.is_finite() && lat > 0.0);
            let ratios = record.ratios.expect("ok records carry ratios");
            assert!(ratios.iter().all(|r| r.is_finite() && r >= 0.0));
        }
        Status::Error | Status::Timeout => {
            assert!(record.latency_us.is_none() && record.ratios.is_none());
        }
    }
}

/// Point files round-trip; valid S1 points encode and evaluate.
pub fn point_file(data: &[u8]) {
    let Ok(point) = serde_json::from_slice::<DesignPoint>(data) else {
        return;
    };
    let again: DesignPoint =
        serde_json::from_str(&serde_json::to_string(&point).expect("points serialize"))
            .expect("serialized points parse");
    assert_eq!(again, point);
    assert_eq!(again.id(), point.id());
    let space = s1();
    if space.validate(&point).is_empty() {
        assert!(space.encode(&point).is_ok());
        let record = make_record(
            &point,
            Fixture::S1.evaluate(&point),
            &Capacities::default(),
            0.0,
        );
        assert_eq!(record.point_id, point.id());
    } else {
        assert!(space.encode(&point).is_err());
    }
}

/// Checkpoints either fail cleanly or resume into a usable explorer.
pub fn checkpoint(data: &[u8]) {
    let Some(text) = text(data) else { return };
    let Ok(mut explorer) = Explorer::from_checkpoint(text) else {
        return;
    };
    let report = explorer.report();
    let _ = report.summary();
    let _ = report.history_jsonl();
    // Bound the work so a hostile configuration cannot stall the fuzzer.
    let c = explorer.config();
    let cheap = c.forest.n_trees <= 20
        && c.forest.max_depth <= 12
        && c.n_mutants <= 50
        && c.evolution.n_families * c.evolution.n_offspring <= 100
        && c.max_proposal_retries <= 50
        && explorer.state().dataset.len() <= 200;
    if let (true, EvaluatorSpec::Synthetic { .. }) = (cheap, explorer.evaluator()) {
        let mut ev = explorer.evaluator().clone();
        let more = explorer.state().evaluations.saturating_add(2);
        if explorer.set_budget(Some(more), None).is_err() {
            return;
        }
        for _ in 0..3 {
            if explorer.is_finished() || explorer.step(&mut ev).is_err() {
                break;
            }
        }
    }
}

/// Valid configurations round-trip through JSON and build an explorer.
pub fn explorer_config(data: &[u8]) {
    let Ok(config) = serde_json::from_slice::<ExplorerConfig>(data) else {
        return;
    };
    if config.validate().is_err() {
        return;
    }
    let again: ExplorerConfig =
        serde_json::from_str(&serde_json::to_string(&config).expect("configs serialize"))
            .expect("serialized configs parse");
    assert_eq!(again, config);
    Explorer::new(config, s1(), EvaluatorSpec::synthetic(Fixture::S1))
        .expect("validated configs build an explorer");
}

/// Parsed frontiers are sorted, mutually non-dominated and round-trip.
pub fn frontier_csv(data: &[u8]) {
    let Some(text) = text(data) else { return };
    let Ok(frontier) = ParetoFrontier::from_csv(text) else {
        return;
    };
    let e = frontier.entries();
    assert!(e
        .windows(2)
        .all(|w| w[0].objectives.latency < w[1].objectives.latency));
    for a in e {
        assert!(e.iter().all(|b| !dominates(&b.objectives, &a.objectives)));
    }
    let again = ParetoFrontier::from_csv(&frontier.to_csv()).expect("written frontiers parse");
    assert_eq!(again, frontier);
}
