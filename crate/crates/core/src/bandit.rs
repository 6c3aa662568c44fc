// SPDX-License-Identifier: Apache-2.0

//! Thompson sampling over the proposal engines.
//!
//! Each arm keeps a bounded window of its most recent outcomes. Its posterior
//! is `Beta(1 + successes, 1 + failures)` over that window.

use std::collections::VecDeque;
use std::fmt;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Random,
    Evolutionary,
    Mutational,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Random, Engine::Evolutionary, Engine::Mutational];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Random => "random",
            Engine::Evolutionary => "evolutionary",
            Engine::Mutational => "mutational",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArmState {
    pub method: Engine,
    /// `None` keeps every outcome.
    pub capacity: Option<usize>,
    window: VecDeque<bool>,
    successes: usize,
    total_attempts: u64,
    total_successes: u64,
}

impl ArmState {
    pub fn new(method: Engine, capacity: Option<usize>) -> Self {
        ArmState {
            method,
            capacity,
            window: VecDeque::new(),
            successes: 0,
            total_attempts: 0,
            total_successes: 0,
        }
    }

    pub fn alpha(&self) -> f64 {
        1.0 + self.successes as f64
    }

    pub fn beta_param(&self) -> f64 {
        1.0 + (self.window.len() - self.successes) as f64
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    /// Attempts over the whole run, ignoring the window.
    pub fn total_attempts(&self) -> u64 {
        self.total_attempts
    }

    pub fn total_successes(&self) -> u64 {
        self.total_successes
    }

    /// Whether the counters agree with the window. Always true unless the
    /// state was deserialized from a damaged file.
    pub fn is_consistent(&self) -> bool {
        let in_window = self.window.iter().filter(|&&s| s).count();
        in_window == self.successes
            && self.capacity.is_none_or(|c| self.window.len() <= c)
            && self.total_successes <= self.total_attempts
            && self.window.len() as u64 <= self.total_attempts
            && in_window as u64 <= self.total_successes
    }

    pub fn record_outcome(&mut self, success: bool) {
        if self.capacity == Some(0) {
            self.total_attempts += 1;
            self.total_successes += success as u64;
            return;
        }
        if self.capacity.is_some_and(|c| self.window.len() == c)
            && self.window.pop_front() == Some(true)
        {
            self.successes -= 1;
        }
        self.window.push_back(success);
        self.successes += success as usize;
        self.total_attempts += 1;
        self.total_successes += success as u64;
    }
}

/// Draws one posterior sample per arm and returns the index of the largest;
/// earlier arms win ties.
pub fn select_arm<R: Rng + ?Sized>(arms: &[ArmState], rng: &mut R) -> usize {
    assert!(!arms.is_empty(), "no arms to select from");
    let mut best = 0;
    let mut best_sample = f64::NEG_INFINITY;
    for (i, arm) in arms.iter().enumerate() {
        let s = beta_sample(arm.alpha(), arm.beta_param(), rng);
        if s > best_sample {
            best = i;
            best_sample = s;
        }
    }
    best
}

pub fn select_method<R: Rng + ?Sized>(arms: &[ArmState], rng: &mut R) -> Engine {
    arms[select_arm(arms, rng)].method
}

/// `Beta(alpha, beta)` as `X / (X + Y)` with `X ~ Gamma(alpha)`, `Y ~ Gamma(beta)`.
pub fn beta_sample<R: Rng + ?Sized>(alpha: f64, beta: f64, rng: &mut R) -> f64 {
    loop {
        let x = gamma_sample(alpha, rng);
        let y = gamma_sample(beta, rng);
        let s = x + y;
        if s > 0.0 {
            let v = x / s;
            if v > 0.0 && v < 1.0 {
                return v;
            }
        }
    }
}

/// Marsaglia and Tsang's squeeze method, unit scale.
pub fn gamma_sample<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    assert!(shape > 0.0, "gamma shape must be positive");
    if shape < 1.0 {
        // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a)
        let u: f64 = rng.random();
        return gamma_sample(shape + 1.0, rng) * u.powf(1.0 / shape);
    }
    let d = shape - 1.0 / 3.0;
    let c = 1.0 / (9.0 * d).sqrt();
    loop {
        let z: f64 = rng.sample(StandardNormal);
        let v = 1.0 + c * z;
        if v <= 0.0 {
            continue;
        }
        let v = v * v * v;
        let u: f64 = rng.random();
        if u < 1.0 - 0.0331 * z.powi(4) || u.ln() < 0.5 * z * z + d * (1.0 - v + v.ln()) {
            return d * v;
        }
    }
}
