// SPDX-License-Identifier: Apache-2.0

//! Named random streams derived from one master seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Seed for the consumer `name`, independent of every other name.
pub fn derive_seed(master: u64, name: &str) -> u64 {
    let mut h = Sha256::new();
    h.update(master.to_le_bytes());
    h.update(name.as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

pub fn stream(master: u64, name: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, name))
}

/// One stream per consumer of randomness in the exploration loop.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Streams {
    pub sampling: ChaCha8Rng,
    pub bandit: ChaCha8Rng,
    pub engines: ChaCha8Rng,
    pub gate: ChaCha8Rng,
}

impl Streams {
    pub fn new(master: u64) -> Self {
        Streams {
            sampling: stream(master, "sampling"),
            bandit: stream(master, "bandit"),
            engines: stream(master, "engines"),
            gate: stream(master, "gate"),
        }
    }
}
