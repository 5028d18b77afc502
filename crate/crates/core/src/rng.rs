//! Seeded per-replica random streams.
//!
//! Replica `r` of a run with base seed `s` draws from a ChaCha8 generator
//! seeded (via `SeedableRng::seed_from_u64`) with
//!
//! ```text
//! mix(s, r) = splitmix64(s ^ splitmix64(r + 0x9E3779B97F4A7C15))
//! ```
//!
//! where `splitmix64` is the standard finalizer
//! `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB; z ^ (z >> 31)`
//! applied after adding the golden-ratio increment. Streams depend only on
//! `(s, r)`, never on which thread runs the replica.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type ReplicaRng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct RngSeed(pub u64);

impl From<u64> for RngSeed {
    fn from(s: u64) -> Self {
        RngSeed(s)
    }
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn mix(seed: u64, replica: u64) -> u64 {
    splitmix64(seed ^ splitmix64(replica.wrapping_add(GOLDEN_GAMMA)))
}

impl RngSeed {
    pub fn replica_seed(self, replica: u64) -> u64 {
        mix(self.0, replica)
    }

    pub fn replica_rng(self, replica: u64) -> ReplicaRng {
        ChaCha8Rng::seed_from_u64(self.replica_seed(replica))
    }

    /// Stream for a single-run operation that is not replicated.
    pub fn rng(self) -> ReplicaRng {
        self.replica_rng(0)
    }
}
