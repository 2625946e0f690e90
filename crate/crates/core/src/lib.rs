//! Honey-drone defense against DoS attacks on a mission drone fleet.
//!
//! The crate simulates a drone swarm scanning a grid while a ground attacker
//! jams drones by signal band. Defenders pick honey-drone transmit levels with
//! hypergame reasoning, deep reinforcement learning, or both.

pub mod defenses;
pub mod error;
pub mod fleet;
pub mod harness;
pub mod hypergame;
pub mod learning;
pub mod signal;

pub use error::{Error, Result};
pub use signal::{Dbm, Position, SignalRangeTable, StrategyIndex, NUM_STRATEGIES};

/// Random stream used everywhere in the simulation.
pub type SimRng = rand_chacha::ChaCha8Rng;

/// Independent stream for `(seed, stream, index)`.
pub fn derive_rng(seed: u64, stream: u64, index: u64) -> SimRng {
    use rand::SeedableRng;
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&stream.to_le_bytes());
    key[16..24].copy_from_slice(&index.to_le_bytes());
    SimRng::from_seed(key)
}
