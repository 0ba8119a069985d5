//! Adaptive online shortest-path routing as a combinatorial semi-bandit.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: DAG topologies, path enumeration, covering strategies.
//! - [`environment`]: per-round link-loss generators (stochastic, oblivious,
//!   memory-bounded adaptive, mixed, contaminated).
//! - [`sampler`]: dynamic-programming samplers that avoid enumerating paths.
//! - [`policy`]: the AOSPR-EXP3++ learner and its parameter schedules.
//! - [`probing`]: multi-path probing, mini-batching, delayed feedback,
//!   cold start and multi-source probing schedules.
//! - [`baselines`]: path-level EXP3, CombUCB1 and the clairvoyant oracle.
//! - [`harness`]: experiment configuration, simulation, regret accounting
//!   and result files.
//!
//! Edge ids are 0-based inside the library. Files and CLI output use the
//! same ids.

pub mod baselines;
pub mod environment;
pub mod error;
pub mod graph;
pub mod harness;
pub mod policy;
pub mod probing;
pub mod sampler;

mod numeric;

pub use error::{Error, Result};

/// Random stream used by every simulated component.
pub type SimRng = rand_chacha::ChaCha8Rng;

/// Builds the random stream `stream` of the generator seeded with `seed`.
///
/// Environments and policies of one repetition draw from distinct streams of
/// the same seed, so changing a policy never perturbs the loss sequence.
pub fn sim_rng(seed: u64, stream: u64) -> SimRng {
    use rand::SeedableRng;
    let mut rng = SimRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
