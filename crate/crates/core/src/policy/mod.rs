//! The AOSPR-EXP3++ learner.
//!
//! Each round the learner mixes exponential weights over paths,
//! `w(i) = exp(−η_t·Σ_{e∈i} L̃(e))`, with exploration mass `ε_t(e)` routed
//! through a covering set, samples a path, and updates `L̃` with
//! importance-weighted semi-bandit feedback.

mod aospr;
mod schedules;
mod space;
mod state;

pub use aospr::{link_marginals, path_distribution, Aospr, Snapshot};
pub use schedules::{beta, epsilon, xi, EtaRule, Exploration, Schedules, DEFAULT_C};
pub use space::{ActionSpace, WeightTables};
pub use state::{estimate_gaps, estimate_losses, PolicyState};
pub(crate) use state::importance_weight;

use crate::error::Result;
use crate::graph::Path;
use crate::SimRng;

/// One observed edge loss.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub edge: usize,
    pub loss: f64,
}

/// What a policy does in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct Decision {
    /// The path that carries traffic (and incurs loss).
    pub path: Path,
    /// Extra probed paths, excluding `path`.
    pub probed: Vec<Path>,
    /// Edges whose losses will be revealed, sorted.
    pub observed: Vec<usize>,
    /// Importance-weighting probability of each entry of `observed`.
    pub probs: Vec<f64>,
    /// Probability with which `path` was observed (`NaN` when not tracked).
    pub path_prob: f64,
    /// True when `path` came from the exploration mixture.
    pub exploratory: bool,
}

impl Decision {
    /// A decision that observes exactly the edges of `path`.
    pub fn single(path: Path, probs: Vec<f64>, path_prob: f64) -> Self {
        let mut pairs: Vec<(usize, f64)> = path.edges().iter().copied().zip(probs).collect();
        pairs.sort_by_key(|p| p.0);
        let (observed, probs) = pairs.into_iter().unzip();
        Decision { path, probed: Vec::new(), observed, probs, path_prob, exploratory: false }
    }

    pub fn prob_of(&self, edge: usize) -> Option<f64> {
        self.observed.binary_search(&edge).ok().map(|i| self.probs[i])
    }

    /// Pairs each observed edge with its loss.
    pub fn feedback(&self, losses: &[f64]) -> Vec<Observation> {
        self.observed.iter().map(|&edge| Observation { edge, loss: losses[edge] }).collect()
    }
}

/// A sequential routing policy.
///
/// The driver calls [`Policy::choose`] once per round, then hands back any
/// observations with [`Policy::absorb`] (possibly later, possibly split
/// across calls), and closes the round with [`Policy::end_round`].
pub trait Policy: Send {
    fn choose(&mut self, rng: &mut SimRng) -> Result<Decision>;

    fn absorb(&mut self, decision: &Decision, feedback: &[Observation]) -> Result<()>;

    fn end_round(&mut self) -> Result<()>;

    /// Per-edge play counts, if the policy keeps them.
    fn plays(&self) -> Option<&[u64]> {
        None
    }
}

impl<P: Policy + ?Sized> Policy for Box<P> {
    fn choose(&mut self, rng: &mut SimRng) -> Result<Decision> {
        (**self).choose(rng)
    }

    fn absorb(&mut self, decision: &Decision, feedback: &[Observation]) -> Result<()> {
        (**self).absorb(decision, feedback)
    }

    fn end_round(&mut self) -> Result<()> {
        (**self).end_round()
    }

    fn plays(&self) -> Option<&[u64]> {
        (**self).plays()
    }
}
