//! Reference policies: path-level EXP3, CombUCB1 and the clairvoyant oracle.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{Path, PathSet};
use crate::numeric::log_sum_exp;
use crate::policy::{importance_weight, ActionSpace, Decision, Observation, Policy};
use crate::SimRng;

/// `γ_t = min{1, √(N ln N / ((e − 1)·t))}`.
pub fn exp3_gamma(paths: usize, t: u64) -> f64 {
    let nf = paths as f64;
    (nf * nf.ln() / ((std::f64::consts::E - 1.0) * t as f64)).sqrt().min(1.0)
}

/// EXP3 over whole paths: no sharing of information between paths that
/// have edges in common. Path losses are scaled by `1/k` into `[0, 1]`.
#[derive(Debug, Clone)]
pub struct Exp3Path {
    paths: Arc<PathSet>,
    scale: f64,
    cumulative: Vec<f64>,
    round: u64,
    plays: Vec<u64>,
}

impl Exp3Path {
    pub fn new(paths: Arc<PathSet>) -> Self {
        let scale = paths.max_len().max(1) as f64;
        let n = paths.edge_count();
        Exp3Path { cumulative: vec![0.0; paths.len()], paths, scale, round: 0, plays: vec![0; n] }
    }

    /// Builds from any action space, enumerating at most `cap` paths.
    pub fn from_space(space: &ActionSpace, cap: usize) -> Result<Self> {
        Ok(Self::new(Arc::new(space.enumerate(cap)?)))
    }

    /// Distribution of the next round.
    pub fn distribution(&self) -> Vec<f64> {
        let n = self.paths.len();
        let gamma = exp3_gamma(n, self.round + 1);
        let eta = gamma / n as f64;
        let lw: Vec<f64> = self.cumulative.iter().map(|l| -eta * l).collect();
        let norm = log_sum_exp(lw.iter().copied());
        lw.iter().map(|v| (1.0 - gamma) * (v - norm).exp() + gamma / n as f64).collect()
    }
}

impl Policy for Exp3Path {
    fn choose(&mut self, rng: &mut SimRng) -> Result<Decision> {
        let dist = self.distribution();
        let mut u: f64 = rng.gen();
        let mut pick = dist.len() - 1;
        for (i, p) in dist.iter().enumerate() {
            if u < *p {
                pick = i;
                break;
            }
            u -= p;
        }
        let path = self.paths.get(pick).clone();
        let probs = vec![dist[pick]; path.len()];
        Ok(Decision::single(path, probs, dist[pick]))
    }

    fn absorb(&mut self, decision: &Decision, feedback: &[Observation]) -> Result<()> {
        let i = self
            .paths
            .position(&decision.path)
            .ok_or_else(|| Error::InternalInvariant("path outside the EXP3 path set".into()))?;
        let mut loss = 0.0;
        for obs in feedback.iter().filter(|o| decision.path.contains(o.edge)) {
            loss += obs.loss;
            self.plays[obs.edge] += 1;
        }
        let est = importance_weight(decision.path.edges()[0], loss / self.scale, decision.path_prob)?;
        self.cumulative[i] += est;
        Ok(())
    }

    fn end_round(&mut self) -> Result<()> {
        self.round += 1;
        Ok(())
    }

    fn plays(&self) -> Option<&[u64]> {
        Some(&self.plays)
    }
}

/// Index given to edges that were never observed: low enough that the
/// minimising path always takes as many of them as it can.
const UNOBSERVED_INDEX: f64 = -1.0e6;

/// CombUCB1 for losses: plays the path minimising
/// `Σ_{e∈i} (μ̂(e) − √(1.5·ln t / N(e)))`.
#[derive(Debug, Clone)]
pub struct CombUcb1 {
    space: Arc<ActionSpace>,
    sums: Vec<f64>,
    counts: Vec<u64>,
    round: u64,
}

impl CombUcb1 {
    pub fn new(space: Arc<ActionSpace>) -> Self {
        let n = space.edge_count();
        CombUcb1 { space, sums: vec![0.0; n], counts: vec![0; n], round: 0 }
    }

    /// Per-edge index used in round `t`.
    pub fn indices(&self, t: u64) -> Vec<f64> {
        let lt = (t as f64).ln();
        self.sums
            .iter()
            .zip(&self.counts)
            .map(|(&s, &c)| {
                if c == 0 {
                    UNOBSERVED_INDEX
                } else {
                    s / c as f64 - (1.5 * lt / c as f64).sqrt()
                }
            })
            .collect()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

impl Policy for CombUcb1 {
    fn choose(&mut self, _rng: &mut SimRng) -> Result<Decision> {
        let path = self.space.best_path(&self.indices(self.round + 1));
        let probs = vec![1.0; path.len()];
        Ok(Decision::single(path, probs, 1.0))
    }

    fn absorb(&mut self, decision: &Decision, feedback: &[Observation]) -> Result<()> {
        for obs in feedback.iter().filter(|o| decision.path.contains(o.edge)) {
            self.sums[obs.edge] += obs.loss;
            self.counts[obs.edge] += 1;
        }
        Ok(())
    }

    fn end_round(&mut self) -> Result<()> {
        self.round += 1;
        Ok(())
    }

    fn plays(&self) -> Option<&[u64]> {
        Some(&self.counts)
    }
}

/// Always plays one fixed path chosen with knowledge of the environment.
#[derive(Debug, Clone)]
pub struct Oracle {
    path: Path,
}

impl Oracle {
    pub fn new(path: Path) -> Self {
        Oracle { path }
    }

    /// The path of minimal expected loss.
    pub fn stochastic(space: &ActionSpace, means: &[f64]) -> Self {
        Oracle { path: space.best_path(means) }
    }

    /// The best fixed path in hindsight for a realised loss table (rows are
    /// rounds).
    pub fn hindsight(space: &ActionSpace, table: &[Vec<f64>]) -> Self {
        let mut totals = vec![0.0; space.edge_count()];
        for row in table {
            for (t, v) in totals.iter_mut().zip(row) {
                *t += v;
            }
        }
        Oracle { path: space.best_path(&totals) }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}

impl Policy for Oracle {
    fn choose(&mut self, _rng: &mut SimRng) -> Result<Decision> {
        let probs = vec![1.0; self.path.len()];
        Ok(Decision::single(self.path.clone(), probs, 1.0))
    }

    fn absorb(&mut self, _decision: &Decision, _feedback: &[Observation]) -> Result<()> {
        Ok(())
    }

    fn end_round(&mut self) -> Result<()> {
        Ok(())
    }
}
