use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Path, PathSet};
use crate::probing::{probed_path_prob, ProbeConfig};
use crate::sampler::CoverMixture;
use crate::SimRng;

use super::{
    importance_weight, ActionSpace, Decision, Observation, Policy, PolicyState, Schedules,
    WeightTables,
};

/// The distribution of one round, materialised from the state.
#[derive(Debug, Clone)]
pub struct Snapshot {
    /// Round being played (1-based).
    pub round: u64,
    pub eta: f64,
    pub epsilon: Vec<f64>,
    pub log_weights: Vec<f64>,
    /// `ρ̃(e)`.
    pub marginals: Vec<f64>,
    tables: WeightTables,
}

impl Snapshot {
    pub fn new(space: &ActionSpace, state: &PolicyState, schedules: &Schedules) -> Result<Self> {
        let n = space.edge_count();
        let round = state.round() + 1;
        let eta = schedules.eta(round, n);
        let epsilon = schedules.epsilons(round, n, state.gaps());
        let total: f64 = epsilon.iter().sum();
        if total > 0.5 + 1e-12 {
            return Err(Error::InternalInvariant(format!("exploration mass {total} exceeds 1/2")));
        }
        let log_weights: Vec<f64> = state.cumulative().iter().map(|l| -eta * l).collect();
        let tables = space.weights(&log_weights)?;
        let mixture = CoverMixture::new(space.cover(), &epsilon);
        let marginals = mixture.marginals(&tables.weight_marginals(space));
        Ok(Snapshot { round, eta, epsilon, log_weights, marginals, tables })
    }

    pub fn tables(&self) -> &WeightTables {
        &self.tables
    }

    pub fn mixture<'a>(&self, space: &'a ActionSpace) -> CoverMixture<'a> {
        CoverMixture::new(space.cover(), &self.epsilon)
    }

    /// `ρ(i) = (1 − Σε)·w(i)/W + mass(i)`.
    pub fn path_prob(&self, space: &ActionSpace, path: &Path) -> f64 {
        let mix = self.mixture(space);
        (1.0 - mix.total()) * self.tables.log_prob(space, path).exp() + mix.path_mass(path)
    }

    /// `ρ` over an explicit path list.
    pub fn distribution(&self, space: &ActionSpace, paths: &PathSet) -> Vec<f64> {
        paths.paths().iter().map(|p| self.path_prob(space, p)).collect()
    }

    /// Draws `I_t ~ ρ`; the flag reports a draw from the covering mixture.
    pub fn sample(&self, space: &ActionSpace, rng: &mut SimRng) -> Result<(Path, bool)> {
        match self.mixture(space).flip(rng) {
            Some(c) => Ok((c.clone(), true)),
            None => Ok((self.tables.sample(space, rng)?, false)),
        }
    }
}

/// `ρ_t` over every strategy (enumerates the space, capped at `cap`).
pub fn path_distribution(
    space: &ActionSpace,
    state: &PolicyState,
    schedules: &Schedules,
    cap: usize,
) -> Result<(PathSet, Vec<f64>)> {
    let paths = space.enumerate(cap)?;
    let snap = Snapshot::new(space, state, schedules)?;
    let dist = snap.distribution(space, &paths);
    Ok((paths, dist))
}

/// `ρ̃_t(e)` for every edge.
pub fn link_marginals(space: &ActionSpace, state: &PolicyState, schedules: &Schedules) -> Result<Vec<f64>> {
    Ok(Snapshot::new(space, state, schedules)?.marginals)
}

/// AOSPR-EXP3++ with optional multi-path probing.
#[derive(Debug, Clone)]
pub struct Aospr {
    space: Arc<ActionSpace>,
    schedules: Schedules,
    probe: ProbeConfig,
    state: PolicyState,
}

impl Aospr {
    pub fn new(space: Arc<ActionSpace>, schedules: Schedules) -> Self {
        let state = PolicyState::new(space.edge_count());
        Aospr { space, schedules, probe: ProbeConfig::default(), state }
    }

    /// Probes `probe.paths` paths per round; the schedules switch to the
    /// accelerated rate.
    pub fn with_probing(mut self, probe: ProbeConfig) -> Result<Self> {
        probe.validate(self.space.path_count())?;
        self.schedules = self.schedules.with_rate(probe.paths as f64);
        self.probe = probe;
        Ok(self)
    }

    pub fn state(&self) -> &PolicyState {
        &self.state
    }

    pub fn schedules(&self) -> &Schedules {
        &self.schedules
    }

    pub fn space(&self) -> &ActionSpace {
        &self.space
    }

    pub fn probe(&self) -> &ProbeConfig {
        &self.probe
    }

    pub fn snapshot(&self) -> Result<Snapshot> {
        Snapshot::new(&self.space, &self.state, &self.schedules)
    }
}

impl Policy for Aospr {
    fn choose(&mut self, rng: &mut SimRng) -> Result<Decision> {
        let snap = self.snapshot()?;
        let (path, exploratory) = snap.sample(&self.space, rng)?;
        let rho = snap.path_prob(&self.space, &path);
        if self.probe.paths <= 1 {
            let probs = path.edges().iter().map(|&e| snap.marginals[e]).collect();
            let mut d = Decision::single(path, probs, rho);
            d.exploratory = exploratory;
            return Ok(d);
        }
        let probed = self.space.sample_others(&path, self.probe.paths - 1, rng)?;
        let mut observed: Vec<usize> =
            path.edges().iter().chain(probed.iter().flat_map(|p| p.edges())).copied().collect();
        observed.sort_unstable();
        observed.dedup();
        let n = self.space.edge_count();
        let probs = observed
            .iter()
            .map(|&e| self.probe.link_prob(snap.marginals[e], observed.len(), n))
            .collect::<Result<Vec<_>>>()?;
        let path_prob = probed_path_prob(rho, self.probe.paths, self.space.path_count() as f64);
        Ok(Decision { path, probed, observed, probs, path_prob, exploratory })
    }

    fn absorb(&mut self, decision: &Decision, feedback: &[Observation]) -> Result<()> {
        for obs in feedback {
            let prob = decision.prob_of(obs.edge).ok_or_else(|| {
                Error::InternalInvariant(format!("edge {} was not observed", obs.edge))
            })?;
            let est = importance_weight(obs.edge, obs.loss, prob)?;
            self.state.add_estimate(obs.edge, est);
            if decision.path.contains(obs.edge) {
                self.state.add_play(obs.edge);
            }
        }
        Ok(())
    }

    fn end_round(&mut self) -> Result<()> {
        self.state.advance();
        Ok(())
    }

    fn plays(&self) -> Option<&[u64]> {
        Some(self.state.plays())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators;
    use crate::policy::{EtaRule, Exploration};

    fn disjoint() -> Arc<ActionSpace> {
        Arc::new(ActionSpace::dag(generators::parallel_chains(3, 2).unwrap()).to_enumerated(100).unwrap())
    }

    #[test]
    fn uniform_start_on_disjoint_paths() {
        let space = disjoint();
        let pol = Aospr::new(space.clone(), Schedules::default());
        let snap = pol.snapshot().unwrap();
        assert!(snap.epsilon.iter().all(|e| (e - 1.0 / 12.0).abs() < 1e-15));
        for p in space.path_set().unwrap().paths() {
            assert!((snap.path_prob(&space, p) - 1.0 / 3.0).abs() < 1e-12);
        }
        for m in &snap.marginals {
            assert!((m - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_exploration_is_plain_exponential_weights() {
        let space = disjoint();
        let sched = Schedules::new(Exploration::Zero, EtaRule::Fixed(0.3));
        let mut state = PolicyState::new(6);
        state.update(&[1.0, 0.5, 0.0, 2.0, 0.25, 0.25], &Path::new(vec![0, 1]));
        let (paths, dist) = path_distribution(&space, &state, &sched, 100).unwrap();
        let eta = sched.eta(2, 6);
        let raw: Vec<f64> =
            paths.paths().iter().map(|p| (-eta * p.total(state.cumulative())).exp()).collect();
        let z: f64 = raw.iter().sum();
        for (d, r) in dist.iter().zip(&raw) {
            assert!((d - r / z).abs() < 1e-12);
        }
    }

    #[test]
    fn infinite_loss_leaves_only_the_mixture() {
        let space = disjoint();
        let mut state = PolicyState::new(6);
        state.update(&[1e300, 1e300, 0.0, 0.0, 0.0, 0.0], &Path::new(vec![0, 1]));
        let sched = Schedules::new(Exploration::KnownGap { c: 18.0, gaps: vec![0.0; 6] }, EtaRule::Beta);
        let snap = Snapshot::new(&space, &state, &sched).unwrap();
        let p0 = space.path_set().unwrap().get(0).clone();
        let mass = snap.mixture(&space).path_mass(&p0);
        assert!((snap.path_prob(&space, &p0) - mass).abs() < 1e-15);
        assert!(mass > 0.0);
    }

    #[test]
    fn seeded_replay_is_identical() {
        let run = || {
            let mut pol = Aospr::new(disjoint(), Schedules::default());
            let mut rng = crate::sim_rng(42, 2);
            let mut out = Vec::new();
            for t in 0..100 {
                let d = pol.choose(&mut rng).unwrap();
                let losses: Vec<f64> = (0..6).map(|e| ((e + t) % 3) as f64 / 2.0).collect();
                pol.absorb(&d, &d.feedback(&losses)).unwrap();
                pol.end_round().unwrap();
                out.push(d.path);
            }
            out
        };
        assert_eq!(run(), run());
    }
}
