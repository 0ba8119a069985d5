use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{CombUcb1, Exp3Path, Oracle};
use crate::environment::{Environment, Regime};
use crate::error::{Error, Result};
use crate::graph::Path;
use crate::policy::{ActionSpace, Aospr, Decision, Policy};
use crate::probing::{ColdStart, Delayed, Minibatch};

use super::config::{Experiment, PolicyKind, PolicyPlan};

/// Random stream of the delay wrapper.
const DELAY_STREAM: u64 = 3;
/// Random stream of the policy itself.
const POLICY_STREAM: u64 = 2;

/// Seed of repetition `r`.
pub fn repetition_seed(base: u64, r: usize) -> u64 {
    base ^ r as u64
}

/// `4k·√(t·(n/m)·ln n)`.
pub fn regret_bound(k: usize, n: usize, m: f64, t: u64) -> f64 {
    let nf = n as f64;
    4.0 * k as f64 * (t as f64 * (nf / m) * nf.ln()).sqrt()
}

/// Rounds at which the trace is recorded: every `stride`-th round plus the
/// last one.
pub fn checkpoints(horizon: u64, stride: u64) -> Vec<u64> {
    let mut out: Vec<u64> = (1..=horizon).filter(|t| t % stride == 0).collect();
    if out.last() != Some(&horizon) {
        out.push(horizon);
    }
    out
}

/// Cumulative regret, updated once per round.
#[derive(Debug, Clone)]
pub enum RegretMeter {
    /// `Σ_t (μ(I_t) − μ(i*))`.
    Pseudo { means: Vec<f64>, best: f64, total: f64 },
    /// `Σ_t ℓ_t(I_t) − min_i Σ_t ℓ_t(i)`.
    Hindsight { cumulative: Vec<f64>, incurred: f64 },
}

impl RegretMeter {
    pub fn pseudo(space: &ActionSpace, means: &[f64]) -> Self {
        let best = space.best_path(means).total(means);
        RegretMeter::Pseudo { means: means.to_vec(), best, total: 0.0 }
    }

    pub fn hindsight(n: usize) -> Self {
        RegretMeter::Hindsight { cumulative: vec![0.0; n], incurred: 0.0 }
    }

    pub fn record(&mut self, path: &Path, losses: &[f64]) {
        match self {
            RegretMeter::Pseudo { means, best, total } => *total += path.total(means) - *best,
            RegretMeter::Hindsight { cumulative, incurred } => {
                *incurred += path.total(losses);
                for (c, l) in cumulative.iter_mut().zip(losses) {
                    *c += l;
                }
            }
        }
    }

    pub fn value(&self, space: &ActionSpace) -> f64 {
        match self {
            RegretMeter::Pseudo { total, .. } => *total,
            RegretMeter::Hindsight { cumulative, incurred } => {
                incurred - space.best_path(cumulative).total(cumulative)
            }
        }
    }
}

/// `Σ_e N(e)·Δ(e)`.
pub fn edge_gap_regret(plays: &[u64], gaps: &[f64]) -> f64 {
    plays.iter().zip(gaps).map(|(&c, &g)| c as f64 * g).sum()
}

/// Result of one policy in one repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyRun {
    /// Cumulative regret at each checkpoint.
    pub regret: Vec<f64>,
    /// Stochastic-part pseudo-regret at each checkpoint (mixed regimes).
    pub stochastic_regret: Option<Vec<f64>>,
    /// Final `N_T(e)`.
    pub plays: Vec<u64>,
    /// `Σ_e N_T(e)·Δ(e)`, when the regime has known means.
    pub edge_gap_regret: Option<f64>,
    /// First round by which every edge had been observed.
    pub cover_time: Option<u64>,
    /// Wall-clock seconds per round, when timing is on.
    pub seconds_per_round: Option<f64>,
}

/// Every policy's result for one repetition, in config order.
pub type RepetitionRun = Vec<PolicyRun>;

/// Instantiates a configured policy with its wrappers.
pub fn build_policy(
    plan: &PolicyPlan,
    space: &std::sync::Arc<ActionSpace>,
    regime: &Regime,
    horizon: u64,
    path_cap: usize,
    seed: u64,
) -> Result<Box<dyn Policy>> {
    let mut policy: Box<dyn Policy> = match plan.kind {
        PolicyKind::Aospr => {
            Box::new(Aospr::new(space.clone(), plan.schedules.clone()).with_probing(plan.probe.clone())?)
        }
        PolicyKind::Exp3Path => Box::new(Exp3Path::from_space(space, path_cap)?),
        PolicyKind::Combucb1 => Box::new(CombUcb1::new(space.clone())),
        PolicyKind::Oracle => Box::new(oracle(space, regime, horizon, seed)?),
    };
    if let Some(rule) = &plan.delay {
        policy = Box::new(Delayed::new(
            policy,
            rule.clone(),
            space.edge_count(),
            crate::sim_rng(seed, DELAY_STREAM),
        )?);
    }
    if let Some(size) = plan.minibatch {
        policy = Box::new(Minibatch::new(policy, size)?);
    }
    if plan.cold_start {
        policy = Box::new(ColdStart::new(policy, space.clone(), plan.probe.paths)?);
    }
    Ok(policy)
}

/// The clairvoyant comparator: best expected path, or best fixed path in
/// hindsight over the losses a fresh environment with `seed` will produce.
pub fn oracle(space: &ActionSpace, regime: &Regime, horizon: u64, seed: u64) -> Result<Oracle> {
    if !regime.is_oblivious() {
        return Err(Error::config("policies", "the oracle needs an oblivious regime"));
    }
    if regime.uses_pseudo_regret() {
        let means = regime.stochastic_part().expect("pseudo-regret regimes have means").means();
        return Ok(Oracle::stochastic(space, means));
    }
    let mut env = Environment::new(regime.clone(), space.edge_count(), seed)?;
    let table = (1..=horizon)
        .map(|t| Ok(env.losses(t, &[])?.values().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Ok(Oracle::hindsight(space, &table))
}

/// Plays `policy` against `env` for `horizon` rounds.
pub fn play(
    policy: &mut dyn Policy,
    env: &mut Environment,
    space: &ActionSpace,
    horizon: u64,
    seed: u64,
    record_at: &[u64],
    timing: bool,
) -> Result<PolicyRun> {
    let n = space.edge_count();
    let regime = env.regime().clone();
    let mut meter = match regime.stochastic_part() {
        Some(s) if regime.uses_pseudo_regret() => RegretMeter::pseudo(space, s.means()),
        _ => RegretMeter::hindsight(n),
    };
    let mut stochastic_meter = match &regime {
        Regime::Mixed(m) => {
            let masked: Vec<f64> = (0..n)
                .map(|e| if m.is_attacked(e) { 0.0 } else { m.stochastic.means()[e] })
                .collect();
            Some(RegretMeter::pseudo(space, &masked))
        }
        _ => None,
    };
    let keep_history = !regime.is_oblivious();
    let mut history: Vec<Path> = Vec::new();
    let mut rng = crate::sim_rng(seed, POLICY_STREAM);
    let mut seen = vec![false; n];
    let mut unseen = n;
    let mut cover_time = None;
    let mut regret = Vec::with_capacity(record_at.len());
    let mut stochastic_regret = stochastic_meter.as_ref().map(|_| Vec::with_capacity(record_at.len()));
    let mut next = record_at.iter().peekable();
    let mut busy = std::time::Duration::ZERO;
    for t in 1..=horizon {
        let losses = env.losses(t, &history)?;
        let start = timing.then(Instant::now);
        let decision: Decision = policy.choose(&mut rng)?;
        policy.absorb(&decision, &decision.feedback(losses.values()))?;
        policy.end_round()?;
        if let Some(s) = start {
            busy += s.elapsed();
        }
        meter.record(&decision.path, losses.values());
        if let Some(m) = stochastic_meter.as_mut() {
            m.record(&decision.path, losses.values());
        }
        if cover_time.is_none() {
            for &e in &decision.observed {
                if !seen[e] {
                    seen[e] = true;
                    unseen -= 1;
                }
            }
            if unseen == 0 {
                cover_time = Some(t);
            }
        }
        if next.peek() == Some(&&t) {
            next.next();
            regret.push(meter.value(space));
            if let (Some(m), Some(out)) = (&stochastic_meter, stochastic_regret.as_mut()) {
                out.push(m.value(space));
            }
        }
        if keep_history {
            history.push(decision.path);
        }
    }
    let plays = policy.plays().map(<[u64]>::to_vec).unwrap_or_else(|| vec![0; n]);
    let edge_gap_regret = regime.stochastic_part().map(|s| edge_gap_regret(&plays, &s.gaps()));
    Ok(PolicyRun {
        regret,
        stochastic_regret,
        plays,
        edge_gap_regret,
        cover_time,
        seconds_per_round: timing.then(|| busy.as_secs_f64() / horizon as f64),
    })
}

impl Experiment {
    pub fn checkpoints(&self) -> Vec<u64> {
        checkpoints(self.config.horizon, self.config.csv_stride.unwrap_or(1))
    }

    /// Runs policy `index` in repetition `r`.
    pub fn run_policy(&self, index: usize, r: usize) -> Result<PolicyRun> {
        let seed = repetition_seed(self.config.seed, r);
        let plan = &self.policies[index];
        let mut policy =
            build_policy(plan, &self.space, &self.regime, self.config.horizon, self.config.path_cap, seed)?;
        let mut env = Environment::new(self.regime.clone(), self.space.edge_count(), seed)?;
        play(
            policy.as_mut(),
            &mut env,
            &self.space,
            self.config.horizon,
            seed,
            &self.checkpoints(),
            self.config.record_timing,
        )
    }

    pub fn run_repetition(&self, r: usize) -> Result<RepetitionRun> {
        (0..self.policies.len()).map(|i| self.run_policy(i, r)).collect()
    }

    /// All repetitions, in repetition order. Parallel across repetitions.
    pub fn simulate(&self) -> Result<Vec<RepetitionRun>> {
        let go = || {
            (0..self.config.repetitions)
                .into_par_iter()
                .map(|r| self.run_repetition(r))
                .collect::<Result<Vec<_>>>()
        };
        match self.config.threads {
            Some(k) => rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build()
                .map_err(|e| Error::InternalInvariant(format!("thread pool: {e}")))?
                .install(go),
            None => go(),
        }
    }

    pub fn simulate_serial(&self) -> Result<Vec<RepetitionRun>> {
        (0..self.config.repetitions).map(|r| self.run_repetition(r)).collect()
    }

    /// Bound series for `policy`, in adversarial regimes only.
    pub fn bound(&self, policy: usize) -> Option<Vec<f64>> {
        if self.regime.uses_pseudo_regret() {
            return None;
        }
        let plan = &self.policies[policy];
        let m = if plan.kind == PolicyKind::Aospr { plan.probe.paths as f64 } else { 1.0 };
        let (k, n) = (self.space.max_len(), self.space.edge_count());
        Some(self.checkpoints().iter().map(|&t| regret_bound(k, n, m, t)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators;

    #[test]
    fn bound_values() {
        assert!((regret_bound(2, 6, 1.0, 10_000) - 2623.0).abs() < 0.5);
        assert_eq!(regret_bound(2, 6, 1.0, 0), 0.0);
        let r = regret_bound(2, 6, 4.0, 500) / regret_bound(2, 6, 1.0, 500);
        assert!((r - 0.5).abs() < 1e-15);
    }

    #[test]
    fn edge_gap_arithmetic() {
        let plays = [0, 0, 100, 100];
        assert!((edge_gap_regret(&plays, &[0.0, 0.0, 0.1, 0.1]) - 20.0).abs() < 1e-12);
    }

    #[test]
    fn checkpoint_lists() {
        assert_eq!(checkpoints(1, 1), vec![1]);
        assert_eq!(checkpoints(10, 4), vec![4, 8, 10]);
    }

    #[test]
    fn hindsight_best_player_has_nonnegative_final_regret() {
        let space = ActionSpace::dag(generators::diamond()).to_enumerated(10).unwrap();
        let mut meter = RegretMeter::hindsight(4);
        let p = Path::new(vec![0, 1]);
        meter.record(&p, &[1.0, 0.0, 0.0, 0.0]);
        meter.record(&p, &[0.0, 0.0, 1.0, 1.0]);
        assert_eq!(meter.value(&space), 0.0);
        meter.record(&Path::new(vec![2, 3]), &[0.0, 0.0, 1.0, 0.0]);
        assert_eq!(meter.value(&space), 1.0);
    }
}
