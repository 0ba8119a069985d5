//! Link-loss generators for the stochastic, adversarial, mixed and
//! contaminated regimes.
//!
//! A generator owns two random streams: one for the i.i.d. component and one
//! for the adversary. Mixed regimes therefore reproduce the pure stochastic
//! (or pure adversarial) sequence exactly when the attacked set is empty (or
//! everything).

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path as FsPath;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Path;
use crate::SimRng;

/// Per-edge losses of one round, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossVector(Vec<f64>);

impl LossVector {
    /// Validates every entry against `[0, 1]`.
    pub fn new(values: Vec<f64>, round: u64) -> Result<Self> {
        if let Some(edge) = values.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::OutOfRange { round, edge, value: values[edge] });
        }
        Ok(LossVector(values))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn get(&self, edge: usize) -> f64 {
        self.0[edge]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn path_loss(&self, path: &Path) -> f64 {
        path.total(&self.0)
    }
}

/// Shape of the i.i.d. per-edge loss distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum LossDistribution {
    /// Loss 1 with probability `mu`, else 0.
    #[default]
    Bernoulli,
    /// Uniform on `[mu - h, mu + h]`, with `h` shrunk so the support stays
    /// inside `[0, 1]`.
    Uniform { half_width: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct StochasticSpec {
    means: Vec<f64>,
    distribution: LossDistribution,
}

impl StochasticSpec {
    pub fn new(means: Vec<f64>, distribution: LossDistribution) -> Result<Self> {
        if means.is_empty() {
            return Err(Error::config("means", "no edges"));
        }
        if let Some(e) = means.iter().position(|m| !(0.0..=1.0).contains(m)) {
            return Err(Error::config(format!("means[{e}]"), "mean loss must lie in [0, 1]"));
        }
        if let LossDistribution::Uniform { half_width } = distribution {
            if !(0.0..=0.5).contains(&half_width) {
                return Err(Error::config("distribution.half_width", "must lie in [0, 0.5]"));
            }
        }
        Ok(StochasticSpec { means, distribution })
    }

    pub fn bernoulli(means: Vec<f64>) -> Result<Self> {
        Self::new(means, LossDistribution::Bernoulli)
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn distribution(&self) -> LossDistribution {
        self.distribution
    }

    /// Lowest-id edge of minimal mean.
    pub fn best_edge(&self) -> usize {
        self.means.iter().enumerate().fold(0, |b, (e, &m)| if m < self.means[b] { e } else { b })
    }

    /// `Δ(e) = μ(e) − μ(e*)`.
    pub fn gaps(&self) -> Vec<f64> {
        let best = self.means[self.best_edge()];
        self.means.iter().map(|m| m - best).collect()
    }

    /// Smallest strictly positive gap, if any edge is suboptimal.
    pub fn min_gap(&self) -> Option<f64> {
        self.gaps().into_iter().filter(|&g| g > 0.0).fold(None, |acc, g| {
            Some(acc.map_or(g, |a: f64| a.min(g)))
        })
    }

    fn draw_one(&self, e: usize, rng: &mut SimRng) -> f64 {
        let mu = self.means[e];
        match self.distribution {
            LossDistribution::Bernoulli => {
                if rng.gen::<f64>() < mu {
                    1.0
                } else {
                    0.0
                }
            }
            LossDistribution::Uniform { half_width } => {
                let h = half_width.min(mu).min(1.0 - mu);
                let u: f64 = rng.gen();
                (mu - h + 2.0 * h * u).clamp(0.0, 1.0)
            }
        }
    }
}

/// One independent draw per edge.
pub fn gen_stochastic(spec: &StochasticSpec, round: u64, rng: &mut SimRng) -> Result<LossVector> {
    let values = (0..spec.means.len()).map(|e| spec.draw_one(e, rng)).collect();
    LossVector::new(values, round)
}

/// Deterministic or pre-committed loss rule; never sees the learner.
#[derive(Clone)]
pub enum ObliviousSchedule {
    /// Same loss on every edge and round.
    Constant(f64),
    /// `ℓ_t(e) = t mod 2`.
    Alternating,
    /// Row `t - 1` holds round `t` (rows are rounds, columns edges).
    Table(Arc<Vec<Vec<f64>>>),
    /// `0.5 + amplitude·sin(2π(t/period + e/n))`, rounded to `levels`
    /// equally spaced values in `[0, 1]`.
    Sinusoid { period: f64, amplitude: f64, levels: usize },
    /// Piecewise-stationary Bernoulli losses: segment `j` of `segment` rounds
    /// uses `means[j mod means.len()]`. Draws come from the adversary's own
    /// stream, fixed before the run.
    Switching { segment: u64, means: Arc<Vec<Vec<f64>>> },
    /// Arbitrary `(round, edge) -> loss` rule.
    Custom(Arc<dyn Fn(u64, usize) -> f64 + Send + Sync>),
}

impl fmt::Debug for ObliviousSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(v) => write!(f, "Constant({v})"),
            Self::Alternating => write!(f, "Alternating"),
            Self::Table(rows) => write!(f, "Table({} rows)", rows.len()),
            Self::Sinusoid { period, amplitude, levels } => {
                write!(f, "Sinusoid {{ period: {period}, amplitude: {amplitude}, levels: {levels} }}")
            }
            Self::Switching { segment, means } => {
                write!(f, "Switching {{ segment: {segment}, phases: {} }}", means.len())
            }
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl ObliviousSchedule {
    /// Loads a table from CSV: one row per round, one column per edge. A
    /// non-numeric first row is treated as a header.
    pub fn table_from_csv(path: &FsPath) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?;
        let mut rows = Vec::new();
        for (i, record) in reader.records().enumerate() {
            let record =
                record.map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?;
            let parsed: std::result::Result<Vec<f64>, _> =
                record.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(row) => rows.push(row),
                Err(_) if i == 0 => continue,
                Err(e) => {
                    return Err(Error::Parse {
                        path: path.to_path_buf(),
                        message: format!("row {}: {e}", i + 1),
                    })
                }
            }
        }
        Ok(ObliviousSchedule::Table(Arc::new(rows)))
    }

    fn value(&self, round: u64, edge: usize, n: usize, draw: &mut impl FnMut() -> f64) -> Result<f64> {
        Ok(match self {
            Self::Constant(v) => *v,
            Self::Alternating => (round % 2) as f64,
            Self::Table(rows) => {
                let row = rows
                    .get((round as usize).wrapping_sub(1))
                    .ok_or(Error::ScheduleExhausted { round })?;
                *row.get(edge).ok_or(Error::ScheduleExhausted { round })?
            }
            Self::Sinusoid { period, amplitude, levels } => {
                let phase = round as f64 / period + edge as f64 / n as f64;
                let raw = 0.5 + amplitude * (2.0 * std::f64::consts::PI * phase).sin();
                let steps = levels.saturating_sub(1).max(1) as f64;
                (raw.clamp(0.0, 1.0) * steps).round() / steps
            }
            Self::Switching { segment, means } => {
                let phase = ((round - 1) / segment.max(&1)) as usize % means.len();
                let mu = means[phase][edge];
                if draw() < mu {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Custom(rule) => rule(round, edge),
        })
    }
}

/// Evaluates the schedule at round `t`; values outside `[0, 1]` are errors,
/// not clamped. `rng` feeds only the randomised schedules.
pub fn gen_oblivious(
    schedule: &ObliviousSchedule,
    n: usize,
    round: u64,
    rng: &mut SimRng,
) -> Result<LossVector> {
    let mut draw = || rng.gen::<f64>();
    let values =
        (0..n).map(|e| schedule.value(round, e, n, &mut draw)).collect::<Result<Vec<_>>>()?;
    LossVector::new(values, round)
}

/// Attack rule of a memory-bounded adversary: maps the most recent chosen
/// paths (oldest first) to per-edge losses.
#[derive(Clone)]
pub enum AttackRule {
    /// `hit` on every edge of the most frequent path in the window (the most
    /// recent one among ties), `baseline` elsewhere.
    Retaliation { hit: f64, baseline: f64 },
    Custom(Arc<dyn Fn(&[Path], usize) -> Vec<f64> + Send + Sync>),
}

impl fmt::Debug for AttackRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Retaliation { hit, baseline } => {
                write!(f, "Retaliation {{ hit: {hit}, baseline: {baseline} }}")
            }
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct AdaptiveAttacker {
    pub memory: usize,
    pub rule: AttackRule,
}

impl AdaptiveAttacker {
    pub fn retaliation(memory: usize) -> Self {
        AdaptiveAttacker { memory, rule: AttackRule::Retaliation { hit: 1.0, baseline: 0.1 } }
    }

    /// The part of `history` the attacker may look at: its last `θ + 1`
    /// entries.
    pub fn window<'a>(&self, history: &'a [Path]) -> &'a [Path] {
        let keep = self.memory + 1;
        &history[history.len().saturating_sub(keep)..]
    }
}

fn modal_path(window: &[Path]) -> Option<&Path> {
    let mut counts: BTreeMap<&Path, (usize, usize)> = BTreeMap::new();
    for (i, p) in window.iter().enumerate() {
        let entry = counts.entry(p).or_insert((0, 0));
        entry.0 += 1;
        entry.1 = i;
    }
    counts.into_iter().max_by_key(|(_, (count, last))| (*count, *last)).map(|(p, _)| p)
}

/// Losses chosen by a `θ`-memory-bounded adversary from the learner's recent
/// choices. Only the last `θ + 1` entries of `history` are consulted.
pub fn gen_adaptive(
    attacker: &AdaptiveAttacker,
    n: usize,
    history: &[Path],
    round: u64,
) -> Result<LossVector> {
    let window = attacker.window(history);
    let values = match &attacker.rule {
        AttackRule::Retaliation { hit, baseline } => {
            let mut v = vec![*baseline; n];
            if let Some(target) = modal_path(window) {
                for &e in target.edges() {
                    v[e] = *hit;
                }
            }
            v
        }
        AttackRule::Custom(rule) => rule(window, n),
    };
    if values.len() != n {
        return Err(Error::InternalInvariant(format!(
            "attack rule returned {} losses for {n} edges",
            values.len()
        )));
    }
    LossVector::new(values, round)
}

#[derive(Debug, Clone)]
pub enum Adversary {
    Oblivious(ObliviousSchedule),
    Adaptive(AdaptiveAttacker),
}

/// Stochastic links except for a fixed attacked set `E_a`.
#[derive(Debug, Clone)]
pub struct MixedSpec {
    pub stochastic: StochasticSpec,
    attacked: Vec<bool>,
    pub adversary: Adversary,
}

impl MixedSpec {
    pub fn new(stochastic: StochasticSpec, attacked: &[usize], adversary: Adversary) -> Result<Self> {
        let n = stochastic.means().len();
        let mut mask = vec![false; n];
        for &e in attacked {
            if e >= n {
                return Err(Error::config("attacked", format!("edge {e} out of range")));
            }
            mask[e] = true;
        }
        Ok(MixedSpec { stochastic, attacked: mask, adversary })
    }

    pub fn is_attacked(&self, edge: usize) -> bool {
        self.attacked[edge]
    }

    pub fn attacked_edges(&self) -> Vec<usize> {
        (0..self.attacked.len()).filter(|&e| self.attacked[e]).collect()
    }
}

fn gen_adversary(
    adversary: &Adversary,
    n: usize,
    history: &[Path],
    round: u64,
    rng: &mut SimRng,
) -> Result<LossVector> {
    match adversary {
        Adversary::Oblivious(s) => gen_oblivious(s, n, round, rng),
        Adversary::Adaptive(a) => gen_adaptive(a, n, history, round),
    }
}

/// Adversary output on `E_a`, i.i.d. draws elsewhere.
pub fn gen_mixed(
    spec: &MixedSpec,
    history: &[Path],
    round: u64,
    stochastic_rng: &mut SimRng,
    adversary_rng: &mut SimRng,
) -> Result<LossVector> {
    let mut values = gen_stochastic(&spec.stochastic, round, stochastic_rng)?.0;
    if spec.attacked.iter().any(|&a| a) {
        let attack = gen_adversary(&spec.adversary, values.len(), history, round, adversary_rng)?;
        for (e, v) in values.iter_mut().enumerate() {
            if spec.attacked[e] {
                *v = attack.get(e);
            }
        }
    }
    LossVector::new(values, round)
}

/// Value written at a contaminated location.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ContaminationValue {
    /// `1 − draw`: the i.i.d. draw turned upside down.
    #[default]
    Flip,
    Fixed(f64),
}

/// i.i.d. losses with a budget-limited set of adversarial `(round, edge)`
/// locations chosen before the run.
#[derive(Debug, Clone)]
pub struct ContaminatedSpec {
    base: StochasticSpec,
    zeta: f64,
    onset: u64,
    value: ContaminationValue,
    /// Sorted contaminated rounds, per edge.
    locations: Vec<Vec<u64>>,
}

/// Parameters for [`ContaminatedSpec::greedy`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContaminationPlan {
    pub zeta: f64,
    pub onset: u64,
    /// Last round that may be contaminated.
    pub until: u64,
    /// Fraction of the budget to use, in `(0, 1]`.
    pub density: f64,
    pub value: ContaminationValue,
}

impl ContaminatedSpec {
    fn check_zeta(zeta: f64) -> Result<()> {
        if !(0.0..0.5).contains(&zeta) {
            return Err(Error::config("zeta", "attacking strength must lie in [0, 1/2)"));
        }
        Ok(())
    }

    /// Per-edge budget rate: `Δ(e)·ζ` for suboptimal edges, `Δ_e·ζ` for the
    /// best ones.
    fn budget_rates(base: &StochasticSpec, zeta: f64) -> Vec<f64> {
        let min_gap = base.min_gap().unwrap_or(0.0);
        base.gaps().into_iter().map(|g| if g > 0.0 { g * zeta } else { min_gap * zeta }).collect()
    }

    /// Validates explicit locations against the budget: for every round
    /// `t > onset`, an edge may have at most `t·Δ·ζ` locations up to `t`.
    pub fn with_locations(
        base: StochasticSpec,
        zeta: f64,
        onset: u64,
        value: ContaminationValue,
        locations: Vec<Vec<u64>>,
    ) -> Result<Self> {
        Self::check_zeta(zeta)?;
        let n = base.means().len();
        if locations.len() != n {
            return Err(Error::config("locations", format!("expected {n} edges")));
        }
        let rates = Self::budget_rates(&base, zeta);
        let mut sorted = Vec::with_capacity(n);
        for (edge, mut rounds) in locations.into_iter().enumerate() {
            rounds.sort_unstable();
            rounds.dedup();
            for (j, &r) in rounds.iter().enumerate() {
                let count = j + 1;
                let round = r.max(onset + 1);
                let budget = round as f64 * rates[edge];
                if count as f64 > budget + 1e-9 {
                    return Err(Error::BudgetViolation { edge, round, count, budget });
                }
            }
            sorted.push(rounds);
        }
        Ok(ContaminatedSpec { base, zeta, onset, value, locations: sorted })
    }

    /// Places locations greedily: edge `e` is contaminated at round `t` in
    /// `(onset, until]` whenever its count is below `⌊density·t·Δζ⌋`.
    pub fn greedy(base: StochasticSpec, plan: ContaminationPlan) -> Result<Self> {
        Self::check_zeta(plan.zeta)?;
        if !(plan.density > 0.0 && plan.density <= 1.0) {
            return Err(Error::config("density", "must lie in (0, 1]"));
        }
        let rates = Self::budget_rates(&base, plan.zeta);
        let locations = rates
            .iter()
            .map(|&rate| {
                let mut rounds = Vec::new();
                for t in plan.onset + 1..=plan.until {
                    let target = (plan.density * t as f64 * rate + 1e-9).floor() as usize;
                    if rounds.len() < target {
                        rounds.push(t);
                    }
                }
                rounds
            })
            .collect();
        Self::with_locations(base, plan.zeta, plan.onset, plan.value, locations)
    }

    pub fn base(&self) -> &StochasticSpec {
        &self.base
    }

    pub fn zeta(&self) -> f64 {
        self.zeta
    }

    pub fn onset(&self) -> u64 {
        self.onset
    }

    pub fn locations(&self, edge: usize) -> &[u64] {
        &self.locations[edge]
    }

    /// Number of contaminated locations of `edge` in rounds `1..=t`.
    pub fn count_up_to(&self, edge: usize, t: u64) -> usize {
        self.locations[edge].partition_point(|&r| r <= t)
    }

    pub fn is_contaminated(&self, edge: usize, round: u64) -> bool {
        self.locations[edge].binary_search(&round).is_ok()
    }

    /// Budget `t·Δ·ζ` of `edge` at round `t`.
    pub fn budget(&self, edge: usize, t: u64) -> f64 {
        t as f64 * Self::budget_rates(&self.base, self.zeta)[edge]
    }
}

/// An i.i.d. draw, overwritten at the contaminated locations of this round.
pub fn gen_contaminated(spec: &ContaminatedSpec, round: u64, rng: &mut SimRng) -> Result<LossVector> {
    let mut values = gen_stochastic(&spec.base, round, rng)?.0;
    for (e, v) in values.iter_mut().enumerate() {
        if spec.is_contaminated(e, round) {
            *v = match spec.value {
                ContaminationValue::Flip => 1.0 - *v,
                ContaminationValue::Fixed(x) => x,
            };
        }
    }
    LossVector::new(values, round)
}

/// Every supported environment.
#[derive(Debug, Clone)]
pub enum Regime {
    Stochastic(StochasticSpec),
    Oblivious(ObliviousSchedule),
    Adaptive(AdaptiveAttacker),
    Mixed(MixedSpec),
    Contaminated(ContaminatedSpec),
}

impl Regime {
    /// Expected per-edge losses of the i.i.d. component, when the regime has
    /// one. Mixed regimes report the means of every edge, attacked or not.
    pub fn stochastic_part(&self) -> Option<&StochasticSpec> {
        match self {
            Regime::Stochastic(s) => Some(s),
            Regime::Contaminated(c) => Some(c.base()),
            Regime::Mixed(m) => Some(&m.stochastic),
            Regime::Oblivious(_) | Regime::Adaptive(_) => None,
        }
    }

    /// True when the loss sequence cannot depend on the learner.
    pub fn is_oblivious(&self) -> bool {
        match self {
            Regime::Adaptive(_) => false,
            Regime::Mixed(m) => !matches!(m.adversary, Adversary::Adaptive(_)),
            _ => true,
        }
    }

    /// True when regret is measured against expected losses rather than the
    /// best path in hindsight.
    pub fn uses_pseudo_regret(&self) -> bool {
        matches!(self, Regime::Stochastic(_) | Regime::Contaminated(_))
    }
}

/// A regime bound to its random streams for one repetition.
#[derive(Debug, Clone)]
pub struct Environment {
    regime: Regime,
    n: usize,
    stochastic_rng: SimRng,
    adversary_rng: SimRng,
}

impl Environment {
    /// Streams 0 and 1 of `seed` are reserved for environments.
    pub fn new(regime: Regime, n: usize, seed: u64) -> Result<Self> {
        if let Some(s) = regime.stochastic_part() {
            if s.means().len() != n {
                return Err(Error::config(
                    "regime.means",
                    format!("{} means for {n} edges", s.means().len()),
                ));
            }
        }
        Ok(Environment {
            regime,
            n,
            stochastic_rng: crate::sim_rng(seed, 0),
            adversary_rng: crate::sim_rng(seed, 1),
        })
    }

    pub fn regime(&self) -> &Regime {
        &self.regime
    }

    pub fn edge_count(&self) -> usize {
        self.n
    }

    /// Losses of round `t`. `history` holds the learner's past choices,
    /// oldest first; only adaptive adversaries read it.
    pub fn losses(&mut self, round: u64, history: &[Path]) -> Result<LossVector> {
        match &self.regime {
            Regime::Stochastic(s) => gen_stochastic(s, round, &mut self.stochastic_rng),
            Regime::Oblivious(s) => gen_oblivious(s, self.n, round, &mut self.adversary_rng),
            Regime::Adaptive(a) => gen_adaptive(a, self.n, history, round),
            Regime::Mixed(m) => {
                gen_mixed(m, history, round, &mut self.stochastic_rng, &mut self.adversary_rng)
            }
            Regime::Contaminated(c) => gen_contaminated(c, round, &mut self.stochastic_rng),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rng() -> SimRng {
        crate::sim_rng(7, 0)
    }

    #[test]
    fn degenerate_means() {
        let mut r = rng();
        let zero = StochasticSpec::bernoulli(vec![0.0; 5]).unwrap();
        let one = StochasticSpec::bernoulli(vec![1.0; 5]).unwrap();
        for t in 1..50 {
            assert!(gen_stochastic(&zero, t, &mut r).unwrap().values().iter().all(|&v| v == 0.0));
            assert!(gen_stochastic(&one, t, &mut r).unwrap().values().iter().all(|&v| v == 1.0));
        }
    }

    #[test]
    fn bernoulli_means_concentrate() {
        let spec = StochasticSpec::bernoulli(vec![0.2, 0.8]).unwrap();
        let mut r = rng();
        let draws = 100_000;
        let mut sums = [0.0; 2];
        for t in 1..=draws {
            let l = gen_stochastic(&spec, t, &mut r).unwrap();
            sums[0] += l.get(0);
            sums[1] += l.get(1);
        }
        for (e, mu) in [0.2, 0.8].into_iter().enumerate() {
            let mean = sums[e] / draws as f64;
            let tol = 3.0 * (mu * (1.0 - mu) / draws as f64).sqrt();
            assert!((mean - mu).abs() < tol, "edge {e}: {mean} vs {mu}");
        }
    }

    #[test]
    fn uniform_variant_keeps_mean_and_range() {
        let spec =
            StochasticSpec::new(vec![0.05, 0.5], LossDistribution::Uniform { half_width: 0.3 })
                .unwrap();
        let mut r = rng();
        let mut sum = [0.0; 2];
        for t in 1..=20_000 {
            let l = gen_stochastic(&spec, t, &mut r).unwrap();
            assert!(l.get(0) <= 0.1 + 1e-12);
            sum[0] += l.get(0);
            sum[1] += l.get(1);
        }
        assert!((sum[0] / 20_000.0 - 0.05).abs() < 0.003);
        assert!((sum[1] / 20_000.0 - 0.5).abs() < 0.01);
    }

    #[test]
    fn gaps_and_best_edge() {
        let spec = StochasticSpec::bernoulli(vec![0.3, 0.1, 0.1, 0.5]).unwrap();
        assert_eq!(spec.best_edge(), 1);
        let gaps = spec.gaps();
        assert!((gaps[0] - 0.2).abs() < 1e-12);
        assert_eq!(gaps[2], 0.0);
        assert!((spec.min_gap().unwrap() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn oblivious_examples() {
        let mut r = rng();
        let l = gen_oblivious(&ObliviousSchedule::Constant(0.7), 3, 1, &mut r).unwrap();
        assert_eq!(l.values(), &[0.7, 0.7, 0.7]);
        let l = gen_oblivious(&ObliviousSchedule::Alternating, 3, 5, &mut r).unwrap();
        assert_eq!(l.values(), &[1.0, 1.0, 1.0]);
        let l = gen_oblivious(&ObliviousSchedule::Alternating, 3, 4, &mut r).unwrap();
        assert_eq!(l.values(), &[0.0, 0.0, 0.0]);
        let table = ObliviousSchedule::Table(Arc::new(vec![
            vec![0.1, 0.2],
            vec![0.3, 0.4],
            vec![0.5, 0.6],
        ]));
        assert_eq!(gen_oblivious(&table, 2, 3, &mut r).unwrap().values(), &[0.5, 0.6]);
        assert!(matches!(
            gen_oblivious(&table, 2, 4, &mut r),
            Err(Error::ScheduleExhausted { round: 4 })
        ));
    }

    #[test]
    fn oblivious_out_of_range_is_an_error() {
        let mut r = rng();
        let err = gen_oblivious(&ObliviousSchedule::Constant(1.5), 2, 1, &mut r).unwrap_err();
        assert!(matches!(err, Error::OutOfRange { edge: 0, .. }));
    }

    #[test]
    fn sinusoid_is_quantized() {
        let mut r = rng();
        let s = ObliviousSchedule::Sinusoid { period: 50.0, amplitude: 0.5, levels: 5 };
        for t in 1..200 {
            for v in gen_oblivious(&s, 4, t, &mut r).unwrap().values() {
                assert!(((v * 4.0).round() - v * 4.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn retaliation_examples() {
        let a = Path::new(vec![0, 1]);
        let b = Path::new(vec![2, 3]);
        let att0 = AdaptiveAttacker::retaliation(0);
        let l = gen_adaptive(&att0, 4, std::slice::from_ref(&a), 2).unwrap();
        assert_eq!(l.values(), &[1.0, 1.0, 0.1, 0.1]);
        let att2 = AdaptiveAttacker::retaliation(2);
        let l = gen_adaptive(&att2, 4, &[a.clone(), b.clone(), a.clone()], 4).unwrap();
        assert_eq!(l.values(), &[1.0, 1.0, 0.1, 0.1]);
        let l = gen_adaptive(&att2, 4, &[], 1).unwrap();
        assert_eq!(l.values(), &[0.1; 4]);
    }

    #[test]
    fn adaptive_ignores_old_history() {
        let a = Path::new(vec![0, 1]);
        let b = Path::new(vec![2, 3]);
        let att = AdaptiveAttacker::retaliation(1);
        let recent = [b.clone(), b.clone()];
        let mut h1 = vec![a.clone(), a.clone(), a.clone()];
        h1.extend_from_slice(&recent);
        let mut h2 = vec![b.clone(), a.clone()];
        h2.extend_from_slice(&recent);
        assert_eq!(gen_adaptive(&att, 4, &h1, 6).unwrap(), gen_adaptive(&att, 4, &h2, 5).unwrap());
    }

    #[test]
    fn mixed_degenerate_cases() {
        let stoch = StochasticSpec::bernoulli(vec![0.3, 0.6, 0.2, 0.9]).unwrap();
        let sched = ObliviousSchedule::Switching {
            segment: 7,
            means: Arc::new(vec![vec![0.9, 0.1, 0.5, 0.5], vec![0.1, 0.9, 0.5, 0.5]]),
        };
        let none = MixedSpec::new(stoch.clone(), &[], Adversary::Oblivious(sched.clone())).unwrap();
        let all =
            MixedSpec::new(stoch.clone(), &[0, 1, 2, 3], Adversary::Oblivious(sched.clone()))
                .unwrap();
        let (mut s1, mut a1) = (crate::sim_rng(3, 0), crate::sim_rng(3, 1));
        let (mut s2, mut a2) = (crate::sim_rng(3, 0), crate::sim_rng(3, 1));
        let (mut s3, mut a3) = (crate::sim_rng(3, 0), crate::sim_rng(3, 1));
        for t in 1..100 {
            let pure_s = gen_stochastic(&stoch, t, &mut s1).unwrap();
            let pure_a = gen_oblivious(&sched, 4, t, &mut a1).unwrap();
            assert_eq!(gen_mixed(&none, &[], t, &mut s2, &mut a2).unwrap(), pure_s);
            assert_eq!(gen_mixed(&all, &[], t, &mut s3, &mut a3).unwrap(), pure_a);
        }
    }

    #[test]
    fn mixed_single_attacked_edge() {
        let stoch = StochasticSpec::bernoulli(vec![0.0; 4]).unwrap();
        let spec =
            MixedSpec::new(stoch, &[0], Adversary::Oblivious(ObliviousSchedule::Constant(1.0)))
                .unwrap();
        let (mut s, mut a) = (rng(), rng());
        assert_eq!(gen_mixed(&spec, &[], 1, &mut s, &mut a).unwrap().values(), &[1.0, 0.0, 0.0, 0.0]);
    }

    fn plan(zeta: f64, onset: u64, until: u64) -> ContaminationPlan {
        ContaminationPlan { zeta, onset, until, density: 1.0, value: ContaminationValue::Flip }
    }

    #[test]
    fn zero_strength_matches_stochastic() {
        let base = StochasticSpec::bernoulli(vec![0.1, 0.3, 0.5]).unwrap();
        let spec = ContaminatedSpec::greedy(base.clone(), plan(0.0, 10, 1000)).unwrap();
        let (mut r1, mut r2) = (rng(), rng());
        for t in 1..500 {
            assert_eq!(
                gen_contaminated(&spec, t, &mut r1).unwrap(),
                gen_stochastic(&base, t, &mut r2).unwrap()
            );
        }
    }

    #[test]
    fn greedy_locations_meet_budget_exactly() {
        // Δ = 0.2 for edge 1, ζ = 0.25: at most 1000·0.2·0.25 = 50 by t = 1000
        let base = StochasticSpec::bernoulli(vec![0.1, 0.3]).unwrap();
        let spec = ContaminatedSpec::greedy(base, plan(0.25, 0, 1000)).unwrap();
        assert_eq!(spec.count_up_to(1, 1000), 50);
        for t in 1..=1000 {
            assert!(spec.count_up_to(1, t) as f64 <= spec.budget(1, t) + 1e-9);
            assert!(spec.count_up_to(0, t) as f64 <= spec.budget(0, t) + 1e-9);
        }
    }

    #[test]
    fn excess_locations_are_rejected() {
        let base = StochasticSpec::bernoulli(vec![0.1, 0.3]).unwrap();
        let rounds: Vec<u64> = (941..=1000).collect();
        let err = ContaminatedSpec::with_locations(
            base,
            0.25,
            0,
            ContaminationValue::Flip,
            vec![vec![], rounds],
        )
        .unwrap_err();
        assert!(matches!(err, Error::BudgetViolation { edge: 1, .. }));
    }

    #[test]
    fn zeta_must_be_below_half() {
        let base = StochasticSpec::bernoulli(vec![0.1, 0.3]).unwrap();
        assert!(ContaminatedSpec::greedy(base, plan(0.5, 0, 10)).is_err());
    }

    #[test]
    fn flip_overwrites_contaminated_locations() {
        let base = StochasticSpec::bernoulli(vec![0.0, 1.0]).unwrap();
        let spec = ContaminatedSpec::with_locations(
            base,
            0.4,
            0,
            ContaminationValue::Flip,
            vec![vec![5], vec![5]],
        )
        .unwrap();
        let mut r = rng();
        for t in 1..=6 {
            let l = gen_contaminated(&spec, t, &mut r).unwrap();
            if t == 5 {
                assert_eq!(l.values(), &[1.0, 0.0]);
            } else {
                assert_eq!(l.values(), &[0.0, 1.0]);
            }
        }
    }
}
