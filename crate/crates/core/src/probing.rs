//! Multi-path probing, practical wrappers (mini-batching, delayed feedback,
//! cold start) and multi-source probing schedules.

use std::collections::BTreeMap;
use std::path::Path as FsPath;
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Path;
use crate::policy::{ActionSpace, Decision, Observation, Policy};
use crate::SimRng;

/// `ϱ(i) = ρ(i) + (1 − ρ(i))·(M − 1)/(N − 1)`.
pub fn probed_path_prob(rho: f64, budget: usize, paths: f64) -> f64 {
    if paths <= 1.0 {
        return 1.0;
    }
    rho + (1.0 - rho) * (budget as f64 - 1.0) / (paths - 1.0)
}

/// `ϱ̃(e) = ρ̃(e) + (1 − ρ̃(e))·(m − 1)/(n − 1)`.
pub fn probed_link_prob(rho: f64, m: f64, n: f64) -> f64 {
    rho + (1.0 - rho) * (m - 1.0) / (n - 1.0)
}

/// `value + deviation`, as fed to the probing mixture.
pub fn perturb_counts(value: f64, deviation: i64) -> f64 {
    value + deviation as f64
}

/// Deliberate errors in the counts `m` and `n` used by the link mixture.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Perturbation {
    #[serde(default)]
    pub m_delta: i64,
    #[serde(default)]
    pub n_delta: i64,
}

/// Multi-path probing settings.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeConfig {
    /// `M`: paths probed per round, including the routed one.
    pub paths: usize,
    /// Constant `m` for the link mixture; `None` measures `|Õ_t|` each round.
    pub link_rate: Option<f64>,
    pub perturb: Perturbation,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { paths: 1, link_rate: None, perturb: Perturbation::default() }
    }
}

impl ProbeConfig {
    pub fn with_paths(paths: usize) -> Self {
        ProbeConfig { paths, ..Default::default() }
    }

    pub fn validate(&self, path_count: u128) -> Result<()> {
        if self.paths == 0 {
            return Err(Error::config("probe_budget", "must be at least 1"));
        }
        if self.paths as u128 > path_count {
            return Err(Error::BudgetTooLarge {
                budget: self.paths,
                paths: path_count.min(usize::MAX as u128) as usize,
            });
        }
        Ok(())
    }

    /// Link mixture for an observed edge, with the configured perturbation.
    pub fn link_prob(&self, rho: f64, measured: usize, n: usize) -> Result<f64> {
        let m = perturb_counts(self.link_rate.unwrap_or(measured as f64), self.perturb.m_delta);
        let n = perturb_counts(n as f64, self.perturb.n_delta);
        let weight = (m - 1.0) / (n - 1.0);
        if !(0.0..=1.0).contains(&weight) || !weight.is_finite() {
            return Err(Error::ProbabilityOutOfRange { value: weight });
        }
        let p = probed_link_prob(rho, m, n);
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::ProbabilityOutOfRange { value: p });
        }
        Ok(p)
    }
}

/// Per-observation delivery delay, in rounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DelayRule {
    Constant(u64),
    PerEdge(Vec<u64>),
    /// Geometric on `{0, 1, ...}` with the given mean.
    Geometric { mean: f64 },
}

impl DelayRule {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            DelayRule::PerEdge(d) if d.len() != n => {
                Err(Error::config("delay", format!("{} per-edge delays for {n} edges", d.len())))
            }
            DelayRule::Geometric { mean } if !(mean.is_finite() && *mean >= 0.0) => {
                Err(Error::config("delay.mean", "must be finite and nonnegative"))
            }
            _ => Ok(()),
        }
    }

    fn draw(&self, edge: usize, rng: &mut SimRng) -> u64 {
        match self {
            DelayRule::Constant(d) => *d,
            DelayRule::PerEdge(d) => d[edge],
            DelayRule::Geometric { mean } => {
                if *mean <= 0.0 {
                    return 0;
                }
                let p = 1.0 / (1.0 + mean);
                let u: f64 = rng.gen();
                ((1.0 - u).ln() / (1.0 - p).ln()).floor() as u64
            }
        }
    }
}

/// Queues observations and releases them to the inner policy once their
/// delay has elapsed. Each delivery uses the decision (and hence the
/// probabilities) of the round that emitted it.
#[derive(Debug, Clone)]
pub struct Delayed<P> {
    inner: P,
    rule: DelayRule,
    rng: SimRng,
    round: u64,
    emissions: BTreeMap<u64, Decision>,
    queue: BTreeMap<(u64, u64), Vec<Observation>>,
    last_due: Vec<u64>,
    pending: usize,
}

impl<P: Policy> Delayed<P> {
    pub fn new(inner: P, rule: DelayRule, n: usize, rng: SimRng) -> Result<Self> {
        rule.validate(n)?;
        Ok(Delayed {
            inner,
            rule,
            rng,
            round: 1,
            emissions: BTreeMap::new(),
            queue: BTreeMap::new(),
            last_due: vec![0; n],
            pending: 0,
        })
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }

    /// Observations emitted but not yet delivered.
    pub fn pending(&self) -> usize {
        self.pending
    }

    /// Rounds whose observations are still (partly) in flight.
    pub fn pending_emissions(&self) -> Vec<u64> {
        self.emissions.keys().copied().collect()
    }

    fn deliver(&mut self) -> Result<()> {
        let due: Vec<(u64, u64)> = self.queue.range(..=(self.round, u64::MAX)).map(|(k, _)| *k).collect();
        let mut grouped: BTreeMap<u64, Vec<Observation>> = BTreeMap::new();
        for key in due {
            let obs = self.queue.remove(&key).expect("key listed above");
            grouped.entry(key.1).or_default().extend(obs);
        }
        for (emission, obs) in grouped {
            self.pending -= obs.len();
            let decision = self.emissions.get(&emission).expect("emission recorded").clone();
            self.inner.absorb(&decision, &obs)?;
            if !self.queue.keys().any(|k| k.1 == emission) {
                self.emissions.remove(&emission);
            }
        }
        Ok(())
    }
}

impl<P: Policy> Policy for Delayed<P> {
    fn choose(&mut self, rng: &mut SimRng) -> Result<Decision> {
        self.inner.choose(rng)
    }

    fn absorb(&mut self, decision: &Decision, feedback: &[Observation]) -> Result<()> {
        let emission = self.round;
        self.emissions.insert(emission, decision.clone());
        for obs in feedback {
            let due = (emission + self.rule.draw(obs.edge, &mut self.rng)).max(self.last_due[obs.edge]);
            self.last_due[obs.edge] = due;
            self.queue.entry((due, emission)).or_default().push(*obs);
            self.pending += 1;
        }
        Ok(())
    }

    fn end_round(&mut self) -> Result<()> {
        self.deliver()?;
        self.inner.end_round()?;
        self.round += 1;
        Ok(())
    }

    fn plays(&self) -> Option<&[u64]> {
        self.inner.plays()
    }
}

/// `⌈(4k·√(n ln n))^{−1/3}·T^{1/3}⌉`.
pub fn auto_batch_size(k: usize, n: usize, horizon: u64) -> u64 {
    let nf = n as f64;
    let scale = 4.0 * k as f64 * (nf * nf.ln()).sqrt();
    (scale.powf(-1.0 / 3.0) * (horizon as f64).cbrt()).ceil().max(1.0) as u64
}

/// Plays the inner policy's path for `size` consecutive rounds and feeds it
/// the batch-average losses once per batch.
#[derive(Debug, Clone)]
pub struct Minibatch<P> {
    inner: P,
    size: u64,
    current: Option<Decision>,
    sums: Vec<f64>,
    filled: u64,
}

impl<P: Policy> Minibatch<P> {
    pub fn new(inner: P, size: u64) -> Result<Self> {
        if size == 0 {
            return Err(Error::config("minibatch", "batch size must be at least 1"));
        }
        Ok(Minibatch { inner, size, current: None, sums: Vec::new(), filled: 0 })
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }
}

impl<P: Policy> Policy for Minibatch<P> {
    fn choose(&mut self, rng: &mut SimRng) -> Result<Decision> {
        if self.current.is_none() {
            let d = self.inner.choose(rng)?;
            self.sums = vec![0.0; d.observed.len()];
            self.current = Some(d);
        }
        Ok(self.current.clone().expect("set above"))
    }

    fn absorb(&mut self, decision: &Decision, feedback: &[Observation]) -> Result<()> {
        for obs in feedback {
            let slot = decision.observed.binary_search(&obs.edge).map_err(|_| {
                Error::InternalInvariant(format!("edge {} was not observed", obs.edge))
            })?;
            self.sums[slot] += obs.loss;
        }
        Ok(())
    }

    fn end_round(&mut self) -> Result<()> {
        self.filled += 1;
        if self.filled < self.size {
            return Ok(());
        }
        let decision = self.current.take().expect("a batch is open");
        let avg: Vec<Observation> = decision
            .observed
            .iter()
            .zip(&self.sums)
            .map(|(&edge, &s)| Observation { edge, loss: s / self.size as f64 })
            .collect();
        self.filled = 0;
        self.inner.absorb(&decision, &avg)?;
        self.inner.end_round()
    }

    fn plays(&self) -> Option<&[u64]> {
        self.inner.plays()
    }
}

/// First round (1-based) by which every edge has been observed, if any.
pub fn coldstart_monitor(observed: &[Vec<usize>], n: usize) -> Option<u64> {
    let mut seen = vec![false; n];
    let mut left = n;
    for (t, round) in observed.iter().enumerate() {
        for &e in round {
            if !seen[e] {
                seen[e] = true;
                left -= 1;
            }
        }
        if left == 0 {
            return Some(t as u64 + 1);
        }
    }
    None
}

/// Probes `budget` distinct uniform paths per round until every edge is seen
/// and returns the number of rounds used.
pub fn cold_start_cover_time(space: &ActionSpace, budget: usize, rng: &mut SimRng) -> Result<u64> {
    ProbeConfig::with_paths(budget).validate(space.path_count())?;
    let n = space.edge_count();
    let mut seen = vec![false; n];
    let mut left = n;
    let mut t = 0;
    while left > 0 {
        t += 1;
        let head = space.uniform_path(rng);
        let others = space.sample_others(&head, budget - 1, rng)?;
        for p in std::iter::once(&head).chain(&others) {
            for &e in p.edges() {
                if !seen[e] {
                    seen[e] = true;
                    left -= 1;
                }
            }
        }
    }
    Ok(t)
}

/// Uniform probing until every edge has been seen, then hands control to
/// the inner policy. Cold-start rounds never update the inner policy.
#[derive(Debug, Clone)]
pub struct ColdStart<P> {
    inner: P,
    space: Arc<ActionSpace>,
    budget: usize,
    seen: Vec<bool>,
    left: usize,
    round: u64,
    cover_time: Option<u64>,
    in_cold_round: bool,
}

impl<P: Policy> ColdStart<P> {
    pub fn new(inner: P, space: Arc<ActionSpace>, budget: usize) -> Result<Self> {
        ProbeConfig::with_paths(budget).validate(space.path_count())?;
        let n = space.edge_count();
        Ok(ColdStart {
            inner,
            space,
            budget,
            seen: vec![false; n],
            left: n,
            round: 0,
            cover_time: None,
            in_cold_round: false,
        })
    }

    pub fn cover_time(&self) -> Option<u64> {
        self.cover_time
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }
}

impl<P: Policy> Policy for ColdStart<P> {
    fn choose(&mut self, rng: &mut SimRng) -> Result<Decision> {
        self.round += 1;
        self.in_cold_round = self.cover_time.is_none();
        if !self.in_cold_round {
            return self.inner.choose(rng);
        }
        let path = self.space.uniform_path(rng);
        let probed = self.space.sample_others(&path, self.budget - 1, rng)?;
        let mut observed: Vec<usize> =
            path.edges().iter().chain(probed.iter().flat_map(|p| p.edges())).copied().collect();
        observed.sort_unstable();
        observed.dedup();
        let probs = vec![f64::NAN; observed.len()];
        Ok(Decision { path, probed, observed, probs, path_prob: f64::NAN, exploratory: true })
    }

    fn absorb(&mut self, decision: &Decision, feedback: &[Observation]) -> Result<()> {
        if !self.in_cold_round {
            return self.inner.absorb(decision, feedback);
        }
        for obs in feedback {
            if !self.seen[obs.edge] {
                self.seen[obs.edge] = true;
                self.left -= 1;
            }
        }
        Ok(())
    }

    fn end_round(&mut self) -> Result<()> {
        if !self.in_cold_round {
            return self.inner.end_round();
        }
        if self.left == 0 {
            self.cover_time = Some(self.round);
        }
        Ok(())
    }

    fn plays(&self) -> Option<&[u64]> {
        self.inner.plays()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum MultiSourceMode {
    #[default]
    Coordinated,
    Uncoordinated,
}

/// Source-destination pairs sharing one network.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSourceSpec {
    /// `pairs[s]`: candidate paths of pair `s`.
    pairs: Vec<Vec<Path>>,
    /// `coverage[e][s] = C_es`.
    coverage: Vec<Vec<bool>>,
    pub mode: MultiSourceMode,
}

impl MultiSourceSpec {
    /// Derives `C_es` from each pair's paths. Every edge of `0..n` must be
    /// covered by some pair.
    pub fn new(pairs: Vec<Vec<Path>>, n: usize, mode: MultiSourceMode) -> Result<Self> {
        if pairs.is_empty() || pairs.iter().any(Vec::is_empty) {
            return Err(Error::config("multisource.pairs", "every pair needs at least one path"));
        }
        let mut coverage = vec![vec![false; pairs.len()]; n];
        for (s, paths) in pairs.iter().enumerate() {
            for p in paths {
                for &e in p.edges() {
                    if e >= n {
                        return Err(Error::config("multisource.pairs", format!("edge {e} out of range")));
                    }
                    coverage[e][s] = true;
                }
            }
        }
        if let Some(edge) = coverage.iter().position(|row| !row.iter().any(|&c| c)) {
            return Err(Error::InfeasibleCover { edge });
        }
        Ok(MultiSourceSpec { pairs, coverage, mode })
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn edge_count(&self) -> usize {
        self.coverage.len()
    }

    pub fn coverage(&self, edge: usize, pair: usize) -> bool {
        self.coverage[edge][pair]
    }

    /// `k_s`: number of candidate paths of each pair.
    pub fn path_counts(&self) -> Vec<usize> {
        self.pairs.iter().map(Vec::len).collect()
    }

    pub fn pairs(&self) -> &[Vec<Path>] {
        &self.pairs
    }
}

/// `κ(t) = min_e Σ_s ⌊t/k_s⌋·C_es`.
pub fn kappa(coverage: &[Vec<bool>], path_counts: &[usize], t: u64) -> Result<u64> {
    let mut best = u64::MAX;
    for (e, row) in coverage.iter().enumerate() {
        if !row.iter().any(|&c| c) {
            return Err(Error::InfeasibleCover { edge: e });
        }
        let z: u64 = row
            .iter()
            .zip(path_counts)
            .filter(|(c, _)| **c)
            .map(|(_, &k)| t / k.max(1) as u64)
            .sum();
        best = best.min(z);
    }
    Ok(if best == u64::MAX { 0 } else { best })
}

/// `κ̄ = Σ_{τ≤t} κ(τ) / t`.
pub fn kappa_bar(coverage: &[Vec<bool>], path_counts: &[usize], t: u64) -> Result<f64> {
    if t == 0 {
        return Ok(0.0);
    }
    let mut total = 0u64;
    for tau in 1..=t {
        total += kappa(coverage, path_counts, tau)?;
    }
    Ok(total as f64 / t as f64)
}

/// Reads `C_es` from CSV: one row per edge, one 0/1 column per pair.
pub fn load_coverage_csv(path: &FsPath) -> Result<Vec<Vec<bool>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })?;
        let row = record
            .iter()
            .map(|v| match v {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(Error::Parse {
                    path: path.to_path_buf(),
                    message: format!("row {}: expected 0 or 1, got {other:?}", i + 1),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

/// Chooses, each round, which candidate path every pair probes.
#[derive(Debug, Clone)]
pub struct MultiSourceScheduler {
    spec: MultiSourceSpec,
    counts: Vec<Vec<u64>>,
}

impl MultiSourceScheduler {
    pub fn new(spec: MultiSourceSpec) -> Self {
        let counts = spec.pairs.iter().map(|p| vec![0; p.len()]).collect();
        MultiSourceScheduler { spec, counts }
    }

    /// Path index per pair for round `t` (1-based).
    ///
    /// Uncoordinated pairs cycle through their own paths. Coordinated pairs
    /// take turns (rotating the first mover) and each picks the path adding
    /// the most edges not yet probed this round, preferring its less-probed
    /// paths on ties.
    pub fn schedule(&mut self, t: u64) -> Vec<usize> {
        let s_count = self.spec.pairs.len();
        let mut pick = vec![0; s_count];
        match self.spec.mode {
            MultiSourceMode::Uncoordinated => {
                for (s, paths) in self.spec.pairs.iter().enumerate() {
                    pick[s] = ((t - 1) % paths.len() as u64) as usize;
                }
            }
            MultiSourceMode::Coordinated => {
                let mut covered = vec![false; self.spec.edge_count()];
                for turn in 0..s_count {
                    let s = (turn + (t as usize - 1)) % s_count;
                    let best = self.spec.pairs[s]
                        .iter()
                        .enumerate()
                        .map(|(i, p)| {
                            let fresh = p.edges().iter().filter(|&&e| !covered[e]).count();
                            (i, fresh, self.counts[s][i])
                        })
                        .max_by(|a, b| a.1.cmp(&b.1).then(b.2.cmp(&a.2)).then(b.0.cmp(&a.0)))
                        .map(|x| x.0)
                        .expect("pairs have paths");
                    for &e in self.spec.pairs[s][best].edges() {
                        covered[e] = true;
                    }
                    pick[s] = best;
                }
            }
        }
        for (s, &i) in pick.iter().enumerate() {
            self.counts[s][i] += 1;
        }
        pick
    }

    /// Edges probed by the given assignment.
    pub fn probed_edges(&self, pick: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = pick
            .iter()
            .enumerate()
            .flat_map(|(s, &i)| self.spec.pairs[s][i].edges().iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}
