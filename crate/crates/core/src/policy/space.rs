use std::collections::HashSet;

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{
    argmin_path, covering_set, covering_set_dag, enumerate_paths, CoveringSet, Dag, Path, PathSet,
};
use crate::numeric::log_sum_exp;
use crate::sampler::{all_subsets, binomial, push_weights, subset_cover, DpTables, PushedWeights};
use crate::SimRng;

/// The strategy set the learner draws from.
#[derive(Debug, Clone)]
pub enum ActionSpace {
    /// An explicit list of paths.
    Enumerated { paths: PathSet, cover: CoveringSet },
    /// All source-destination paths of a DAG, sampled by weight pushing.
    Dag { dag: Dag, cover: CoveringSet },
    /// All `k`-subsets of `n` edges, sampled with the subset tables.
    Subset { n: usize, k: usize, cover: CoveringSet },
}

impl ActionSpace {
    pub fn enumerated(paths: PathSet) -> Self {
        let cover = covering_set(&paths);
        ActionSpace::Enumerated { paths, cover }
    }

    pub fn dag(dag: Dag) -> Self {
        let cover = covering_set_dag(&dag);
        ActionSpace::Dag { dag, cover }
    }

    pub fn subset(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::config("action_space.subset", format!("need 1 <= k < n, got n={n}, k={k}")));
        }
        let cover = CoveringSet::from_paths(subset_cover(n, k), n)?;
        Ok(ActionSpace::Subset { n, k, cover })
    }

    pub fn edge_count(&self) -> usize {
        match self {
            ActionSpace::Enumerated { paths, .. } => paths.edge_count(),
            ActionSpace::Dag { dag, .. } => dag.edge_count(),
            ActionSpace::Subset { n, .. } => *n,
        }
    }

    /// Longest path length `k`.
    pub fn max_len(&self) -> usize {
        match self {
            ActionSpace::Enumerated { paths, .. } => paths.max_len(),
            ActionSpace::Dag { dag, .. } => dag.max_path_len(),
            ActionSpace::Subset { k, .. } => *k,
        }
    }

    /// `N`, saturating at `u128::MAX`.
    pub fn path_count(&self) -> u128 {
        match self {
            ActionSpace::Enumerated { paths, .. } => paths.len() as u128,
            ActionSpace::Dag { dag, .. } => dag.count_paths(),
            ActionSpace::Subset { n, k, .. } => binomial(*n, *k),
        }
    }

    pub fn cover(&self) -> &CoveringSet {
        match self {
            ActionSpace::Enumerated { cover, .. }
            | ActionSpace::Dag { cover, .. }
            | ActionSpace::Subset { cover, .. } => cover,
        }
    }

    pub fn path_set(&self) -> Option<&PathSet> {
        match self {
            ActionSpace::Enumerated { paths, .. } => Some(paths),
            _ => None,
        }
    }

    /// Lists every strategy, failing past `cap`.
    pub fn enumerate(&self, cap: usize) -> Result<PathSet> {
        match self {
            ActionSpace::Enumerated { paths, .. } => Ok(paths.clone()),
            ActionSpace::Dag { dag, .. } => enumerate_paths(dag, cap),
            ActionSpace::Subset { n, k, .. } => {
                let count = binomial(*n, *k);
                if count > cap as u128 {
                    return Err(Error::PathExplosion { count, cap });
                }
                PathSet::new(all_subsets(*n, *k), *n)
            }
        }
    }

    /// Switches to an explicit path list with the same cover.
    pub fn to_enumerated(&self, cap: usize) -> Result<Self> {
        Ok(ActionSpace::Enumerated { paths: self.enumerate(cap)?, cover: self.cover().clone() })
    }

    pub fn contains(&self, path: &Path) -> bool {
        match self {
            ActionSpace::Enumerated { paths, .. } => paths.position(path).is_some(),
            ActionSpace::Dag { dag, .. } => dag.is_path(path.edges()),
            ActionSpace::Subset { n, k, .. } => {
                path.len() == *k
                    && path.edges().windows(2).all(|w| w[0] < w[1])
                    && path.edges().iter().all(|&e| e < *n)
            }
        }
    }

    /// Prepares the exponential-weights distribution for `ln w(e) = log_w[e]`.
    pub fn weights(&self, log_w: &[f64]) -> Result<WeightTables> {
        Ok(match self {
            ActionSpace::Enumerated { paths, .. } => {
                let raw: Vec<f64> = paths.paths().iter().map(|p| p.total(log_w)).collect();
                let norm = log_sum_exp(raw.iter().copied());
                if !norm.is_finite() {
                    return Err(Error::NumericUnderflow);
                }
                WeightTables::Enumerated { log_probs: raw.into_iter().map(|v| v - norm).collect() }
            }
            ActionSpace::Dag { dag, .. } => {
                let pushed = push_weights(dag, log_w);
                if !pushed.log_total(dag).is_finite() {
                    return Err(Error::NumericUnderflow);
                }
                WeightTables::Dag(pushed)
            }
            ActionSpace::Subset { k, .. } => {
                WeightTables::Subset(DpTables::from_log_weights(log_w.to_vec(), *k)?)
            }
        })
    }

    /// Minimum of `Σ_{e∈i} totals[e]` over strategies, ties towards the
    /// lexicographically smallest path. Totals may be negative.
    pub fn best_path(&self, totals: &[f64]) -> Path {
        match self {
            ActionSpace::Enumerated { paths, .. } => {
                let mut best = 0;
                let mut best_v = f64::INFINITY;
                for (i, p) in paths.paths().iter().enumerate() {
                    let v = p.total(totals);
                    if v < best_v {
                        best = i;
                        best_v = v;
                    }
                }
                paths.get(best).clone()
            }
            ActionSpace::Dag { dag, .. } => argmin_path(dag, totals),
            ActionSpace::Subset { n, k, .. } => {
                let mut order: Vec<usize> = (0..*n).collect();
                order.sort_by(|&a, &b| totals[a].total_cmp(&totals[b]).then(a.cmp(&b)));
                let mut chosen = order[..*k].to_vec();
                chosen.sort_unstable();
                Path::new(chosen)
            }
        }
    }

    /// One strategy uniformly at random.
    pub fn uniform_path(&self, rng: &mut SimRng) -> Path {
        match self {
            ActionSpace::Enumerated { paths, .. } => paths.get(rng.gen_range(0..paths.len())).clone(),
            ActionSpace::Dag { dag, .. } => push_weights(dag, &vec![0.0; dag.edge_count()]).sample(dag, rng),
            ActionSpace::Subset { n, k, .. } => {
                let mut v = index::sample(rng, *n, *k).into_vec();
                v.sort_unstable();
                Path::new(v)
            }
        }
    }

    /// `count` distinct strategies other than `exclude`, uniformly without
    /// replacement.
    pub fn sample_others(&self, exclude: &Path, count: usize, rng: &mut SimRng) -> Result<Vec<Path>> {
        let total = self.path_count();
        if count as u128 + 1 > total {
            return Err(Error::BudgetTooLarge {
                budget: count + 1,
                paths: total.min(usize::MAX as u128) as usize,
            });
        }
        if count == 0 {
            return Ok(Vec::new());
        }
        if let ActionSpace::Enumerated { paths, .. } = self {
            let skip = paths.position(exclude).unwrap_or(usize::MAX);
            return Ok(index::sample(rng, paths.len() - 1, count)
                .into_iter()
                .map(|i| paths.get(if i >= skip { i + 1 } else { i }).clone())
                .collect());
        }
        let mut seen: HashSet<Path> = HashSet::new();
        seen.insert(exclude.clone());
        let mut out = Vec::with_capacity(count);
        let uniform = match self {
            ActionSpace::Dag { dag, .. } => Some(push_weights(dag, &vec![0.0; dag.edge_count()])),
            _ => None,
        };
        while out.len() < count {
            let p = match (&uniform, self) {
                (Some(pw), ActionSpace::Dag { dag, .. }) => pw.sample(dag, rng),
                _ => self.uniform_path(rng),
            };
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        Ok(out)
    }
}

/// The exponential-weights distribution (without exploration) of one round.
#[derive(Debug, Clone)]
pub enum WeightTables {
    Enumerated { log_probs: Vec<f64> },
    Dag(PushedWeights),
    Subset(DpTables),
}

impl WeightTables {
    pub fn sample(&self, space: &ActionSpace, rng: &mut SimRng) -> Result<Path> {
        match (self, space) {
            (WeightTables::Enumerated { log_probs }, ActionSpace::Enumerated { paths, .. }) => {
                let mut u: f64 = rng.gen();
                let mut last = 0;
                for (i, lp) in log_probs.iter().enumerate() {
                    let p = lp.exp();
                    if p > 0.0 {
                        last = i;
                    }
                    if u < p {
                        return Ok(paths.get(i).clone());
                    }
                    u -= p;
                }
                Ok(paths.get(last).clone())
            }
            (WeightTables::Dag(pw), ActionSpace::Dag { dag, .. }) => Ok(pw.sample(dag, rng)),
            (WeightTables::Subset(t), ActionSpace::Subset { .. }) => t.sample(rng),
            _ => Err(Error::InternalInvariant("weight tables do not match the action space".into())),
        }
    }

    /// `ln(w(i)/W)`.
    pub fn log_prob(&self, space: &ActionSpace, path: &Path) -> f64 {
        match (self, space) {
            (WeightTables::Enumerated { log_probs }, ActionSpace::Enumerated { paths, .. }) => {
                paths.position(path).map_or(f64::NEG_INFINITY, |i| log_probs[i])
            }
            (WeightTables::Dag(pw), ActionSpace::Dag { dag, .. }) => pw.log_prob(dag, path.edges()),
            (WeightTables::Subset(t), ActionSpace::Subset { .. }) => t.log_prob(path.edges()),
            _ => f64::NEG_INFINITY,
        }
    }

    /// `Σ_{i∋e} w(i)/W` for every edge.
    pub fn weight_marginals(&self, space: &ActionSpace) -> Vec<f64> {
        match (self, space) {
            (WeightTables::Enumerated { log_probs }, ActionSpace::Enumerated { paths, .. }) => {
                let mut q = vec![0.0; paths.edge_count()];
                for (p, lp) in paths.paths().iter().zip(log_probs) {
                    let w = lp.exp();
                    for &e in p.edges() {
                        q[e] += w;
                    }
                }
                q.into_iter().map(|v| v.min(1.0)).collect()
            }
            (WeightTables::Dag(pw), ActionSpace::Dag { dag, .. }) => pw.weight_marginals(dag),
            (WeightTables::Subset(t), ActionSpace::Subset { .. }) => t.weight_marginals(),
            _ => vec![0.0; space.edge_count()],
        }
    }
}
