//! Sampling `k`-subsets of edges with probability proportional to the
//! product of their weights.
//!
//! Two tables are filled in log space:
//!
//! - suffix `W(e, j)`: total weight of the `j`-subsets of edges `e..n`,
//! - prefix `W̄(e, j)`: total weight of the `j`-subsets of edges `0..e`.
//!
//! Sampling scans edges in increasing id and takes edge `e` with probability
//! `w(e)·W(e+1, need−1) / W(e, need)`, which telescopes to
//! `∏w / W(0, k)` for the whole subset.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Path;
use crate::numeric::log_add;
use crate::SimRng;

#[derive(Debug, Clone)]
pub struct DpTables {
    n: usize,
    k: usize,
    log_w: Vec<f64>,
    suffix: Vec<f64>,
    prefix: Vec<f64>,
}

/// Builds both tables from positive, finite weights.
pub fn build_tables(weights: &[f64], k: usize) -> Result<DpTables> {
    if let Some(e) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
        return Err(Error::config(format!("weights[{e}]"), "must be positive and finite"));
    }
    DpTables::from_log_weights(weights.iter().map(|w| w.ln()).collect(), k)
}

impl DpTables {
    /// Builds the tables from `ln w(e)`. Entries may be very negative; `-inf`
    /// (zero weight) is rejected.
    pub fn from_log_weights(log_w: Vec<f64>, k: usize) -> Result<Self> {
        let n = log_w.len();
        if k > n {
            return Err(Error::config("k", format!("subset size {k} exceeds {n} edges")));
        }
        if let Some(e) = log_w.iter().position(|v| !v.is_finite()) {
            return Err(Error::config(format!("log_weights[{e}]"), "must be finite"));
        }
        let width = k + 1;
        let mut suffix = vec![f64::NEG_INFINITY; (n + 1) * width];
        let mut prefix = vec![f64::NEG_INFINITY; (n + 1) * width];
        suffix[n * width] = 0.0;
        prefix[0] = 0.0;
        for e in (0..n).rev() {
            suffix[e * width] = 0.0;
            for j in 1..=k {
                let skip = suffix[(e + 1) * width + j];
                let take = log_w[e] + suffix[(e + 1) * width + j - 1];
                suffix[e * width + j] = log_add(skip, take);
            }
        }
        for e in 1..=n {
            prefix[e * width] = 0.0;
            for j in 1..=k {
                let skip = prefix[(e - 1) * width + j];
                let take = log_w[e - 1] + prefix[(e - 1) * width + j - 1];
                prefix[e * width + j] = log_add(skip, take);
            }
        }
        Ok(DpTables { n, k, log_w, suffix, prefix })
    }

    pub fn edge_count(&self) -> usize {
        self.n
    }

    pub fn subset_size(&self) -> usize {
        self.k
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_w
    }

    /// `ln W(e, j)`, for `0 ≤ e ≤ n`.
    pub fn log_suffix(&self, e: usize, j: usize) -> f64 {
        self.suffix[e * (self.k + 1) + j]
    }

    /// `ln W̄(e, j)`: weight of the `j`-subsets of the first `e` edges.
    pub fn log_prefix(&self, e: usize, j: usize) -> f64 {
        self.prefix[e * (self.k + 1) + j]
    }

    pub fn suffix(&self, e: usize, j: usize) -> f64 {
        self.log_suffix(e, j).exp()
    }

    pub fn prefix(&self, e: usize, j: usize) -> f64 {
        self.log_prefix(e, j).exp()
    }

    /// `ln W(0, k)`, the normaliser.
    pub fn log_total(&self) -> f64 {
        self.log_suffix(0, self.k)
    }

    /// Log-probability of taking edge `e` when `need ≥ 1` edges are still
    /// missing.
    pub fn log_take(&self, e: usize, need: usize) -> f64 {
        self.log_w[e] + self.log_suffix(e + 1, need - 1) - self.log_suffix(e, need)
    }

    /// Log-probability of skipping edge `e` when `need` edges are missing.
    pub fn log_skip(&self, e: usize, need: usize) -> f64 {
        if need == 0 {
            return 0.0;
        }
        self.log_suffix(e + 1, need) - self.log_suffix(e, need)
    }

    /// Draws one subset by the sequential rule.
    pub fn sample(&self, rng: &mut SimRng) -> Result<Path> {
        let mut chosen = Vec::with_capacity(self.k);
        for e in 0..self.n {
            let need = self.k - chosen.len();
            if need == 0 {
                break;
            }
            if self.n - e == need || rng.gen::<f64>() < self.log_take(e, need).exp() {
                chosen.push(e);
            }
        }
        if chosen.len() != self.k {
            return Err(Error::InternalInvariant(format!(
                "subset scan selected {} of {} edges",
                chosen.len(),
                self.k
            )));
        }
        Ok(Path::new(chosen))
    }

    /// Log-probability of `subset` as the product of the sequential
    /// take/skip factors.
    pub fn log_prob_sequential(&self, subset: &[usize]) -> f64 {
        let mut member = vec![false; self.n];
        for &e in subset {
            member[e] = true;
        }
        let mut need = self.k;
        let mut lp = 0.0;
        for (e, &taken) in member.iter().enumerate() {
            if need == 0 {
                break;
            }
            if taken {
                lp += self.log_take(e, need);
                need -= 1;
            } else {
                lp += self.log_skip(e, need);
            }
        }
        if need == 0 && subset.len() == self.k {
            lp
        } else {
            f64::NEG_INFINITY
        }
    }

    /// `ln(∏_{e∈subset} w(e) / W(0, k))`.
    pub fn log_prob(&self, subset: &[usize]) -> f64 {
        if subset.len() != self.k {
            return f64::NEG_INFINITY;
        }
        subset.iter().map(|&e| self.log_w[e]).sum::<f64>() - self.log_total()
    }

    /// Probability that edge `e` is in a subset drawn from the weights:
    /// `Σ_{j<k} W̄(e, j)·w(e)·W(e+1, k−j−1) / W(0, k)`.
    pub fn weight_marginal(&self, e: usize) -> f64 {
        let terms = (0..self.k).map(|j| {
            self.log_prefix(e, j) + self.log_w[e] + self.log_suffix(e + 1, self.k - j - 1)
        });
        let mut acc = f64::NEG_INFINITY;
        for t in terms {
            acc = log_add(acc, t);
        }
        (acc - self.log_total()).exp().min(1.0)
    }

    pub fn weight_marginals(&self) -> Vec<f64> {
        (0..self.n).map(|e| self.weight_marginal(e)).collect()
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn all_subsets(n: usize, k: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Path>) {
        if current.len() == k {
            out.push(Path::new(current.clone()));
            return;
        }
        for e in start..=n - (k - current.len()) {
            current.push(e);
            rec(e + 1, n, k, current, out);
            current.pop();
        }
    }
    if k <= n {
        rec(0, n, k, &mut current, &mut out);
    }
    out
}

/// Covering subsets for the `k`-subset action space: consecutive blocks of
/// `k` edges, the last one shifted left to stay full.
pub fn subset_cover(n: usize, k: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let begin = start.min(n - k);
        out.push(Path::new((begin..begin + k).collect()));
        start += k;
    }
    out
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
