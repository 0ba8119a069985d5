//! Path samplers that never enumerate the strategy space.
//!
//! [`subset`] handles action spaces made of all `k`-subsets of edges;
//! [`dag`] handles source-destination paths of a DAG. Both draw from the
//! exponential-weights distribution and share the covering mixture in
//! [`CoverMixture`].

pub mod dag;
pub mod subset;

use rand::Rng;

use crate::graph::{CoveringSet, Path};
use crate::SimRng;

pub use dag::{push_weights, PushedWeights};
pub use subset::{all_subsets, binomial, build_tables, subset_cover, DpTables};

/// The exploration part of the path distribution: covering path `c` gets
/// probability `mass(c)`, the sum of `ε` over the edges designated to it.
#[derive(Debug, Clone)]
pub struct CoverMixture<'a> {
    cover: &'a CoveringSet,
    masses: Vec<f64>,
    total: f64,
}

impl<'a> CoverMixture<'a> {
    pub fn new(cover: &'a CoveringSet, epsilon: &[f64]) -> Self {
        let masses = cover.masses(epsilon);
        let total = epsilon.iter().sum();
        CoverMixture { cover, masses, total }
    }

    /// `Σ_e ε(e)`.
    pub fn total(&self) -> f64 {
        self.total
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn cover(&self) -> &CoveringSet {
        self.cover
    }

    /// Mixture mass placed on `path` (non-zero only for covering paths).
    pub fn path_mass(&self, path: &Path) -> f64 {
        self.cover
            .paths()
            .iter()
            .zip(&self.masses)
            .filter(|(c, _)| *c == path)
            .map(|(_, m)| m)
            .sum()
    }

    /// Mixture mass on paths containing each edge.
    pub fn edge_masses(&self, n: usize) -> Vec<f64> {
        let mut out = vec![0.0; n];
        for (c, m) in self.cover.paths().iter().zip(&self.masses) {
            for &e in c.edges() {
                out[e] += m;
            }
        }
        out
    }

    /// Combines weight-only marginals `q` into the full marginals
    /// `(1 − Σε)·q(e) + Σ_{c∋e} mass(c)`.
    pub fn marginals(&self, weight_marginals: &[f64]) -> Vec<f64> {
        let extra = self.edge_masses(weight_marginals.len());
        weight_marginals
            .iter()
            .zip(extra)
            .map(|(q, m)| ((1.0 - self.total) * q + m).min(1.0))
            .collect()
    }

    /// Pre-flip: with probability `Σε` returns a covering path drawn by mass,
    /// otherwise `None` (the caller then samples from the weights).
    pub fn flip(&self, rng: &mut SimRng) -> Option<&'a Path> {
        if self.total <= 0.0 {
            return None;
        }
        let u: f64 = rng.gen();
        if u >= self.total {
            return None;
        }
        let mut acc = 0.0;
        let mut last = None;
        for (c, m) in self.cover.paths().iter().zip(&self.masses) {
            if *m > 0.0 {
                last = Some(c);
            }
            acc += m;
            if u < acc {
                return Some(c);
            }
        }
        last
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masses_and_marginals() {
        let cover = CoveringSet::from_paths(
            vec![Path::new(vec![0, 1]), Path::new(vec![1, 2])],
            3,
        )
        .unwrap();
        let mix = CoverMixture::new(&cover, &[0.1, 0.1, 0.1]);
        assert_eq!(mix.masses(), &[0.2, 0.1]);
        assert!((mix.total() - 0.3).abs() < 1e-15);
        let m = mix.marginals(&[0.5, 0.5, 0.5]);
        assert!((m[0] - (0.35 + 0.2)).abs() < 1e-12);
        assert!((m[1] - (0.35 + 0.3)).abs() < 1e-12);
        assert!((m[2] - (0.35 + 0.1)).abs() < 1e-12);
    }

    #[test]
    fn flip_frequency() {
        let cover = CoveringSet::from_paths(vec![Path::new(vec![0]), Path::new(vec![1])], 2).unwrap();
        let mix = CoverMixture::new(&cover, &[0.25, 0.05]);
        let mut rng = crate::sim_rng(3, 2);
        let mut hits = [0usize; 3];
        for _ in 0..100_000 {
            match mix.flip(&mut rng) {
                Some(p) if p.edges() == [0] => hits[0] += 1,
                Some(_) => hits[1] += 1,
                None => hits[2] += 1,
            }
        }
        assert!((hits[0] as f64 / 1e5 - 0.25).abs() < 0.005);
        assert!((hits[1] as f64 / 1e5 - 0.05).abs() < 0.003);
    }
}
