//! Weight pushing over a DAG: samples source-destination paths with
//! probability proportional to the product of their edge weights.

use rand::Rng;

use crate::graph::{Dag, Path};
use crate::numeric::{log_add, log_sum_exp};
use crate::SimRng;

/// Backward (`ln Z`) and forward (`ln F`) path-weight sums per vertex.
#[derive(Debug, Clone)]
pub struct PushedWeights {
    log_w: Vec<f64>,
    log_z: Vec<f64>,
    log_f: Vec<f64>,
}

/// Runs both passes over the topological order. `log_w[e] = ln w(e)`.
pub fn push_weights(dag: &Dag, log_w: &[f64]) -> PushedWeights {
    let v = dag.vertex_count();
    let mut log_z = vec![f64::NEG_INFINITY; v];
    log_z[dag.destination()] = 0.0;
    for &u in dag.topological_order().iter().rev() {
        if u == dag.destination() {
            continue;
        }
        log_z[u] = log_sum_exp(
            dag.out_edges(u).iter().map(|&e| log_w[e] + log_z[dag.endpoints(e).1]),
        );
    }
    let mut log_f = vec![f64::NEG_INFINITY; v];
    log_f[dag.source()] = 0.0;
    for &u in dag.topological_order() {
        if u == dag.source() {
            continue;
        }
        let mut acc = f64::NEG_INFINITY;
        for &e in dag.in_edges(u) {
            acc = log_add(acc, log_f[dag.endpoints(e).0] + log_w[e]);
        }
        log_f[u] = acc;
    }
    PushedWeights { log_w: log_w.to_vec(), log_z, log_f }
}

impl PushedWeights {
    /// `ln Z`: log of the summed weight of all paths.
    pub fn log_total(&self, dag: &Dag) -> f64 {
        self.log_z[dag.source()]
    }

    pub fn log_backward(&self, vertex: usize) -> f64 {
        self.log_z[vertex]
    }

    pub fn log_forward(&self, vertex: usize) -> f64 {
        self.log_f[vertex]
    }

    /// `ln(∏w / Z)` of a path given as edge ids.
    pub fn log_prob(&self, dag: &Dag, path: &[usize]) -> f64 {
        path.iter().map(|&e| self.log_w[e]).sum::<f64>() - self.log_total(dag)
    }

    /// Walks from the source, taking out-edge `e` of `u` with probability
    /// `w(e)·Z(head) / Z(u)`.
    pub fn sample(&self, dag: &Dag, rng: &mut SimRng) -> Path {
        let mut edges = Vec::new();
        let mut at = dag.source();
        while at != dag.destination() {
            let outs = dag.out_edges(at);
            let mut u: f64 = rng.gen();
            let mut pick = None;
            for &e in outs {
                let p = (self.log_w[e] + self.log_z[dag.endpoints(e).1] - self.log_z[at]).exp();
                if p > 0.0 {
                    pick = Some(e);
                }
                if u < p {
                    break;
                }
                u -= p;
            }
            let e = pick.expect("every retained vertex reaches the destination");
            edges.push(e);
            at = dag.endpoints(e).1;
        }
        Path::new(edges)
    }

    /// Probability that a weight-proportional path uses edge `e`:
    /// `F(tail)·w(e)·Z(head) / Z(s)`.
    pub fn weight_marginal(&self, dag: &Dag, e: usize) -> f64 {
        let (tail, head) = dag.endpoints(e);
        (self.log_f[tail] + self.log_w[e] + self.log_z[head] - self.log_total(dag)).exp().min(1.0)
    }

    pub fn weight_marginals(&self, dag: &Dag) -> Vec<f64> {
        (0..dag.edge_count()).map(|e| self.weight_marginal(dag, e)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{enumerate_paths, generators};

    #[test]
    fn diamond_uniform_and_skewed() {
        let dag = generators::diamond();
        let paths = enumerate_paths(&dag, 100).unwrap();
        let pw = push_weights(&dag, &[0.0; 4]);
        for p in paths.paths() {
            assert!((pw.log_prob(&dag, p.edges()).exp() - 0.5).abs() < 1e-12);
        }
        let first = paths.get(0).edges().to_vec();
        let mut lw = vec![0.0; 4];
        lw[first[0]] = 3f64.ln();
        let pw = push_weights(&dag, &lw);
        assert!((pw.log_prob(&dag, &first).exp() - 0.75).abs() < 1e-12);
        assert!((pw.log_prob(&dag, paths.get(1).edges()).exp() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn sampling_matches_exact_probabilities() {
        let dag = generators::complete_layers(&[3, 2]).unwrap();
        let paths = enumerate_paths(&dag, 100).unwrap();
        let lw: Vec<f64> = (0..dag.edge_count()).map(|e| ((e * 7) % 5) as f64 * 0.3 - 0.5).collect();
        let pw = push_weights(&dag, &lw);
        let exact: Vec<f64> = paths.paths().iter().map(|p| pw.log_prob(&dag, p.edges()).exp()).collect();
        assert!((exact.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let mut rng = crate::sim_rng(5, 2);
        let draws = 100_000;
        let mut counts = vec![0usize; paths.len()];
        for _ in 0..draws {
            let p = pw.sample(&dag, &mut rng);
            counts[paths.position(&p).unwrap()] += 1;
        }
        for (c, p) in counts.iter().zip(&exact) {
            let sigma = (draws as f64 * p * (1.0 - p)).sqrt();
            assert!((*c as f64 - draws as f64 * p).abs() < 3.5 * sigma.max(1.0));
        }
        for e in 0..dag.edge_count() {
            let brute: f64 = paths.paths().iter().zip(&exact).filter(|(p, _)| p.contains(e)).map(|(_, q)| q).sum();
            assert!((pw.weight_marginal(&dag, e) - brute).abs() < 1e-12);
        }
    }
}
