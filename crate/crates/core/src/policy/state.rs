use crate::error::{Error, Result};
use crate::graph::Path;

/// Learner statistics after `round` completed rounds.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyState {
    round: u64,
    cumulative: Vec<f64>,
    plays: Vec<u64>,
    gaps: Vec<f64>,
}

impl PolicyState {
    pub fn new(n: usize) -> Self {
        PolicyState { round: 0, cumulative: vec![0.0; n], plays: vec![0; n], gaps: vec![0.0; n] }
    }

    /// Completed rounds; the next round is `round() + 1`.
    pub fn round(&self) -> u64 {
        self.round
    }

    /// `L̃(e)`.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    /// `N(e)`.
    pub fn plays(&self) -> &[u64] {
        &self.plays
    }

    /// `Δ̂(e)` as of the last completed round.
    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn edge_count(&self) -> usize {
        self.cumulative.len()
    }

    pub(crate) fn add_estimate(&mut self, edge: usize, value: f64) {
        self.cumulative[edge] += value;
    }

    pub(crate) fn add_play(&mut self, edge: usize) {
        self.plays[edge] += 1;
    }

    /// Closes the round and refreshes the gap estimates.
    pub(crate) fn advance(&mut self) {
        self.round += 1;
        self.gaps = estimate_gaps(&self.cumulative, self.round);
    }

    /// Adds `estimates`, counts a play of each edge of `chosen` and closes the
    /// round.
    pub fn update(&mut self, estimates: &[f64], chosen: &Path) {
        for (e, v) in estimates.iter().enumerate() {
            self.cumulative[e] += v;
        }
        for &e in chosen.edges() {
            self.plays[e] += 1;
        }
        self.advance();
    }
}

/// `Δ̂(e) = min{1, (L̃(e) − min L̃)/t}`; 0 for every edge before round 1.
pub fn estimate_gaps(cumulative: &[f64], t: u64) -> Vec<f64> {
    if t == 0 {
        return vec![0.0; cumulative.len()];
    }
    let min = cumulative.iter().copied().fold(f64::INFINITY, f64::min);
    cumulative.iter().map(|l| ((l - min) / t as f64).clamp(0.0, 1.0)).collect()
}

/// `ℓ̃(e) = ℓ(e)/ρ̃(e)` on the chosen path, 0 elsewhere. `losses` and
/// `marginals` are indexed by edge id.
pub fn estimate_losses(chosen: &Path, losses: &[f64], marginals: &[f64]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; marginals.len()];
    for &e in chosen.edges() {
        out[e] = importance_weight(e, losses[e], marginals[e])?;
    }
    Ok(out)
}

pub(crate) fn importance_weight(edge: usize, loss: f64, prob: f64) -> Result<f64> {
    if loss == 0.0 {
        return Ok(0.0);
    }
    if !(prob > 0.0) {
        return Err(Error::DivisionByZero { edge });
    }
    Ok(loss / prob)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gap_examples() {
        let g = estimate_gaps(&[8.0, 3.0, 5.0], 10);
        assert!((g[0] - 0.5).abs() < 1e-15);
        assert_eq!(g[1], 0.0);
        assert_eq!(estimate_gaps(&[4.0, 4.0], 3), vec![0.0, 0.0]);
        assert_eq!(estimate_gaps(&[10.0, 0.0], 2)[0], 1.0);
    }

    #[test]
    fn estimate_examples() {
        let p = Path::new(vec![0, 2]);
        let est = estimate_losses(&p, &[0.5, 0.9, 0.0], &[0.25, 0.5, 0.0]).unwrap();
        assert_eq!(est, vec![2.0, 0.0, 0.0]);
        assert!(matches!(
            estimate_losses(&p, &[0.5, 0.0, 1.0], &[0.5, 0.5, 0.0]),
            Err(Error::DivisionByZero { edge: 2 })
        ));
    }

    #[test]
    fn update_examples() {
        let mut s = PolicyState::new(3);
        s.update(&[0.0; 3], &Path::new(vec![0]));
        assert_eq!(s.cumulative(), &[0.0; 3]);
        assert_eq!(s.round(), 1);
        s.update(&[0.0, 2.0, 0.0], &Path::new(vec![1]));
        assert_eq!(s.cumulative()[1], 2.0);
        assert_eq!(s.plays(), &[1, 1, 0]);
        assert_eq!(s.gaps()[1], 1.0);
    }
}
