use serde::{Deserialize, Serialize};

/// `β_t = ½·√(ln n / (t·n))`.
pub fn beta(t: u64, n: usize) -> f64 {
    0.5 * ((n as f64).ln() / (t as f64 * n as f64)).sqrt()
}

/// How `ξ_t(e)` is computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Exploration {
    /// `c·ln(tΔ²)/(tΔ²)` with the true gaps.
    KnownGap { c: f64, gaps: Vec<f64> },
    /// `c·(ln t)²/(t·Δ̂_{t−1}²)` with the empirical gaps.
    EmpiricalAvg { c: f64 },
    /// `ln(tΔ̂²)/(32·t·Δ̂²)` with the empirical gaps.
    Tuned,
    Zero,
}

impl Default for Exploration {
    fn default() -> Self {
        Exploration::EmpiricalAvg { c: DEFAULT_C }
    }
}

pub const DEFAULT_C: f64 = 18.0;

fn ratio_or_inf(num: f64, gap: f64, t: f64) -> f64 {
    if gap <= 0.0 {
        f64::INFINITY
    } else {
        num / (t * gap * gap)
    }
}

/// `ξ_t(e)`, floored at 0. A zero gap gives `+∞`.
///
/// `gap_estimates` are the empirical gaps after round `t − 1`.
pub fn xi(variant: &Exploration, t: u64, e: usize, gap_estimates: &[f64]) -> f64 {
    let tf = t as f64;
    let v = match variant {
        Exploration::KnownGap { c, gaps } => {
            let g = gaps[e];
            if g <= 0.0 {
                f64::INFINITY
            } else {
                c * (tf * g * g).ln() / (tf * g * g)
            }
        }
        Exploration::EmpiricalAvg { c } => {
            let lt = tf.ln();
            ratio_or_inf(c * lt * lt, gap_estimates[e], tf)
        }
        Exploration::Tuned => {
            let g = gap_estimates[e];
            if g <= 0.0 {
                f64::INFINITY
            } else {
                (tf * g * g).ln() / (32.0 * tf * g * g)
            }
        }
        Exploration::Zero => 0.0,
    };
    v.max(0.0)
}

/// `min{1/(2n), β, ξ}`.
pub fn epsilon(n: usize, beta: f64, xi: f64) -> f64 {
    (0.5 / n as f64).min(beta).min(xi)
}

/// Learning-rate rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum EtaRule {
    /// `η_t = β_t` (scaled by `√rate` under multi-path probing).
    #[default]
    Beta,
    /// Constant `η`, raised to `β_t` whenever it would fall below it.
    Fixed(f64),
}

impl EtaRule {
    /// Parses `"beta"` or `"fixed:<value>"`.
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim() {
            "beta" => Some(EtaRule::Beta),
            other => {
                let v: f64 = other.strip_prefix("fixed:")?.trim().parse().ok()?;
                (v.is_finite() && v > 0.0).then_some(EtaRule::Fixed(v))
            }
        }
    }
}

/// Every parameter schedule of the learner.
///
/// `rate` is the number of paths probed per round (1 without probing). It
/// speeds up the learning rate by `√rate` and divides `ξ` by `rate`.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedules {
    pub exploration: Exploration,
    pub eta: EtaRule,
    pub rate: f64,
}

impl Default for Schedules {
    fn default() -> Self {
        Schedules { exploration: Exploration::default(), eta: EtaRule::Beta, rate: 1.0 }
    }
}

impl Schedules {
    pub fn new(exploration: Exploration, eta: EtaRule) -> Self {
        Schedules { exploration, eta, rate: 1.0 }
    }

    pub fn with_rate(mut self, rate: f64) -> Self {
        self.rate = rate.max(1.0);
        self
    }

    pub fn beta(&self, t: u64, n: usize) -> f64 {
        beta(t, n)
    }

    pub fn eta(&self, t: u64, n: usize) -> f64 {
        let b = beta(t, n);
        match self.eta {
            EtaRule::Beta => b * self.rate.sqrt(),
            EtaRule::Fixed(v) => v.max(b),
        }
    }

    pub fn xi(&self, t: u64, e: usize, gap_estimates: &[f64]) -> f64 {
        xi(&self.exploration, t, e, gap_estimates) / self.rate
    }

    /// `ε_t(e)` for every edge.
    pub fn epsilons(&self, t: u64, n: usize, gap_estimates: &[f64]) -> Vec<f64> {
        let b = beta(t, n);
        (0..n).map(|e| epsilon(n, b, self.xi(t, e, gap_estimates))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_examples() {
        assert!((beta(1, 4) - 0.294_353_5).abs() < 1e-6);
        assert!((beta(4, 4) - 0.147_176_7).abs() < 1e-6);
        for t in [1u64, 3, 17, 1000] {
            assert!((beta(4 * t, 9) - beta(t, 9) / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn xi_examples() {
        let known = Exploration::KnownGap { c: 18.0, gaps: vec![0.5, 0.1, 0.0] };
        assert!((xi(&known, 100, 0, &[]) - 18.0 * 25f64.ln() / 25.0).abs() < 1e-12);
        assert!((xi(&known, 100, 0, &[]) - 2.3176).abs() < 1e-4);
        assert_eq!(xi(&known, 100, 1, &[]), 0.0);
        assert_eq!(xi(&known, 50, 1, &[]), 0.0);
        assert_eq!(xi(&known, 5, 2, &[]), f64::INFINITY);

        let avg = Exploration::EmpiricalAvg { c: 18.0 };
        let t = std::f64::consts::E;
        let direct = 18.0 * t.ln().powi(2) / (t * 1.0);
        assert!((direct - 6.6218).abs() < 1e-4);
        assert_eq!(xi(&avg, 10, 0, &[0.0]), f64::INFINITY);
        assert!((xi(&avg, 10, 0, &[0.5]) - 18.0 * 10f64.ln().powi(2) / 2.5).abs() < 1e-12);

        assert_eq!(xi(&Exploration::Tuned, 10, 0, &[0.1]), 0.0);
        assert!(xi(&Exploration::Tuned, 1000, 0, &[0.1]) > 0.0);
    }

    #[test]
    fn epsilon_examples() {
        assert!((epsilon(4, beta(1, 4), 10.0) - 0.125).abs() < 1e-15);
        assert_eq!(epsilon(4, beta(1, 4), 0.0), 0.0);
        assert!((epsilon(6, beta(1, 6), 1e9) - 1.0 / 12.0).abs() < 1e-15);
        let s = Schedules::default();
        assert!(s.epsilons(3, 6, &[0.0; 6]).iter().sum::<f64>() <= 0.5);
    }

    #[test]
    fn eta_rules() {
        assert_eq!(EtaRule::parse("beta"), Some(EtaRule::Beta));
        assert_eq!(EtaRule::parse("fixed:0.25"), Some(EtaRule::Fixed(0.25)));
        assert_eq!(EtaRule::parse("fixed:-1"), None);
        let s = Schedules::new(Exploration::Zero, EtaRule::Fixed(0.01));
        for t in 1..1000 {
            assert!(s.eta(t, 6) >= beta(t, 6));
        }
        let fast = Schedules::default().with_rate(4.0);
        assert!((fast.eta(10, 6) - 2.0 * beta(10, 6)).abs() < 1e-15);
    }
}
