use std::sync::Arc;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::policy::{ActionSpace, Aospr, Policy, Schedules};

/// Median per-round time of one configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchPoint {
    pub n: usize,
    pub k: usize,
    pub mode: String,
    pub median_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub scaling: Vec<BenchPoint>,
    /// Growth of the per-round time for each doubling of `n`.
    pub growth: Vec<f64>,
    pub enumerated: BenchPoint,
    pub dynamic: BenchPoint,
    /// Enumerated time over DP time.
    pub speedup: f64,
}

/// Median seconds per round of AOSPR on `space` over `rounds` rounds of
/// uniform random losses, after `warmup` untimed rounds.
pub fn time_rounds(space: Arc<ActionSpace>, rounds: usize, warmup: usize, seed: u64) -> Result<f64> {
    let n = space.edge_count();
    let mut policy = Aospr::new(space, Schedules::default());
    let mut rng = crate::sim_rng(seed, 2);
    let mut loss_rng = crate::sim_rng(seed, 0);
    let mut samples = Vec::with_capacity(rounds);
    for i in 0..warmup + rounds {
        let losses: Vec<f64> = (0..n).map(|_| loss_rng.gen()).collect();
        let start = Instant::now();
        let d = policy.choose(&mut rng)?;
        policy.absorb(&d, &d.feedback(&losses))?;
        policy.end_round()?;
        if i >= warmup {
            samples.push(start.elapsed().as_secs_f64());
        }
    }
    samples.sort_by(f64::total_cmp);
    Ok(samples[samples.len() / 2])
}

/// Scaling of the subset sampler at `k = 6`, `n ∈ {48, 96, 192}`, and the
/// DP sampler against path enumeration at `(n, k) = (24, 4)`.
pub fn bench(rounds: usize, seed: u64) -> Result<BenchReport> {
    let warmup = (rounds / 10).max(5);
    let scaling = [48, 96, 192]
        .iter()
        .map(|&n| {
            let space = Arc::new(ActionSpace::subset(n, 6)?);
            Ok(BenchPoint { n, k: 6, mode: "dp".into(), median_seconds: time_rounds(space, rounds, warmup, seed)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let growth = scaling.windows(2).map(|w| w[1].median_seconds / w[0].median_seconds).collect();
    let dp_space = Arc::new(ActionSpace::subset(24, 4)?);
    let enum_space = Arc::new(dp_space.to_enumerated(usize::MAX)?);
    let dynamic = BenchPoint {
        n: 24,
        k: 4,
        mode: "dp".into(),
        median_seconds: time_rounds(dp_space, rounds, warmup, seed)?,
    };
    let enumerated = BenchPoint {
        n: 24,
        k: 4,
        mode: "enumerate".into(),
        median_seconds: time_rounds(enum_space, rounds, warmup, seed)?,
    };
    let speedup = enumerated.median_seconds / dynamic.median_seconds;
    Ok(BenchReport { scaling, growth, enumerated, dynamic, speedup })
}
