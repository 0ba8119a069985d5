use std::fs;
use std::path::Path as FsPath;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::probing::kappa_bar;

use super::config::{Experiment, ExperimentConfig};
use super::run::RepetitionRun;

pub const CSV_FILE: &str = "regret.csv";
pub const SUMMARY_FILE: &str = "summary.json";

/// Mean and sample standard deviation (0 for a single value).
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Aggregated per-policy results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolicySummary {
    pub label: String,
    pub policy: String,
    pub final_mean: f64,
    pub final_std: f64,
    /// Final regret of each repetition.
    pub finals: Vec<f64>,
    /// Mean `N_T(e)` over repetitions.
    pub mean_plays: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_gap_regret_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stochastic_regret_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_time_mean: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seconds_per_round: Option<f64>,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config: ExperimentConfig,
    pub regret: String,
    pub edges: usize,
    pub max_path_len: usize,
    pub policies: Vec<PolicySummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa_bar: Option<f64>,
}

fn mean_of(items: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Option<Vec<f64>> = items.collect();
    v.filter(|v| !v.is_empty()).map(|v| mean_std(&v).0)
}

pub fn summarize(exp: &Experiment, runs: &[RepetitionRun]) -> Result<Summary> {
    let policies = exp
        .policies
        .iter()
        .enumerate()
        .map(|(i, plan)| {
            let mine: Vec<_> = runs.iter().map(|r| &r[i]).collect();
            let finals: Vec<f64> = mine.iter().map(|p| *p.regret.last().expect("horizon >= 1")).collect();
            let (final_mean, final_std) = mean_std(&finals);
            let n = exp.space.edge_count();
            let mean_plays = (0..n)
                .map(|e| mine.iter().map(|p| p.plays[e] as f64).sum::<f64>() / mine.len() as f64)
                .collect();
            PolicySummary {
                label: plan.label.clone(),
                policy: plan.kind.name().to_string(),
                final_mean,
                final_std,
                finals,
                mean_plays,
                edge_gap_regret_mean: mean_of(mine.iter().map(|p| p.edge_gap_regret)),
                stochastic_regret_mean: mean_of(
                    mine.iter().map(|p| p.stochastic_regret.as_ref().and_then(|s| s.last().copied())),
                ),
                cover_time_mean: mean_of(mine.iter().map(|p| p.cover_time.map(|c| c as f64))),
                seconds_per_round: mean_of(mine.iter().map(|p| p.seconds_per_round)),
            }
        })
        .collect();
    let kappa_bar = match (&exp.coverage, &exp.config.multisource) {
        (Some(cov), Some(ms)) => Some(kappa_bar(cov, &ms.path_counts, exp.config.horizon)?),
        _ => None,
    };
    Ok(Summary {
        config: exp.config.clone(),
        regret: if exp.regime.uses_pseudo_regret() { "pseudo" } else { "hindsight" }.to_string(),
        edges: exp.space.edge_count(),
        max_path_len: exp.space.max_len(),
        policies,
        kappa_bar,
    })
}

/// Writes the wide regret CSV: `round`, then per policy
/// `<label>_mean_regret`, `<label>_std_regret`, optionally
/// `<label>_stochastic_regret` (mixed regimes) and `<label>_bound`
/// (adversarial regimes).
pub fn write_csv(exp: &Experiment, runs: &[RepetitionRun], path: &FsPath) -> Result<()> {
    let io = |e: csv::Error| Error::Parse { path: path.to_path_buf(), message: e.to_string() };
    let mut w = csv::Writer::from_path(path).map_err(io)?;
    let mut header = vec!["round".to_string()];
    let bounds: Vec<Option<Vec<f64>>> = (0..exp.policies.len()).map(|i| exp.bound(i)).collect();
    let mixed = runs.first().map_or(false, |r| r.iter().any(|p| p.stochastic_regret.is_some()));
    for (plan, bound) in exp.policies.iter().zip(&bounds) {
        header.push(format!("{}_mean_regret", plan.label));
        header.push(format!("{}_std_regret", plan.label));
        if mixed {
            header.push(format!("{}_stochastic_regret", plan.label));
        }
        if bound.is_some() {
            header.push(format!("{}_bound", plan.label));
        }
    }
    w.write_record(&header).map_err(io)?;
    for (j, t) in exp.checkpoints().iter().enumerate() {
        let mut row = vec![t.to_string()];
        for (i, bound) in bounds.iter().enumerate() {
            let values: Vec<f64> = runs.iter().map(|r| r[i].regret[j]).collect();
            let (mean, std) = mean_std(&values);
            row.push(mean.to_string());
            row.push(std.to_string());
            if mixed {
                let s: Vec<f64> = runs
                    .iter()
                    .map(|r| r[i].stochastic_regret.as_ref().map_or(f64::NAN, |s| s[j]))
                    .collect();
                row.push(mean_std(&s).0.to_string());
            }
            if let Some(b) = bound {
                row.push(b[j].to_string());
            }
        }
        w.write_record(&row).map_err(io)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_summary(summary: &Summary, path: &FsPath) -> Result<()> {
    let text = serde_json::to_string_pretty(summary)
        .map_err(|e| Error::InternalInvariant(format!("summary serialisation: {e}")))?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_summary(path: &FsPath) -> Result<Summary> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse { path: path.to_path_buf(), message: e.to_string() })
}

/// Writes `regret.csv` and `summary.json` into `dir`.
pub fn write_outputs(exp: &Experiment, runs: &[RepetitionRun], dir: &FsPath) -> Result<Summary> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_csv(exp, runs, &dir.join(CSV_FILE))?;
    let summary = summarize(exp, runs)?;
    write_summary(&summary, &dir.join(SUMMARY_FILE))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_std() {
        assert_eq!(mean_std(&[3.0]), (3.0, 0.0));
        let (m, s) = mean_std(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
    }
}
