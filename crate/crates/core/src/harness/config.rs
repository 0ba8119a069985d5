use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::environment::{
    AdaptiveAttacker, Adversary, AttackRule, ContaminatedSpec, ContaminationPlan,
    ContaminationValue, LossDistribution, MixedSpec, ObliviousSchedule, Regime, StochasticSpec,
};
use crate::error::{Error, Result};
use crate::graph::{generators, Dag, GraphFile};
use crate::policy::{ActionSpace, EtaRule, Exploration, Schedules, DEFAULT_C};
use crate::probing::{auto_batch_size, load_coverage_csv, DelayRule, Perturbation, ProbeConfig};

pub const DEFAULT_PATH_CAP: usize = 100_000;

fn default_repetitions() -> usize {
    10
}

fn default_path_cap() -> usize {
    DEFAULT_PATH_CAP
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("results")
}

/// Top-level experiment description, as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphConfig>,
    #[serde(default)]
    pub action_space: ActionSpaceConfig,
    #[serde(default = "default_path_cap")]
    pub path_cap: usize,
    pub regime: RegimeConfig,
    pub policies: Vec<PolicyConfig>,
    pub horizon: u64,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default)]
    pub record_timing: bool,
    /// Emit every `csv_stride`-th round (plus the last) in the CSV.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_stride: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multisource: Option<MultiSourceConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphConfig {
    File(PathBuf),
    Generator(GeneratorConfig),
    Inline(GraphFile),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorConfig {
    Diamond,
    ParallelChains { chains: usize, length: usize },
    Layered { width: usize, layers: usize },
    Series { widths: Vec<usize> },
    CompleteLayers { widths: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ActionSpaceConfig {
    /// Enumerate the DAG's paths when there are at most `path_cap` of them,
    /// otherwise sample on the DAG.
    #[default]
    Auto,
    Enumerate,
    Dag,
    Subset { n: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleConfig {
    Constant(f64),
    Alternating,
    Table(Vec<Vec<f64>>),
    TableCsv(PathBuf),
    Sinusoid { period: f64, amplitude: f64, levels: usize },
    Switching { segment: u64, means: Vec<Vec<f64>> },
}

fn default_hit() -> f64 {
    1.0
}

fn default_baseline() -> f64 {
    0.1
}

fn default_density() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdversaryConfig {
    Oblivious(ScheduleConfig),
    Adaptive {
        memory: usize,
        #[serde(default = "default_hit")]
        hit: f64,
        #[serde(default = "default_baseline")]
        baseline: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegimeConfig {
    Stochastic {
        means: Vec<f64>,
        #[serde(default)]
        distribution: LossDistribution,
    },
    Oblivious {
        schedule: ScheduleConfig,
    },
    Adaptive {
        memory: usize,
        #[serde(default = "default_hit")]
        hit: f64,
        #[serde(default = "default_baseline")]
        baseline: f64,
    },
    Mixed {
        means: Vec<f64>,
        #[serde(default)]
        distribution: LossDistribution,
        attacked: Vec<usize>,
        adversary: AdversaryConfig,
    },
    Contaminated {
        means: Vec<f64>,
        #[serde(default)]
        distribution: LossDistribution,
        zeta: f64,
        onset: u64,
        /// Last contaminated round; defaults to the horizon.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        until: Option<u64>,
        #[serde(default = "default_density")]
        density: f64,
        #[serde(default)]
        value: ContaminationValue,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    Aospr,
    Exp3Path,
    Combucb1,
    Oracle,
}

impl PolicyKind {
    pub fn name(self) -> &'static str {
        match self {
            PolicyKind::Aospr => "aospr",
            PolicyKind::Exp3Path => "exp3_path",
            PolicyKind::Combucb1 => "combucb1",
            PolicyKind::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum VariantName {
    KnownGap,
    #[default]
    EmpiricalAvg,
    Tuned,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BatchSizeConfig {
    Fixed(u64),
    Named(BatchKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BatchKeyword {
    Auto,
}

fn default_eta_rule() -> String {
    "beta".into()
}

fn default_budget() -> usize {
    1
}

fn is_default<T: Default + PartialEq>(v: &T) -> bool {
    *v == T::default()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicyConfig {
    pub policy: PolicyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    #[serde(default)]
    pub variant: VariantName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default = "default_eta_rule")]
    pub eta_rule: String,
    #[serde(default = "default_budget")]
    pub probe_budget: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub link_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub perturb: Perturbation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delay: Option<DelayRule>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub minibatch: Option<BatchSizeConfig>,
    #[serde(default, skip_serializing_if = "is_default")]
    pub cold_start: bool,
}

impl PolicyConfig {
    pub fn label(&self) -> String {
        self.label.clone().unwrap_or_else(|| self.policy.name().to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiSourceConfig {
    /// `C_es` inline (rows are edges) ...
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage: Option<Vec<Vec<u8>>>,
    /// ... or from a CSV file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coverage_csv: Option<PathBuf>,
    /// `k_s` per pair.
    pub path_counts: Vec<usize>,
}

/// A validated policy description.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyPlan {
    pub kind: PolicyKind,
    pub label: String,
    pub schedules: Schedules,
    pub probe: ProbeConfig,
    pub delay: Option<DelayRule>,
    pub minibatch: Option<u64>,
    pub cold_start: bool,
}

/// Everything needed to simulate, resolved from an [`ExperimentConfig`].
#[derive(Debug, Clone)]
pub struct Experiment {
    pub config: ExperimentConfig,
    pub dag: Option<Dag>,
    pub space: Arc<ActionSpace>,
    pub regime: Regime,
    pub policies: Vec<PolicyPlan>,
    pub coverage: Option<Vec<Vec<bool>>>,
}

/// Parses JSON text, reporting the failing field path.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::config(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
    })
}

pub fn parse_config_value(value: Value) -> Result<ExperimentConfig> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        Error::config(if path == "." { "<root>".to_string() } else { path }, e.into_inner().to_string())
    })
}

/// Reads a config file. Relative file references inside it are resolved
/// against the file's directory.
pub fn load_config(path: &FsPath) -> Result<ExperimentConfig> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut cfg = parse_config(&text)?;
    let base = path.parent().unwrap_or(FsPath::new(""));
    cfg.resolve_paths(base);
    Ok(cfg)
}

fn rebase(base: &FsPath, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl ExperimentConfig {
    /// Makes relative file references absolute with respect to `base`.
    pub fn resolve_paths(&mut self, base: &FsPath) {
        if let Some(GraphConfig::File(p)) = &mut self.graph {
            rebase(base, p);
        }
        let schedule = match &mut self.regime {
            RegimeConfig::Oblivious { schedule } => Some(schedule),
            RegimeConfig::Mixed { adversary: AdversaryConfig::Oblivious(s), .. } => Some(s),
            _ => None,
        };
        if let Some(ScheduleConfig::TableCsv(p)) = schedule {
            rebase(base, p);
        }
        if let Some(MultiSourceConfig { coverage_csv: Some(p), .. }) = &mut self.multisource {
            rebase(base, p);
        }
        rebase(base, &mut self.output_dir);
    }

    pub fn build(&self) -> Result<Experiment> {
        if self.horizon == 0 {
            return Err(Error::config("horizon", "must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(Error::config("repetitions", "must be at least 1"));
        }
        if self.policies.is_empty() {
            return Err(Error::config("policies", "at least one policy is required"));
        }
        if self.threads == Some(0) {
            return Err(Error::config("threads", "must be at least 1"));
        }
        if self.csv_stride == Some(0) {
            return Err(Error::config("csv_stride", "must be at least 1"));
        }
        let dag = self.graph.as_ref().map(build_graph).transpose()?;
        let space = Arc::new(self.build_space(dag.as_ref())?);
        let regime = self.build_regime(space.edge_count())?;
        let mut labels = std::collections::HashSet::new();
        let policies = self
            .policies
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let plan = self.build_policy(i, p, &space, &regime)?;
                if !labels.insert(plan.label.clone()) {
                    return Err(Error::config(format!("policies[{i}].label"), "duplicate label"));
                }
                Ok(plan)
            })
            .collect::<Result<Vec<_>>>()?;
        let coverage = self.multisource.as_ref().map(|m| build_coverage(m, space.edge_count())).transpose()?;
        Ok(Experiment { config: self.clone(), dag, space, regime, policies, coverage })
    }

    fn build_space(&self, dag: Option<&Dag>) -> Result<ActionSpace> {
        match (&self.action_space, dag) {
            (ActionSpaceConfig::Subset { n, k }, _) => ActionSpace::subset(*n, *k),
            (_, None) => Err(Error::config("graph", "a graph is required unless action_space is subset")),
            (ActionSpaceConfig::Dag, Some(d)) => Ok(ActionSpace::dag(d.clone())),
            (ActionSpaceConfig::Enumerate, Some(d)) => {
                ActionSpace::dag(d.clone()).to_enumerated(self.path_cap)
            }
            (ActionSpaceConfig::Auto, Some(d)) => {
                let space = ActionSpace::dag(d.clone());
                if d.count_paths() <= self.path_cap as u128 {
                    space.to_enumerated(self.path_cap)
                } else {
                    Ok(space)
                }
            }
        }
    }

    fn build_regime(&self, n: usize) -> Result<Regime> {
        let stochastic = |means: &Vec<f64>, dist: &LossDistribution| -> Result<StochasticSpec> {
            if means.len() != n {
                return Err(Error::config("regime.means", format!("{} means for {n} edges", means.len())));
            }
            StochasticSpec::new(means.clone(), *dist).map_err(|e| prefix(e, "regime"))
        };
        Ok(match &self.regime {
            RegimeConfig::Stochastic { means, distribution } => {
                Regime::Stochastic(stochastic(means, distribution)?)
            }
            RegimeConfig::Oblivious { schedule } => {
                Regime::Oblivious(build_schedule(schedule, n, "regime.schedule")?)
            }
            RegimeConfig::Adaptive { memory, hit, baseline } => {
                Regime::Adaptive(build_attacker(*memory, *hit, *baseline, "regime")?)
            }
            RegimeConfig::Mixed { means, distribution, attacked, adversary } => {
                let adv = match adversary {
                    AdversaryConfig::Oblivious(s) => {
                        Adversary::Oblivious(build_schedule(s, n, "regime.adversary.oblivious")?)
                    }
                    AdversaryConfig::Adaptive { memory, hit, baseline } => Adversary::Adaptive(
                        build_attacker(*memory, *hit, *baseline, "regime.adversary.adaptive")?,
                    ),
                };
                Regime::Mixed(
                    MixedSpec::new(stochastic(means, distribution)?, attacked, adv)
                        .map_err(|e| prefix(e, "regime"))?,
                )
            }
            RegimeConfig::Contaminated { means, distribution, zeta, onset, until, density, value } => {
                let plan = ContaminationPlan {
                    zeta: *zeta,
                    onset: *onset,
                    until: until.unwrap_or(self.horizon),
                    density: *density,
                    value: *value,
                };
                if let ContaminationValue::Fixed(v) = value {
                    if !(0.0..=1.0).contains(v) {
                        return Err(Error::config("regime.value", "must lie in [0, 1]"));
                    }
                }
                Regime::Contaminated(
                    ContaminatedSpec::greedy(stochastic(means, distribution)?, plan)
                        .map_err(|e| prefix(e, "regime"))?,
                )
            }
        })
    }

    fn build_policy(
        &self,
        i: usize,
        p: &PolicyConfig,
        space: &ActionSpace,
        regime: &Regime,
    ) -> Result<PolicyPlan> {
        let at = |field: &str| format!("policies[{i}].{field}");
        let c = p.c.unwrap_or(DEFAULT_C);
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::config(at("c"), "must be positive"));
        }
        let exploration = match p.variant {
            VariantName::KnownGap => {
                let spec = regime.stochastic_part().ok_or_else(|| {
                    Error::config(at("variant"), "known_gap needs a regime with known means")
                })?;
                Exploration::KnownGap { c, gaps: spec.gaps() }
            }
            VariantName::EmpiricalAvg => Exploration::EmpiricalAvg { c },
            VariantName::Tuned => Exploration::Tuned,
            VariantName::Zero => Exploration::Zero,
        };
        let eta = EtaRule::parse(&p.eta_rule)
            .ok_or_else(|| Error::config(at("eta_rule"), "expected \"beta\" or \"fixed:<positive>\""))?;
        let probe = ProbeConfig { paths: p.probe_budget, link_rate: p.link_rate, perturb: p.perturb };
        probe.validate(space.path_count()).map_err(|e| prefix(e, &at("probe_budget")))?;
        if let Some(m) = p.link_rate {
            if !(m >= 1.0 && m <= space.edge_count() as f64) {
                return Err(Error::config(at("link_rate"), "must lie in [1, n]"));
            }
        }
        if let Some(d) = &p.delay {
            d.validate(space.edge_count()).map_err(|e| prefix(e, &at("delay")))?;
        }
        let minibatch = match p.minibatch {
            None => None,
            Some(BatchSizeConfig::Fixed(0)) => {
                return Err(Error::config(at("minibatch"), "must be at least 1"))
            }
            Some(BatchSizeConfig::Fixed(b)) => Some(b),
            Some(BatchSizeConfig::Named(BatchKeyword::Auto)) => {
                Some(auto_batch_size(space.max_len(), space.edge_count(), self.horizon))
            }
        };
        let wrapped = p.delay.is_some() || minibatch.is_some() || p.cold_start;
        let probing = p.probe_budget > 1 || p.link_rate.is_some() || p.perturb != Perturbation::default();
        match p.policy {
            PolicyKind::Aospr => {}
            PolicyKind::Exp3Path => {
                if space.path_count() > self.path_cap as u128 {
                    return Err(Error::PathExplosion { count: space.path_count(), cap: self.path_cap });
                }
            }
            PolicyKind::Oracle => {
                if !regime.is_oblivious() {
                    return Err(Error::config(
                        at("policy"),
                        "the oracle needs a loss sequence that does not depend on the learner",
                    ));
                }
            }
            PolicyKind::Combucb1 => {}
        }
        if p.policy != PolicyKind::Aospr && probing {
            return Err(Error::config(at("probe_budget"), "multi-path probing is only available for aospr"));
        }
        if p.policy == PolicyKind::Oracle && wrapped {
            return Err(Error::config(at("policy"), "the oracle cannot be wrapped"));
        }
        if p.cold_start && p.probe_budget < 1 {
            return Err(Error::config(at("cold_start"), "needs a probe budget"));
        }
        let mut schedules = Schedules::new(exploration, eta);
        if p.policy == PolicyKind::Aospr {
            schedules = schedules.with_rate(p.probe_budget as f64);
        }
        Ok(PolicyPlan {
            kind: p.policy,
            label: p.label(),
            schedules,
            probe,
            delay: p.delay.clone(),
            minibatch,
            cold_start: p.cold_start,
        })
    }
}

fn prefix(e: Error, path: &str) -> Error {
    match e {
        Error::Config { path: inner, message } => Error::config(format!("{path}.{inner}"), message),
        other => other,
    }
}

fn build_graph(g: &GraphConfig) -> Result<Dag> {
    Ok(match g {
        GraphConfig::File(p) => GraphFile::load(p)?.build()?.0,
        GraphConfig::Inline(f) => f.build()?.0,
        GraphConfig::Generator(gen) => match gen {
            GeneratorConfig::Diamond => generators::diamond(),
            GeneratorConfig::ParallelChains { chains, length } => {
                generators::parallel_chains(*chains, *length)?
            }
            GeneratorConfig::Layered { width, layers } => generators::layered(*width, *layers)?,
            GeneratorConfig::Series { widths } => generators::series(widths)?,
            GeneratorConfig::CompleteLayers { widths } => generators::complete_layers(widths)?,
        },
    })
}

fn build_schedule(s: &ScheduleConfig, n: usize, at: &str) -> Result<ObliviousSchedule> {
    let check_rows = |rows: &Vec<Vec<f64>>| -> Result<()> {
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::config(format!("{at}[{i}]"), format!("expected {n} entries")));
        }
        Ok(())
    };
    Ok(match s {
        ScheduleConfig::Constant(v) => ObliviousSchedule::Constant(*v),
        ScheduleConfig::Alternating => ObliviousSchedule::Alternating,
        ScheduleConfig::Table(rows) => {
            check_rows(rows)?;
            ObliviousSchedule::Table(Arc::new(rows.clone()))
        }
        ScheduleConfig::TableCsv(p) => {
            let sched = ObliviousSchedule::table_from_csv(p)?;
            if let ObliviousSchedule::Table(rows) = &sched {
                check_rows(rows)?;
            }
            sched
        }
        ScheduleConfig::Sinusoid { period, amplitude, levels } => {
            if !(*period > 0.0) || *levels < 2 {
                return Err(Error::config(at, "sinusoid needs period > 0 and levels >= 2"));
            }
            ObliviousSchedule::Sinusoid { period: *period, amplitude: *amplitude, levels: *levels }
        }
        ScheduleConfig::Switching { segment, means } => {
            check_rows(means)?;
            if means.is_empty() || *segment == 0 {
                return Err(Error::config(at, "switching needs phases and a positive segment"));
            }
            if means.iter().flatten().any(|m| !(0.0..=1.0).contains(m)) {
                return Err(Error::config(at, "phase means must lie in [0, 1]"));
            }
            ObliviousSchedule::Switching { segment: *segment, means: Arc::new(means.clone()) }
        }
    })
}

fn build_attacker(memory: usize, hit: f64, baseline: f64, at: &str) -> Result<AdaptiveAttacker> {
    if !(0.0..=1.0).contains(&hit) || !(0.0..=1.0).contains(&baseline) {
        return Err(Error::config(at, "attack losses must lie in [0, 1]"));
    }
    Ok(AdaptiveAttacker { memory, rule: AttackRule::Retaliation { hit, baseline } })
}

fn build_coverage(m: &MultiSourceConfig, n: usize) -> Result<Vec<Vec<bool>>> {
    let rows = match (&m.coverage, &m.coverage_csv) {
        (Some(rows), None) => rows
            .iter()
            .enumerate()
            .map(|(e, r)| {
                r.iter()
                    .map(|&v| match v {
                        0 => Ok(false),
                        1 => Ok(true),
                        _ => Err(Error::config(format!("multisource.coverage[{e}]"), "entries must be 0 or 1")),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?,
        (None, Some(p)) => load_coverage_csv(p)?,
        _ => {
            return Err(Error::config("multisource", "give exactly one of coverage or coverage_csv"))
        }
    };
    if rows.len() != n {
        return Err(Error::config("multisource.coverage", format!("{} rows for {n} edges", rows.len())));
    }
    let s = m.path_counts.len();
    if s == 0 || m.path_counts.contains(&0) {
        return Err(Error::config("multisource.path_counts", "need positive path counts"));
    }
    if let Some(e) = rows.iter().position(|r| r.len() != s) {
        return Err(Error::config(format!("multisource.coverage[{e}]"), format!("expected {s} columns")));
    }
    if let Some(edge) = rows.iter().position(|r| !r.iter().any(|&c| c)) {
        return Err(Error::InfeasibleCover { edge });
    }
    Ok(rows)
}

/// Sets a dotted path (`policies.0.c`) inside a JSON document. Missing
/// object keys are created.
pub fn set_json_path(doc: &mut Value, key: &str, value: Value) -> Result<()> {
    let mut at = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        let last = i + 1 == parts.len();
        at = match at {
            Value::Array(items) => {
                let idx: usize = part
                    .parse()
                    .map_err(|_| Error::config(key, format!("{part:?} is not an array index")))?;
                let len = items.len();
                items.get_mut(idx).ok_or_else(|| {
                    Error::config(key, format!("index {idx} out of range for {len} items"))
                })?
            }
            Value::Object(map) => {
                if last {
                    map.insert(part.to_string(), Value::Null);
                }
                map.entry(part.to_string()).or_insert_with(|| Value::Object(Default::default()))
            }
            _ => return Err(Error::config(key, format!("cannot descend into {part:?}"))),
        };
        if last {
            *at = value;
            return Ok(());
        }
    }
    Ok(())
}

/// Interprets a sweep value: JSON if it parses, a plain string otherwise.
pub fn sweep_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASIC: &str = r#"{
        "graph": {"generator": {"kind": "parallel_chains", "chains": 3, "length": 2}},
        "regime": {"kind": "stochastic", "means": [0.1, 0.1, 0.3, 0.3, 0.3, 0.3]},
        "policies": [{"policy": "aospr"}, {"policy": "exp3_path"}, {"policy": "oracle"}],
        "horizon": 100
    }"#;

    #[test]
    fn parses_and_builds() {
        let cfg = parse_config(BASIC).unwrap();
        assert_eq!(cfg.repetitions, 10);
        let exp = cfg.build().unwrap();
        assert_eq!(exp.space.edge_count(), 6);
        assert_eq!(exp.policies[1].label, "exp3_path");
    }

    #[test]
    fn errors_carry_field_paths() {
        let bad = BASIC.replace(r#"{"policy": "exp3_path"}"#, r#"{"policy": "exp3_path", "eta": 1}"#);
        match parse_config(&bad).unwrap_err() {
            Error::Config { path, .. } => assert!(path.starts_with("policies[1]"), "{path}"),
            other => panic!("{other}"),
        }
        let bad = BASIC.replace(r#""policy": "aospr""#, r#""policy": "aospr", "eta_rule": "fast""#);
        match parse_config(&bad).unwrap().build().unwrap_err() {
            Error::Config { path, .. } => assert_eq!(path, "policies[0].eta_rule"),
            other => panic!("{other}"),
        }
        let bad = BASIC.replace("[0.1, 0.1, 0.3", "[0.1, 0.3");
        assert!(matches!(parse_config(&bad).unwrap().build(), Err(Error::Config { .. })));
    }

    #[test]
    fn oracle_rejects_adaptive_regimes() {
        let cfg = BASIC.replace(
            r#"{"kind": "stochastic", "means": [0.1, 0.1, 0.3, 0.3, 0.3, 0.3]}"#,
            r#"{"kind": "adaptive", "memory": 1}"#,
        );
        assert!(parse_config(&cfg).unwrap().build().is_err());
    }

    #[test]
    fn dotted_paths() {
        let mut v: Value = serde_json::from_str(BASIC).unwrap();
        set_json_path(&mut v, "policies.0.c", sweep_value("4")).unwrap();
        set_json_path(&mut v, "horizon", sweep_value("7")).unwrap();
        set_json_path(&mut v, "policies.0.eta_rule", sweep_value("fixed:0.5")).unwrap();
        let cfg = parse_config_value(v).unwrap();
        assert_eq!(cfg.policies[0].c, Some(4.0));
        assert_eq!(cfg.horizon, 7);
        assert_eq!(cfg.policies[0].eta_rule, "fixed:0.5");
    }

    #[test]
    fn auto_minibatch() {
        let cfg = BASIC.replace(r#"{"policy": "aospr"}"#, r#"{"policy": "aospr", "minibatch": "auto"}"#);
        let mut cfg = parse_config(&cfg).unwrap();
        cfg.horizon = 1_000_000;
        assert_eq!(cfg.build().unwrap().policies[0].minibatch, Some(34));
    }
}
