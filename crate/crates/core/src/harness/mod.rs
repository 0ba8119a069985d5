//! Experiment configuration, simulation, regret accounting and result files.
//!
//! Repetition `r` uses seed `base ^ r`. Within a repetition, environments
//! use random streams 0 and 1, policies stream 2 and delay wrappers stream 3,
//! so every policy sees the same losses whenever the regime is oblivious.

mod bench;
mod config;
mod emit;
mod run;

pub use bench::{bench, time_rounds, BenchPoint, BenchReport};
pub use config::{
    load_config, parse_config, parse_config_value, set_json_path, sweep_value, ActionSpaceConfig,
    AdversaryConfig, BatchKeyword, BatchSizeConfig, Experiment, ExperimentConfig, GeneratorConfig,
    GraphConfig, MultiSourceConfig, PolicyConfig, PolicyKind, PolicyPlan, RegimeConfig,
    ScheduleConfig, VariantName, DEFAULT_PATH_CAP,
};
pub use emit::{
    mean_std, read_summary, summarize, write_csv, write_outputs, write_summary, PolicySummary,
    Summary, CSV_FILE, SUMMARY_FILE,
};
pub use run::{
    build_policy, checkpoints, edge_gap_regret, oracle, play, regret_bound, repetition_seed,
    PolicyRun, RegretMeter, RepetitionRun,
};

use std::path::Path as FsPath;

use crate::error::Result;

/// Builds, simulates and writes results to the configured output directory.
pub fn run(config: &ExperimentConfig) -> Result<Summary> {
    let exp = config.build()?;
    let runs = exp.simulate()?;
    write_outputs(&exp, &runs, &config.output_dir)
}

/// Runs one configuration per value of a dotted parameter, each into its own
/// `<output_dir>/<key>=<value>` subdirectory.
pub fn sweep(config: &ExperimentConfig, key: &str, values: &[String]) -> Result<Vec<Summary>> {
    let base = serde_json::to_value(config)
        .map_err(|e| crate::Error::InternalInvariant(format!("config serialisation: {e}")))?;
    values
        .iter()
        .map(|raw| {
            let mut doc = base.clone();
            set_json_path(&mut doc, key, sweep_value(raw))?;
            let mut cfg = parse_config_value(doc)?;
            cfg.output_dir = config.output_dir.join(sweep_dir_name(key, raw));
            run(&cfg)
        })
        .collect()
}

fn sweep_dir_name(key: &str, raw: &str) -> String {
    let clean: String = raw
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || "._-".contains(c) { c } else { '_' })
        .collect();
    format!("{key}={clean}")
}

/// Parses and builds a configuration file without simulating.
pub fn validate(path: &FsPath) -> Result<Experiment> {
    load_config(path)?.build()
}
