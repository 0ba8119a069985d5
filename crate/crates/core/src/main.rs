use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use aospr::harness::{self, Summary};
use aospr::{Error, Result};

/// Adaptive shortest-path routing simulator.
#[derive(Parser)]
#[command(name = "aospr", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment and write regret.csv and summary.json.
    Run {
        config: PathBuf,
        /// Override the output directory.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run once per value of a config parameter.
    Sweep {
        config: PathBuf,
        /// `key=v1,v2,...`, with a dotted key such as `policies.0.c`.
        #[arg(long)]
        param: String,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check a config without running it.
    Validate { config: PathBuf },
    /// Per-round timing of the samplers.
    Bench {
        /// Timed rounds per configuration.
        #[arg(long, default_value_t = 200)]
        rounds: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn print_summary(s: &Summary) {
    println!("{} regret, T = {}, R = {}", s.regret, s.config.horizon, s.config.repetitions);
    for p in &s.policies {
        println!("  {:<20} final {:>12.3} ± {:.3}", p.label, p.final_mean, p.final_std);
    }
    println!("results in {}", s.config.output_dir.display());
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, output } => {
            let mut cfg = harness::load_config(&config)?;
            if let Some(o) = output {
                cfg.output_dir = o;
            }
            print_summary(&harness::run(&cfg)?);
        }
        Command::Sweep { config, param, output } => {
            let mut cfg = harness::load_config(&config)?;
            if let Some(o) = output {
                cfg.output_dir = o;
            }
            let (key, values) = param
                .split_once('=')
                .ok_or_else(|| Error::Config { path: "--param".into(), message: "expected key=v1,v2,...".into() })?;
            let values: Vec<String> = values.split(',').map(str::to_string).collect();
            for s in harness::sweep(&cfg, key, &values)? {
                print_summary(&s);
            }
        }
        Command::Validate { config } => {
            let exp = harness::validate(&config)?;
            println!(
                "ok: {} edges, {} paths, {} policies",
                exp.space.edge_count(),
                exp.space.path_count(),
                exp.policies.len()
            );
        }
        Command::Bench { rounds, seed } => {
            let report = harness::bench(rounds.max(1), seed)?;
            println!("{:>6} {:>4} {:>10} {:>14}", "n", "k", "mode", "median s/round");
            for p in report.scaling.iter().chain([&report.dynamic, &report.enumerated]) {
                println!("{:>6} {:>4} {:>10} {:>14.3e}", p.n, p.k, p.mode, p.median_seconds);
            }
            let growth: Vec<String> = report.growth.iter().map(|g| format!("{g:.2}")).collect();
            println!("growth per doubling of n: {}", growth.join(", "));
            println!("dp speedup over enumeration at (24, 4): {:.1}x", report.speedup);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
