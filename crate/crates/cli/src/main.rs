use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use honeydrone::defenses::{AttackKind, DefenseKind};
use honeydrone::harness::{export_csv, parse_seed_list, run_experiment, sweep_zeta, summarize, ExperimentConfig};

#[derive(Parser)]
#[command(name = "honeydrone", version, about = "Honey-drone DoS defense experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured (defense, attack, seed) combination and export CSVs.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory; defaults to the config's `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Comma-separated seeds, overriding the config.
        #[arg(long)]
        seeds: Option<String>,
        /// Run only this defense scheme, e.g. HD-HT-DRL.
        #[arg(long)]
        scheme: Option<DefenseKind>,
        /// Run only this attack scheme, e.g. A-Fixed.
        #[arg(long)]
        attack: Option<AttackKind>,
    },
    /// Repeat the experiment for several attack budgets.
    SweepZeta {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated budgets, e.g. 1,3,5,7,9.
        #[arg(long)]
        values: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and check a config without running anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &Path) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::load(path).with_context(|| format!("reading {}", path.display()))?;
    cfg.apply_seed_env()?;
    Ok(cfg)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out, seeds, scheme, attack } => {
            let mut cfg = load(&config)?;
            if let Some(s) = seeds {
                cfg.experiment.seeds = parse_seed_list(&s)?;
            }
            if let Some(d) = scheme {
                cfg.experiment.defenses = vec![d];
            }
            if let Some(a) = attack {
                cfg.experiment.attacks = vec![a];
            }
            cfg.validate()?;
            let dir = out.unwrap_or_else(|| cfg.experiment.output_dir.clone());
            let data = run_experiment(&cfg)?;
            export_csv(&data, &dir)?;
            let last = cfg.experiment.episodes - 1;
            for row in summarize(&data.records).iter().filter(|r| r.metric == "r_mc" && r.episode == last) {
                println!("{} vs {}: final R_MC {:.3} ± {:.3}", row.scheme, row.attack, row.mean, row.stddev);
            }
            println!("wrote {} records to {}", data.records.len(), dir.display());
        }
        Command::SweepZeta { config, values, out } => {
            let cfg = load(&config)?;
            let zetas: Vec<usize> = values
                .split(',')
                .map(|v| v.trim().parse::<usize>().with_context(|| format!("bad zeta {v:?}")))
                .collect::<Result<_>>()?;
            if zetas.contains(&0) {
                bail!("zeta must be >= 1");
            }
            let dir = out.unwrap_or_else(|| cfg.experiment.output_dir.clone());
            for (z, data) in sweep_zeta(&cfg, &zetas)? {
                let sub = dir.join(format!("zeta_{z}"));
                export_csv(&data, &sub)?;
                println!("zeta {z}: {} records to {}", data.records.len(), sub.display());
            }
        }
        Command::Validate { config } => {
            let cfg = load(&config)?;
            println!(
                "ok: {} defense(s) x {} attack(s) x {} seed(s), {} episode(s)",
                cfg.experiment.defenses.len(),
                cfg.experiment.attacks.len(),
                cfg.experiment.seeds.len(),
                cfg.experiment.episodes
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
