//! Experiment configuration, multi-seed runs, ζ sweeps and CSV export.

mod config;
mod export;
mod runner;

pub use config::{
    parse_seed_list, AttackSection, DefenseSection, ExperimentConfig, ExperimentSection, HypergameSection, SEED_ENV,
};
pub use export::{
    export_csv, mean_std, metric_rows, read_metric_csv, read_reward_csv, summarize, Metric, MetricRow, RewardRow,
    StrategyRow, SummaryRow,
};
#[cfg(feature = "parallel")]
pub use runner::run_jobs_parallel;
pub use runner::{
    jobs, make_world, pretrain_attacker_apd, pretrain_defender_apd, run_episode, run_experiment, run_job, run_jobs,
    run_jobs_sequential, sweep_zeta, Dataset, EpisodeMetrics, EpisodeRecord, Job,
};
