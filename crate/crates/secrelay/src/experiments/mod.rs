//! Monte-Carlo experiments: relay-position sweep, mode-selection gain and
//! relay-utility region.
//!
//! Every trial derives its own seed from the master seed and its index, and
//! per-trial results are aggregated in index order, so output does not
//! depend on the number of worker threads.

mod config;
mod mode_gain;
mod relay_sweep;
mod seed;
mod stats;
mod utility_region;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secrelay_core::{
    decide_subcarrier, generate_channel, Assignment, ChannelRealization, FadingConfig, FeasibilityRule,
    NodePosition, Policy, SystemGeometry, GENERATOR_ID,
};

use crate::error::{Error, Result};
use crate::output::CsvTable;

pub use config::{
    ExperimentConfig, Feasibility, ModeGainParams, RelaySweepParams, UtilityRegionParams, DEFAULT_TRIALS,
    DEFAULT_TRIALS_PER_LOCATION, MIN_LOCATIONS,
};
pub use mode_gain::{run_mode_gain, ModeGainResult, ModeGainRow};
pub use relay_sweep::{run_relay_sweep, RelaySweepResult, RelaySweepRow};
pub use seed::derive_trial_seed;
pub use stats::Summary;
pub use utility_region::{run_utility_region, LocationRow, RegionSummary, UtilityRegionResult};

/// Environment variable capping the worker count; `0` or unset means one
/// worker per core.
pub const THREADS_ENV: &str = "SECRELAY_THREADS";

pub fn threads_from_env() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(0),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{THREADS_ENV} must be a non-negative integer, got {v:?}"))),
    }
}

/// Runs `f` on a dedicated pool of `threads` workers (`0` = automatic).
pub fn run_in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    Ok(pool.install(f))
}

/// Provenance written as `#` lines ahead of every experiment table.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetadata {
    pub experiment: &'static str,
    pub master_seed: u64,
    pub trials: usize,
    pub config_hash: String,
    pub feasibility: &'static str,
    pub notes: Vec<(&'static str, String)>,
}

impl RunMetadata {
    fn new(experiment: &'static str, config: &ExperimentConfig, trials: usize) -> Self {
        Self {
            experiment,
            master_seed: config.master_seed,
            trials,
            config_hash: config.hash(),
            feasibility: FeasibilityRule::from(config.feasibility).as_str(),
            notes: Vec::new(),
        }
    }

    fn write_to(&self, table: &mut CsvTable) {
        table
            .meta("experiment", self.experiment)
            .meta("generator", GENERATOR_ID)
            .meta("master_seed", self.master_seed)
            .meta("trials", self.trials)
            .meta("config_hash", &self.config_hash)
            .meta("feasibility", self.feasibility);
        for (k, v) in &self.notes {
            table.meta(k, v);
        }
    }
}

pub(crate) fn point([x, y]: [f64; 2]) -> NodePosition {
    NodePosition::new(x, y)
}

/// Uniform position in the axis-aligned square of side `side` centred at
/// `center`.
pub(crate) fn uniform_in_square(rng: &mut ChaCha8Rng, center: [f64; 2], side: f64) -> NodePosition {
    let x = center[0] + side * (rng.random::<f64>() - 0.5);
    let y = center[1] + side * (rng.random::<f64>() - 0.5);
    NodePosition::new(x, y)
}

pub(crate) fn trial_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Fading seed of a trial, distinct from the placement stream.
pub(crate) fn fading_seed(trial_seed: u64) -> u64 {
    derive_trial_seed(trial_seed, u64::MAX)
}

pub(crate) fn channel_for(
    config: &ExperimentConfig,
    source: NodePosition,
    relay: NodePosition,
    users: Vec<NodePosition>,
    seed: u64,
) -> Result<ChannelRealization> {
    let geometry = SystemGeometry::new(source, relay, users)?;
    let fading = FadingConfig {
        path_loss_exponent: config.path_loss_exponent,
        noise_power: config.sigma2,
        num_subcarriers: config.num_subcarriers,
        seed,
    };
    Ok(generate_channel(&geometry, &fading)?)
}

/// Counts of RC, DC and idle subcarriers, and the total secure rate.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct Tally {
    pub rc: usize,
    pub dc: usize,
    pub idle: usize,
    pub rate: f64,
}

impl Tally {
    pub fn total(&self) -> usize {
        self.rc + self.dc + self.idle
    }

    pub fn percent(&self, count: usize) -> f64 {
        100.0 * count as f64 / self.total() as f64
    }
}

pub(crate) fn tally(ch: &ChannelRealization, policy: Policy, rule: FeasibilityRule) -> Tally {
    let mut t = Tally::default();
    for sub in ch.subcarriers() {
        let d = decide_subcarrier(&sub, policy, rule);
        match d.assignment {
            Assignment::Rc => t.rc += 1,
            Assignment::Dc => t.dc += 1,
            Assignment::Idle => t.idle += 1,
        }
        t.rate += d.secure_rate;
    }
    t
}
