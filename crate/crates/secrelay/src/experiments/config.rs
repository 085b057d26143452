//! Experiment configuration, read from JSON. Every field is optional and
//! falls back to the defaults below; unknown fields are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use secrelay_core::FeasibilityRule;

use crate::error::{Error, Result};

pub const DEFAULT_TRIALS: usize = 500;
pub const DEFAULT_TRIALS_PER_LOCATION: usize = 8;
pub const MIN_LOCATIONS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Feasibility {
    AllUsers,
    #[default]
    MainUser,
}

impl From<Feasibility> for FeasibilityRule {
    fn from(f: Feasibility) -> Self {
        match f {
            Feasibility::AllUsers => FeasibilityRule::AllUsers,
            Feasibility::MainUser => FeasibilityRule::MainUser,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub num_subcarriers: usize,
    pub num_users: usize,
    /// Trials per axis point; for the utility region, trials per location.
    /// `None` picks the experiment default.
    pub trials: Option<usize>,
    pub master_seed: u64,
    pub sigma2: f64,
    pub path_loss_exponent: f64,
    pub feasibility: Feasibility,
    pub relay_sweep: RelaySweepParams,
    pub mode_gain: ModeGainParams,
    pub utility_region: UtilityRegionParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            num_subcarriers: 64,
            num_users: 8,
            trials: None,
            master_seed: 1,
            sigma2: 1.0,
            path_loss_exponent: 3.0,
            feasibility: Feasibility::default(),
            relay_sweep: RelaySweepParams::default(),
            mode_gain: ModeGainParams::default(),
            utility_region: UtilityRegionParams::default(),
        }
    }
}

/// Relay moved along `(x_r, relay_y)`; users uniform in a square.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelaySweepParams {
    pub source: [f64; 2],
    pub user_center: [f64; 2],
    pub user_side: f64,
    pub relay_y: f64,
    pub relay_x: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl Default for RelaySweepParams {
    fn default() -> Self {
        Self {
            source: [0.0, 0.0],
            user_center: [2.0, 0.0],
            user_side: 1.0,
            relay_y: 0.0,
            relay_x: (1..=15).map(|k| k as f64 / 10.0).collect(),
            alpha: vec![0.1, 1.0, 10.0],
        }
    }
}

/// Fixed relay; total source power split equally over subcarriers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModeGainParams {
    pub source: [f64; 2],
    pub relay: [f64; 2],
    pub user_center: [f64; 2],
    pub user_side: f64,
    pub total_power: Vec<f64>,
}

impl Default for ModeGainParams {
    fn default() -> Self {
        Self {
            source: [0.0, 0.0],
            relay: [0.5, 0.0],
            user_center: [2.0, 0.0],
            user_side: 1.0,
            total_power: (-2..=6).map(|k| 10f64.powf(k as f64 / 2.0)).collect(),
        }
    }
}

/// One tagged user per sampled location, the others resampled per trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UtilityRegionParams {
    pub source: [f64; 2],
    pub relay: [f64; 2],
    pub region_center: [f64; 2],
    pub region_side: f64,
    pub locations: usize,
    /// Per-subcarrier source power of the optimal policy.
    pub p_source: f64,
    /// Category edges in percent.
    pub buckets: Vec<f64>,
}

impl Default for UtilityRegionParams {
    fn default() -> Self {
        Self {
            source: [0.0, 0.5],
            relay: [0.0, -0.5],
            region_center: [0.0, 0.0],
            region_side: 4.0,
            locations: 2000,
            p_source: 0.1,
            buckets: vec![2.0, 6.0, 10.0, 14.0],
        }
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    !v.is_empty() && v.iter().all(|x| x.is_finite()) && v.windows(2).all(|w| w[0] < w[1])
}

fn finite_point(p: &[f64; 2]) -> bool {
    p.iter().all(|c| c.is_finite())
}

fn check(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Config(msg.to_owned()))
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn trials_or(&self, default: usize) -> usize {
        self.trials.unwrap_or(default)
    }

    pub fn validate(&self) -> Result<()> {
        check(self.num_subcarriers >= 1, "num_subcarriers must be at least 1")?;
        check(self.num_users >= 2, "num_users must be at least 2")?;
        check(self.trials != Some(0), "trials must be at least 1")?;
        check(
            self.sigma2 > 0.0 && self.sigma2.is_finite(),
            "sigma2 must be positive",
        )?;
        check(
            self.path_loss_exponent >= 0.0 && self.path_loss_exponent.is_finite(),
            "path_loss_exponent must be non-negative",
        )?;

        let rs = &self.relay_sweep;
        check(
            finite_point(&rs.source) && finite_point(&rs.user_center),
            "relay_sweep positions must be finite",
        )?;
        check(
            rs.user_side > 0.0 && rs.user_side.is_finite(),
            "relay_sweep.user_side must be positive",
        )?;
        check(rs.relay_y.is_finite(), "relay_sweep.relay_y must be finite")?;
        check(
            strictly_increasing(&rs.relay_x),
            "relay_sweep.relay_x must be nonempty and strictly increasing",
        )?;
        check(
            strictly_increasing(&rs.alpha),
            "relay_sweep.alpha must be nonempty and strictly increasing",
        )?;
        check(rs.alpha[0] >= 0.0, "relay_sweep.alpha must be non-negative")?;

        let mg = &self.mode_gain;
        check(
            finite_point(&mg.source) && finite_point(&mg.relay) && finite_point(&mg.user_center),
            "mode_gain positions must be finite",
        )?;
        check(
            mg.user_side > 0.0 && mg.user_side.is_finite(),
            "mode_gain.user_side must be positive",
        )?;
        check(
            strictly_increasing(&mg.total_power),
            "mode_gain.total_power must be nonempty and strictly increasing",
        )?;
        check(mg.total_power[0] > 0.0, "mode_gain.total_power must be positive")?;

        let ur = &self.utility_region;
        check(
            finite_point(&ur.source) && finite_point(&ur.relay) && finite_point(&ur.region_center),
            "utility_region positions must be finite",
        )?;
        check(
            ur.region_side > 0.0 && ur.region_side.is_finite(),
            "utility_region.region_side must be positive",
        )?;
        check(
            ur.locations >= MIN_LOCATIONS,
            &format!("utility_region.locations must be at least {MIN_LOCATIONS}"),
        )?;
        check(
            ur.p_source > 0.0 && ur.p_source.is_finite(),
            "utility_region.p_source must be positive",
        )?;
        check(
            strictly_increasing(&ur.buckets),
            "utility_region.buckets must be nonempty and strictly increasing",
        )?;
        Ok(())
    }

    /// First 16 hex digits of the SHA-256 of the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config always serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        hex::encode(&digest[..8])
    }
}
