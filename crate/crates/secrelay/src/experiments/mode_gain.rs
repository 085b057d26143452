//! Secure-rate improvement of the mode-selection policies over static DC,
//! with the total source power split equally over subcarriers.

use rayon::prelude::*;

use secrelay_core::{FeasibilityRule, Policy};

use super::{
    channel_for, derive_trial_seed, fading_seed, point, tally, trial_rng, uniform_in_square,
    ExperimentConfig, RunMetadata, Summary, DEFAULT_TRIALS,
};
use crate::error::Result;
use crate::output::{fmt_num, CsvTable};

#[derive(Debug, Clone, PartialEq)]
pub struct ModeGainRow {
    pub total_power: f64,
    pub p_source: f64,
    /// Improvement over all-DC in percent, per policy.
    pub optimal: Summary,
    pub low_snr: Summary,
    pub high_snr: Summary,
    /// Total all-DC secure rate in bits/s/Hz.
    pub dc_rate: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeGainResult {
    pub rows: Vec<ModeGainRow>,
    pub metadata: RunMetadata,
}

impl ModeGainResult {
    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "p_total",
            "p_source",
            "optimal_mean",
            "optimal_std",
            "optimal_se",
            "low_snr_mean",
            "low_snr_std",
            "low_snr_se",
            "high_snr_mean",
            "high_snr_std",
            "high_snr_se",
            "dc_rate_mean",
            "trials",
        ]);
        self.metadata.write_to(&mut t);
        for r in &self.rows {
            let mut row = vec![fmt_num(r.total_power), fmt_num(r.p_source)];
            for s in [&r.optimal, &r.low_snr, &r.high_snr] {
                row.extend([fmt_num(s.mean), fmt_num(s.std), fmt_num(s.se)]);
            }
            row.push(fmt_num(r.dc_rate.mean));
            row.push(r.optimal.count.to_string());
            t.push(row);
        }
        t
    }
}

fn improvement(rate: f64, baseline: f64) -> f64 {
    if baseline > 0.0 {
        100.0 * (rate / baseline - 1.0)
    } else {
        0.0
    }
}

/// `[optimal, low, high, dc_rate]` per power grid point.
fn trial(config: &ExperimentConfig, index: usize) -> Result<Vec<[f64; 4]>> {
    let p = &config.mode_gain;
    let rule = FeasibilityRule::from(config.feasibility);
    let seed = derive_trial_seed(config.master_seed, index as u64);
    let mut rng = trial_rng(seed);
    let users: Vec<_> = (0..config.num_users)
        .map(|_| uniform_in_square(&mut rng, p.user_center, p.user_side))
        .collect();
    let ch = channel_for(config, point(p.source), point(p.relay), users, fading_seed(seed))?;

    let n = config.num_subcarriers as f64;
    Ok(p.total_power
        .iter()
        .map(|&total| {
            let p_source = total / n;
            let base = tally(&ch, Policy::DirectOnly { p_source }, rule).rate;
            let gain = |policy| improvement(tally(&ch, policy, rule).rate, base);
            [
                gain(Policy::Optimal { p_source }),
                gain(Policy::LowSnr { p_source }),
                gain(Policy::HighSnr { p_source }),
                base,
            ]
        })
        .collect())
}

pub fn run_mode_gain(config: &ExperimentConfig) -> Result<ModeGainResult> {
    config.validate()?;
    let trials = config.trials_or(DEFAULT_TRIALS);
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|i| trial(config, i))
        .collect::<Result<Vec<_>>>()?;

    let n = config.num_subcarriers as f64;
    let rows = config
        .mode_gain
        .total_power
        .iter()
        .enumerate()
        .map(|(k, &total_power)| {
            let column = |c: usize| Summary::of(&per_trial.iter().map(|t| t[k][c]).collect::<Vec<_>>());
            ModeGainRow {
                total_power,
                p_source: total_power / n,
                optimal: column(0),
                low_snr: column(1),
                high_snr: column(2),
                dc_rate: column(3),
            }
        })
        .collect();
    let mut metadata = RunMetadata::new("mode-gain", config, trials);
    metadata
        .notes
        .push(("power_split", "equal, P_s = P_total/N on every subcarrier".into()));
    metadata
        .notes
        .push(("baseline", "static DC on every subcarrier".into()));
    Ok(ModeGainResult { rows, metadata })
}
