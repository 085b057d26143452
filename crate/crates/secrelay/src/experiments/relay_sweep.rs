//! Share of RC subcarriers as the relay moves between source and users,
//! with the mode chosen by the satisfaction-level policy.

use rayon::prelude::*;

use secrelay_core::{FeasibilityRule, NodePosition, Policy};

use super::{
    channel_for, derive_trial_seed, fading_seed, point, tally, trial_rng, uniform_in_square,
    ExperimentConfig, RunMetadata, Summary, DEFAULT_TRIALS,
};
use crate::error::Result;
use crate::output::{fmt_num, CsvTable};

#[derive(Debug, Clone, PartialEq)]
pub struct RelaySweepRow {
    pub alpha: f64,
    pub relay_x: f64,
    pub pct_rc: Summary,
    pub pct_dc: Summary,
    pub pct_idle: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaySweepResult {
    pub rows: Vec<RelaySweepRow>,
    pub metadata: RunMetadata,
}

impl RelaySweepResult {
    pub fn row(&self, alpha: f64, relay_x: f64) -> Option<&RelaySweepRow> {
        self.rows
            .iter()
            .find(|r| r.alpha == alpha && r.relay_x == relay_x)
    }

    /// Relay position with the largest mean RC share for `alpha`, first
    /// position on ties.
    pub fn best_relay_x(&self, alpha: f64) -> Option<f64> {
        self.rows
            .iter()
            .filter(|r| r.alpha == alpha)
            .fold(None::<&RelaySweepRow>, |best, r| match best {
                Some(b) if b.pct_rc.mean >= r.pct_rc.mean => Some(b),
                _ => Some(r),
            })
            .map(|r| r.relay_x)
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "alpha",
            "x_r",
            "pct_rc_mean",
            "pct_rc_std",
            "pct_rc_se",
            "pct_dc_mean",
            "pct_idle_mean",
            "trials",
        ]);
        self.metadata.write_to(&mut t);
        for r in &self.rows {
            t.push(vec![
                fmt_num(r.alpha),
                fmt_num(r.relay_x),
                fmt_num(r.pct_rc.mean),
                fmt_num(r.pct_rc.std),
                fmt_num(r.pct_rc.se),
                fmt_num(r.pct_dc.mean),
                fmt_num(r.pct_idle.mean),
                r.pct_rc.count.to_string(),
            ]);
        }
        t
    }
}

/// One trial: a user placement and one set of unit fading draws shared by
/// every relay position and every `α`. Returns `[rc, dc, idle]` percentages
/// indexed by `(alpha, relay_x)`.
fn trial(config: &ExperimentConfig, index: usize) -> Result<Vec<[f64; 3]>> {
    let p = &config.relay_sweep;
    let rule = FeasibilityRule::from(config.feasibility);
    let seed = derive_trial_seed(config.master_seed, index as u64);
    let mut rng = trial_rng(seed);
    let users: Vec<_> = (0..config.num_users)
        .map(|_| uniform_in_square(&mut rng, p.user_center, p.user_side))
        .collect();

    let mut out = vec![[0.0; 3]; p.alpha.len() * p.relay_x.len()];
    for (xi, &x) in p.relay_x.iter().enumerate() {
        let ch = channel_for(
            config,
            point(p.source),
            NodePosition::new(x, p.relay_y),
            users.clone(),
            fading_seed(seed),
        )?;
        for (ai, &alpha) in p.alpha.iter().enumerate() {
            let t = tally(&ch, Policy::Satisfaction { alpha }, rule);
            out[ai * p.relay_x.len() + xi] = [t.percent(t.rc), t.percent(t.dc), t.percent(t.idle)];
        }
    }
    Ok(out)
}

pub fn run_relay_sweep(config: &ExperimentConfig) -> Result<RelaySweepResult> {
    config.validate()?;
    let trials = config.trials_or(DEFAULT_TRIALS);
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|i| trial(config, i))
        .collect::<Result<Vec<_>>>()?;

    let p = &config.relay_sweep;
    let mut rows = Vec::with_capacity(per_trial.first().map_or(0, Vec::len));
    for (ai, &alpha) in p.alpha.iter().enumerate() {
        for (xi, &relay_x) in p.relay_x.iter().enumerate() {
            let k = ai * p.relay_x.len() + xi;
            let column = |c: usize| Summary::of(&per_trial.iter().map(|t| t[k][c]).collect::<Vec<_>>());
            rows.push(RelaySweepRow {
                alpha,
                relay_x,
                pct_rc: column(0),
                pct_dc: column(1),
                pct_idle: column(2),
            });
        }
    }
    let mut metadata = RunMetadata::new("relay-sweep", config, trials);
    metadata.notes.push((
        "policy",
        "satisfaction level, P_s = sigma2*alpha/gamma_sm per subcarrier".into(),
    ));
    Ok(RelaySweepResult { rows, metadata })
}
