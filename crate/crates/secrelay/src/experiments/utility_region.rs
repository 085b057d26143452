//! Where a user benefits from the relay: share of its subcarriers served in
//! RC mode, per sampled location.

use rayon::prelude::*;

use secrelay_core::{decide_subcarrier, Assignment, FeasibilityRule, NodePosition, Policy};

use super::{
    channel_for, derive_trial_seed, fading_seed, point, trial_rng, uniform_in_square, ExperimentConfig,
    RunMetadata, Summary, DEFAULT_TRIALS_PER_LOCATION,
};
use crate::error::Result;
use crate::output::{fmt_num, CsvTable};

#[derive(Debug, Clone, PartialEq)]
pub struct LocationRow {
    pub position: NodePosition,
    pub distance_to_relay: f64,
    /// Subcarriers, over all trials, on which the tagged user is the main
    /// user of the chosen mode.
    pub owned: usize,
    /// Of those, the ones served in RC mode.
    pub rc_owned: usize,
    /// `100 · rc_owned / owned`, zero when nothing is owned.
    pub pct_rc: f64,
    /// `100 · rc_owned / (N · trials)`.
    pub pct_rc_of_n: f64,
    pub category: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UtilityRegionResult {
    pub rows: Vec<LocationRow>,
    pub relay: NodePosition,
    pub source: NodePosition,
    pub metadata: RunMetadata,
}

/// Means of the per-location RC share over regions of interest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionSummary {
    pub near: Summary,
    pub far: Summary,
    /// Half-planes split at the relay perpendicular to the source-relay
    /// axis, restricted to the same depth on both sides.
    pub toward_source: Summary,
    pub away_from_source: Summary,
}

/// Bucket label for `pct` with edges `e_0 < … < e_k`: `<e_0`,
/// `e_{i-1}-e_i` for `[e_{i-1}, e_i)`, and `>=e_k`.
pub fn category(pct: f64, edges: &[f64]) -> String {
    match edges.iter().position(|e| pct < *e) {
        Some(0) => format!("<{}", fmt_num(edges[0])),
        Some(i) => format!("{}-{}", fmt_num(edges[i - 1]), fmt_num(edges[i])),
        None => format!(">={}", fmt_num(edges[edges.len() - 1])),
    }
}

impl UtilityRegionResult {
    pub fn summarize(&self, near_radius: f64, far_radius: f64) -> RegionSummary {
        let pick = |f: &dyn Fn(&LocationRow) -> bool| {
            Summary::of(
                &self
                    .rows
                    .iter()
                    .filter(|r| f(r))
                    .map(|r| r.pct_rc)
                    .collect::<Vec<_>>(),
            )
        };
        let (ax, ay) = (self.source.x - self.relay.x, self.source.y - self.relay.y);
        let len = ax.hypot(ay);
        let along = |p: &NodePosition| ((p.x - self.relay.x) * ax + (p.y - self.relay.y) * ay) / len;
        let depth_toward = self.rows.iter().map(|r| along(&r.position)).fold(0.0, f64::max);
        let depth_away = self.rows.iter().map(|r| -along(&r.position)).fold(0.0, f64::max);
        let depth = depth_toward.min(depth_away);
        RegionSummary {
            near: pick(&|r| r.distance_to_relay < near_radius),
            far: pick(&|r| r.distance_to_relay > far_radius),
            toward_source: pick(&|r| {
                let s = along(&r.position);
                s > 0.0 && s <= depth
            }),
            away_from_source: pick(&|r| {
                let s = along(&r.position);
                s < 0.0 && -s <= depth
            }),
        }
    }

    pub fn to_csv(&self) -> CsvTable {
        let mut t = CsvTable::new(&[
            "x",
            "y",
            "dist_relay",
            "owned",
            "rc_owned",
            "pct_rc",
            "pct_rc_of_n",
            "category",
        ]);
        self.metadata.write_to(&mut t);
        for r in &self.rows {
            t.push(vec![
                fmt_num(r.position.x),
                fmt_num(r.position.y),
                fmt_num(r.distance_to_relay),
                r.owned.to_string(),
                r.rc_owned.to_string(),
                fmt_num(r.pct_rc),
                fmt_num(r.pct_rc_of_n),
                r.category.clone(),
            ]);
        }
        t
    }
}

fn location(config: &ExperimentConfig, index: usize, trials: usize) -> Result<LocationRow> {
    let p = &config.utility_region;
    let rule = FeasibilityRule::from(config.feasibility);
    let policy = Policy::Optimal { p_source: p.p_source };
    let location_seed = derive_trial_seed(config.master_seed, index as u64);
    let position = uniform_in_square(&mut trial_rng(location_seed), p.region_center, p.region_side);

    let (mut owned, mut rc_owned) = (0usize, 0usize);
    for t in 0..trials {
        let seed = derive_trial_seed(location_seed, t as u64);
        let mut rng = trial_rng(seed);
        let mut users = Vec::with_capacity(config.num_users);
        users.push(position);
        users.extend(
            (1..config.num_users).map(|_| uniform_in_square(&mut rng, p.region_center, p.region_side)),
        );
        let ch = channel_for(config, point(p.source), point(p.relay), users, fading_seed(seed))?;
        for sub in ch.subcarriers() {
            let d = decide_subcarrier(&sub, policy, rule);
            if d.main_user == Some(0) {
                owned += 1;
                rc_owned += usize::from(d.assignment == Assignment::Rc);
            }
        }
    }
    let pct_rc = if owned > 0 {
        100.0 * rc_owned as f64 / owned as f64
    } else {
        0.0
    };
    Ok(LocationRow {
        position,
        distance_to_relay: position.distance(&point(p.relay)),
        owned,
        rc_owned,
        pct_rc,
        pct_rc_of_n: 100.0 * rc_owned as f64 / (config.num_subcarriers * trials) as f64,
        category: category(pct_rc, &p.buckets),
    })
}

pub fn run_utility_region(config: &ExperimentConfig) -> Result<UtilityRegionResult> {
    config.validate()?;
    let trials = config.trials_or(DEFAULT_TRIALS_PER_LOCATION);
    let p = &config.utility_region;
    let rows = (0..p.locations)
        .into_par_iter()
        .map(|i| location(config, i, trials))
        .collect::<Result<Vec<_>>>()?;
    let mut metadata = RunMetadata::new("utility-region", config, trials);
    metadata.notes.push(("locations", p.locations.to_string()));
    metadata.notes.push((
        "policy",
        format!("optimal, P_s = {} per subcarrier", fmt_num(p.p_source)),
    ));
    metadata.notes.push((
        "metric",
        "pct_rc = RC subcarriers / subcarriers owned by the tagged user".into(),
    ));
    Ok(UtilityRegionResult {
        rows,
        relay: point(p.relay),
        source: point(p.source),
        metadata,
    })
}
