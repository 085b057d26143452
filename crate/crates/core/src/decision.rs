//! Per-subcarrier assignment: allocation, RC feasibility and mode choice.

use crate::allocation::{allocate_dc, allocate_rc, rc_feasible_with, FeasibilityRule, Mode, RcStatus};
use crate::channel::SubcarrierGains;
use crate::mode::{classify, rho_alpha, rho_high, rho_low, ModeClass, ModeGains, Threshold};
use crate::rates::{mrc_secure_rate, PowerPair};

/// How a subcarrier picks between RC and DC.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Policy {
    /// Never use the relay.
    DirectOnly { p_source: f64 },
    /// Compare both secure rates at the given source power.
    Optimal { p_source: f64 },
    /// RC iff the relay-gain ratio exceeds `ρ_l`.
    LowSnr { p_source: f64 },
    /// RC iff the relay-gain ratio exceeds `ρ_h`.
    HighSnr { p_source: f64 },
    /// RC iff the relay-gain ratio exceeds `ρ_α`. The source power is the
    /// one meeting the satisfaction level exactly for the RC main user,
    /// `P_s = σ² α / γ^{sm}`.
    Satisfaction { alpha: f64 },
}

impl Policy {
    pub fn name(&self) -> &'static str {
        match self {
            Policy::DirectOnly { .. } => "direct-only",
            Policy::Optimal { .. } => "optimal",
            Policy::LowSnr { .. } => "low-snr",
            Policy::HighSnr { .. } => "high-snr",
            Policy::Satisfaction { .. } => "satisfaction",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Assignment {
    Rc,
    Dc,
    Idle,
}

impl Assignment {
    pub fn as_str(&self) -> &'static str {
        match self {
            Assignment::Rc => "rc",
            Assignment::Dc => "dc",
            Assignment::Idle => "idle",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubcarrierDecision {
    pub assignment: Assignment,
    /// User served, `None` when idle.
    pub main_user: Option<usize>,
    /// Equivalent eavesdropper of the chosen mode, `None` when idle.
    pub eavesdropper: Option<usize>,
    pub secure_rate: f64,
    pub power: PowerPair,
    pub rc_status: RcStatus,
    /// RC candidate secure rate at `P_r = P_s Δ^m`, clipped at zero.
    pub rate_rc: f64,
    /// DC candidate secure rate, zero when DC is infeasible.
    pub rate_dc: f64,
    /// Threshold class, `None` when the RC and DC main users differ.
    pub class: Option<ModeClass>,
}

pub fn decide_subcarrier(
    sub: &SubcarrierGains<'_>,
    policy: Policy,
    rule: FeasibilityRule,
) -> SubcarrierDecision {
    let sigma2 = sub.noise_power;
    let dc = allocate_dc(sub.source_user);
    let rc = allocate_rc(sub);
    let mode_gains = ModeGains::from_subcarrier(sub);

    let p_source = match policy {
        Policy::DirectOnly { p_source }
        | Policy::Optimal { p_source }
        | Policy::LowSnr { p_source }
        | Policy::HighSnr { p_source } => p_source,
        Policy::Satisfaction { alpha } => sigma2 * alpha / sub.source_user[rc.main_user],
    };
    let delta = sub.rsp_ratio(rc.main_user);
    let power = PowerPair::new(p_source, p_source * delta);

    let rate_dc = if dc.feasible {
        let main = sub.source_user[dc.main_user];
        let eav = sub.source_user[dc.eavesdropper];
        f64::max(
            libm::log2((sigma2 + p_source * main) / (sigma2 + p_source * eav)),
            0.0,
        )
    } else {
        0.0
    };

    let rc_status = if delta > 0.0 {
        rc_feasible_with(sub, power, rule)
    } else {
        RcStatus::SrGainFail
    };
    let rate_rc = if rc_status.is_ok() {
        f64::max(
            mrc_secure_rate(
                power,
                (sub.source_user[rc.main_user], sub.relay_user[rc.main_user]),
                (sub.source_user[rc.eavesdropper], sub.relay_user[rc.eavesdropper]),
                sigma2,
            ),
            0.0,
        )
    } else {
        0.0
    };

    let threshold_says_rc =
        |threshold: Threshold| mode_gains.is_some_and(|g| threshold.is_exceeded_by(g.relay_gain_ratio()));
    let use_rc = rc_status.is_ok()
        && match policy {
            Policy::DirectOnly { .. } => false,
            Policy::Optimal { .. } => rate_rc > rate_dc,
            Policy::LowSnr { .. } => mode_gains.is_some_and(|g| threshold_says_rc(rho_low(&g))),
            Policy::HighSnr { .. } => mode_gains.is_some_and(|g| threshold_says_rc(rho_high(&g))),
            Policy::Satisfaction { alpha } => {
                mode_gains.is_some_and(|g| threshold_says_rc(rho_alpha(alpha, &g)))
            }
        };

    let (assignment, main_user, eavesdropper, secure_rate) = if use_rc {
        (Assignment::Rc, Some(rc.main_user), Some(rc.eavesdropper), rate_rc)
    } else if dc.feasible {
        (Assignment::Dc, Some(dc.main_user), Some(dc.eavesdropper), rate_dc)
    } else {
        (Assignment::Idle, None, None, 0.0)
    };

    SubcarrierDecision {
        assignment,
        main_user,
        eavesdropper,
        secure_rate,
        power: match assignment {
            Assignment::Rc => power,
            _ => PowerPair::new(p_source, 0.0),
        },
        rc_status,
        rate_rc,
        rate_dc,
        class: mode_gains.map(|g| classify(&g)),
    }
}

impl From<Assignment> for Option<Mode> {
    fn from(a: Assignment) -> Self {
        match a {
            Assignment::Rc => Some(Mode::Rc),
            Assignment::Dc => Some(Mode::Dc),
            Assignment::Idle => None,
        }
    }
}
