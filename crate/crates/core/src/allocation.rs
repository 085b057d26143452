//! Main-user and equivalent-eavesdropper selection per subcarrier.
//!
//! DC mode gives the subcarrier to the user with the strongest direct gain;
//! the runner-up is the eavesdropper. RC mode gives it to the user with the
//! smallest RSP ratio `Δ^o = (γ^{sr} − γ^{so}) / γ^{ro}`, i.e. the user that
//! needs the least relay power to balance both hops.
//!
//! Ties are broken by the lowest user index.

use crate::channel::SubcarrierGains;
use crate::rates::{thresholds, PowerPair};

/// Relative slack on the relay-power window checks.
pub const POWER_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Dc,
    Rc,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Dc => "dc",
            Mode::Rc => "rc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AllocationResult {
    pub main_user: usize,
    pub eavesdropper: usize,
    pub mode: Mode,
    /// A positive secure rate is reachable for `main_user` against
    /// `eavesdropper` in this mode, ignoring power constraints.
    pub feasible: bool,
}

/// Outcome of the RC feasibility test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RcStatus {
    Ok,
    /// The source-relay gain does not dominate `γ^{so} a^o`.
    SrGainFail,
    /// Relay power outside `[P_l, P_s Δ^m]`, or zero.
    RelayPowerFail,
}

impl RcStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RcStatus::Ok)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            RcStatus::Ok => "OK",
            RcStatus::SrGainFail => "SR_GAIN_FAIL",
            RcStatus::RelayPowerFail => "RELAY_POWER_FAIL",
        }
    }
}

/// Which users the gain and relay-power conditions are checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FeasibilityRule {
    /// Every user must satisfy the source-relay gain and relay-power
    /// conditions.
    AllUsers,
    /// Only the selected main user must satisfy them; eavesdroppers are
    /// rated by what they collect over both RC slots.
    #[default]
    MainUser,
}

impl FeasibilityRule {
    pub fn as_str(&self) -> &'static str {
        match self {
            FeasibilityRule::AllUsers => "all-users",
            FeasibilityRule::MainUser => "main-user",
        }
    }
}

/// Index of the largest value and of the runner-up, lowest index on ties.
fn top_two(values: impl Iterator<Item = f64>) -> (usize, usize) {
    let mut best = (usize::MAX, f64::NEG_INFINITY);
    let mut second = (usize::MAX, f64::NEG_INFINITY);
    for (i, v) in values.enumerate() {
        if v > best.1 {
            second = best;
            best = (i, v);
        } else if v > second.1 {
            second = (i, v);
        }
    }
    (best.0, second.0)
}

pub fn allocate_dc(source_user: &[f64]) -> AllocationResult {
    debug_assert!(source_user.len() >= 2);
    let (main_user, eavesdropper) = top_two(source_user.iter().copied());
    AllocationResult {
        main_user,
        eavesdropper,
        mode: Mode::Dc,
        feasible: source_user[main_user] > source_user[eavesdropper],
    }
}

/// User with the smallest RSP ratio and the runner-up in RSP order.
pub fn rsp_order(sub: &SubcarrierGains<'_>) -> (usize, usize) {
    top_two((0..sub.num_users()).map(|o| -sub.rsp_ratio(o)))
}

/// RC allocation. The eavesdropper is the other user with the strongest
/// combined reception `γ^{so} + Δ^m γ^{ro}` at the balanced relay power
/// `P_r = P_s Δ^m`; that choice does not depend on `P_s`.
pub fn allocate_rc(sub: &SubcarrierGains<'_>) -> AllocationResult {
    debug_assert!(sub.num_users() >= 2);
    let (main_user, _) = rsp_order(sub);
    let delta = sub.rsp_ratio(main_user);
    let combined = |o: usize| sub.source_user[o] + delta * sub.relay_user[o];

    let mut eavesdropper = usize::MAX;
    let mut strongest = f64::NEG_INFINITY;
    for o in (0..sub.num_users()).filter(|o| *o != main_user) {
        let c = combined(o);
        if c > strongest {
            strongest = c;
            eavesdropper = o;
        }
    }
    // combined(main) equals γ^{sr} by construction of Δ.
    AllocationResult {
        main_user,
        eavesdropper,
        mode: Mode::Rc,
        feasible: delta > 0.0 && sub.source_relay > strongest,
    }
}

/// RC feasibility with every user checked (source-relay gain dominance and
/// a relay power above every user's lower threshold).
pub fn rc_feasible(sub: &SubcarrierGains<'_>, power: PowerPair) -> RcStatus {
    rc_feasible_with(sub, power, FeasibilityRule::AllUsers)
}

pub fn rc_feasible_with(sub: &SubcarrierGains<'_>, power: PowerPair, rule: FeasibilityRule) -> RcStatus {
    let sigma2 = sub.noise_power;
    let rc = allocate_rc(sub);
    let main = rc.main_user;

    let checked = |o: usize| match rule {
        FeasibilityRule::AllUsers => true,
        FeasibilityRule::MainUser => o == main,
    };

    let mut gain_bound = f64::NEG_INFINITY;
    let mut relay_lower = f64::NEG_INFINITY;
    for o in (0..sub.num_users()).filter(|o| checked(*o)) {
        let t = thresholds(power.source, sub.user(o), sigma2);
        gain_bound = gain_bound.max(sub.source_user[o] * t.a);
        relay_lower = relay_lower.max(t.p_relay_lower);
    }
    if !(sub.source_relay > gain_bound) {
        return RcStatus::SrGainFail;
    }

    let relay_upper = power.source * sub.rsp_ratio(main);
    if !(power.relay > 0.0)
        || power.relay < relay_lower * (1.0 - POWER_TOLERANCE)
        || power.relay > relay_upper * (1.0 + POWER_TOLERANCE)
    {
        return RcStatus::RelayPowerFail;
    }
    RcStatus::Ok
}
