//! RC versus DC mode selection for one subcarrier.
//!
//! With the energy-efficient relay power `P_r = P_s Δ^m`, RC beats DC for
//! main user `m` exactly when the relay-gain ratio `γ^{rm}/γ^{re}` exceeds a
//! threshold `ρ(P_s)`. `ρ` is bracketed by its low-SNR limit `ρ_l` and its
//! high-SNR limit `ρ_h`, which splits subcarriers into exclusive-DC, mixed
//! (RDC) and exclusive-RC classes. The satisfaction-level threshold `ρ_α`
//! replaces the unknown `P_s` by a minimum SNR `α = P_s γ^{sm} / σ²`.

use crate::allocation::{allocate_dc, allocate_rc, Mode};
use crate::channel::SubcarrierGains;
use crate::error::{Error, Result};
use crate::rates::{mrc_secure_rate, PowerPair};

/// Relative agreement required between the closed-form and bisection
/// source-power thresholds.
pub const P_THRESHOLD_REL_TOL: f64 = 1e-6;

/// Gains entering the mode comparison for main user `m`, its RC
/// eavesdropper `e` and its DC eavesdropper `e′`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeGains {
    /// `γ^{sr}`
    pub source_relay: f64,
    /// `γ^{sm}`
    pub source_main: f64,
    /// `γ^{se}`
    pub source_rc_eavesdropper: f64,
    /// `γ^{se′}`
    pub source_dc_eavesdropper: f64,
    /// `γ^{rm}`
    pub relay_main: f64,
    /// `γ^{re}`
    pub relay_rc_eavesdropper: f64,
}

impl ModeGains {
    /// Gains for the subcarrier's RC main user, or `None` when the RC and
    /// DC allocations pick different main users (the threshold analysis
    /// needs `γ^{sm} > γ^{se′}`).
    pub fn from_subcarrier(sub: &SubcarrierGains<'_>) -> Option<Self> {
        let rc = allocate_rc(sub);
        let dc = allocate_dc(sub.source_user);
        if rc.main_user != dc.main_user || !dc.feasible {
            return None;
        }
        Some(Self {
            source_relay: sub.source_relay,
            source_main: sub.source_user[rc.main_user],
            source_rc_eavesdropper: sub.source_user[rc.eavesdropper],
            source_dc_eavesdropper: sub.source_user[dc.eavesdropper],
            relay_main: sub.relay_user[rc.main_user],
            relay_rc_eavesdropper: sub.relay_user[rc.eavesdropper],
        })
    }

    /// `γ^{rm} / γ^{re}`.
    pub fn relay_gain_ratio(&self) -> f64 {
        self.relay_main / self.relay_rc_eavesdropper
    }

    /// `Δ^m`.
    pub fn rsp_ratio(&self) -> f64 {
        (self.source_relay - self.source_main) / self.relay_main
    }

    /// `P_u = (γ^{sr} − 2γ^{sm}) σ² / (γ^{sm})²`.
    pub fn source_power_upper(&self, sigma2: f64) -> f64 {
        (self.source_relay - 2.0 * self.source_main) * sigma2 / (self.source_main * self.source_main)
    }

    fn check_dc_feasible(&self) -> Result<()> {
        if self.source_main > self.source_dc_eavesdropper {
            Ok(())
        } else {
            Err(Error::Domain(
                "main user must beat its DC eavesdropper (γ_sm > γ_se′)",
            ))
        }
    }
}

/// A relay-gain-ratio threshold. `Unbounded` stands for `+∞`: its
/// denominator is non-positive and no ratio exceeds it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Finite(f64),
    Unbounded,
}

impl Threshold {
    fn from_ratio(num: f64, den: f64) -> Self {
        if den > 0.0 {
            Threshold::Finite(num / den)
        } else {
            Threshold::Unbounded
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Threshold::Finite(v) => *v,
            Threshold::Unbounded => f64::INFINITY,
        }
    }

    pub fn is_exceeded_by(&self, ratio: f64) -> bool {
        match self {
            Threshold::Finite(v) => ratio > *v,
            Threshold::Unbounded => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Threshold::Finite(_))
    }
}

/// Denominator of `ρ` at source power `p_source`.
pub fn rho_denominator(p_source: f64, gains: &ModeGains, sigma2: f64) -> f64 {
    let sm = sigma2 + p_source * gains.source_main;
    let sep = sigma2 + p_source * gains.source_dc_eavesdropper;
    gains.source_relay * sep * sep
        - gains.source_rc_eavesdropper * sm * sm
        - sigma2 * (sep + sm) * (gains.source_main - gains.source_dc_eavesdropper)
}

/// `ρ(P_s)`; `Unbounded` marks exclusive-DC (`ρ_den ≤ 0`).
pub fn rho(p_source: f64, gains: &ModeGains, sigma2: f64) -> Result<Threshold> {
    if !(p_source > 0.0) {
        return Err(Error::Domain("source power must be positive"));
    }
    gains.check_dc_feasible()?;
    let sm = sigma2 + p_source * gains.source_main;
    let num = (gains.source_relay - gains.source_main) * sm * sm;
    Ok(Threshold::from_ratio(
        num,
        rho_denominator(p_source, gains, sigma2),
    ))
}

/// Low-SNR limit `ρ_l`.
pub fn rho_low(gains: &ModeGains) -> Threshold {
    let ModeGains {
        source_relay: sr,
        source_main: sm,
        source_rc_eavesdropper: se,
        source_dc_eavesdropper: sep,
        ..
    } = *gains;
    // same operation order as rho_alpha at α = 0
    Threshold::from_ratio(sr - sm, sr - se - 2.0 * (sm - sep))
}

/// High-SNR limit `ρ_h`.
pub fn rho_high(gains: &ModeGains) -> Threshold {
    let ModeGains {
        source_relay: sr,
        source_main: sm,
        source_rc_eavesdropper: se,
        source_dc_eavesdropper: sep,
        ..
    } = *gains;
    Threshold::from_ratio((sr - sm) * sm * sm, sr * sep * sep - se * sm * sm)
}

/// Satisfaction-level threshold `ρ_α`; equals `ρ(σ² α / γ^{sm})`.
pub fn rho_alpha(alpha: f64, gains: &ModeGains) -> Threshold {
    let ModeGains {
        source_relay: sr,
        source_main: sm,
        source_rc_eavesdropper: se,
        source_dc_eavesdropper: sep,
        ..
    } = *gains;
    let t = 1.0 + alpha;
    let s = 1.0 + alpha * (sep / sm);
    Threshold::from_ratio((sr - sm) * t * t, sr * s * s - se * t * t - (sm - sep) * (t + s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeClass {
    ExclusiveRc,
    Rdc,
    ExclusiveDc,
}

impl ModeClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModeClass::ExclusiveRc => "exclusive-rc",
            ModeClass::Rdc => "rdc",
            ModeClass::ExclusiveDc => "exclusive-dc",
        }
    }
}

pub fn classify(gains: &ModeGains) -> ModeClass {
    let ratio = gains.relay_gain_ratio();
    if rho_high(gains).is_exceeded_by(ratio) {
        ModeClass::ExclusiveRc
    } else if ratio < rho_low(gains).value() {
        ModeClass::ExclusiveDc
    } else {
        ModeClass::Rdc
    }
}

/// Source power at which RC and DC secure rates cross on an RDC subcarrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerThreshold {
    /// Non-negative root of the crossing quadratic, `None` when RC wins at
    /// every power (the root has escaped to infinity).
    pub raw: Option<f64>,
    /// `raw` limited to `(0, P_u]`; `None` when not positive or `P_u ≤ 0`.
    pub reported: Option<f64>,
    /// `P_u`, the largest source power usable in RC mode.
    pub source_power_upper: f64,
}

/// Coefficients `(A, B, C)` of `A P² + B P + C`, positive exactly where RC
/// beats DC at `P_s = P` and `P_r = P Δ^m`.
pub fn crossing_quadratic(gains: &ModeGains, sigma2: f64) -> (f64, f64, f64) {
    let k = gains.relay_gain_ratio();
    let ModeGains {
        source_relay: sr,
        source_main: sm,
        source_rc_eavesdropper: se,
        source_dc_eavesdropper: sep,
        ..
    } = *gains;
    let c = k * se + (sr - sm);
    let d = k * sigma2 * (sm - sep);
    let a2 = k * sr * sep * sep - c * sm * sm;
    let a1 = 2.0 * sigma2 * (k * sr * sep - c * sm) - d * (sep + sm);
    let a0 = sigma2 * sigma2 * (k * sr - c) - 2.0 * sigma2 * d;
    (a2, a1, a0)
}

/// Largest real root of `a x² + b x + c` where the sign changes from
/// positive to negative as `x` grows past it, if any.
fn falling_root(a: f64, b: f64, c: f64) -> Option<f64> {
    if a == 0.0 {
        return if b < 0.0 { Some(-c / b) } else { None };
    }
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return None;
    }
    let q = -0.5 * (b + libm::copysign(libm::sqrt(disc), b));
    let (r1, r2) = (q / a, if q != 0.0 { c / q } else { 0.0 });
    let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
    // a < 0: positive between roots, falls at the larger one;
    // a > 0: positive outside, falls at the smaller one.
    Some(if a < 0.0 { hi } else { lo })
}

/// Secure-rate difference RC − DC at `P_s = p`, straight from the two rate
/// expressions.
fn rate_gap(p: f64, gains: &ModeGains, sigma2: f64) -> f64 {
    let pr = p * gains.rsp_ratio();
    let rc = 0.5
        * (libm::log1p((p * gains.source_main + pr * gains.relay_main) / sigma2)
            - libm::log1p((p * gains.source_rc_eavesdropper + pr * gains.relay_rc_eavesdropper) / sigma2));
    let dc =
        libm::log1p(p * gains.source_main / sigma2) - libm::log1p(p * gains.source_dc_eavesdropper / sigma2);
    rc - dc
}

/// Root of [`rate_gap`] by bracketing and bisection, `None` if no sign
/// change from RC-better to DC-better is found.
pub fn p_threshold_bisection(gains: &ModeGains, sigma2: f64) -> Option<f64> {
    let g = |p: f64| rate_gap(p, gains, sigma2);
    let start = sigma2 / gains.source_main;
    let (mut lo, mut hi);
    if g(start) > 0.0 {
        lo = start;
        hi = start * 2.0;
        let mut steps = 0;
        while g(hi) > 0.0 {
            lo = hi;
            hi *= 2.0;
            steps += 1;
            if steps > 1000 || !hi.is_finite() {
                return None;
            }
        }
    } else {
        hi = start;
        lo = start * 0.5;
        let mut steps = 0;
        while g(lo) <= 0.0 {
            hi = lo;
            lo *= 0.5;
            steps += 1;
            if steps > 1000 || lo == 0.0 {
                return None;
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Source-power threshold `P_th` for an RDC subcarrier, closed form checked
/// against bisection on the rate gap. Outside the RDC band `raw` is `None`.
pub fn p_threshold(gains: &ModeGains, sigma2: f64) -> Result<PowerThreshold> {
    gains.check_dc_feasible()?;
    let upper = gains.source_power_upper(sigma2);
    let none = PowerThreshold {
        raw: None,
        reported: None,
        source_power_upper: upper,
    };
    if classify(gains) != ModeClass::Rdc {
        return Ok(none);
    }
    let (a, b, c) = crossing_quadratic(gains, sigma2);
    let raw = match falling_root(a, b, c) {
        Some(r) if r.is_finite() => r.max(0.0),
        _ => return Ok(none),
    };
    if raw > 0.0 {
        if let Some(bisected) = p_threshold_bisection(gains, sigma2) {
            if ((bisected - raw) / raw).abs() > P_THRESHOLD_REL_TOL {
                return Err(Error::Inconsistent {
                    closed_form: raw,
                    bisection: bisected,
                });
            }
        } else {
            return Err(Error::Inconsistent {
                closed_form: raw,
                bisection: f64::NAN,
            });
        }
    }
    let reported = if raw > 0.0 && upper > 0.0 {
        Some(raw.min(upper))
    } else {
        None
    };
    Ok(PowerThreshold {
        raw: Some(raw),
        reported,
        source_power_upper: upper,
    })
}

/// Every threshold for one subcarrier at a given source power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeThresholds {
    pub rho: Threshold,
    pub rho_low: Threshold,
    pub rho_high: Threshold,
    pub p_threshold: PowerThreshold,
    pub relay_gain_ratio: f64,
    pub class: ModeClass,
}

impl ModeThresholds {
    pub fn compute(p_source: f64, gains: &ModeGains, sigma2: f64) -> Result<Self> {
        Ok(Self {
            rho: rho(p_source, gains, sigma2)?,
            rho_low: rho_low(gains),
            rho_high: rho_high(gains),
            p_threshold: p_threshold(gains, sigma2)?,
            relay_gain_ratio: gains.relay_gain_ratio(),
            class: classify(gains),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeChoice {
    pub mode: Mode,
    pub rate_rc: f64,
    pub rate_dc: f64,
}

/// Direct comparison of the RC secure rate at `P_r = P_s Δ^m` against the
/// DC secure rate.
pub fn select_mode_optimal(p_source: f64, gains: &ModeGains, sigma2: f64) -> Result<ModeChoice> {
    if !(p_source > 0.0) {
        return Err(Error::Domain("source power must be positive"));
    }
    gains.check_dc_feasible()?;
    let power = PowerPair::new(p_source, p_source * gains.rsp_ratio());
    let rate_rc = mrc_secure_rate(
        power,
        (gains.source_main, gains.relay_main),
        (gains.source_rc_eavesdropper, gains.relay_rc_eavesdropper),
        sigma2,
    );
    let rate_dc = libm::log2(
        (sigma2 + p_source * gains.source_main) / (sigma2 + p_source * gains.source_dc_eavesdropper),
    );
    let mode = if rate_rc > rate_dc { Mode::Rc } else { Mode::Dc };
    Ok(ModeChoice {
        mode,
        rate_rc,
        rate_dc,
    })
}

/// Threshold form of the same decision: RC iff `γ^{rm}/γ^{re} > ρ(P_s)`.
pub fn select_mode_threshold(p_source: f64, gains: &ModeGains, sigma2: f64) -> Result<Mode> {
    let threshold = rho(p_source, gains, sigma2)?;
    Ok(if threshold.is_exceeded_by(gains.relay_gain_ratio()) {
        Mode::Rc
    } else {
        Mode::Dc
    })
}

/// Power-free decision: RC iff `γ^{rm}/γ^{re} > ρ_α`.
pub fn select_mode_suboptimal(alpha: f64, gains: &ModeGains) -> Mode {
    if rho_alpha(alpha, gains).is_exceeded_by(gains.relay_gain_ratio()) {
        Mode::Rc
    } else {
        Mode::Dc
    }
}
