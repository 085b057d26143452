//! Link rates, effective rate and secure rate on a single subcarrier.
//!
//! All rates are spectral efficiencies in bits/s/Hz. RC mode spends two
//! half-duplex slots, hence the factor ½ on every relayed rate; DC mode uses
//! the whole slot.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerPair {
    pub source: f64,
    pub relay: f64,
}

impl PowerPair {
    pub const fn new(source: f64, relay: f64) -> Self {
        Self { source, relay }
    }
}

/// Gains seen by one user on one subcarrier: `γ^{sm}`, `γ^{sr}`, `γ^{rm}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserGains {
    pub source_user: f64,
    pub source_relay: f64,
    pub relay_user: f64,
}

impl UserGains {
    pub const fn new(source_user: f64, source_relay: f64, relay_user: f64) -> Self {
        Self {
            source_user,
            source_relay,
            relay_user,
        }
    }

    /// `Δ = (γ^{sr} − γ^{sm}) / γ^{rm}`.
    pub fn rsp_ratio(&self) -> f64 {
        (self.source_relay - self.source_user) / self.relay_user
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkRates {
    /// Source to user, `R^{sm}`.
    pub direct: f64,
    /// Source to relay, `R^{sr}`.
    pub source_relay: f64,
    /// Source and relay combined at the user by MRC, `R^{srm}`.
    pub combined: f64,
}

/// Which term of the effective rate is active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateBranch {
    /// RC mode limited by the source-relay hop.
    SrBottleneck,
    /// RC mode limited by the combined link at the user.
    MrcBottleneck,
    /// Direct communication.
    Direct,
}

impl RateBranch {
    pub fn as_str(&self) -> &'static str {
        match self {
            RateBranch::SrBottleneck => "SR_BOTTLENECK",
            RateBranch::MrcBottleneck => "MRC_BOTTLENECK",
            RateBranch::Direct => "DC",
        }
    }
}

pub fn link_rates(power: PowerPair, gains: UserGains, sigma2: f64) -> LinkRates {
    debug_assert!(sigma2 > 0.0);
    let direct_snr = power.source * gains.source_user / sigma2;
    LinkRates {
        direct: libm::log2(1.0 + direct_snr),
        source_relay: libm::log2(1.0 + power.source * gains.source_relay / sigma2),
        combined: libm::log2(1.0 + direct_snr + power.relay * gains.relay_user / sigma2),
    }
}

/// `½ · max{2R^{sm}, min{R^{sr}, R^{srm}}}`.
pub fn effective_rate_maxmin(power: PowerPair, gains: UserGains, sigma2: f64) -> f64 {
    let r = link_rates(power, gains, sigma2);
    0.5 * f64::max(2.0 * r.direct, f64::min(r.source_relay, r.combined))
}

/// Effective rate evaluated through the gain/power conditions instead of
/// the rate comparisons. Agrees with [`effective_rate_maxmin`].
///
/// A zero relay power always selects [`RateBranch::Direct`]: nothing decoded
/// at the relay reaches the user.
pub fn effective_rate_cases(power: PowerPair, gains: UserGains, sigma2: f64) -> (f64, RateBranch) {
    let r = link_rates(power, gains, sigma2);
    if power.relay == 0.0 {
        return (r.direct, RateBranch::Direct);
    }
    let t = thresholds(power.source, gains, sigma2);
    let relay_gain_ok = gains.source_relay >= gains.source_user * t.a;
    if relay_gain_ok && power.relay >= t.p_relay_lower {
        if power.relay >= power.source * t.rsp_ratio {
            return (0.5 * r.source_relay, RateBranch::SrBottleneck);
        }
        return (0.5 * r.combined, RateBranch::MrcBottleneck);
    }
    (r.direct, RateBranch::Direct)
}

/// Derived quantities that decide when RC mode can pay off for one user.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSet {
    /// `a = 2 + P_s γ^{sm} / σ²`.
    pub a: f64,
    /// Largest source power for which the relay hop beats twice the direct
    /// rate. Negative when `γ^{sr} < 2γ^{sm}`: RC is never usable.
    pub p_src_upper: f64,
    /// Smallest relay power for which the combined link beats twice the
    /// direct rate.
    pub p_relay_lower: f64,
    /// RSP ratio `Δ`.
    pub rsp_ratio: f64,
}

pub fn thresholds(p_source: f64, gains: UserGains, sigma2: f64) -> ThresholdSet {
    let UserGains {
        source_user: sm,
        source_relay: sr,
        relay_user: rm,
    } = gains;
    ThresholdSet {
        a: 2.0 + p_source * sm / sigma2,
        p_src_upper: (sr - 2.0 * sm) * sigma2 / (sm * sm),
        p_relay_lower: p_source * (sm / rm) * (1.0 + p_source * sm / sigma2),
        rsp_ratio: (sr - sm) / rm,
    }
}

/// `[R^m − max_{o≠m} R^o]^+` given the effective rate of every user.
pub fn secure_rate(rates: &[f64], main: usize) -> Result<f64> {
    if rates.len() < 2 {
        return Err(Error::TooFewUsers(rates.len()));
    }
    if main >= rates.len() {
        return Err(Error::UserOutOfRange {
            index: main,
            users: rates.len(),
        });
    }
    let strongest_other = rates
        .iter()
        .enumerate()
        .filter(|(o, _)| *o != main)
        .map(|(_, r)| *r)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(f64::max(rates[main] - strongest_other, 0.0))
}

/// RC secure rate when both the main user and its eavesdropper are limited
/// by their combined links:
/// `½ log2((σ² + P_s γ^{sm} + P_r γ^{rm}) / (σ² + P_s γ^{se} + P_r γ^{re}))`.
///
/// Not clipped at zero; the value is negative when the eavesdropper is the
/// stronger receiver.
pub fn mrc_secure_rate(power: PowerPair, main: (f64, f64), eavesdropper: (f64, f64), sigma2: f64) -> f64 {
    let (sm, rm) = main;
    let (se, re) = eavesdropper;
    let num = sigma2 + power.source * sm + power.relay * rm;
    let den = sigma2 + power.source * se + power.relay * re;
    0.5 * libm::log2(num / den)
}
