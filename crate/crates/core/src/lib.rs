//! Secure-rate engine for a decode-and-forward relay assisted OFDMA downlink
//! in which every user is a potential eavesdropper on every other user.
//!
//! The crate is `no_std` (it needs `alloc` for channel storage) and is split
//! along the processing chain:
//!
//! - [`channel`]: node geometry, path loss and seeded Rayleigh fading.
//! - [`rates`]: link rates, effective rate, feasibility thresholds and
//!   secure rates on a single subcarrier.
//! - [`allocation`]: main-user / eavesdropper selection for direct (DC) and
//!   relayed (RC) communication and the RC feasibility test.
//! - [`mode`]: RC versus DC comparison, the `ρ` family of relay-gain
//!   thresholds, subcarrier classification and the source-power threshold.
//! - [`decision`]: the full per-subcarrier pipeline used by the experiments.
#![no_std]
// `!(x > 0.0)` is used on purpose so that NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod allocation;
pub mod channel;
pub mod decision;
pub mod error;
pub mod mode;
pub mod rates;

pub use allocation::{
    allocate_dc, allocate_rc, rc_feasible, rc_feasible_with, rsp_order, AllocationResult, FeasibilityRule,
    Mode, RcStatus,
};
pub use channel::{
    generate_channel, path_gain, ChannelRealization, FadingConfig, NodePosition, SubcarrierGains,
    SystemGeometry, GENERATOR_ID,
};
pub use decision::{decide_subcarrier, Assignment, Policy, SubcarrierDecision};
pub use error::{Error, Result};
pub use mode::{
    classify, crossing_quadratic, p_threshold, p_threshold_bisection, rho, rho_alpha, rho_denominator,
    rho_high, rho_low, select_mode_optimal, select_mode_suboptimal, select_mode_threshold, ModeChoice,
    ModeClass, ModeGains, ModeThresholds, PowerThreshold, Threshold,
};
pub use rates::{
    effective_rate_cases, effective_rate_maxmin, link_rates, mrc_secure_rate, secure_rate, thresholds,
    LinkRates, PowerPair, RateBranch, ThresholdSet, UserGains,
};
