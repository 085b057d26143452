//! Node geometry and quasi-static Rayleigh fading.
//!
//! Every link gain is a power gain `e · d^{-η}` where `e` is a unit-mean
//! exponential draw (the squared envelope of a Rayleigh amplitude) and `d`
//! the node distance in unitless plane coordinates. Gains are independent
//! across subcarriers, users and links.

use alloc::vec::Vec;

use rand::distr::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::rates::UserGains;

/// Identifier of the random stream used by [`generate_channel`].
///
/// ChaCha8 seeded through `seed_from_u64`, uniform draws on the open
/// interval (0, 1), exponential variates by inverse CDF `-ln(u)`.
pub const GENERATOR_ID: &str = "chacha8/open01/exp-inverse-cdf";

pub const DEFAULT_PATH_LOSS_EXPONENT: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodePosition {
    pub x: f64,
    pub y: f64,
}

impl NodePosition {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &NodePosition) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }

    fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// Source, relay and the ordered list of untrusted users.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemGeometry {
    pub source: NodePosition,
    pub relay: NodePosition,
    pub users: Vec<NodePosition>,
}

impl SystemGeometry {
    pub fn new(source: NodePosition, relay: NodePosition, users: Vec<NodePosition>) -> Result<Self> {
        let geometry = Self { source, relay, users };
        geometry.validate()?;
        Ok(geometry)
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.users.len() < 2 {
            return Err(Error::TooFewUsers(self.users.len()));
        }
        if !self.source.is_finite() || !self.relay.is_finite() {
            return Err(Error::InvalidGeometry("non-finite source or relay coordinate"));
        }
        if self.source.distance(&self.relay) <= 0.0 {
            return Err(Error::InvalidGeometry("relay co-located with source"));
        }
        for user in &self.users {
            if !user.is_finite() {
                return Err(Error::InvalidGeometry("non-finite user coordinate"));
            }
            if user.distance(&self.source) <= 0.0 || user.distance(&self.relay) <= 0.0 {
                return Err(Error::InvalidGeometry("user co-located with source or relay"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FadingConfig {
    pub path_loss_exponent: f64,
    /// Noise power σ² (linear).
    pub noise_power: f64,
    pub num_subcarriers: usize,
    pub seed: u64,
}

impl FadingConfig {
    /// Path-loss exponent 3 and unit noise power.
    pub fn new(num_subcarriers: usize, seed: u64) -> Self {
        Self {
            path_loss_exponent: DEFAULT_PATH_LOSS_EXPONENT,
            noise_power: 1.0,
            num_subcarriers,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        // η = 0 is allowed: gains collapse to pure unit-mean exponentials.
        if !(self.path_loss_exponent >= 0.0 && self.path_loss_exponent.is_finite()) {
            return Err(Error::InvalidParameter(
                "path-loss exponent must be finite and non-negative",
            ));
        }
        if !(self.noise_power > 0.0 && self.noise_power.is_finite()) {
            return Err(Error::InvalidParameter("noise power must be positive"));
        }
        if self.num_subcarriers == 0 {
            return Err(Error::InvalidParameter("at least one subcarrier is required"));
        }
        Ok(())
    }
}

/// Per-subcarrier power gains of every link plus the noise power.
///
/// `gain_su` and `gain_ru` are stored row-major, one row of `M` user gains
/// per subcarrier.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    num_subcarriers: usize,
    num_users: usize,
    noise_power: f64,
    gain_sr: Vec<f64>,
    gain_su: Vec<f64>,
    gain_ru: Vec<f64>,
}

impl ChannelRealization {
    pub fn from_parts(
        num_subcarriers: usize,
        num_users: usize,
        noise_power: f64,
        gain_sr: Vec<f64>,
        gain_su: Vec<f64>,
        gain_ru: Vec<f64>,
    ) -> Result<Self> {
        if num_subcarriers == 0 {
            return Err(Error::InvalidParameter("at least one subcarrier is required"));
        }
        if num_users < 2 {
            return Err(Error::TooFewUsers(num_users));
        }
        if !(noise_power > 0.0 && noise_power.is_finite()) {
            return Err(Error::InvalidParameter("noise power must be positive"));
        }
        let checks = [
            ("gain_sr", num_subcarriers, &gain_sr),
            ("gain_su", num_subcarriers * num_users, &gain_su),
            ("gain_ru", num_subcarriers * num_users, &gain_ru),
        ];
        for (what, expected, values) in checks {
            if values.len() != expected {
                return Err(Error::DimensionMismatch {
                    what,
                    expected,
                    got: values.len(),
                });
            }
            if values.iter().any(|g| !(*g > 0.0 && g.is_finite())) {
                return Err(Error::InvalidParameter(
                    "channel gains must be positive and finite",
                ));
            }
        }
        Ok(Self {
            num_subcarriers,
            num_users,
            noise_power,
            gain_sr,
            gain_su,
            gain_ru,
        })
    }

    pub fn num_subcarriers(&self) -> usize {
        self.num_subcarriers
    }

    pub fn num_users(&self) -> usize {
        self.num_users
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    pub fn gain_sr(&self) -> &[f64] {
        &self.gain_sr
    }

    pub fn gain_su(&self) -> &[f64] {
        &self.gain_su
    }

    pub fn gain_ru(&self) -> &[f64] {
        &self.gain_ru
    }

    /// Gains of subcarrier `n`. Panics if `n` is out of range.
    pub fn subcarrier(&self, n: usize) -> SubcarrierGains<'_> {
        let row = n * self.num_users..(n + 1) * self.num_users;
        SubcarrierGains {
            source_relay: self.gain_sr[n],
            source_user: &self.gain_su[row.clone()],
            relay_user: &self.gain_ru[row],
            noise_power: self.noise_power,
        }
    }

    pub fn subcarriers(&self) -> impl Iterator<Item = SubcarrierGains<'_>> + '_ {
        (0..self.num_subcarriers).map(move |n| self.subcarrier(n))
    }
}

/// Borrowed view of one subcarrier: `γ^{sr}`, `γ^{s·}`, `γ^{r·}` and σ².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubcarrierGains<'a> {
    pub source_relay: f64,
    pub source_user: &'a [f64],
    pub relay_user: &'a [f64],
    pub noise_power: f64,
}

impl SubcarrierGains<'_> {
    pub fn num_users(&self) -> usize {
        self.source_user.len()
    }

    pub fn user(&self, m: usize) -> UserGains {
        UserGains {
            source_user: self.source_user[m],
            source_relay: self.source_relay,
            relay_user: self.relay_user[m],
        }
    }

    /// Relay-versus-source power ratio `Δ^m = (γ^{sr} − γ^{sm}) / γ^{rm}`.
    pub fn rsp_ratio(&self, m: usize) -> f64 {
        (self.source_relay - self.source_user[m]) / self.relay_user[m]
    }
}

/// Mean power gain `d^{-η}` at distance `d` (unit reference distance).
pub fn path_gain(distance: f64, eta: f64) -> Result<f64> {
    if !(distance > 0.0 && distance.is_finite()) {
        return Err(Error::InvalidDistance(distance));
    }
    Ok(libm::pow(distance, -eta))
}

/// Unit-mean exponential variate, strictly positive.
pub fn exponential_draw<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    -libm::log(u)
}

/// Draws one channel realization.
///
/// The stream is consumed in a fixed order: all `N` source-relay gains,
/// then the `N × M` source-user gains, then the `N × M` relay-user gains,
/// both row-major. Identical `(geometry, config)` give bit-identical output.
pub fn generate_channel(geometry: &SystemGeometry, config: &FadingConfig) -> Result<ChannelRealization> {
    geometry.validate()?;
    config.validate()?;

    let n = config.num_subcarriers;
    let m = geometry.num_users();
    let eta = config.path_loss_exponent;

    let mean_sr = path_gain(geometry.source.distance(&geometry.relay), eta)?;
    let mut mean_su = Vec::with_capacity(m);
    let mut mean_ru = Vec::with_capacity(m);
    for user in &geometry.users {
        mean_su.push(path_gain(geometry.source.distance(user), eta)?);
        mean_ru.push(path_gain(geometry.relay.distance(user), eta)?);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let gain_sr = (0..n).map(|_| exponential_draw(&mut rng) * mean_sr).collect();
    let gain_su = (0..n * m)
        .map(|i| exponential_draw(&mut rng) * mean_su[i % m])
        .collect();
    let gain_ru = (0..n * m)
        .map(|i| exponential_draw(&mut rng) * mean_ru[i % m])
        .collect();

    ChannelRealization::from_parts(n, m, config.noise_power, gain_sr, gain_su, gain_ru)
}
