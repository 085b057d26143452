//! JSON documents for channel realizations and node geometries.
//!
//! A channel document carries `N`, `M`, `sigma2`, `gain_sr` (length `N`) and
//! `gain_su`, `gain_ru`. The user-gain matrices are written as `N` rows of
//! `M` values; a flat row-major array of length `N·M` is accepted on input.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use secrelay_core::{ChannelRealization, NodePosition, SystemGeometry};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GainMatrix {
    Nested(Vec<Vec<f64>>),
    Flat(Vec<f64>),
}

impl GainMatrix {
    fn into_flat(self, what: &str, cols: usize) -> Result<Vec<f64>> {
        match self {
            GainMatrix::Flat(v) => Ok(v),
            GainMatrix::Nested(rows) => {
                if let Some((n, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != cols) {
                    return Err(Error::Config(format!(
                        "{what}[{n}] has {} values, expected M = {cols}",
                        row.len()
                    )));
                }
                Ok(rows.into_iter().flatten().collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDocument {
    #[serde(rename = "N")]
    pub num_subcarriers: usize,
    #[serde(rename = "M")]
    pub num_users: usize,
    pub sigma2: f64,
    pub gain_sr: Vec<f64>,
    pub gain_su: GainMatrix,
    pub gain_ru: GainMatrix,
}

impl ChannelDocument {
    pub fn from_realization(ch: &ChannelRealization) -> Self {
        let m = ch.num_users();
        let nested = |flat: &[f64]| GainMatrix::Nested(flat.chunks(m).map(<[f64]>::to_vec).collect());
        Self {
            num_subcarriers: ch.num_subcarriers(),
            num_users: m,
            sigma2: ch.noise_power(),
            gain_sr: ch.gain_sr().to_vec(),
            gain_su: nested(ch.gain_su()),
            gain_ru: nested(ch.gain_ru()),
        }
    }

    pub fn into_realization(self) -> Result<ChannelRealization> {
        let m = self.num_users;
        let su = self.gain_su.into_flat("gain_su", m)?;
        let ru = self.gain_ru.into_flat("gain_ru", m)?;
        Ok(ChannelRealization::from_parts(
            self.num_subcarriers,
            m,
            self.sigma2,
            self.gain_sr,
            su,
            ru,
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryDocument {
    pub source: [f64; 2],
    pub relay: [f64; 2],
    pub users: Vec<[f64; 2]>,
}

impl GeometryDocument {
    pub fn into_geometry(self) -> Result<SystemGeometry> {
        let pos = |[x, y]: [f64; 2]| NodePosition::new(x, y);
        Ok(SystemGeometry::new(
            pos(self.source),
            pos(self.relay),
            self.users.into_iter().map(pos).collect(),
        )?)
    }
}

pub fn channel_to_json(ch: &ChannelRealization) -> String {
    let mut s = serde_json::to_string_pretty(&ChannelDocument::from_realization(ch))
        .expect("channel document always serializes");
    s.push('\n');
    s
}

pub fn channel_from_json(text: &str) -> std::result::Result<ChannelDocument, serde_json::Error> {
    serde_json::from_str(text)
}

pub(crate) fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_channel(path: &Path) -> Result<ChannelRealization> {
    read_json::<ChannelDocument>(path)?.into_realization()
}

pub fn read_geometry(path: &Path) -> Result<SystemGeometry> {
    read_json::<GeometryDocument>(path)?.into_geometry()
}
