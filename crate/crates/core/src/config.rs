//! Declarative description of one experiment.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::bath::BathSpec;
use crate::engine::NoiseModel;
use crate::hubbard::{InitialState, ModelSpec};
use crate::state::DensityMatrix;
use crate::{Error, Result};

/// Shots per circuit used when a config does not say otherwise.
pub const DEFAULT_SHOTS: u64 = 8192;

/// Two-step Richardson extrapolation settings.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct ZneSpec {
    pub order: usize,
    pub scales: Vec<u32>,
}

impl Default for ZneSpec {
    fn default() -> Self {
        Self {
            order: 1,
            scales: vec![1, 2],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct MitigationSpec {
    pub readout: bool,
    /// Correct readout by plain matrix inversion, without projecting the
    /// result back onto valid distributions.
    pub readout_raw_inverse: bool,
    pub zne: Option<ZneSpec>,
    pub bitflip: bool,
}

impl MitigationSpec {
    pub fn is_empty(&self) -> bool {
        !self.readout && self.zne.is_none() && !self.bitflip
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    /// Defaults to the electron(s) on site 2.
    #[cfg_attr(feature = "serde", serde(default))]
    pub init: Option<InitialState>,
    #[cfg_attr(feature = "serde", serde(default))]
    pub bath: BathSpec,
    #[cfg_attr(feature = "serde", serde(default))]
    pub noise: NoiseModel,
    /// `0` selects exact populations.
    #[cfg_attr(feature = "serde", serde(default = "default_shots"))]
    pub shots: u64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub seed: u64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub mitigation: MitigationSpec,
    #[cfg_attr(feature = "serde", serde(default))]
    pub output_path: Option<String>,
}

#[cfg(feature = "serde")]
fn default_shots() -> u64 {
    DEFAULT_SHOTS
}

impl ExperimentConfig {
    pub fn new(model: ModelSpec) -> Self {
        Self {
            model,
            init: None,
            bath: BathSpec::default(),
            noise: NoiseModel::default(),
            shots: DEFAULT_SHOTS,
            seed: 0,
            mitigation: MitigationSpec::default(),
            output_path: None,
        }
    }

    pub fn with_bath(mut self, bath: BathSpec) -> Self {
        self.bath = bath;
        self
    }

    pub fn with_init(mut self, init: InitialState) -> Self {
        self.init = Some(init);
        self
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_shots(mut self, shots: u64) -> Self {
        self.shots = shots;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn initial_state(&self) -> InitialState {
        self.init
            .clone()
            .unwrap_or_else(|| InitialState::default_for(self.model.filling))
    }

    pub fn initial_density(&self) -> Result<DensityMatrix> {
        self.initial_state()
            .density(self.model.filling)
            .map_err(|e| Error::InvalidConfig {
                path: "init".into(),
                message: e.to_string(),
            })
    }

    /// Checks every field, reporting the first offending path.
    pub fn validate(&self) -> Result<()> {
        self.model.validate().map_err(|e| invalid("model", e))?;
        self.bath.validate().map_err(|e| invalid("bath", e))?;
        self.noise.validate().map_err(|e| invalid("noise", e))?;
        self.initial_density()?;
        self.noise
            .readout_for(self.model.num_qubits())
            .map_err(|e| invalid("noise.readout", e))?;

        let m = &self.mitigation;
        if self.shots == 0 && (m.readout || m.bitflip) {
            return Err(Error::InvalidConfig {
                path: "mitigation".into(),
                message: "readout and bitflip mitigation need sampled runs (shots > 0)".into(),
            });
        }
        if m.readout_raw_inverse && !m.readout {
            return Err(Error::InvalidConfig {
                path: "mitigation.readout_raw_inverse".into(),
                message: "requires readout mitigation".into(),
            });
        }
        if let Some(zne) = &m.zne {
            validate_zne(zne)?;
        }
        Ok(())
    }
}

fn validate_zne(zne: &ZneSpec) -> Result<()> {
    let err = |path: &str, message: String| Error::InvalidConfig {
        path: format!("mitigation.zne.{path}"),
        message,
    };
    if zne.order == 0 {
        return Err(err("order", "must be at least 1".into()));
    }
    if zne.scales.len() < zne.order + 1 {
        return Err(err(
            "scales",
            format!("order {} needs at least {} scales", zne.order, zne.order + 1),
        ));
    }
    for (i, &s) in zne.scales.iter().enumerate() {
        if s == 0 {
            return Err(err(&format!("scales[{i}]"), "must be at least 1".into()));
        }
        if zne.scales[..i].contains(&s) {
            return Err(err(&format!("scales[{i}]"), format!("duplicate scale {s}")));
        }
    }
    Ok(())
}

fn invalid(path: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter { name, reason } => Error::InvalidConfig {
            path: format!("{path}.{name}"),
            message: reason,
        },
        Error::InvalidConfig { .. } => e,
        other => Error::InvalidConfig {
            path: path.into(),
            message: other.to_string(),
        },
    }
}
