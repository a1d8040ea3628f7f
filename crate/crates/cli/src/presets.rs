//! Parameter sets of the published figures.

use hubbath_core::{
    BathSpec, BathTopology, Coupling, ExperimentConfig, InitialState, ModelSpec, NoiseModel,
    ReadoutFlip, ZneSpec,
};
use thiserror::Error;

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    build: fn() -> ExperimentConfig,
}

impl Preset {
    pub fn config(&self) -> ExperimentConfig {
        (self.build)()
    }
}

/// Readout error pair used wherever a preset models a noisy measurement.
pub const READOUT: ReadoutFlip = ReadoutFlip {
    p1_given0: 0.02,
    p0_given1: 0.05,
};

fn one_electron(eps_dt: f64) -> ExperimentConfig {
    ExperimentConfig::new(ModelSpec::one_electron(eps_dt, 0.1, 25)).with_init(InitialState::Site2)
}

fn two_electron(steps: usize) -> ExperimentConfig {
    ExperimentConfig::new(ModelSpec::two_electron(0.1, 0.4, steps))
        .with_init(InitialState::DoubleSite2)
}

fn fig4_upper() -> ExperimentConfig {
    one_electron(0.2)
}

fn fig4_lower() -> ExperimentConfig {
    one_electron(0.2).with_bath(BathSpec::new(Coupling::Xy, 0.5))
}

fn fig5_upper() -> ExperimentConfig {
    one_electron(0.0)
}

fn fig5_lower() -> ExperimentConfig {
    one_electron(0.0).with_bath(BathSpec::new(Coupling::Zz, 0.5))
}

fn fig6_upper() -> ExperimentConfig {
    let mut cfg = two_electron(30).with_noise(NoiseModel {
        readout: vec![READOUT],
        ..NoiseModel::default()
    });
    cfg.mitigation.readout = true;
    cfg
}

fn fig6_lower() -> ExperimentConfig {
    two_electron(30).with_bath(BathSpec::new(Coupling::Xy, 0.5))
}

fn fig7_dfs() -> ExperimentConfig {
    two_electron(30)
        .with_init(InitialState::Singlet)
        .with_bath(BathSpec::new(Coupling::Zz, 0.5).with_topology(BathTopology::Common))
}

fn fig7_mitigation() -> ExperimentConfig {
    let mut cfg = two_electron(10).with_noise(NoiseModel {
        gate_depolarizing: 0.005,
        two_qubit_depolarizing: Some(0.02),
        amplitude_decay_per_step: 0.01,
        readout: vec![READOUT],
        fresh_swap_depolarizing: 0.0,
    });
    cfg.mitigation.readout = true;
    cfg.mitigation.zne = Some(ZneSpec::default());
    cfg.mitigation.bitflip = true;
    cfg
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig4_upper",
        description: "one electron, Rabi oscillation without bath",
        build: fig4_upper,
    },
    Preset {
        name: "fig4_lower",
        description: "one electron, XY bath (amplitude damping)",
        build: fig4_lower,
    },
    Preset {
        name: "fig5_upper",
        description: "one electron at zero detuning without bath",
        build: fig5_upper,
    },
    Preset {
        name: "fig5_lower",
        description: "one electron at zero detuning, ZZ bath (phase damping)",
        build: fig5_lower,
    },
    Preset {
        name: "fig6_upper",
        description: "two electrons, pair oscillation with readout noise and calibration",
        build: fig6_upper,
    },
    Preset {
        name: "fig6_lower",
        description: "two electrons, XY bath on each qubit",
        build: fig6_lower,
    },
    Preset {
        name: "fig7_dfs",
        description: "singlet under a common ZZ bath (decoherence-free)",
        build: fig7_dfs,
    },
    Preset {
        name: "fig7_mitigation",
        description: "two electrons with device-like noise; readout, ZNE and bit-flip mitigation",
        build: fig7_mitigation,
    },
];

#[derive(Debug, Error)]
#[error("unknown preset `{name}`; available: {}", preset_names().join(", "))]
pub struct UnknownPreset {
    pub name: String,
}

pub fn preset_names() -> Vec<&'static str> {
    PRESETS.iter().map(|p| p.name).collect()
}

pub fn find_preset(name: &str) -> Result<&'static Preset, UnknownPreset> {
    PRESETS.iter().find(|p| p.name == name).ok_or_else(|| UnknownPreset {
        name: name.to_string(),
    })
}
