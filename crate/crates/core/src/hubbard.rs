//! Two-site Hubbard model in the one- and two-electron sectors.
//!
//! All energies are expressed as dimensionless products with the Trotter
//! step (`eps_dt = ε·Δt` and so on); internally `Δt = 1`.
//!
//! Basis conventions after the Jordan-Wigner mapping:
//!
//! - one electron: `|0⟩` electron on site 1, `|1⟩` electron on site 2;
//! - two electrons (total spin zero): `|00⟩` both on site 1, `|01⟩` and
//!   `|10⟩` one per site, `|11⟩` both on site 2.

use alloc::vec::Vec;


#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::circuit::{circuit_unitary, Circuit, Gate};
use crate::engine::PopulationTrace;
use crate::linalg::{kron, matexp_unitary, Operator, C64};
use crate::state::DensityMatrix;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Filling {
    OneElectron,
    TwoElectron,
}

impl Filling {
    pub fn num_qubits(self) -> usize {
        match self {
            Filling::OneElectron => 1,
            Filling::TwoElectron => 2,
        }
    }

    pub fn basis_labels(self) -> Vec<alloc::string::String> {
        let n = self.num_qubits();
        (0..1usize << n)
            .map(|i| alloc::format!("{:0width$b}", i, width = n))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ModelSpec {
    pub filling: Filling,
    #[cfg_attr(feature = "serde", serde(default))]
    pub eps_dt: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub t12_dt: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub uc_dt: f64,
    pub steps: usize,
}

impl ModelSpec {
    pub fn one_electron(eps_dt: f64, t12_dt: f64, steps: usize) -> Self {
        Self {
            filling: Filling::OneElectron,
            eps_dt,
            t12_dt,
            uc_dt: 0.0,
            steps,
        }
    }

    pub fn two_electron(t12_dt: f64, uc_dt: f64, steps: usize) -> Self {
        Self {
            filling: Filling::TwoElectron,
            eps_dt: 0.0,
            t12_dt,
            uc_dt,
            steps,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps_dt", self.eps_dt),
            ("t12_dt", self.t12_dt),
            ("uc_dt", self.uc_dt),
        ] {
            if !v.is_finite() {
                return Err(Error::param(name, "must be finite"));
            }
        }
        if self.filling == Filling::TwoElectron && self.eps_dt != 0.0 {
            return Err(Error::param(
                "eps_dt",
                "the two-electron sector is defined with ε = 0",
            ));
        }
        Ok(())
    }

    pub fn num_qubits(&self) -> usize {
        self.filling.num_qubits()
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum InitialState {
    /// One electron on site 1, `|0⟩`.
    Site1,
    /// One electron on site 2, `|1⟩`.
    Site2,
    /// Both electrons on site 1, `|00⟩`.
    DoubleSite1,
    /// Both electrons on site 2, `|11⟩`.
    DoubleSite2,
    /// `(|01⟩ - |10⟩)/√2`
    Singlet,
    Custom(DensityMatrix),
}

impl InitialState {
    /// The conventional starting point for a filling: the electron(s) on site 2.
    pub fn default_for(filling: Filling) -> Self {
        match filling {
            Filling::OneElectron => InitialState::Site2,
            Filling::TwoElectron => InitialState::DoubleSite2,
        }
    }

    pub fn density(&self, filling: Filling) -> Result<DensityMatrix> {
        use InitialState::*;
        match (self, filling) {
            (Site1, Filling::OneElectron) => DensityMatrix::basis(1, 0),
            (Site2, Filling::OneElectron) => DensityMatrix::basis(1, 1),
            (DoubleSite1, Filling::TwoElectron) => DensityMatrix::basis(2, 0b00),
            (DoubleSite2, Filling::TwoElectron) => DensityMatrix::basis(2, 0b11),
            (Singlet, Filling::TwoElectron) => {
                let s = 0.5f64.sqrt();
                let z = C64::new(0.0, 0.0);
                DensityMatrix::pure(&[z, C64::new(s, 0.0), C64::new(-s, 0.0), z])
            }
            (Custom(rho), f) => {
                if rho.num_qubits() != f.num_qubits() {
                    return Err(Error::DimensionMismatch {
                        expected: 1 << f.num_qubits(),
                        found: rho.dim(),
                    });
                }
                Ok(rho.clone())
            }
            (other, f) => Err(Error::param(
                "init",
                alloc::format!("{other:?} is not a state of the {f:?} sector"),
            )),
        }
    }
}

/// System Hamiltonian in units of `1/Δt`.
pub fn hamiltonian(spec: &ModelSpec) -> Result<Operator> {
    spec.validate()?;
    let re = |x: f64| C64::new(x, 0.0);
    let h = match spec.filling {
        Filling::OneElectron => &Operator::pauli_z().scale(re(spec.eps_dt))
            + &Operator::pauli_x().scale(re(spec.t12_dt)),
        Filling::TwoElectron => {
            let id = Operator::identity(2);
            let x = Operator::pauli_x();
            let z = Operator::pauli_z();
            let hop = &kron(&id, &x)? + &kron(&x, &id)?;
            &hop.scale(re(spec.t12_dt)) + &kron(&z, &z)?.scale(re(spec.uc_dt / 2.0))
        }
    };
    Ok(h)
}

/// One first-order Trotter step: hopping rotations, then the on-site block.
pub fn trotter_step_circuit(spec: &ModelSpec) -> Result<Circuit> {
    spec.validate()?;
    let mut c = Circuit::new(spec.num_qubits());
    let hop = 2.0 * spec.t12_dt;
    match spec.filling {
        Filling::OneElectron => {
            c.push(Gate::rx(hop, 0))?.push(Gate::rz(2.0 * spec.eps_dt, 0))?;
        }
        Filling::TwoElectron => {
            c.push(Gate::rx(hop, 0))?
                .push(Gate::rx(hop, 1))?
                .push(Gate::cnot(0, 1)?)?
                .push(Gate::rz(spec.uc_dt, 1))?
                .push(Gate::cnot(0, 1)?)?;
        }
    }
    Ok(c)
}

/// Exact populations at continuous time `time` (in units of `Δt`).
pub fn exact_populations_at(spec: &ModelSpec, init: &InitialState, time: f64) -> Result<Vec<f64>> {
    let u = matexp_unitary(&hamiltonian(spec)?, time, 1.0)?;
    let rho = init.density(spec.filling)?;
    Ok(DensityMatrix::new(u.conjugate(rho.as_operator()))?.populations())
}

/// Diagonal of `e^{-iHn} ρ0 e^{iHn}`.
pub fn exact_populations(spec: &ModelSpec, init: &InitialState, n: usize) -> Result<Vec<f64>> {
    exact_populations_at(spec, init, n as f64)
}

/// Exact populations for `n = 0..=spec.steps`.
pub fn exact_trace(spec: &ModelSpec, init: &InitialState) -> Result<PopulationTrace> {
    let h = hamiltonian(spec)?;
    let eig = h.eigh()?;
    let rho0 = init.density(spec.filling)?;
    let mut rows = Vec::with_capacity(spec.steps + 1);
    for n in 0..=spec.steps {
        let t = n as f64;
        let u = eig.map(|l| C64::new((-l * t).cos(), (-l * t).sin()));
        rows.push(DensityMatrix::new(u.conjugate(rho0.as_operator()))?.populations());
    }
    Ok(PopulationTrace::exact(spec.filling.basis_labels(), rows))
}

/// Noiseless populations after `k` Trotter steps, `k = 0..=spec.steps`.
pub fn trotterized_populations(spec: &ModelSpec, init: &InitialState) -> Result<PopulationTrace> {
    let u = circuit_unitary(&trotter_step_circuit(spec)?)?;
    let mut rho = init.density(spec.filling)?;
    let mut rows = Vec::with_capacity(spec.steps + 1);
    rows.push(rho.populations());
    for _ in 0..spec.steps {
        rho = DensityMatrix::new(u.conjugate(rho.as_operator()))?;
        rows.push(rho.populations());
    }
    Ok(PopulationTrace::exact(spec.filling.basis_labels(), rows))
}

/// Pair-oscillation frequency `4·t12²/U_C`.
pub fn pair_frequency(spec: &ModelSpec) -> Result<f64> {
    if spec.uc_dt == 0.0 {
        return Err(Error::ZeroParameter("uc_dt"));
    }
    Ok(4.0 * spec.t12_dt * spec.t12_dt / spec.uc_dt)
}

/// Effective hopping `t12²/ε` for a detuned single electron.
pub fn effective_hopping(spec: &ModelSpec) -> Result<f64> {
    if spec.eps_dt == 0.0 {
        return Err(Error::ZeroParameter("eps_dt"));
    }
    Ok(spec.t12_dt * spec.t12_dt / spec.eps_dt)
}

/// Perturbative frequency scales, in units of `1/Δt`.
///
/// Fields whose defining denominator vanishes are `None`; call
/// [`pair_frequency`] or [`effective_hopping`] for the error naming the
/// offending parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CharacteristicFrequencies {
    pub pair_freq: Option<f64>,
    pub fast_freq: f64,
    pub effective_hopping: Option<f64>,
}

pub fn characteristic_frequencies(spec: &ModelSpec) -> CharacteristicFrequencies {
    CharacteristicFrequencies {
        pair_freq: pair_frequency(spec).ok(),
        fast_freq: spec.uc_dt,
        effective_hopping: effective_hopping(spec).ok(),
    }
}

/// Same physical dynamics at `scale` times finer time resolution.
pub fn refine(spec: &ModelSpec, scale: u32) -> ModelSpec {
    let s = f64::from(scale);
    ModelSpec {
        filling: spec.filling,
        eps_dt: spec.eps_dt / s,
        t12_dt: spec.t12_dt / s,
        uc_dt: spec.uc_dt / s,
        steps: spec.steps * scale as usize,
    }
}
