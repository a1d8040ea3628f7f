//! Spin-bath ancillas and their collisions with the system.
//!
//! Each Trotter step the system meets fresh bath qubits prepared in thermal
//! equilibrium. Two couplings are available:
//!
//! - `ZZ`: CNOT(bath→system) · RZ(gΔt) on the system · CNOT(bath→system),
//!   which equals `exp(-i(gΔt/2) σz⊗σz)`. With the bath in `|+⟩` this is
//!   phase damping that scales coherences by `cos(gΔt)`.
//! - `XY`: controlled-RY(gΔt) from system to bath, then CNOT(bath→system).
//!   With the bath in `|0⟩` this is amplitude damping with decay
//!   probability `sin²(gΔt/2)`.
//!
//! Angles follow the circuits above. The written operator actions for the
//! same couplings correspond to twice the circuit angle; select
//! [`AngleConvention::Stated`] to reproduce those instead.

use alloc::vec;
use alloc::vec::Vec;


#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::channel::{channel_from_dilation, KrausChannel};
use crate::circuit::{circuit_unitary, Circuit, Gate};
use crate::linalg::{kron, matexp_unitary, Operator, C64};
use crate::state::DensityMatrix;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Coupling {
    #[default]
    None,
    Zz,
    Xy,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BathTopology {
    /// One bath qubit shared by all system qubits per step.
    Common,
    /// One bath qubit per system qubit per step.
    #[default]
    PerQubit,
}

/// How a new ancilla is obtained each step. Both give an uncorrelated
/// ancilla, so the reduced dynamics are identical.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ResetMode {
    #[default]
    Reset,
    Fresh,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BathState {
    #[default]
    Ground,
    Thermal { beta_omega: f64 },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum AngleConvention {
    /// Angles as in the collision circuits.
    #[default]
    Circuit,
    /// Angles doubled to match the written operator actions.
    Stated,
}

/// Additional bath mode colliding after the primary one.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct BathMode {
    pub g_dt: f64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub bath_state: BathState,
}

#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct BathSpec {
    pub coupling: Coupling,
    pub g_dt: f64,
    pub topology: BathTopology,
    pub mode: ResetMode,
    pub bath_state: BathState,
    pub angle_convention: AngleConvention,
    pub extra_modes: Vec<BathMode>,
}

impl BathSpec {
    pub fn new(coupling: Coupling, g_dt: f64) -> Self {
        Self {
            coupling,
            g_dt,
            ..Self::default()
        }
    }

    pub fn with_topology(mut self, topology: BathTopology) -> Self {
        self.topology = topology;
        self
    }

    pub fn with_state(mut self, bath_state: BathState) -> Self {
        self.bath_state = bath_state;
        self
    }

    pub fn with_mode(mut self, mode: ResetMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn is_active(&self) -> bool {
        self.coupling != Coupling::None
    }

    /// Primary mode followed by the extra modes.
    pub fn modes(&self) -> impl Iterator<Item = BathMode> + '_ {
        core::iter::once(BathMode {
            g_dt: self.g_dt,
            bath_state: self.bath_state,
        })
        .chain(self.extra_modes.iter().copied())
    }

    pub fn validate(&self) -> Result<()> {
        for m in self.modes() {
            if !(m.g_dt.is_finite() && m.g_dt >= 0.0) {
                return Err(Error::param("g_dt", "must be finite and non-negative"));
            }
            if let BathState::Thermal { beta_omega } = m.bath_state {
                if beta_omega.is_nan() || beta_omega < 0.0 {
                    return Err(Error::param("beta_omega", "must be non-negative"));
                }
            }
        }
        Ok(())
    }

    fn circuit_angle(&self, g_dt: f64) -> f64 {
        match self.angle_convention {
            AngleConvention::Circuit => g_dt,
            AngleConvention::Stated => 2.0 * g_dt,
        }
    }

    fn require_coupling(&self) -> Result<()> {
        if !self.is_active() {
            return Err(Error::param("coupling", "requires zz or xy"));
        }
        self.validate()
    }
}

/// Probability of the bath's lower-energy state, `e^{βω}/(e^{βω}+e^{-βω})`.
fn ground_weight(state: BathState) -> f64 {
    match state {
        BathState::Ground => 1.0,
        BathState::Thermal { beta_omega } => 1.0 / (1.0 + (-2.0 * beta_omega).exp()),
    }
}

fn mode_prep_state(coupling: Coupling, state: BathState) -> Result<DensityMatrix> {
    let p = ground_weight(state);
    match coupling {
        Coupling::None => Err(Error::param("coupling", "requires zz or xy")),
        // Gibbs state of -ω σx: weight p on |+⟩, 1-p on |-⟩.
        Coupling::Zz => {
            let coh = C64::new(p - 0.5, 0.0);
            let half = C64::new(0.5, 0.0);
            DensityMatrix::new(Operator::from_entries(2, vec![half, coh, coh, half])?)
        }
        // Gibbs state of -ω σz: weight p on |0⟩, 1-p on |1⟩.
        Coupling::Xy => DensityMatrix::from_populations(&[p, 1.0 - p]),
    }
}

/// Single-qubit state each bath ancilla is prepared in.
pub fn bath_prep_state(spec: &BathSpec) -> Result<DensityMatrix> {
    spec.require_coupling()?;
    mode_prep_state(spec.coupling, spec.bath_state)
}

fn push_fragment(
    c: &mut Circuit,
    coupling: Coupling,
    angle: f64,
    system: usize,
    bath: usize,
) -> Result<()> {
    match coupling {
        Coupling::Zz => {
            c.push(Gate::cnot(bath, system)?)?
                .push(Gate::rz(angle, system))?
                .push(Gate::cnot(bath, system)?)?;
        }
        Coupling::Xy => {
            c.push(Gate::cry(angle, system, bath)?)?
                .push(Gate::cnot(bath, system)?)?;
        }
        Coupling::None => return Err(Error::param("coupling", "requires zz or xy")),
    }
    Ok(())
}

/// Gates of one collision between `system_qubit` and `bath_qubit`.
pub fn collision_circuit(
    spec: &BathSpec,
    system_qubit: usize,
    bath_qubit: usize,
    num_qubits: usize,
) -> Result<Circuit> {
    spec.require_coupling()?;
    let mut c = Circuit::new(num_qubits);
    push_fragment(
        &mut c,
        spec.coupling,
        spec.circuit_angle(spec.g_dt),
        system_qubit,
        bath_qubit,
    )?;
    Ok(c)
}

/// Gates of one collision step with a single mode: system qubits
/// `0..system_qubits`, bath qubits following them. COMMON uses one bath
/// qubit, PER_QUBIT one per system qubit.
pub fn step_collision_circuit(
    spec: &BathSpec,
    system_qubits: usize,
    g_dt: f64,
) -> Result<Circuit> {
    spec.require_coupling()?;
    let bath_qubits = bath_qubits_per_mode(spec, system_qubits);
    let mut c = Circuit::new(system_qubits + bath_qubits);
    let angle = spec.circuit_angle(g_dt);
    for s in 0..system_qubits {
        let b = match spec.topology {
            BathTopology::Common => system_qubits,
            BathTopology::PerQubit => system_qubits + s,
        };
        push_fragment(&mut c, spec.coupling, angle, s, b)?;
    }
    Ok(c)
}

pub fn bath_qubits_per_mode(spec: &BathSpec, system_qubits: usize) -> usize {
    match spec.topology {
        BathTopology::Common => 1,
        BathTopology::PerQubit => system_qubits,
    }
}

fn mode_channel(
    spec: &BathSpec,
    mode: BathMode,
    system_qubits: usize,
    ancilla_noise: f64,
) -> Result<KrausChannel> {
    let mut prep = mode_prep_state(spec.coupling, mode.bath_state)?;
    if ancilla_noise > 0.0 {
        prep = KrausChannel::depolarizing(1, ancilla_noise)?.apply(&prep)?;
    }
    match spec.topology {
        BathTopology::PerQubit => {
            let fragment = step_collision_circuit(spec, 1, mode.g_dt)?;
            let single = channel_from_dilation(&circuit_unitary(&fragment)?, &prep, 1)?;
            let mut ch = single.clone();
            for _ in 1..system_qubits {
                ch = ch.tensor(&single)?;
            }
            Ok(ch)
        }
        BathTopology::Common => {
            let circuit = step_collision_circuit(spec, system_qubits, mode.g_dt)?;
            channel_from_dilation(&circuit_unitary(&circuit)?, &prep, system_qubits)
        }
    }
}

/// Exact reduced channel of one collision step on `system_qubits` qubits.
pub fn collision_channel(spec: &BathSpec, system_qubits: usize) -> Result<KrausChannel> {
    collision_channel_with_ancilla_noise(spec, system_qubits, 0.0)
}

/// As [`collision_channel`], with every ancilla depolarized with
/// probability `p` before it collides (noise picked up while routing a
/// fresh qubit next to the system).
pub fn collision_channel_with_ancilla_noise(
    spec: &BathSpec,
    system_qubits: usize,
    p: f64,
) -> Result<KrausChannel> {
    spec.require_coupling()?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param("fresh_swap_depolarizing", "must be a probability in [0, 1]"));
    }
    if system_qubits == 0 {
        return Err(Error::param("system_qubits", "must be positive"));
    }
    let mut modes = spec.modes();
    let first = modes.next().expect("primary mode");
    let mut ch = mode_channel(spec, first, system_qubits, p)?;
    for m in modes {
        ch = ch.then(&mode_channel(spec, m, system_qubits, p)?)?;
    }
    Ok(ch)
}

/// Long-time state of repeated collisions without system dynamics.
///
/// ZZ coupling is unital and its asserted long-time state is `I/2^k`
/// (strictly, any diagonal state is fixed by pure dephasing; the maximally
/// mixed state is reached once hopping mixes the populations). XY coupling
/// to a ground-state bath drains to `|0…0⟩`; a thermal bath is iterated to
/// convergence.
pub fn damping_fixed_point(spec: &BathSpec, system_qubits: usize) -> Result<DensityMatrix> {
    spec.require_coupling()?;
    for m in spec.modes() {
        let angle = spec.circuit_angle(m.g_dt);
        if !(angle > 0.0 && angle < core::f64::consts::PI) {
            return Err(Error::param("g_dt", "must lie in (0, π)"));
        }
    }
    match spec.coupling {
        Coupling::Zz => DensityMatrix::maximally_mixed(system_qubits),
        Coupling::Xy if spec.modes().all(|m| m.bath_state == BathState::Ground) => {
            DensityMatrix::basis(system_qubits, 0)
        }
        Coupling::Xy => {
            let ch = collision_channel(spec, system_qubits)?;
            ch.fixed_point(&DensityMatrix::maximally_mixed(system_qubits)?, 1e-14, 1_000_000)
        }
        Coupling::None => unreachable!("checked by require_coupling"),
    }
}

/// `exp(-i g σz⊗σz)` or `exp(-i g (σx⊗σx + σy⊗σy))`, system first.
pub fn interaction_unitary(coupling: Coupling, g_dt: f64) -> Result<Operator> {
    let h = match coupling {
        Coupling::Zz => kron(&Operator::pauli_z(), &Operator::pauli_z())?,
        Coupling::Xy => &kron(&Operator::pauli_x(), &Operator::pauli_x())?
            + &kron(&Operator::pauli_y(), &Operator::pauli_y())?,
        Coupling::None => return Err(Error::param("coupling", "requires zz or xy")),
    };
    matexp_unitary(&h, g_dt, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::apply_channel;
    use crate::linalg::{ONE, ZERO};
    use crate::state::partial_trace;

    fn c(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn plus() -> DensityMatrix {
        let s = c(0.5f64.sqrt());
        DensityMatrix::pure(&[s, s]).unwrap()
    }

    #[test]
    fn prep_states() {
        let zz = BathSpec::new(Coupling::Zz, 0.5);
        assert!(bath_prep_state(&zz).unwrap().as_operator().max_abs_diff(plus().as_operator()) < 1e-15);

        let hot = zz.clone().with_state(BathState::Thermal { beta_omega: 0.0 });
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(bath_prep_state(&hot).unwrap().as_operator().max_abs_diff(mixed.as_operator()) < 1e-15);

        let cold = BathSpec::new(Coupling::Xy, 0.5).with_state(BathState::Thermal {
            beta_omega: f64::INFINITY,
        });
        let ground = DensityMatrix::basis(1, 0).unwrap();
        assert!(bath_prep_state(&cold).unwrap().as_operator().max_abs_diff(ground.as_operator()) < 1e-15);

        let warm = BathSpec::new(Coupling::Xy, 0.5).with_state(BathState::Thermal { beta_omega: 0.5 });
        let p = bath_prep_state(&warm).unwrap().populations();
        let expect = 0.5f64.exp() / (0.5f64.exp() + (-0.5f64).exp());
        assert!((p[0] - expect).abs() < 1e-15);

        assert!(bath_prep_state(&BathSpec::default()).is_err());
    }

    #[test]
    fn zz_fragment_is_zz_rotation() {
        for &g in &[0.0, 0.5, 1.3] {
            let frag = collision_circuit(&BathSpec::new(Coupling::Zz, g), 0, 1, 2).unwrap();
            let u = circuit_unitary(&frag).unwrap();
            let expect = interaction_unitary(Coupling::Zz, g / 2.0).unwrap();
            assert!(u.max_abs_diff(&expect) < 1e-14);
            // Control orientation does not matter for this coupling.
            let mut flipped = Circuit::new(2);
            flipped
                .push(Gate::cnot(0, 1).unwrap())
                .unwrap()
                .push(Gate::rz(g, 1))
                .unwrap()
                .push(Gate::cnot(0, 1).unwrap())
                .unwrap();
            assert!(circuit_unitary(&flipped).unwrap().max_abs_diff(&expect) < 1e-14);
        }
    }

    #[test]
    fn xy_fragment_actions() {
        let g = 0.5f64;
        let u = circuit_unitary(&collision_circuit(&BathSpec::new(Coupling::Xy, g), 0, 1, 2).unwrap())
            .unwrap();
        // |s=1, b=0⟩ -> cos(g/2)|1,0⟩ + sin(g/2)|0,1⟩
        let out = u.apply(&[ZERO, ZERO, ONE, ZERO]);
        assert!((out[0b10] - c((g / 2.0).cos())).norm() < 1e-15);
        assert!((out[0b01] - c((g / 2.0).sin())).norm() < 1e-15);
        assert!(out[0b00].norm() < 1e-15 && out[0b11].norm() < 1e-15);
        // |0,0⟩ is untouched
        assert_eq!(u.apply(&[ONE, ZERO, ZERO, ZERO]), vec![ONE, ZERO, ZERO, ZERO]);
    }

    #[test]
    fn stated_convention_matches_written_amplitude() {
        let g = 0.3f64;
        let mut spec = BathSpec::new(Coupling::Xy, g);
        spec.angle_convention = AngleConvention::Stated;
        let u = circuit_unitary(&collision_circuit(&spec, 0, 1, 2).unwrap()).unwrap();
        let out = u.apply(&[ZERO, ZERO, ONE, ZERO]);
        assert!((out[0b01] - c(g.sin())).norm() < 1e-15);
        assert!((out[0b10] - c(g.cos())).norm() < 1e-15);

        let mut zz = BathSpec::new(Coupling::Zz, g);
        zz.angle_convention = AngleConvention::Stated;
        let u = circuit_unitary(&collision_circuit(&zz, 0, 1, 2).unwrap()).unwrap();
        assert!(u.max_abs_diff(&interaction_unitary(Coupling::Zz, g).unwrap()) < 1e-14);
    }

    #[test]
    fn dilation_gives_textbook_channels() {
        // Amplitude damping with decay probability sin²(0.25)
        let ch = collision_channel(&BathSpec::new(Coupling::Xy, 0.5), 1).unwrap();
        let out = ch.apply(&DensityMatrix::basis(1, 1).unwrap()).unwrap();
        assert!((out.populations()[1] - 0.25f64.cos().powi(2)).abs() < 1e-15);
        assert!((0.25f64.sin().powi(2) - 0.061_208_719).abs() < 1e-8);

        // Phase damping scaling coherences by cos(0.5)
        let ch = collision_channel(&BathSpec::new(Coupling::Zz, 0.5), 1).unwrap();
        let out = ch.apply(&plus()).unwrap();
        assert!((out.as_operator()[(0, 1)] - c(0.5 * 0.5f64.cos())).norm() < 1e-15);
        assert!((out.populations()[0] - 0.5).abs() < 1e-15);
        assert!((0.5f64.cos() - 0.877_582_56).abs() < 1e-8);
    }

    #[test]
    fn zz_kraus_form() {
        let g = 0.7f64;
        let ch = collision_channel(&BathSpec::new(Coupling::Zz, g), 1).unwrap();
        let reference = KrausChannel::new(vec![
            Operator::identity(2).scale(c((g / 2.0).cos())),
            Operator::pauli_z().scale(C64::new(0.0, -(g / 2.0).sin())),
        ])
        .unwrap();
        let rho = DensityMatrix::pure(&[c(0.6), C64::new(0.0, 0.8)]).unwrap();
        let a = ch.apply(&rho).unwrap();
        let b = reference.apply(&rho).unwrap();
        assert!(a.as_operator().max_abs_diff(b.as_operator()) < 1e-15);
    }

    #[test]
    fn zero_coupling_is_identity() {
        for coupling in [Coupling::Zz, Coupling::Xy] {
            let ch = collision_channel(&BathSpec::new(coupling, 0.0), 2).unwrap();
            let rho = DensityMatrix::pure(&[c(0.5), C64::new(0.0, 0.5), c(-0.5), c(0.5)]).unwrap();
            let out = ch.apply(&rho).unwrap();
            assert!(out.as_operator().max_abs_diff(rho.as_operator()) < 1e-15);
        }
    }

    #[test]
    fn amplitude_damping_power_law() {
        let ch = collision_channel(&BathSpec::new(Coupling::Xy, 0.5), 1).unwrap();
        let mut rho = DensityMatrix::basis(1, 1).unwrap();
        for k in 1..=50 {
            rho = ch.apply(&rho).unwrap();
            let expect = 0.25f64.cos().powi(2 * k);
            assert!((rho.populations()[1] - expect).abs() < 1e-10);
            if k == 10 {
                assert!((rho.populations()[1] - 0.5317).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn unitality() {
        for n in 1..=2 {
            for topology in [BathTopology::Common, BathTopology::PerQubit] {
                let zz = collision_channel(&BathSpec::new(Coupling::Zz, 0.5).with_topology(topology), n)
                    .unwrap();
                let mixed = DensityMatrix::maximally_mixed(n).unwrap();
                let out = zz.apply(&mixed).unwrap();
                assert!(out.as_operator().max_abs_diff(mixed.as_operator()) < 1e-12);
            }
        }
        let xy = collision_channel(&BathSpec::new(Coupling::Xy, 0.5), 1).unwrap();
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        let out = xy.apply(&mixed).unwrap();
        assert!(out.trace_distance(&mixed).unwrap() > 0.01);
    }

    #[test]
    fn common_zz_preserves_singlet() {
        let s = c(0.5f64.sqrt());
        let singlet = DensityMatrix::pure(&[ZERO, s, -s, ZERO]).unwrap();
        let ch = collision_channel(
            &BathSpec::new(Coupling::Zz, 0.5).with_topology(BathTopology::Common),
            2,
        )
        .unwrap();
        let out = ch.apply(&singlet).unwrap();
        assert!(singlet.overlap(&out).unwrap() >= 1.0 - 1e-12);

        // A private bath per electron does dephase it.
        let per = collision_channel(&BathSpec::new(Coupling::Zz, 0.5), 2).unwrap();
        let out = per.apply(&singlet).unwrap();
        assert!(singlet.overlap(&out).unwrap() < 0.99);
    }

    #[test]
    fn per_qubit_matches_explicit_dilation() {
        // Two system qubits, two bath qubits, traced out together.
        let spec = BathSpec::new(Coupling::Xy, 0.8);
        let ch = collision_channel(&spec, 2).unwrap();
        let frag = step_collision_circuit(&spec, 2, 0.8).unwrap();
        assert_eq!(frag.num_qubits(), 4);
        let u = circuit_unitary(&frag).unwrap();
        let prep = bath_prep_state(&spec).unwrap();
        let bath = prep.tensor(&prep).unwrap();
        let rho = DensityMatrix::pure(&[c(0.5), C64::new(0.0, 0.5), c(-0.5), c(0.5)]).unwrap();
        let joint = rho.tensor(&bath).unwrap();
        let evolved = DensityMatrix::new(u.conjugate(joint.as_operator())).unwrap();
        let reduced = partial_trace(&evolved, &[2, 3]).unwrap();
        let via = apply_channel(&rho, &ch).unwrap();
        assert!(reduced.as_operator().max_abs_diff(via.as_operator()) < 1e-13);
    }

    #[test]
    fn extra_modes_compose() {
        let mut spec = BathSpec::new(Coupling::Xy, 0.5);
        spec.extra_modes.push(BathMode {
            g_dt: 0.3,
            bath_state: BathState::Ground,
        });
        let ch = collision_channel(&spec, 1).unwrap();
        let out = ch.apply(&DensityMatrix::basis(1, 1).unwrap()).unwrap();
        let expect = 0.25f64.cos().powi(2) * 0.15f64.cos().powi(2);
        assert!((out.populations()[1] - expect).abs() < 1e-14);
    }

    #[test]
    fn fixed_points() {
        let xy = BathSpec::new(Coupling::Xy, 0.5);
        let ground = DensityMatrix::basis(1, 0).unwrap();
        assert_eq!(damping_fixed_point(&xy, 1).unwrap(), ground);
        assert_eq!(
            damping_fixed_point(&xy, 2).unwrap(),
            DensityMatrix::basis(2, 0).unwrap()
        );
        assert_eq!(
            damping_fixed_point(&BathSpec::new(Coupling::Zz, 0.5), 1).unwrap(),
            DensityMatrix::maximally_mixed(1).unwrap()
        );
        assert!(damping_fixed_point(&BathSpec::new(Coupling::Xy, 0.0), 1).is_err());
        assert!(damping_fixed_point(&BathSpec::new(Coupling::Xy, 3.5), 1).is_err());

        // Iterating the XY channel from |1⟩ converges to the returned state.
        let ch = collision_channel(&xy, 1).unwrap();
        let limit = ch
            .fixed_point(&DensityMatrix::basis(1, 1).unwrap(), 1e-14, 100_000)
            .unwrap();
        assert!(limit.as_operator().max_abs_diff(ground.as_operator()) < 1e-12);

        let warm = xy.clone().with_state(BathState::Thermal { beta_omega: 1.0 });
        let fp = damping_fixed_point(&warm, 1).unwrap();
        let again = collision_channel(&warm, 1).unwrap().apply(&fp).unwrap();
        assert!(again.as_operator().max_abs_diff(fp.as_operator()) < 1e-12);
    }

    #[test]
    fn noisy_ancilla_weakens_damping() {
        let spec = BathSpec::new(Coupling::Xy, 0.5);
        let one = DensityMatrix::basis(1, 1).unwrap();
        let clean = collision_channel(&spec, 1).unwrap().apply(&one).unwrap();
        let noisy = collision_channel_with_ancilla_noise(&spec, 1, 1.0)
            .unwrap()
            .apply(&one)
            .unwrap();
        assert!((noisy.populations()[1] - clean.populations()[1]).abs() > 1e-3);
        assert!((noisy.as_operator().trace().re - 1.0).abs() < 1e-12);
        assert!(collision_channel_with_ancilla_noise(&spec, 1, 1.5).is_err());
    }

    #[test]
    fn validation() {
        assert!(BathSpec::new(Coupling::Xy, -0.1).validate().is_err());
        let bad = BathSpec::new(Coupling::Xy, 0.1).with_state(BathState::Thermal { beta_omega: -1.0 });
        assert!(bad.validate().is_err());
        assert!(collision_channel(&BathSpec::default(), 1).is_err());
    }
}
