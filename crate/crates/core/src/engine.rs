//! Experiment execution: Trotter steps interleaved with bath collisions,
//! phenomenological hardware noise and shot sampling.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bath::{
    bath_prep_state, bath_qubits_per_mode, collision_channel_with_ancilla_noise,
    step_collision_circuit, BathSpec, ResetMode,
};
use crate::channel::KrausChannel;
use crate::circuit::{circuit_unitary, embedded_gate, Circuit, Instruction, ResetPrep};
use crate::config::ExperimentConfig;
use crate::hubbard::{trotter_step_circuit, ModelSpec};
use crate::linalg::Operator;
use crate::state::{partial_trace, DensityMatrix};
use crate::{tol, Error, Result};

/// Per-qubit classical readout error.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ReadoutFlip {
    /// Probability of reading 1 when the qubit is in `|0⟩`.
    pub p1_given0: f64,
    /// Probability of reading 0 when the qubit is in `|1⟩`.
    pub p0_given1: f64,
}

impl ReadoutFlip {
    pub fn new(p1_given0: f64, p0_given1: f64) -> Self {
        Self {
            p1_given0,
            p0_given1,
        }
    }
}

/// Generic noise stand-in for a superconducting device.
///
/// Depolarizing noise follows every gate, amplitude decay hits every system
/// qubit once per step, and readout flips are applied at measurement only.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(default, deny_unknown_fields))]
pub struct NoiseModel {
    pub gate_depolarizing: f64,
    /// Overrides `gate_depolarizing` for two-qubit gates.
    pub two_qubit_depolarizing: Option<f64>,
    pub amplitude_decay_per_step: f64,
    /// Empty for perfect readout, one entry for all qubits, or one per qubit.
    pub readout: Vec<ReadoutFlip>,
    /// Depolarizing probability of each fresh ancilla before its collision.
    /// Only used with [`ResetMode::Fresh`].
    pub fresh_swap_depolarizing: f64,
}

impl NoiseModel {
    pub fn validate(&self) -> Result<()> {
        let mut probs = vec![
            ("gate_depolarizing", self.gate_depolarizing),
            ("amplitude_decay_per_step", self.amplitude_decay_per_step),
            ("fresh_swap_depolarizing", self.fresh_swap_depolarizing),
        ];
        if let Some(p) = self.two_qubit_depolarizing {
            probs.push(("two_qubit_depolarizing", p));
        }
        for r in &self.readout {
            probs.push(("readout.p1_given0", r.p1_given0));
            probs.push(("readout.p0_given1", r.p0_given1));
        }
        for (name, p) in probs {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::param(name, "must be a probability in [0, 1]"));
            }
        }
        Ok(())
    }

    pub fn depolarizing_for_arity(&self, arity: usize) -> f64 {
        match arity {
            1 => self.gate_depolarizing,
            _ => self.two_qubit_depolarizing.unwrap_or(self.gate_depolarizing),
        }
    }

    /// True when the state evolution (as opposed to readout) is ideal.
    pub fn is_noiseless_dynamics(&self) -> bool {
        self.gate_depolarizing == 0.0
            && self.two_qubit_depolarizing.unwrap_or(0.0) == 0.0
            && self.amplitude_decay_per_step == 0.0
            && self.fresh_swap_depolarizing == 0.0
    }

    /// Readout flips for each of `num_qubits` qubits.
    pub fn readout_for(&self, num_qubits: usize) -> Result<Vec<ReadoutFlip>> {
        resolve_readout(&self.readout, num_qubits)
    }
}

fn resolve_readout(readout: &[ReadoutFlip], num_qubits: usize) -> Result<Vec<ReadoutFlip>> {
    match readout.len() {
        0 => Ok(vec![ReadoutFlip::default(); num_qubits]),
        1 => Ok(vec![readout[0]; num_qubits]),
        n if n == num_qubits => Ok(readout.to_vec()),
        n => Err(Error::param(
            "readout",
            alloc::format!("expected 0, 1 or {num_qubits} entries, found {n}"),
        )),
    }
}

/// Populations per step, `k = 0..=steps`.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationTrace {
    basis_labels: Vec<String>,
    rows: Vec<Vec<f64>>,
    shots: u64,
    counts: Vec<Vec<u64>>,
}

impl PopulationTrace {
    /// Trace of exact probabilities (`shots = 0`).
    pub fn exact(basis_labels: Vec<String>, rows: Vec<Vec<f64>>) -> Self {
        Self {
            basis_labels,
            rows,
            shots: 0,
            counts: Vec::new(),
        }
    }

    /// Trace of normalized counts.
    pub fn sampled(basis_labels: Vec<String>, counts: Vec<Vec<u64>>, shots: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::param("shots", "must be positive"));
        }
        let mut rows = Vec::with_capacity(counts.len());
        for c in &counts {
            if c.len() != basis_labels.len() {
                return Err(Error::DimensionMismatch {
                    expected: basis_labels.len(),
                    found: c.len(),
                });
            }
            if c.iter().sum::<u64>() != shots {
                return Err(Error::param("counts", "each row must total the shot count"));
            }
            rows.push(c.iter().map(|&x| x as f64 / shots as f64).collect());
        }
        Ok(Self {
            basis_labels,
            rows,
            shots,
            counts,
        })
    }

    /// Post-processed rows that are no longer raw counts.
    pub fn derived(&self, rows: Vec<Vec<f64>>) -> Self {
        Self {
            basis_labels: self.basis_labels.clone(),
            rows,
            shots: self.shots,
            counts: Vec::new(),
        }
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    /// Raw counts per step; empty for exact and derived traces.
    pub fn counts(&self) -> &[Vec<u64>] {
        &self.counts
    }

    pub fn is_exact(&self) -> bool {
        self.shots == 0
    }

    pub fn steps(&self) -> usize {
        self.rows.len().saturating_sub(1)
    }

    /// Population of basis state `index` at every step.
    pub fn column(&self, index: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[index]).collect()
    }

    /// Column for a label such as `"11"`.
    pub fn column_by_label(&self, label: &str) -> Option<Vec<f64>> {
        let idx = self.basis_labels.iter().position(|l| l == label)?;
        Some(self.column(idx))
    }

    /// Reorders columns so that outcome `i` is reported as `i ^ mask`.
    pub fn relabeled(&self, mask: usize) -> Self {
        let perm = |row: &Vec<f64>| -> Vec<f64> { (0..row.len()).map(|i| row[i ^ mask]).collect() };
        let perm_counts =
            |row: &Vec<u64>| -> Vec<u64> { (0..row.len()).map(|i| row[i ^ mask]).collect() };
        Self {
            basis_labels: self.basis_labels.clone(),
            rows: self.rows.iter().map(perm).collect(),
            shots: self.shots,
            counts: self.counts.iter().map(perm_counts).collect(),
        }
    }
}

/// Precomputed channels making up one time step on the system register.
#[derive(Clone, Debug)]
pub struct StepMap {
    num_qubits: usize,
    stages: Vec<KrausChannel>,
}

impl StepMap {
    pub fn new(model: &ModelSpec, bath: &BathSpec, noise: &NoiseModel) -> Result<Self> {
        model.validate()?;
        bath.validate()?;
        noise.validate()?;
        let n = model.num_qubits();
        let circuit = trotter_step_circuit(model)?;
        let mut stages = Vec::new();

        let noisy_gates = circuit
            .gates()
            .any(|g| noise.depolarizing_for_arity(g.targets().len()) > 0.0);
        if noisy_gates {
            for g in circuit.gates() {
                let u = KrausChannel::unitary(embedded_gate(g, n)?)?;
                let p = noise.depolarizing_for_arity(g.targets().len());
                let stage = if p > 0.0 {
                    let dep = KrausChannel::depolarizing(g.targets().len(), p)?;
                    u.then(&dep.embedded(g.targets(), n)?)?
                } else {
                    u
                };
                stages.push(stage);
            }
        } else {
            stages.push(KrausChannel::unitary(circuit_unitary(&circuit)?)?);
        }

        if bath.is_active() {
            let swap_noise = match bath.mode {
                ResetMode::Fresh => noise.fresh_swap_depolarizing,
                ResetMode::Reset => 0.0,
            };
            stages.push(collision_channel_with_ancilla_noise(bath, n, swap_noise)?);
        }

        if noise.amplitude_decay_per_step > 0.0 {
            let single = KrausChannel::amplitude_damping(noise.amplitude_decay_per_step)?;
            let mut decay = single.clone();
            for _ in 1..n {
                decay = decay.tensor(&single)?;
            }
            stages.push(decay);
        }

        Ok(Self {
            num_qubits: n,
            stages,
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.num_qubits() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << self.num_qubits,
                found: rho.dim(),
            });
        }
        let mut out = rho.clone();
        for stage in &self.stages {
            out = stage.apply(&out)?;
        }
        Ok(out)
    }
}

/// One Trotter step, one collision and the configured noise.
pub fn evolve_step(
    rho: &DensityMatrix,
    model: &ModelSpec,
    bath: &BathSpec,
    noise: &NoiseModel,
) -> Result<DensityMatrix> {
    StepMap::new(model, bath, noise)?.apply(rho)
}

/// System states `ρ_0 … ρ_steps`.
pub fn evolve_states(config: &ExperimentConfig) -> Result<Vec<DensityMatrix>> {
    config.validate()?;
    let map = StepMap::new(&config.model, &config.bath, &config.noise)?;
    let mut rho = config.initial_density()?;
    let mut states = Vec::with_capacity(config.model.steps + 1);
    states.push(rho.clone());
    for _ in 0..config.model.steps {
        rho = map.apply(&rho)?;
        states.push(rho.clone());
    }
    Ok(states)
}

/// Runs the experiment: exact populations when `shots == 0`, otherwise
/// `shots` samples per step drawn from one generator seeded with
/// `config.seed`, steps in ascending order.
pub fn run_experiment(config: &ExperimentConfig) -> Result<PopulationTrace> {
    let states = evolve_states(config)?;
    let labels = config.model.filling.basis_labels();
    if config.shots == 0 {
        return Ok(PopulationTrace::exact(
            labels,
            states.iter().map(DensityMatrix::populations).collect(),
        ));
    }
    let readout = config.noise.readout_for(config.model.num_qubits())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let counts = states
        .iter()
        .map(|rho| sample_counts_with(rho, config.shots, &readout, &mut rng))
        .collect::<Result<Vec<_>>>()?;
    PopulationTrace::sampled(labels, counts, config.shots)
}

/// Outcome counts indexed by basis state, reproducible for a given seed.
pub fn sample_counts(
    rho: &DensityMatrix,
    shots: u64,
    seed: u64,
    readout: &[ReadoutFlip],
) -> Result<Vec<u64>> {
    let flips = resolve_readout(readout, rho.num_qubits())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_counts_with(rho, shots, &flips, &mut rng)
}

/// As [`sample_counts`] with a caller-owned generator and one flip entry per
/// qubit.
pub fn sample_counts_with<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    shots: u64,
    readout: &[ReadoutFlip],
    rng: &mut R,
) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::param("shots", "must be at least 1"));
    }
    let n = rho.num_qubits();
    if readout.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: readout.len(),
        });
    }
    let mut probs = rho.populations();
    for p in &mut probs {
        if *p < -tol::NEGATIVE_EIGENVALUE {
            return Err(Error::InvalidDensityMatrix(alloc::format!(
                "negative population {p:e}"
            )));
        }
        *p = p.max(0.0);
    }
    let total: f64 = probs.iter().sum();
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p / total;
        cumulative.push(acc);
    }

    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u: f64 = rng.gen();
        let mut outcome = cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or_else(|| probs.iter().rposition(|&p| p > 0.0).unwrap_or(0));
        for (q, flip) in readout.iter().enumerate() {
            let bit = 1usize << (n - 1 - q);
            let p = if outcome & bit == 0 {
                flip.p1_given0
            } else {
                flip.p0_given1
            };
            if p > 0.0 && rng.gen::<f64>() < p {
                outcome ^= bit;
            }
        }
        counts[outcome] += 1;
    }
    Ok(counts)
}

/// Runs a circuit of gates and resets on a density matrix.
pub fn execute_circuit(circuit: &Circuit, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let n = circuit.num_qubits();
    if rho.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            found: rho.dim(),
        });
    }
    let mut out = rho.clone();
    for inst in circuit.instructions() {
        match inst {
            Instruction::Gate(g) => {
                out = DensityMatrix::new(embedded_gate(g, n)?.conjugate(out.as_operator()))?;
            }
            Instruction::Reset { target, prep } => {
                out = KrausChannel::reset_to(&prep.state())?.apply_on(&out, &[*target])?;
            }
            Instruction::Barrier => {}
        }
    }
    Ok(out)
}

/// Largest register the dilated cross-check will build.
pub const MAX_DILATED_QUBITS: usize = 4;

/// One step of the system and its bath qubits as an explicit circuit: the
/// Trotter gates, then for each bath mode a reset of every bath qubit
/// followed by the collision gates. System qubits come first.
pub fn dilated_step_circuit(model: &ModelSpec, bath: &BathSpec) -> Result<Circuit> {
    let n = model.num_qubits();
    let b = if bath.is_active() {
        bath_qubits_per_mode(bath, n)
    } else {
        0
    };
    if n + b > MAX_DILATED_QUBITS {
        return Err(Error::TooManyQubits {
            requested: n + b,
            max: MAX_DILATED_QUBITS,
        });
    }
    let mut circuit = Circuit::new(n + b);
    circuit.append(&trotter_step_circuit(model)?)?;
    if bath.is_active() {
        for mode in bath.modes() {
            let mut single = bath.clone();
            single.bath_state = mode.bath_state;
            single.extra_modes.clear();
            let prep = bath_prep_state(&single)?;
            circuit.push(Instruction::Barrier)?;
            for q in n..n + b {
                circuit.push(Instruction::Reset {
                    target: q,
                    prep: ResetPrep::Mixed(prep.clone()),
                })?;
            }
            circuit.append(&step_collision_circuit(&single, n, mode.g_dt)?)?;
        }
    }
    Ok(circuit)
}

/// Exact populations from an explicit simulation of the bath qubits.
///
/// With [`ResetMode::Reset`] the bath qubits are reset in place by the
/// circuit. With [`ResetMode::Fresh`] the used bath qubits are traced out
/// and new ones are tensored in before every step. Only noiseless dynamics
/// are supported; this path exists to cross-check [`run_experiment`].
pub fn run_dilated(config: &ExperimentConfig) -> Result<PopulationTrace> {
    config.validate()?;
    if !config.noise.is_noiseless_dynamics() {
        return Err(Error::Unsupported(
            "the dilated simulation covers noiseless dynamics only".into(),
        ));
    }
    let model = &config.model;
    let n = model.num_qubits();
    let step = dilated_step_circuit(model, &config.bath)?;
    let total = step.num_qubits();
    let bath_qubits: Vec<usize> = (n..total).collect();

    let fresh_step = match config.bath.mode {
        ResetMode::Fresh if !bath_qubits.is_empty() => {
            Some(strip_leading_resets(&step, n, &bath_qubits)?)
        }
        _ => None,
    };
    let fresh_bath = if bath_qubits.is_empty() {
        None
    } else {
        let mut primary = config.bath.clone();
        primary.extra_modes.clear();
        let prep = bath_prep_state(&primary)?;
        let mut bath = prep.clone();
        for _ in 1..bath_qubits.len() {
            bath = bath.tensor(&prep)?;
        }
        Some(bath)
    };

    let sys0 = config.initial_density()?;
    let mut rho = match &fresh_bath {
        Some(bath) => sys0.tensor(bath)?,
        None => sys0.clone(),
    };
    let mut rows = Vec::with_capacity(model.steps + 1);
    rows.push(sys0.populations());
    for _ in 0..model.steps {
        rho = match (&fresh_step, &fresh_bath) {
            (Some(circuit), Some(bath)) => {
                let sys = partial_trace(&rho, &bath_qubits)?;
                execute_circuit(circuit, &sys.tensor(bath)?)?
            }
            _ => execute_circuit(&step, &rho)?,
        };
        let sys = if bath_qubits.is_empty() {
            rho.clone()
        } else {
            partial_trace(&rho, &bath_qubits)?
        };
        rows.push(sys.populations());
    }
    Ok(PopulationTrace::exact(model.filling.basis_labels(), rows))
}

// Fresh mode supplies the primary mode's ancillas by tensoring, so the
// resets of that first mode are dropped; later modes keep theirs.
fn strip_leading_resets(step: &Circuit, n: usize, bath_qubits: &[usize]) -> Result<Circuit> {
    let mut out = Circuit::new(step.num_qubits());
    let mut dropped = 0;
    for inst in step.instructions() {
        match inst {
            Instruction::Reset { target, .. }
                if dropped < bath_qubits.len() && *target >= n =>
            {
                dropped += 1;
            }
            other => {
                out.push(other.clone())?;
            }
        }
    }
    Ok(out)
}

/// Unitary of one noiseless Trotter step, for callers that only need it.
pub fn step_unitary(model: &ModelSpec) -> Result<Operator> {
    circuit_unitary(&trotter_step_circuit(model)?)
}
