//! Post-processing error mitigation: readout calibration, zero-noise
//! extrapolation by step refinement, and bit-flip relabeling.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bath::Coupling;
use crate::config::{ExperimentConfig, ZneSpec};
use crate::engine::{run_experiment, sample_counts_with, PopulationTrace, ReadoutFlip};
use crate::hubbard::{refine, InitialState};
use crate::linalg::Operator;
use crate::state::DensityMatrix;
use crate::{Error, Result};

/// Largest register a confusion matrix is built for.
pub const MAX_CALIBRATION_QUBITS: usize = 4;

/// Column-stochastic matrix, `entry(i, j) = P(measure i | prepared j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfusionMatrix {
    num_qubits: usize,
    entries: Vec<f64>,
}

impl ConfusionMatrix {
    /// Row-major entries; columns must sum to one within `1e-9`.
    pub fn new(num_qubits: usize, entries: Vec<f64>) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|e| !(0.0..=1.0).contains(e)) {
            return Err(Error::param("confusion", "entries must lie in [0, 1]"));
        }
        for j in 0..dim {
            let s: f64 = (0..dim).map(|i| entries[i * dim + j]).sum();
            if (s - 1.0).abs() > 1e-9 {
                return Err(Error::param("confusion", "columns must sum to 1"));
            }
        }
        Ok(Self {
            num_qubits,
            entries,
        })
    }

    pub fn identity(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let mut entries = vec![0.0; dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = 1.0;
        }
        Self {
            num_qubits,
            entries,
        }
    }

    /// Expected matrix for independent per-qubit flips.
    pub fn from_readout(readout: &[ReadoutFlip]) -> Result<Self> {
        let mut op = Operator::identity(1);
        for f in readout {
            let single = Operator::from_real(
                2,
                &[1.0 - f.p1_given0, f.p0_given1, f.p1_given0, 1.0 - f.p0_given1],
            )?;
            op = crate::linalg::kron(&op, &single)?;
        }
        Self::new(readout.len(), op.entries().iter().map(|z| z.re).collect())
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn entry(&self, measured: usize, prepared: usize) -> f64 {
        self.entries[measured * self.dim() + prepared]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// `C·p`
    pub fn apply(&self, probs: &[f64]) -> Result<Vec<f64>> {
        let d = self.dim();
        if probs.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: probs.len(),
            });
        }
        Ok((0..d)
            .map(|i| (0..d).map(|j| self.entry(i, j) * probs[j]).sum())
            .collect())
    }
}

/// Calibration by simulation: each basis state is prepared perfectly and
/// measured `shots` times under `readout`, filling one column.
pub fn build_confusion_matrix(
    readout: &[ReadoutFlip],
    num_qubits: usize,
    shots: u64,
    seed: u64,
) -> Result<ConfusionMatrix> {
    if shots == 0 {
        return Err(Error::param("shots", "calibration needs at least one shot"));
    }
    if num_qubits == 0 || num_qubits > MAX_CALIBRATION_QUBITS {
        return Err(Error::param("num_qubits", "calibration supports 1 to 4 qubits"));
    }
    let flips = crate::engine::NoiseModel {
        readout: readout.to_vec(),
        ..Default::default()
    }
    .readout_for(num_qubits)?;
    let dim = 1usize << num_qubits;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = vec![0.0; dim * dim];
    for j in 0..dim {
        let prepared = DensityMatrix::basis(num_qubits, j)?;
        let counts = sample_counts_with(&prepared, shots, &flips, &mut rng)?;
        for (i, c) in counts.iter().enumerate() {
            entries[i * dim + j] = *c as f64 / shots as f64;
        }
    }
    ConfusionMatrix::new(num_qubits, entries)
}

/// Solves `C·x = raw` and projects `x` onto the probability simplex.
pub fn correct_readout(raw: &[f64], cm: &ConfusionMatrix) -> Result<Vec<f64>> {
    Ok(project_to_simplex(&correct_readout_raw(raw, cm)?))
}

/// Plain inverse `C⁻¹·raw`; may contain negative entries.
pub fn correct_readout_raw(raw: &[f64], cm: &ConfusionMatrix) -> Result<Vec<f64>> {
    let d = cm.dim();
    if raw.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: raw.len(),
        });
    }
    solve(cm.entries.clone(), raw.to_vec(), d)
}

// Gaussian elimination with partial pivoting.
fn solve(mut a: Vec<f64>, mut b: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i * n + col].abs().total_cmp(&a[j * n + col].abs()))
            .expect("non-empty range");
        if a[pivot * n + col].abs() < 1e-12 {
            return Err(Error::SingularMatrix);
        }
        if pivot != col {
            for k in 0..n {
                a.swap(pivot * n + k, col * n + k);
            }
            b.swap(pivot, col);
        }
        for row in col + 1..n {
            let f = a[row * n + col] / a[col * n + col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row * n + k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row * n + row];
    }
    Ok(x)
}

/// Euclidean projection onto `{x : x_i ≥ 0, Σ x_i = 1}`.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

/// Readout-corrected copy of a sampled trace.
pub fn mitigate_readout(
    trace: &PopulationTrace,
    cm: &ConfusionMatrix,
    raw_inverse: bool,
) -> Result<PopulationTrace> {
    let rows = trace
        .rows()
        .iter()
        .map(|r| {
            if raw_inverse {
                correct_readout_raw(r, cm)
            } else {
                correct_readout(r, cm)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(trace.derived(rows))
}

/// An observable measured at noise scale `scale`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZnePoint {
    pub scale: u32,
    pub value: f64,
}

impl ZnePoint {
    pub fn new(scale: u32, value: f64) -> Self {
        Self { scale, value }
    }
}

/// Polynomial extrapolation of `value(c)` to `c = 0` through the
/// `order + 1` smallest scales.
pub fn zne_richardson(points: &[ZnePoint], order: usize) -> Result<f64> {
    if order == 0 {
        return Err(Error::param("order", "must be at least 1"));
    }
    let mut pts = points.to_vec();
    pts.sort_by_key(|p| p.scale);
    for w in pts.windows(2) {
        if w[0].scale == w[1].scale {
            return Err(Error::DuplicateScale(w[0].scale));
        }
    }
    if pts.first().is_some_and(|p| p.scale == 0) {
        return Err(Error::param("scale", "must be at least 1"));
    }
    if pts.len() < order + 1 {
        return Err(Error::param("points", "need at least order + 1 points"));
    }
    let used = &pts[..order + 1];
    let mut estimate = 0.0;
    for (i, pi) in used.iter().enumerate() {
        let ci = f64::from(pi.scale);
        let mut weight = 1.0;
        for (j, pj) in used.iter().enumerate() {
            if i != j {
                let cj = f64::from(pj.scale);
                weight *= cj / (cj - ci);
            }
        }
        estimate += weight * pi.value;
    }
    Ok(estimate)
}

/// Same physical evolution with `scale` times as many, proportionally
/// shorter, steps. The noise model is left alone, so the accumulated gate
/// noise grows by `scale`.
pub fn noise_scaled_config(config: &ExperimentConfig, scale: u32) -> Result<ExperimentConfig> {
    if scale == 0 {
        return Err(Error::param("scale", "must be at least 1"));
    }
    let s = f64::from(scale);
    let mut out = config.clone();
    out.model = refine(&config.model, scale);
    out.bath.g_dt /= s;
    for m in &mut out.bath.extra_modes {
        m.g_dt /= s;
    }
    Ok(out)
}

/// Per-scale traces resampled at the original step times, and their
/// extrapolation.
#[derive(Clone, Debug, PartialEq)]
pub struct ZneResult {
    pub scaled: Vec<(u32, PopulationTrace)>,
    pub mitigated: PopulationTrace,
}

/// Runs `config` at every scale of `zne` and extrapolates each population
/// at every original step; rows are projected back onto the simplex.
pub fn zne_trace(config: &ExperimentConfig, zne: &ZneSpec) -> Result<ZneResult> {
    let mut scaled = Vec::with_capacity(zne.scales.len());
    for &s in &zne.scales {
        let trace = run_experiment(&noise_scaled_config(config, s)?)?;
        let rows = (0..=config.model.steps)
            .map(|k| trace.rows()[k * s as usize].clone())
            .collect();
        scaled.push((s, trace.derived(rows)));
    }
    let dim = 1usize << config.model.num_qubits();
    let mut rows = Vec::with_capacity(config.model.steps + 1);
    for k in 0..=config.model.steps {
        let mut row = Vec::with_capacity(dim);
        for i in 0..dim {
            let pts: Vec<ZnePoint> = scaled
                .iter()
                .map(|(s, t)| ZnePoint::new(*s, t.rows()[k][i]))
                .collect();
            row.push(zne_richardson(&pts, zne.order)?);
        }
        rows.push(project_to_simplex(&row));
    }
    let mitigated = scaled[0].1.derived(rows);
    Ok(ZneResult { scaled, mitigated })
}

/// Outcome relabeling `i ↦ i XOR mask`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelabelMap {
    pub num_qubits: usize,
    pub mask: usize,
}

impl RelabelMap {
    pub fn all_flipped(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            mask: (1 << num_qubits) - 1,
        }
    }

    pub fn map_index(&self, i: usize) -> usize {
        i ^ self.mask
    }

    pub fn apply(&self, trace: &PopulationTrace) -> PopulationTrace {
        trace.relabeled(self.mask)
    }

    /// Maps are involutions.
    pub fn inverse(&self) -> Self {
        *self
    }
}

/// The experiment with `|0⟩` and `|1⟩` swapped on every system qubit.
///
/// The initial state is conjugated by `X⊗…⊗X` and the detuning changes
/// sign, so the relabeled run evolves `XρX`; hopping and the Coulomb term
/// are invariant. Mapping the outcomes back with the returned map
/// recovers the original populations, while the noise model is unchanged,
/// so asymmetric errors such as `|1⟩` decay act on the other label.
///
/// A ZZ bath is invariant under the swap. An XY bath is not (it damps
/// towards `|0⟩`) and is rejected.
pub fn bitflip_relabel(config: &ExperimentConfig) -> Result<(ExperimentConfig, RelabelMap)> {
    if config.bath.coupling == Coupling::Xy {
        return Err(Error::Unsupported(
            "bit-flip relabeling of an amplitude-damping bath".into(),
        ));
    }
    let n = config.model.num_qubits();
    let mut out = config.clone();
    // Avoid writing a negative zero into configs.
    out.model.eps_dt = if config.model.eps_dt == 0.0 {
        0.0
    } else {
        -config.model.eps_dt
    };
    out.init = Some(flip_initial_state(&config.initial_state(), config)?);
    Ok((out, RelabelMap::all_flipped(n)))
}

fn flip_initial_state(init: &InitialState, config: &ExperimentConfig) -> Result<InitialState> {
    use InitialState::*;
    Ok(match init {
        Site1 => Site2,
        Site2 => Site1,
        DoubleSite1 => DoubleSite2,
        DoubleSite2 => DoubleSite1,
        // X⊗X maps the singlet to minus itself.
        Singlet => Singlet,
        Custom(_) => {
            let rho = config.initial_density()?;
            let n = rho.num_qubits();
            let mut x = Operator::identity(1);
            for _ in 0..n {
                x = crate::linalg::kron(&x, &Operator::pauli_x())?;
            }
            Custom(DensityMatrix::new(x.conjugate(rho.as_operator()))?)
        }
    })
}

/// Total-variation distance `½ Σ |p_i − q_i|`.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::BathSpec;
    use crate::engine::NoiseModel;
    use crate::hubbard::ModelSpec;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn zero_readout_error_gives_identity() {
        for k in 1..=3 {
            let cm = build_confusion_matrix(&[], k, 37, 1).unwrap();
            assert_eq!(cm, ConfusionMatrix::identity(k));
        }
    }

    #[test]
    fn symmetric_flip_converges() {
        let p = 0.1;
        let cm = build_confusion_matrix(&[ReadoutFlip::new(p, p)], 1, 200_000, 5).unwrap();
        let expect = [1.0 - p, p, p, 1.0 - p];
        assert!(close(cm.entries(), &expect, 0.005));
    }

    #[test]
    fn two_qubits_factorise() {
        let flips = [ReadoutFlip::new(0.02, 0.05), ReadoutFlip::new(0.1, 0.03)];
        let sampled = build_confusion_matrix(&flips, 2, 200_000, 9).unwrap();
        let analytic = ConfusionMatrix::from_readout(&flips).unwrap();
        assert!(close(sampled.entries(), analytic.entries(), 0.005));
        // column for prepared |01⟩, measured |01⟩
        let expect = (1.0 - 0.02) * (1.0 - 0.03);
        assert!((analytic.entry(0b01, 0b01) - expect).abs() < 1e-15);
    }

    #[test]
    fn calibration_errors() {
        assert!(build_confusion_matrix(&[], 1, 0, 0).is_err());
        assert!(build_confusion_matrix(&[], 5, 10, 0).is_err());
    }

    #[test]
    fn correction_examples() {
        let id = ConfusionMatrix::identity(1);
        assert_eq!(correct_readout(&[0.3, 0.7], &id).unwrap(), vec![0.3, 0.7]);

        let cm = ConfusionMatrix::new(1, vec![0.9, 0.1, 0.1, 0.9]).unwrap();
        let x = correct_readout(&[0.9, 0.1], &cm).unwrap();
        assert!(close(&x, &[1.0, 0.0], 1e-12));

        // Outside the image of cm: raw inverse goes negative, projection does not.
        let raw = correct_readout_raw(&[0.95, 0.05], &cm).unwrap();
        assert!(raw[1] < 0.0);
        let fixed = correct_readout(&[0.95, 0.05], &cm).unwrap();
        assert!(fixed.iter().all(|&p| p >= 0.0));
        assert!((fixed.iter().sum::<f64>() - 1.0).abs() < 1e-12);

        let singular = ConfusionMatrix::new(1, vec![0.5, 0.5, 0.5, 0.5]).unwrap();
        assert_eq!(correct_readout(&[0.5, 0.5], &singular), Err(Error::SingularMatrix));
    }

    #[test]
    fn richardson_examples() {
        let v = zne_richardson(&[ZnePoint::new(1, 0.8), ZnePoint::new(2, 0.7)], 1).unwrap();
        assert!((v - 0.9).abs() < 1e-12);
        let dup = zne_richardson(&[ZnePoint::new(1, 0.8), ZnePoint::new(1, 0.7)], 1);
        assert_eq!(dup, Err(Error::DuplicateScale(1)));
        assert!(zne_richardson(&[ZnePoint::new(1, 0.8)], 1).is_err());
        // only the lowest order+1 scales are used
        let pts = [ZnePoint::new(3, 100.0), ZnePoint::new(2, 0.7), ZnePoint::new(1, 0.8)];
        assert!((zne_richardson(&pts, 1).unwrap() - 0.9).abs() < 1e-12);
    }

    #[test]
    fn scaled_config() {
        let cfg = ExperimentConfig::new(ModelSpec::two_electron(0.1, 0.4, 10))
            .with_bath(BathSpec::new(Coupling::Zz, 0.5));
        assert_eq!(noise_scaled_config(&cfg, 1).unwrap(), cfg);
        let two = noise_scaled_config(&cfg, 2).unwrap();
        assert_eq!(two.model.steps, 20);
        assert!((two.model.t12_dt - 0.05).abs() < 1e-15);
        assert!((two.bath.g_dt - 0.25).abs() < 1e-15);
        assert_eq!(two.noise, cfg.noise);
        assert!(noise_scaled_config(&cfg, 0).is_err());

        let gates = |c: &ExperimentConfig| {
            crate::hubbard::trotter_step_circuit(&c.model).unwrap().gate_count() * c.model.steps
        };
        assert_eq!(gates(&two), 2 * gates(&cfg));
    }

    #[test]
    fn scaled_noiseless_traces_agree_within_trotter_error() {
        let cfg = ExperimentConfig::new(ModelSpec::two_electron(0.1, 0.4, 10)).with_shots(0);
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&noise_scaled_config(&cfg, 2).unwrap()).unwrap();
        for k in 0..=10 {
            assert!(close(&a.rows()[k], &b.rows()[2 * k], 0.05));
        }
    }

    #[test]
    fn zne_beats_raw_under_depolarizing() {
        for &p in &[0.001, 0.005, 0.02] {
            let noiseless = ExperimentConfig::new(ModelSpec::two_electron(0.1, 0.4, 10)).with_shots(0);
            let reference = run_experiment(&noiseless).unwrap().column(3);
            let noisy = noiseless.clone().with_noise(NoiseModel {
                gate_depolarizing: p,
                ..NoiseModel::default()
            });
            let raw = run_experiment(&noisy).unwrap().column(3);
            let zne = zne_trace(&noisy, &ZneSpec::default()).unwrap().mitigated.column(3);
            for n in 1..=10 {
                assert!(
                    (zne[n] - reference[n]).abs() < (raw[n] - reference[n]).abs(),
                    "p={p} n={n}"
                );
            }
        }
    }

    #[test]
    fn relabel_noiseless_is_identical() {
        for cfg in [
            ExperimentConfig::new(ModelSpec::one_electron(0.2, 0.1, 25)),
            ExperimentConfig::new(ModelSpec::two_electron(0.1, 0.4, 30)),
            ExperimentConfig::new(ModelSpec::two_electron(0.1, 0.4, 30))
                .with_bath(BathSpec::new(Coupling::Zz, 0.5)),
        ] {
            let cfg = cfg.with_shots(0);
            let (flipped, map) = bitflip_relabel(&cfg).unwrap();
            let a = run_experiment(&cfg).unwrap();
            let b = map.apply(&run_experiment(&flipped).unwrap());
            for (x, y) in a.rows().iter().zip(b.rows()) {
                assert!(close(x, y, 1e-12));
            }
        }
    }

    #[test]
    fn relabel_moves_decay() {
        let gamma = 0.02;
        let cfg = ExperimentConfig::new(ModelSpec::two_electron(0.0, 0.0, 10))
            .with_init(InitialState::DoubleSite2)
            .with_shots(0)
            .with_noise(NoiseModel {
                amplitude_decay_per_step: gamma,
                ..NoiseModel::default()
            });
        let original = run_experiment(&cfg).unwrap().column(3);
        let (flipped, map) = bitflip_relabel(&cfg).unwrap();
        let relabeled = map.apply(&run_experiment(&flipped).unwrap()).column(3);
        for n in 0..=10 {
            assert!((original[n] - (1.0 - gamma).powi(2 * n as i32)).abs() < 1e-12);
            assert!((relabeled[n] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn relabel_involution_and_rejections() {
        let map = RelabelMap::all_flipped(2);
        for i in 0..4 {
            assert_eq!(map.map_index(map.inverse().map_index(i)), i);
        }
        let cfg = ExperimentConfig::new(ModelSpec::one_electron(0.2, 0.1, 5));
        let (once, _) = bitflip_relabel(&cfg).unwrap();
        let (twice, _) = bitflip_relabel(&once).unwrap();
        assert_eq!(twice.model, cfg.model);
        assert_eq!(twice.initial_state(), cfg.initial_state());

        let xy = cfg.with_bath(BathSpec::new(Coupling::Xy, 0.5));
        assert!(matches!(bitflip_relabel(&xy), Err(Error::Unsupported(_))));
    }

    #[test]
    fn relabel_custom_state() {
        let rho = DensityMatrix::from_populations(&[0.7, 0.3]).unwrap();
        let cfg = ExperimentConfig::new(ModelSpec::one_electron(0.2, 0.1, 3))
            .with_init(InitialState::Custom(rho));
        let (flipped, _) = bitflip_relabel(&cfg).unwrap();
        assert!(close(&flipped.initial_density().unwrap().populations(), &[0.3, 0.7], 1e-15));
    }

    #[test]
    fn readout_recovers_truth() {
        let flips = [ReadoutFlip::new(0.02, 0.05)];
        let cm = build_confusion_matrix(&flips, 2, 1 << 16, 7).unwrap();
        let cfg = ExperimentConfig::new(ModelSpec::two_electron(0.1, 0.4, 10))
            .with_shots(1 << 16)
            .with_seed(3)
            .with_noise(NoiseModel {
                readout: flips.to_vec(),
                ..NoiseModel::default()
            });
        let exact = run_experiment(&cfg.clone().with_shots(0)).unwrap();
        let raw = run_experiment(&cfg).unwrap();
        let fixed = mitigate_readout(&raw, &cm, false).unwrap();
        let bound = 2.0 / ((1u64 << 16) as f64).sqrt();
        for (e, f) in exact.rows().iter().zip(fixed.rows()) {
            assert!(close(e, f, bound), "{e:?} vs {f:?}");
        }
    }

    proptest! {
        #[test]
        fn simplex_projection_is_valid(v in proptest::collection::vec(-2.0f64..2.0, 1..8)) {
            let p = project_to_simplex(&v);
            prop_assert!(p.iter().all(|&x| x >= 0.0));
            prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn simplex_projection_fixes_distributions(v in proptest::collection::vec(0.01f64..1.0, 1..8)) {
            let s: f64 = v.iter().sum();
            let p: Vec<f64> = v.iter().map(|x| x / s).collect();
            prop_assert!(close(&project_to_simplex(&p), &p, 1e-14));
        }

        #[test]
        fn richardson_exact_on_polynomials(
            coeffs in proptest::collection::vec(-1.0f64..1.0, 1..4),
            offset in 1u32..4,
        ) {
            let order = coeffs.len();
            let intercept = 0.37;
            let value = |c: f64| {
                intercept + coeffs.iter().enumerate().map(|(k, a)| a * c.powi(k as i32 + 1)).sum::<f64>()
            };
            let pts: Vec<ZnePoint> = (0..=order as u32)
                .map(|i| ZnePoint::new(offset + i, value(f64::from(offset + i))))
                .collect();
            let est = zne_richardson(&pts, order).unwrap();
            prop_assert!((est - intercept).abs() < 1e-8);
        }

        #[test]
        fn corrected_outputs_are_distributions(
            raw in proptest::collection::vec(0.0f64..1.0, 4),
            a in 0.0f64..0.2,
            b in 0.0f64..0.2,
        ) {
            let s: f64 = raw.iter().sum::<f64>().max(1e-9);
            let raw: Vec<f64> = raw.iter().map(|x| x / s).collect();
            let cm = ConfusionMatrix::from_readout(&[ReadoutFlip::new(a, b); 2]).unwrap();
            let x = correct_readout(&raw, &cm).unwrap();
            prop_assert!(x.iter().all(|&p| p >= 0.0));
            prop_assert!((x.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
