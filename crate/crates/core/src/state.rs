//! Density matrices over small qubit registers.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;


use crate::linalg::{check_targets, kron, Operator, C64, ONE, ZERO};
use crate::{tol, Error, Result, MAX_QUBITS};

/// Trace-one positive-semidefinite Hermitian operator.
///
/// Every constructor validates the invariants; nothing is clamped or
/// renormalised, so a violation always surfaces as an error.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(
    feature = "serde",
    serde(try_from = "DensityProxy", into = "DensityProxy")
)]
pub struct DensityMatrix {
    num_qubits: usize,
    op: Operator,
}

impl DensityMatrix {
    pub fn new(op: Operator) -> Result<Self> {
        let num_qubits = op.num_qubits().ok_or(Error::NotPowerOfTwo(op.dim()))?;
        if num_qubits == 0 {
            return Err(Error::InvalidDensityMatrix("needs at least one qubit".into()));
        }
        if num_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits {
                requested: num_qubits,
                max: MAX_QUBITS,
            });
        }
        let herm = op.hermiticity_error();
        if herm > tol::HERMITIAN {
            return Err(Error::InvalidDensityMatrix(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let trace = op.trace();
        if (trace - ONE).norm() > tol::TRACE {
            return Err(Error::InvalidDensityMatrix(format!(
                "trace {} + {}i differs from 1",
                trace.re, trace.im
            )));
        }
        let min = op.eigh()?.values[0];
        if min < -tol::NEGATIVE_EIGENVALUE {
            return Err(Error::InvalidDensityMatrix(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(Self { num_qubits, op })
    }

    /// `|ψ⟩⟨ψ|` for a normalised state vector.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        Self::new(Operator::outer(psi, psi))
    }

    /// Computational basis state `|index⟩` on `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::param("index", "outside the computational basis"));
        }
        let mut psi = vec![ZERO; dim];
        psi[index] = ONE;
        Self::pure(&psi)
    }

    pub fn maximally_mixed(num_qubits: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        Self::new(Operator::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)))
    }

    /// Diagonal state with the given populations.
    pub fn from_populations(probs: &[f64]) -> Result<Self> {
        let diag: Vec<C64> = probs.iter().map(|&p| C64::new(p, 0.0)).collect();
        Self::new(Operator::diag(&diag))
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn as_operator(&self) -> &Operator {
        &self.op
    }

    pub fn into_operator(self) -> Operator {
        self.op
    }

    /// Diagonal in the computational basis.
    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.op[(i, i)].re).collect()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        Ok(self.op.eigh()?.values)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        Self::new(kron(&self.op, &other.op)?)
    }

    /// `Re Tr(ρσ)`; equals the fidelity when either state is pure.
    pub fn overlap(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok((&self.op * &other.op).trace().re)
    }

    /// `½ Σ |λ_k(ρ - σ)|`
    pub fn trace_distance(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let diff = &self.op - &other.op;
        Ok(0.5 * diff.eigh()?.values.iter().map(|v| v.abs()).sum::<f64>())
    }

    pub fn partial_trace(&self, discard: &[usize]) -> Result<DensityMatrix> {
        partial_trace(self, discard)
    }
}

/// Serialized form: real and imaginary parts as nested rows.
#[cfg(feature = "serde")]
#[derive(serde::Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityProxy {
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Vec<Vec<f64>>,
}

#[cfg(feature = "serde")]
impl From<DensityMatrix> for DensityProxy {
    fn from(rho: DensityMatrix) -> Self {
        let d = rho.dim();
        let op = rho.as_operator();
        let part = |f: fn(C64) -> f64| -> Vec<Vec<f64>> {
            (0..d).map(|r| (0..d).map(|c| f(op[(r, c)])).collect()).collect()
        };
        Self {
            re: part(|z| z.re),
            im: part(|z| z.im),
        }
    }
}

#[cfg(feature = "serde")]
impl TryFrom<DensityProxy> for DensityMatrix {
    type Error = Error;

    fn try_from(p: DensityProxy) -> Result<Self> {
        let d = p.re.len();
        let ragged = |rows: &[Vec<f64>]| rows.iter().any(|r| r.len() != d);
        if ragged(&p.re) || (!p.im.is_empty() && (p.im.len() != d || ragged(&p.im))) {
            return Err(Error::param("density", "re and im must be square and of equal size"));
        }
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                let im = p.im.get(r).map_or(0.0, |row| row[c]);
                entries.push(C64::new(p.re[r][c], im));
            }
        }
        DensityMatrix::new(Operator::from_entries(d, entries)?)
    }
}

/// Traces out the qubits in `discard`; the remaining qubits keep their
/// relative order.
pub fn partial_trace(rho: &DensityMatrix, discard: &[usize]) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    check_targets(discard, n)?;
    if discard.len() == n {
        return Err(Error::param("discard", "cannot trace out every qubit"));
    }
    let keep: Vec<usize> = (0..n).filter(|q| !discard.contains(q)).collect();
    let bit = |q: usize| 1usize << (n - 1 - q);
    let compose = |kept: usize, traced: usize| -> usize {
        let mut full = 0;
        for (pos, &q) in keep.iter().enumerate() {
            if kept & (1 << (keep.len() - 1 - pos)) != 0 {
                full |= bit(q);
            }
        }
        for (pos, &q) in discard.iter().enumerate() {
            if traced & (1 << (discard.len() - 1 - pos)) != 0 {
                full |= bit(q);
            }
        }
        full
    };

    let out_dim = 1usize << keep.len();
    let traced_dim = 1usize << discard.len();
    let src = rho.as_operator();
    let mut out = Operator::zeros(out_dim);
    for r in 0..out_dim {
        for c in 0..out_dim {
            out[(r, c)] = (0..traced_dim)
                .map(|t| src[(compose(r, t), compose(c, t))])
                .sum();
        }
    }
    DensityMatrix::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bell() -> DensityMatrix {
        let s = 1.0 / 2f64.sqrt();
        DensityMatrix::pure(&[C64::new(s, 0.0), ZERO, ZERO, C64::new(s, 0.0)]).unwrap()
    }

    #[test]
    fn validation_rejects_bad_states() {
        let not_unit_trace = Operator::identity(2);
        assert!(DensityMatrix::new(not_unit_trace).is_err());
        let negative = Operator::from_real(2, &[1.5, 0.0, 0.0, -0.5]).unwrap();
        assert!(DensityMatrix::new(negative).is_err());
        let non_herm = Operator::from_real(2, &[0.5, 0.3, 0.0, 0.5]).unwrap();
        assert!(DensityMatrix::new(non_herm).is_err());
        assert!(DensityMatrix::new(Operator::identity(3).scale(C64::new(1.0 / 3.0, 0.0))).is_err());
    }

    #[test]
    fn product_state_factorises() {
        let a = DensityMatrix::pure(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
        let b = DensityMatrix::from_populations(&[0.3, 0.7]).unwrap();
        let ab = a.tensor(&b).unwrap();
        let back = partial_trace(&ab, &[1]).unwrap();
        assert!(back.as_operator().max_abs_diff(a.as_operator()) < 1e-15);
        let other = partial_trace(&ab, &[0]).unwrap();
        assert!(other.as_operator().max_abs_diff(b.as_operator()) < 1e-15);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let reduced = partial_trace(&bell(), &[1]).unwrap();
        let half = DensityMatrix::maximally_mixed(1).unwrap();
        assert!(reduced.as_operator().max_abs_diff(half.as_operator()) < 1e-15);
    }

    #[test]
    fn cannot_discard_everything() {
        assert!(partial_trace(&bell(), &[0, 1]).is_err());
        assert!(partial_trace(&bell(), &[2]).is_err());
    }

    #[test]
    fn distances() {
        let zero = DensityMatrix::basis(1, 0).unwrap();
        let one = DensityMatrix::basis(1, 1).unwrap();
        assert!((zero.trace_distance(&one).unwrap() - 1.0).abs() < 1e-14);
        assert!(zero.overlap(&one).unwrap().abs() < 1e-15);
        assert!((bell().overlap(&bell()).unwrap() - 1.0).abs() < 1e-14);
    }

    fn random_state(n: usize, seed: &[f64]) -> DensityMatrix {
        // Normalised mixture of random pure states.
        let dim = 1usize << n;
        let mut op = Operator::zeros(dim);
        let mut it = seed.iter().cycle();
        for _ in 0..3 {
            let psi: Vec<C64> = (0..dim)
                .map(|_| C64::new(*it.next().unwrap(), *it.next().unwrap()))
                .collect();
            op = &op + &Operator::outer(&psi, &psi);
        }
        let tr = op.trace().re;
        DensityMatrix::new(op.scale(C64::new(1.0 / tr, 0.0))).unwrap()
    }

    proptest! {
        #[test]
        fn sequential_traces_agree(seed in proptest::collection::vec(0.05f64..1.0, 48)) {
            let rho = random_state(3, &seed);
            let joint = partial_trace(&rho, &[1, 2]).unwrap();
            let seq = partial_trace(&partial_trace(&rho, &[2]).unwrap(), &[1]).unwrap();
            prop_assert!(joint.as_operator().max_abs_diff(seq.as_operator()) < 1e-14);
            let tr = joint.as_operator().trace();
            prop_assert!((tr - ONE).norm() < 1e-12);
        }

        #[test]
        fn trace_order_is_irrelevant(seed in proptest::collection::vec(0.05f64..1.0, 48)) {
            let rho = random_state(3, &seed);
            let a = partial_trace(&rho, &[0, 2]).unwrap();
            let b = partial_trace(&rho, &[2, 0]).unwrap();
            prop_assert!(a.as_operator().max_abs_diff(b.as_operator()) < 1e-15);
        }
    }
}
