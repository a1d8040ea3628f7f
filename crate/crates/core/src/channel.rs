//! Completely positive trace-preserving maps in Kraus form.

use alloc::vec;
use alloc::vec::Vec;


#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::linalg::{embed, kron, Operator, C64, ZERO};
use crate::state::DensityMatrix;
use crate::{tol, Error, Result};

/// Finite set of Kraus operators `{K_k}` with `Σ K_k† K_k = I`.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    dim: usize,
    operators: Vec<Operator>,
}

impl KrausChannel {
    /// Validates completeness and positivity of the Choi matrix.
    pub fn new(operators: Vec<Operator>) -> Result<Self> {
        let ch = Self::new_unchecked_cp(operators)?;
        let min = ch.choi().eigh()?.values[0];
        if min < -tol::CHANNEL {
            return Err(Error::NotCompletelyPositive(min));
        }
        Ok(ch)
    }

    // Completeness only; used where positivity holds by construction and the
    // Choi matrix would be large.
    fn new_unchecked_cp(operators: Vec<Operator>) -> Result<Self> {
        let dim = operators
            .first()
            .map(Operator::dim)
            .ok_or_else(|| Error::param("operators", "at least one Kraus operator required"))?;
        if let Some(bad) = operators.iter().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let mut sum = Operator::zeros(dim);
        for k in &operators {
            sum = &sum + &(&k.adjoint() * k);
        }
        let err = sum.max_abs_diff(&Operator::identity(dim));
        if err > tol::CHANNEL {
            return Err(Error::NotTracePreserving(err));
        }
        Ok(Self { dim, operators })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            operators: vec![Operator::identity(dim)],
        }
    }

    /// Single-operator channel `ρ ↦ UρU†`.
    pub fn unitary(u: Operator) -> Result<Self> {
        u.ensure_unitary()?;
        Ok(Self {
            dim: u.dim(),
            operators: vec![u],
        })
    }

    /// Single-qubit amplitude damping towards `|0⟩` with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        check_probability("gamma", gamma)?;
        let k0 = Operator::from_real(2, &[1.0, 0.0, 0.0, (1.0 - gamma).sqrt()])?;
        let k1 = Operator::from_real(2, &[0.0, gamma.sqrt(), 0.0, 0.0])?;
        Self::new(vec![k0, k1])
    }

    /// Single-qubit dephasing that multiplies coherences by `factor`.
    pub fn phase_damping(factor: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&factor) {
            return Err(Error::param("factor", "must lie in [-1, 1]"));
        }
        let a = ((1.0 + factor) / 2.0).sqrt();
        let b = ((1.0 - factor) / 2.0).sqrt();
        let k0 = Operator::identity(2).scale(C64::new(a, 0.0));
        let k1 = Operator::pauli_z().scale(C64::new(b, 0.0));
        Self::new(vec![k0, k1])
    }

    /// `k`-qubit depolarizing channel `ρ ↦ (1-p)ρ + p·I/2^k`, in Pauli form.
    pub fn depolarizing(num_qubits: usize, p: f64) -> Result<Self> {
        check_probability("p", p)?;
        if num_qubits == 0 || num_qubits > 3 {
            return Err(Error::param("num_qubits", "depolarizing supports 1 to 3 qubits"));
        }
        let paulis = [
            Operator::identity(2),
            Operator::pauli_x(),
            Operator::pauli_y(),
            Operator::pauli_z(),
        ];
        let count = 1usize << (2 * num_qubits);
        let w_id = (1.0 - p + p / count as f64).sqrt();
        let w = (p / count as f64).sqrt();
        let mut operators = Vec::with_capacity(count);
        for idx in 0..count {
            let mut op = Operator::identity(1);
            for q in 0..num_qubits {
                let which = (idx >> (2 * (num_qubits - 1 - q))) & 3;
                op = kron(&op, &paulis[which])?;
            }
            let weight = if idx == 0 { w_id } else { w };
            if weight > 0.0 {
                operators.push(op.scale(C64::new(weight, 0.0)));
            }
        }
        Self::new(operators)
    }

    /// Single-qubit channel that discards the qubit and prepares `prep`.
    pub fn reset_to(prep: &DensityMatrix) -> Result<Self> {
        if prep.num_qubits() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: prep.dim(),
            });
        }
        let eig = prep.as_operator().eigh()?;
        let mut operators = Vec::new();
        for (j, &p) in eig.values.iter().enumerate() {
            if p <= 0.0 {
                continue;
            }
            let e = eig.vector(j);
            for i in 0..2 {
                let mut bra = [ZERO; 2];
                bra[i] = C64::new(1.0, 0.0);
                operators.push(Operator::outer(&e, &bra).scale(C64::new(p.sqrt(), 0.0)));
            }
        }
        Self::new(operators)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    /// `Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)`
    pub fn choi(&self) -> Operator {
        let d = self.dim;
        let mut out = Operator::zeros(d * d);
        for k in &self.operators {
            // vec(K) with the input index as the outer (row-block) index.
            let v: Vec<C64> = (0..d * d).map(|idx| k[(idx % d, idx / d)]).collect();
            out = &out + &Operator::outer(&v, &v);
        }
        out
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        apply_channel(rho, self)
    }

    /// Applies the channel to a subset of qubits of a larger state.
    pub fn apply_on(&self, rho: &DensityMatrix, targets: &[usize]) -> Result<DensityMatrix> {
        self.embedded(targets, rho.num_qubits())?.apply(rho)
    }

    /// The same channel lifted onto `targets` of a `num_qubits` register.
    pub fn embedded(&self, targets: &[usize], num_qubits: usize) -> Result<KrausChannel> {
        let operators = self
            .operators
            .iter()
            .map(|k| embed(k, targets, num_qubits))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            dim: 1usize << num_qubits,
            operators,
        })
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut operators = Vec::with_capacity(self.operators.len() * other.operators.len());
        for b in &other.operators {
            for a in &self.operators {
                let k = b * a;
                if k.frobenius_norm_sqr() > 0.0 {
                    operators.push(k);
                }
            }
        }
        Self::new_unchecked_cp(operators)
    }

    /// `self ⊗ other`, `self` on the more significant qubits.
    pub fn tensor(&self, other: &KrausChannel) -> Result<KrausChannel> {
        let mut operators = Vec::with_capacity(self.operators.len() * other.operators.len());
        for a in &self.operators {
            for b in &other.operators {
                operators.push(kron(a, b)?);
            }
        }
        Self::new_unchecked_cp(operators)
    }

    /// Repeatedly applies the channel until successive states agree to
    /// `tolerance` (max entry), returning the limit.
    pub fn fixed_point(
        &self,
        start: &DensityMatrix,
        tolerance: f64,
        max_iterations: usize,
    ) -> Result<DensityMatrix> {
        let mut rho = start.clone();
        for _ in 0..max_iterations {
            let next = self.apply(&rho)?;
            let delta = next.as_operator().max_abs_diff(rho.as_operator());
            rho = next;
            if delta <= tolerance {
                return Ok(rho);
            }
        }
        Err(Error::NoConvergence)
    }
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(name, "must be a probability in [0, 1]"));
    }
    Ok(())
}

/// `ρ ↦ Σ_k K_k ρ K_k†`
pub fn apply_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    if rho.dim() != ch.dim() {
        return Err(Error::DimensionMismatch {
            expected: ch.dim(),
            found: rho.dim(),
        });
    }
    let mut out = Operator::zeros(rho.dim());
    for k in ch.operators() {
        out = &out + &k.conjugate(rho.as_operator());
    }
    DensityMatrix::new(out)
}

/// Reduced map `ρ ↦ Tr_bath(U (ρ ⊗ ρ_bath) U†)` in Kraus form.
///
/// The system occupies the leading (most significant) qubits of `u`. With
/// `ρ_bath = Σ_j p_j |e_j⟩⟨e_j|` the Kraus operators are
/// `√p_j (I ⊗ ⟨i|) U (I ⊗ |e_j⟩)` over bath basis states `i`.
pub fn channel_from_dilation(
    u: &Operator,
    bath_state: &DensityMatrix,
    system_qubits: usize,
) -> Result<KrausChannel> {
    let bath_dim = bath_state.dim();
    let sys_dim = 1usize << system_qubits;
    if u.dim() != sys_dim * bath_dim {
        return Err(Error::DimensionMismatch {
            expected: sys_dim * bath_dim,
            found: u.dim(),
        });
    }
    u.ensure_unitary()?;

    let eig = bath_state.as_operator().eigh()?;
    let mut operators = Vec::new();
    for (j, &p) in eig.values.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let e = eig.vector(j);
        let weight = p.sqrt();
        for i in 0..bath_dim {
            let mut k = Operator::zeros(sys_dim);
            for s_out in 0..sys_dim {
                for s_in in 0..sys_dim {
                    let amp: C64 = (0..bath_dim)
                        .map(|b| u[(s_out * bath_dim + i, s_in * bath_dim + b)] * e[b])
                        .sum();
                    k[(s_out, s_in)] = amp * weight;
                }
            }
            if k.frobenius_norm_sqr() > 1e-30 {
                operators.push(k);
            }
        }
    }
    KrausChannel::new(operators)
}
