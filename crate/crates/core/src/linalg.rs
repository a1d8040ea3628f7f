//! Dense complex matrices.
//!
//! Everything here is sized for registers of at most [`MAX_QUBITS`] qubits
//! and, in practice, for the four-qubit problems the simulator runs, so the
//! algorithms favour exactness and simplicity over asymptotic speed.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::{tol, Error, Result, MAX_QUBITS};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<C64>,
}

impl Operator {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut out = Self::zeros(dim);
        for i in 0..dim {
            out[(i, i)] = ONE;
        }
        out
    }

    pub fn from_entries(dim: usize, entries: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::param("dim", "must be positive"));
        }
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    /// Builds an operator from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_entries(dim, entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut out = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            out[(i, i)] = v;
        }
        out
    }

    /// Checked constructor for operators that must be unitary.
    pub fn unitary(dim: usize, entries: Vec<C64>) -> Result<Self> {
        let op = Self::from_entries(dim, entries)?;
        op.ensure_unitary()?;
        Ok(op)
    }

    /// Checked constructor for operators that must be Hermitian.
    pub fn hermitian(dim: usize, entries: Vec<C64>) -> Result<Self> {
        let op = Self::from_entries(dim, entries)?;
        op.ensure_hermitian()?;
        Ok(op)
    }

    /// |ψ⟩⟨φ|
    pub fn outer(ket: &[C64], bra: &[C64]) -> Self {
        assert_eq!(ket.len(), bra.len(), "outer product of unequal lengths");
        let dim = ket.len();
        let mut out = Self::zeros(dim);
        for r in 0..dim {
            for c in 0..dim {
                out[(r, c)] = ket[r] * bra[c].conj();
            }
        }
        out
    }

    pub fn pauli_x() -> Self {
        Self::from_real(2, &[0.0, 1.0, 1.0, 0.0]).expect("2x2")
    }

    pub fn pauli_y() -> Self {
        Self::from_entries(2, vec![ZERO, -I, I, ZERO]).expect("2x2")
    }

    pub fn pauli_z() -> Self {
        Self::from_real(2, &[1.0, 0.0, 0.0, -1.0]).expect("2x2")
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    /// Number of qubits if the dimension is a power of two.
    pub fn num_qubits(&self) -> Option<usize> {
        self.dim
            .is_power_of_two()
            .then(|| self.dim.trailing_zeros() as usize)
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        assert_eq!(self.dim, other.dim, "comparing operators of unequal size");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm_sqr(&self) -> f64 {
        self.entries.iter().map(|x| x.norm_sqr()).sum()
    }

    /// `‖H - H†‖_max`
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// `‖U†U - I‖_max`
    pub fn unitarity_error(&self) -> f64 {
        (&self.adjoint() * self).max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_error() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    pub(crate) fn ensure_hermitian(&self) -> Result<()> {
        let err = self.hermiticity_error();
        if err > tol::HERMITIAN {
            return Err(Error::NotHermitian(err));
        }
        Ok(())
    }

    pub(crate) fn ensure_unitary(&self) -> Result<()> {
        let err = self.unitarity_error();
        if err > tol::UNITARY {
            return Err(Error::NotUnitary(err));
        }
        Ok(())
    }

    /// Applies the operator to a column vector.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim, "vector length does not match operator");
        (0..self.dim)
            .map(|r| {
                self.entries[r * self.dim..(r + 1) * self.dim]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// `A X A†`
    pub fn conjugate(&self, x: &Operator) -> Operator {
        &(self * x) * &self.adjoint()
    }

    /// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
    pub fn eigh(&self) -> Result<Eigh> {
        let scale = self.max_abs().max(1.0);
        let err = self.hermiticity_error();
        if err > tol::HERMITIAN * scale {
            return Err(Error::NotHermitian(err));
        }
        jacobi_eigh(self)
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = C64;

    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.entries[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.entries[r * self.dim + c]
    }
}

/// Matrix product. Panics if the dimensions differ.
impl Mul for &Operator {
    type Output = Operator;

    fn mul(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "multiplying operators of unequal size");
        let n = self.dim;
        let mut out = Operator::zeros(n);
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                let row = &rhs.entries[k * n..(k + 1) * n];
                let dst = &mut out.entries[r * n..(r + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &Operator {
    type Output = Operator;

    fn add(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "adding operators of unequal size");
        Operator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Operator {
    type Output = Operator;

    fn sub(self, rhs: &Operator) -> Operator {
        assert_eq!(self.dim, rhs.dim, "subtracting operators of unequal size");
        Operator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Operator({}x{}) [", self.dim, self.dim)?;
        for r in 0..self.dim {
            write!(f, "  ")?;
            for c in 0..self.dim {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Hermitian eigendecomposition: `A = V diag(values) V†`.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Eigenvectors as columns.
    pub vectors: Operator,
}

impl Eigh {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        let n = self.vectors.dim();
        (0..n).map(|r| self.vectors[(r, k)]).collect()
    }

    /// Rebuilds `V f(Λ) V†` for a scalar function of the eigenvalues.
    pub fn map(&self, f: impl Fn(f64) -> C64) -> Operator {
        let n = self.vectors.dim();
        let mut out = Operator::zeros(n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let fk = f(lambda);
            for r in 0..n {
                let vr = self.vectors[(r, k)] * fk;
                if vr == ZERO {
                    continue;
                }
                for c in 0..n {
                    out[(r, c)] += vr * self.vectors[(c, k)].conj();
                }
            }
        }
        out
    }
}

// Cyclic complex Jacobi. Each rotation first removes the phase of a_pq and
// then applies the real symmetric Jacobi rotation that zeroes it.
fn jacobi_eigh(h: &Operator) -> Result<Eigh> {
    const MAX_SWEEPS: usize = 100;
    let n = h.dim();
    let mut a = h.clone();
    let mut v = Operator::identity(n);

    let total: f64 = a.frobenius_norm_sqr();
    let threshold = (f64::EPSILON * f64::EPSILON) * total.max(f64::MIN_POSITIVE);

    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let abs = apq.norm();
                if abs * abs <= threshold / ((n * n) as f64) {
                    continue;
                }
                let phase = apq / abs;
                let theta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * abs);
                let t = if theta.abs() > 1e150 {
                    1.0 / (2.0 * theta)
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = phase.conj() * -s;
                let g_qq = phase.conj() * c;

                // A <- A G ; V <- V G
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * g_pp + akq * g_qp;
                    a[(k, q)] = akp * g_pq + akq * g_qq;
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * g_pp + vkq * g_qp;
                    v[(k, q)] = vkp * g_pq + vkq * g_qq;
                }
                // A <- G† A
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
                    a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = Operator::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for r in 0..n {
            vectors[(r, new)] = v[(r, old)];
        }
    }
    Ok(Eigh { values, vectors })
}

fn check_dim_limit(dim: usize) -> Result<()> {
    if dim > (1usize << MAX_QUBITS) {
        let requested = if dim.is_power_of_two() {
            dim.trailing_zeros() as usize
        } else {
            (usize::BITS - dim.leading_zeros()) as usize
        };
        return Err(Error::TooManyQubits {
            requested,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Kronecker product `a ⊗ b`; `a` occupies the more significant index.
pub fn kron(a: &Operator, b: &Operator) -> Result<Operator> {
    let dim = a
        .dim()
        .checked_mul(b.dim())
        .ok_or(Error::TooManyQubits {
            requested: usize::BITS as usize,
            max: MAX_QUBITS,
        })?;
    check_dim_limit(dim)?;
    let (na, nb) = (a.dim(), b.dim());
    let mut out = Operator::zeros(dim);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            if aij == ZERO {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

/// `exp(-i·sign·h·t)` through the eigendecomposition of `h`.
pub fn matexp_unitary(h: &Operator, t: f64, sign: f64) -> Result<Operator> {
    if sign != 1.0 && sign != -1.0 {
        return Err(Error::param("sign", "must be +1 or -1"));
    }
    h.ensure_hermitian()?;
    let eig = h.eigh()?;
    Ok(eig.map(|lambda| {
        let phase = -sign * lambda * t;
        C64::new(phase.cos(), phase.sin())
    }))
}

pub(crate) fn check_targets(targets: &[usize], num_qubits: usize) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= num_qubits {
            return Err(Error::QubitOutOfRange {
                index: t,
                num_qubits,
            });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateQubit(t));
        }
    }
    Ok(())
}

/// Lifts `u` to a `num_qubits` register, acting on `targets` in order.
///
/// The first target is the most significant bit of `u`'s index, and qubit 0
/// is the most significant bit of the full register.
pub fn embed(u: &Operator, targets: &[usize], num_qubits: usize) -> Result<Operator> {
    if num_qubits > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            requested: num_qubits,
            max: MAX_QUBITS,
        });
    }
    if targets.len() > num_qubits || u.dim() != 1usize << targets.len() {
        return Err(Error::DimensionMismatch {
            expected: 1usize << targets.len().min(MAX_QUBITS),
            found: u.dim(),
        });
    }
    check_targets(targets, num_qubits)?;

    let dim = 1usize << num_qubits;
    let k = targets.len();
    let bit = |q: usize| 1usize << (num_qubits - 1 - q);
    let target_mask: usize = targets.iter().map(|&q| bit(q)).sum();

    let sub_index = |full: usize| -> usize {
        targets
            .iter()
            .enumerate()
            .fold(0, |acc, (pos, &q)| {
                acc | (((full & bit(q)) != 0) as usize) << (k - 1 - pos)
            })
    };
    let scatter = |sub: usize| -> usize {
        targets.iter().enumerate().fold(0, |acc, (pos, &q)| {
            if sub & (1 << (k - 1 - pos)) != 0 {
                acc | bit(q)
            } else {
                acc
            }
        })
    };

    let mut out = Operator::zeros(dim);
    for row in 0..dim {
        let rest = row & !target_mask;
        let rs = sub_index(row);
        for cs in 0..u.dim() {
            let val = u[(rs, cs)];
            if val != ZERO {
                out[(row, rest | scatter(cs))] = val;
            }
        }
    }
    Ok(out)
}
