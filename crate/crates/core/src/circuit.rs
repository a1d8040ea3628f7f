//! Gate-level circuit representation.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;


#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::linalg::{check_targets, embed, Operator, C64, ONE, ZERO};
use crate::state::DensityMatrix;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    Rzz,
    Cnot,
    /// Controlled RY; the first target is the control.
    Cry,
    X,
    H,
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::X | GateKind::H => 1,
            GateKind::Rzz | GateKind::Cnot | GateKind::Cry => 2,
        }
    }

    pub fn param_count(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::Rzz | GateKind::Cry => 1,
            GateKind::Cnot | GateKind::X | GateKind::H => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::Rzz => "RZZ",
            GateKind::Cnot => "CNOT",
            GateKind::Cry => "CRY",
            GateKind::X => "X",
            GateKind::H => "H",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    kind: GateKind,
    params: Vec<f64>,
    targets: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, params: Vec<f64>, targets: Vec<usize>) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::InvalidGate(format!(
                "{} acts on {} qubit(s), got {}",
                kind.name(),
                kind.arity(),
                targets.len()
            )));
        }
        if params.len() != kind.param_count() {
            return Err(Error::InvalidGate(format!(
                "{} takes {} parameter(s), got {}",
                kind.name(),
                kind.param_count(),
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidGate(format!(
                "{} angle must be finite",
                kind.name()
            )));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(Error::DuplicateQubit(targets[0]));
        }
        Ok(Self {
            kind,
            params,
            targets,
        })
    }

    fn fixed(kind: GateKind, params: &[f64], targets: &[usize]) -> Self {
        Self::new(kind, params.to_vec(), targets.to_vec()).expect("well-formed gate")
    }

    pub fn rx(theta: f64, q: usize) -> Self {
        Self::fixed(GateKind::Rx, &[theta], &[q])
    }

    pub fn ry(theta: f64, q: usize) -> Self {
        Self::fixed(GateKind::Ry, &[theta], &[q])
    }

    pub fn rz(theta: f64, q: usize) -> Self {
        Self::fixed(GateKind::Rz, &[theta], &[q])
    }

    pub fn x(q: usize) -> Self {
        Self::fixed(GateKind::X, &[], &[q])
    }

    pub fn h(q: usize) -> Self {
        Self::fixed(GateKind::H, &[], &[q])
    }

    pub fn rzz(theta: f64, a: usize, b: usize) -> Result<Self> {
        Self::new(GateKind::Rzz, vec![theta], vec![a, b])
    }

    pub fn cnot(control: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::Cnot, vec![], vec![control, target])
    }

    pub fn cry(theta: f64, control: usize, target: usize) -> Result<Self> {
        Self::new(GateKind::Cry, vec![theta], vec![control, target])
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }
}

/// Preparation applied by a mid-circuit reset.
#[derive(Clone, Debug, PartialEq)]
pub enum ResetPrep {
    Zero,
    Plus,
    Mixed(DensityMatrix),
}

impl ResetPrep {
    pub fn state(&self) -> DensityMatrix {
        match self {
            ResetPrep::Zero => DensityMatrix::basis(1, 0).expect("basis state"),
            ResetPrep::Plus => {
                let s = C64::new(0.5f64.sqrt(), 0.0);
                DensityMatrix::pure(&[s, s]).expect("plus state")
            }
            ResetPrep::Mixed(rho) => rho.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Instruction {
    Gate(Gate),
    Reset { target: usize, prep: ResetPrep },
    Barrier,
}

impl Instruction {
    pub fn targets(&self) -> &[usize] {
        match self {
            Instruction::Gate(g) => g.targets(),
            Instruction::Reset { target, .. } => core::slice::from_ref(target),
            Instruction::Barrier => &[],
        }
    }
}

impl From<Gate> for Instruction {
    fn from(g: Gate) -> Self {
        Instruction::Gate(g)
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Gate(g) => {
                f.write_str(g.kind.name())?;
                if let Some(theta) = g.params.first() {
                    write!(f, "({theta})")?;
                }
                for q in &g.targets {
                    write!(f, " q{q}")?;
                }
                Ok(())
            }
            Instruction::Reset { target, prep } => {
                let label = match prep {
                    ResetPrep::Zero => "ZERO",
                    ResetPrep::Plus => "PLUS",
                    ResetPrep::Mixed(_) => "MIXED",
                };
                write!(f, "RESET q{target} {label}")
            }
            Instruction::Barrier => f.write_str("BARRIER"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            instructions: Vec::new(),
        }
    }

    pub fn push(&mut self, inst: impl Into<Instruction>) -> Result<&mut Self> {
        let inst = inst.into();
        check_targets(inst.targets(), self.num_qubits)?;
        if let Instruction::Reset {
            prep: ResetPrep::Mixed(rho),
            ..
        } = &inst
        {
            if rho.num_qubits() != 1 {
                return Err(Error::DimensionMismatch {
                    expected: 2,
                    found: rho.dim(),
                });
            }
        }
        self.instructions.push(inst);
        Ok(self)
    }

    /// Appends every instruction of `other`, which must not be wider.
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        for inst in &other.instructions {
            self.push(inst.clone())?;
        }
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn gates(&self) -> impl Iterator<Item = &Gate> {
        self.instructions.iter().filter_map(|i| match i {
            Instruction::Gate(g) => Some(g),
            _ => None,
        })
    }

    pub fn gate_count(&self) -> usize {
        self.gates().count()
    }

    pub fn has_reset(&self) -> bool {
        self.instructions
            .iter()
            .any(|i| matches!(i, Instruction::Reset { .. }))
    }
}

/// Plain-text dump, one instruction per line.
impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for inst in &self.instructions {
            writeln!(f, "{inst}")?;
        }
        Ok(())
    }
}

/// Matrix of a gate on its own targets (first target most significant).
///
/// Rotations use the half-angle convention `R_P(λ) = exp(-iλP/2)`.
pub fn gate_matrix(g: &Gate) -> Operator {
    let half = g.params.first().copied().unwrap_or(0.0) / 2.0;
    let (c, s) = (half.cos(), half.sin());
    let re = |x: f64| C64::new(x, 0.0);
    let entries = match g.kind {
        GateKind::Rx => vec![re(c), C64::new(0.0, -s), C64::new(0.0, -s), re(c)],
        GateKind::Ry => vec![re(c), re(-s), re(s), re(c)],
        GateKind::Rz => vec![C64::new(c, -s), ZERO, ZERO, C64::new(c, s)],
        GateKind::X => vec![ZERO, ONE, ONE, ZERO],
        GateKind::H => {
            let r = re(0.5f64.sqrt());
            vec![r, r, r, -r]
        }
        GateKind::Rzz => {
            let m = C64::new(c, -s);
            let p = C64::new(c, s);
            return Operator::diag(&[m, p, p, m]);
        }
        GateKind::Cnot => {
            let mut u = Operator::identity(4);
            u[(2, 2)] = ZERO;
            u[(3, 3)] = ZERO;
            u[(2, 3)] = ONE;
            u[(3, 2)] = ONE;
            return u;
        }
        GateKind::Cry => {
            let mut u = Operator::identity(4);
            u[(2, 2)] = re(c);
            u[(2, 3)] = re(-s);
            u[(3, 2)] = re(s);
            u[(3, 3)] = re(c);
            return u;
        }
    };
    Operator::from_entries(2, entries).expect("2x2 gate")
}

/// Full-register unitary of a gate.
pub fn embedded_gate(g: &Gate, num_qubits: usize) -> Result<Operator> {
    embed(&gate_matrix(g), g.targets(), num_qubits)
}

/// Product of the circuit's gates, first instruction applied first.
pub fn circuit_unitary(c: &Circuit) -> Result<Operator> {
    let mut u = Operator::identity(1usize << c.num_qubits());
    for inst in c.instructions() {
        match inst {
            Instruction::Gate(g) => u = &embedded_gate(g, c.num_qubits())? * &u,
            Instruction::Reset { .. } => return Err(Error::ResetInUnitary),
            Instruction::Barrier => {}
        }
    }
    Ok(u)
}
