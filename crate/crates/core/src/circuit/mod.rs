//! Circuit intermediate representation.
//!
//! A [`Circuit`] is a qubit count plus an ordered list of [`Moment`]s. Every
//! pass in the crate is a pure function from one circuit to another. The
//! canonical on-disk form is JSON:
//!
//! ```json
//! {"num_qubits": 2, "moments": [[{"gate": "U3", "qubit": 0, "theta": 1.57, "phi": 0.0, "lambda": 3.14}],
//!                               [{"gate": "CZ", "a": 0, "b": 1}]]}
//! ```

mod passes;
mod qasm;
mod validate;

use serde::{Deserialize, Serialize};

use crate::error::Result;

pub use passes::{merge_rz, schedule_asap};
pub(crate) use passes::move_units;
pub use qasm::parse_qasm;
pub use validate::{validate, Violation};

/// Displacement of an atom from its evenly spaced grid point.
///
/// Displacements only point up (+y) or right (+x); their length is the
/// hardware's trap-interference threshold per axis.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Offset {
    #[default]
    None,
    Up,
    Right,
    UpRight,
}

impl Offset {
    pub const ALL: [Offset; 4] = [Offset::None, Offset::Up, Offset::Right, Offset::UpRight];

    pub fn is_none(&self) -> bool {
        *self == Offset::None
    }

    /// Offset vector in units of the threshold distance.
    pub fn unit_vector(self) -> (f64, f64) {
        match self {
            Offset::None => (0.0, 0.0),
            Offset::Up => (0.0, 1.0),
            Offset::Right => (1.0, 0.0),
            Offset::UpRight => (1.0, 1.0),
        }
    }
}

/// A single circuit instruction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "gate")]
pub enum Gate {
    /// Generic single-qubit rotation `U3(theta, phi, lambda)`.
    U3 {
        qubit: usize,
        theta: f64,
        phi: f64,
        lambda: f64,
    },
    /// Local z rotation `exp(-i lambda Z / 2)`.
    Rz { qubit: usize, lambda: f64 },
    /// Global xy-plane rotation applied to every qubit.
    #[serde(rename = "GR")]
    Gr { theta: f64, phi: f64 },
    #[serde(rename = "CZ")]
    Cz { a: usize, b: usize },
    /// Only present before lowering to the native gate set.
    #[serde(rename = "SWAP")]
    Swap { a: usize, b: usize },
    /// Relocation of an atom between sites. Identity on the quantum state.
    Move {
        qubit: usize,
        from_site: usize,
        to_site: usize,
        #[serde(default, skip_serializing_if = "Offset::is_none")]
        from_offset: Offset,
        #[serde(default, skip_serializing_if = "Offset::is_none")]
        to_offset: Offset,
    },
}

/// Operand set of a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operands {
    One(usize),
    Two(usize, usize),
    All,
}

impl Operands {
    /// True when the operand sets share a qubit.
    pub fn overlaps(&self, other: &Operands) -> bool {
        match (*self, *other) {
            (Operands::All, _) | (_, Operands::All) => true,
            (Operands::One(a), Operands::One(b)) => a == b,
            (Operands::One(a), Operands::Two(b, c)) | (Operands::Two(b, c), Operands::One(a)) => {
                a == b || a == c
            }
            (Operands::Two(a, b), Operands::Two(c, d)) => a == c || a == d || b == c || b == d,
        }
    }

    pub fn contains(&self, q: usize) -> bool {
        match *self {
            Operands::One(a) => a == q,
            Operands::Two(a, b) => a == q || b == q,
            Operands::All => true,
        }
    }
}

/// Homogeneous moment classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MomentKind {
    SingleQubit,
    TwoQubitOrMove,
    Global,
}

impl Gate {
    pub fn operands(&self) -> Operands {
        match *self {
            Gate::U3 { qubit, .. } | Gate::Rz { qubit, .. } | Gate::Move { qubit, .. } => {
                Operands::One(qubit)
            }
            Gate::Gr { .. } => Operands::All,
            Gate::Cz { a, b } | Gate::Swap { a, b } => Operands::Two(a, b),
        }
    }

    pub fn kind(&self) -> MomentKind {
        match self {
            Gate::U3 { .. } | Gate::Rz { .. } => MomentKind::SingleQubit,
            Gate::Cz { .. } | Gate::Swap { .. } | Gate::Move { .. } => MomentKind::TwoQubitOrMove,
            Gate::Gr { .. } => MomentKind::Global,
        }
    }

    /// Qubits touched by the gate in a circuit of `n` qubits.
    pub fn qubits(&self, n: usize) -> Vec<usize> {
        match self.operands() {
            Operands::One(q) => vec![q],
            Operands::Two(a, b) => vec![a, b],
            Operands::All => (0..n).collect(),
        }
    }

    pub fn is_native(&self) -> bool {
        matches!(
            self,
            Gate::Rz { .. } | Gate::Gr { .. } | Gate::Cz { .. } | Gate::Move { .. }
        )
    }

    pub(crate) fn angles(&self) -> Vec<f64> {
        match *self {
            Gate::U3 {
                theta, phi, lambda, ..
            } => vec![theta, phi, lambda],
            Gate::Rz { lambda, .. } => vec![lambda],
            Gate::Gr { theta, phi } => vec![theta, phi],
            _ => Vec::new(),
        }
    }

    /// Same gate acting on relabelled qubits.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> Gate {
        let mut g = *self;
        match &mut g {
            Gate::U3 { qubit, .. } | Gate::Rz { qubit, .. } | Gate::Move { qubit, .. } => {
                *qubit = f(*qubit)
            }
            Gate::Cz { a, b } | Gate::Swap { a, b } => {
                *a = f(*a);
                *b = f(*b);
            }
            Gate::Gr { .. } => {}
        }
        g
    }
}

/// A set of gates executed simultaneously.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Moment {
    pub gates: Vec<Gate>,
}

impl Moment {
    pub fn new(gates: Vec<Gate>) -> Self {
        Self { gates }
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// The shared kind of all gates, or `None` for empty or mixed moments.
    pub fn kind(&self) -> Option<MomentKind> {
        let first = self.gates.first()?.kind();
        self.gates
            .iter()
            .all(|g| g.kind() == first)
            .then_some(first)
    }
}

impl From<Vec<Gate>> for Moment {
    fn from(gates: Vec<Gate>) -> Self {
        Moment::new(gates)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub num_qubits: usize,
    pub moments: Vec<Moment>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            moments: Vec::new(),
        }
    }

    /// Unscheduled circuit holding one gate per moment.
    pub fn from_gates(num_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Self {
        Self {
            num_qubits,
            moments: gates.into_iter().map(|g| Moment::new(vec![g])).collect(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.moments.push(Moment::new(vec![gate]));
    }

    pub fn push_moment(&mut self, moment: impl Into<Moment>) {
        let moment = moment.into();
        if !moment.is_empty() {
            self.moments.push(moment);
        }
    }

    /// All gates in moment order.
    pub fn gates(&self) -> impl Iterator<Item = &Gate> + '_ {
        self.moments.iter().flat_map(|m| m.gates.iter())
    }

    pub fn gate_count(&self) -> usize {
        self.moments.iter().map(|m| m.gates.len()).sum()
    }

    pub fn count_where(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.gates().filter(|g| pred(g)).count()
    }

    /// Concatenation `self` then `other`.
    pub fn append(&mut self, other: &Circuit) {
        self.num_qubits = self.num_qubits.max(other.num_qubits);
        self.moments.extend(other.moments.iter().cloned());
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serialization is infallible")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// True when every Rz and GR angle lies in `(-pi, pi]`.
    pub fn angles_wrapped(&self) -> bool {
        use std::f64::consts::PI;
        self.gates()
            .flat_map(|g| g.angles())
            .all(|a| a > -PI && a <= PI)
    }
}
