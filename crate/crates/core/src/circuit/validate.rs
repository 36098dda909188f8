use std::fmt;

use super::{Circuit, Gate, Operands};

/// A broken circuit invariant, located by moment index.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    OverlappingQubits { moment: usize, qubit: usize },
    MixedMomentKind { moment: usize },
    QubitOutOfRange { moment: usize, qubit: usize },
    IdenticalOperands { moment: usize, qubit: usize },
    NonFiniteAngle { moment: usize },
    EmptyMoment { moment: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OverlappingQubits { moment, qubit } => {
                write!(f, "moment {moment}: overlapping qubits (qubit {qubit})")
            }
            Violation::MixedMomentKind { moment } => write!(f, "moment {moment}: mixed moment kind"),
            Violation::QubitOutOfRange { moment, qubit } => {
                write!(f, "moment {moment}: qubit {qubit} out of range")
            }
            Violation::IdenticalOperands { moment, qubit } => {
                write!(f, "moment {moment}: two-qubit gate on identical operands ({qubit})")
            }
            Violation::NonFiniteAngle { moment } => write!(f, "moment {moment}: non-finite angle"),
            Violation::EmptyMoment { moment } => write!(f, "moment {moment}: empty moment"),
        }
    }
}

/// Checks every moment and circuit invariant and reports all violations.
pub fn validate(c: &Circuit) -> Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let n = c.num_qubits;
    for (t, moment) in c.moments.iter().enumerate() {
        if moment.is_empty() {
            out.push(Violation::EmptyMoment { moment: t });
            continue;
        }
        if moment.kind().is_none() {
            out.push(Violation::MixedMomentKind { moment: t });
        }
        let mut used = vec![false; n];
        for gate in &moment.gates {
            if gate.angles().iter().any(|a| !a.is_finite()) {
                out.push(Violation::NonFiniteAngle { moment: t });
            }
            if let Operands::Two(a, b) = gate.operands() {
                if a == b {
                    out.push(Violation::IdenticalOperands { moment: t, qubit: a });
                }
            }
            if let Gate::Gr { .. } = gate {
                if moment.gates.len() > 1 {
                    out.push(Violation::OverlappingQubits { moment: t, qubit: 0 });
                }
                continue;
            }
            for q in gate.qubits(n) {
                if q >= n {
                    out.push(Violation::QubitOutOfRange { moment: t, qubit: q });
                } else if used[q] {
                    out.push(Violation::OverlappingQubits { moment: t, qubit: q });
                } else {
                    used[q] = true;
                }
            }
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
