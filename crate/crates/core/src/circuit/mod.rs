//! Gate-level circuits.
//!
//! Sign conventions: `RZ(φ) = diag(e^{-iφ/2}, e^{iφ/2})`,
//! `DIAGPHASE(φ) = diag(1, e^{iφ})`, `CPHASE(φ) = diag(1, 1, 1, e^{iφ})` and
//! `PHASE(φ)` multiplies the whole state by `e^{iφ}`. Qubit 0 is the
//! least-significant bit of a basis index.

mod qft;
mod trotter;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

pub use qft::{centered_qft_on, qft_circuit, qft_on};
pub use trotter::{
    append_zstring_rotation, trotter_evolution, trotter_step, zstring_rotation, GateCountReport,
    LayerBreakdown, TrotterCircuit, TrotterProblem,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H(usize),
    X(usize),
    Rz {
        qubit: usize,
        angle: f64,
    },
    /// Global phase `e^{iφ}`.
    Phase(f64),
    Cnot {
        control: usize,
        target: usize,
    },
    CPhase {
        control: usize,
        target: usize,
        angle: f64,
    },
    Swap(usize, usize),
    DiagPhase {
        qubit: usize,
        angle: f64,
    },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::X(q) => vec![q],
            Gate::Rz { qubit, .. } | Gate::DiagPhase { qubit, .. } => vec![qubit],
            Gate::Phase(_) => vec![],
            Gate::Cnot { control, target }
            | Gate::CPhase {
                control, target, ..
            } => {
                vec![control, target]
            }
            Gate::Swap(a, b) => vec![a, b],
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Rz { qubit, angle } => Gate::Rz {
                qubit,
                angle: -angle,
            },
            Gate::Phase(angle) => Gate::Phase(-angle),
            Gate::CPhase {
                control,
                target,
                angle,
            } => Gate::CPhase {
                control,
                target,
                angle: -angle,
            },
            Gate::DiagPhase { qubit, angle } => Gate::DiagPhase {
                qubit,
                angle: -angle,
            },
            g => g,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::X(_) => "X",
            Gate::Rz { .. } => "RZ",
            Gate::Phase(_) => "PHASE",
            Gate::Cnot { .. } => "CNOT",
            Gate::CPhase { .. } => "CPHASE",
            Gate::Swap(..) => "SWAP",
            Gate::DiagPhase { .. } => "DIAGPHASE",
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= n_qubits) {
            return Err(Error::InvalidGate(format!(
                "{self} addresses qubit {q} on a {n_qubits}-qubit register"
            )));
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::InvalidGate(format!(
                "{self} repeats qubit {}",
                qs[0]
            )));
        }
        let angle_ok = match *self {
            Gate::Rz { angle, .. }
            | Gate::Phase(angle)
            | Gate::CPhase { angle, .. }
            | Gate::DiagPhase { angle, .. } => angle.is_finite(),
            _ => true,
        };
        if !angle_ok {
            return Err(Error::InvalidGate(format!("{self} has a non-finite angle")));
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match *self {
            Gate::H(q) | Gate::X(q) => write!(f, "{name} {q}"),
            Gate::Rz { qubit, angle } | Gate::DiagPhase { qubit, angle } => {
                write!(f, "{name} {qubit} {angle}")
            }
            Gate::Phase(angle) => write!(f, "{name} {angle}"),
            Gate::Cnot { control, target } => write!(f, "{name} {control} {target}"),
            Gate::CPhase {
                control,
                target,
                angle,
            } => write!(f, "{name} {control} {target} {angle}"),
            Gate::Swap(a, b) => write!(f, "{name} {a} {b}"),
        }
    }
}

impl FromStr for Gate {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let fields: Vec<&str> = s.split_whitespace().collect();
        let (name, args) = fields.split_first().ok_or("empty gate line")?;
        let q = |i: usize| -> std::result::Result<usize, String> {
            args.get(i)
                .ok_or(format!("{name}: missing argument {}", i + 1))?
                .parse()
                .map_err(|e| format!("{name}: bad qubit: {e}"))
        };
        let a = |i: usize| -> std::result::Result<f64, String> {
            args.get(i)
                .ok_or(format!("{name}: missing angle"))?
                .parse()
                .map_err(|e| format!("{name}: bad angle: {e}"))
        };
        let (gate, arity) = match *name {
            "H" => (Gate::H(q(0)?), 1),
            "X" => (Gate::X(q(0)?), 1),
            "RZ" => (
                Gate::Rz {
                    qubit: q(0)?,
                    angle: a(1)?,
                },
                2,
            ),
            "PHASE" => (Gate::Phase(a(0)?), 1),
            "CNOT" => (
                Gate::Cnot {
                    control: q(0)?,
                    target: q(1)?,
                },
                2,
            ),
            "CPHASE" => (
                Gate::CPhase {
                    control: q(0)?,
                    target: q(1)?,
                    angle: a(2)?,
                },
                3,
            ),
            "SWAP" => (Gate::Swap(q(0)?, q(1)?), 2),
            "DIAGPHASE" => (
                Gate::DiagPhase {
                    qubit: q(0)?,
                    angle: a(1)?,
                },
                2,
            ),
            other => return Err(format!("unknown gate {other:?}")),
        };
        if args.len() != arity {
            return Err(format!(
                "{name}: expected {arity} arguments, found {}",
                args.len()
            ));
        }
        Ok(gate)
    }
}

/// Per-kind gate tallies.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct GateTally {
    pub h: usize,
    pub x: usize,
    pub rz: usize,
    pub phase: usize,
    pub cnot: usize,
    pub cphase: usize,
    pub swap: usize,
    pub diag_phase: usize,
}

impl GateTally {
    pub fn record(&mut self, gate: &Gate) {
        match gate {
            Gate::H(_) => self.h += 1,
            Gate::X(_) => self.x += 1,
            Gate::Rz { .. } => self.rz += 1,
            Gate::Phase(_) => self.phase += 1,
            Gate::Cnot { .. } => self.cnot += 1,
            Gate::CPhase { .. } => self.cphase += 1,
            Gate::Swap(..) => self.swap += 1,
            Gate::DiagPhase { .. } => self.diag_phase += 1,
        }
    }

    /// Parametrized phase gates: RZ, DIAGPHASE and global PHASE.
    pub fn rotations(&self) -> usize {
        self.rz + self.diag_phase + self.phase
    }

    pub fn entangling(&self) -> usize {
        self.cnot + self.cphase + self.swap
    }

    pub fn hadamards(&self) -> usize {
        self.h
    }

    pub fn total(&self) -> usize {
        self.h
            + self.x
            + self.rz
            + self.phase
            + self.cnot
            + self.cphase
            + self.swap
            + self.diag_phase
    }

    pub fn scaled(&self, factor: usize) -> Self {
        Self {
            h: self.h * factor,
            x: self.x * factor,
            rz: self.rz * factor,
            phase: self.phase * factor,
            cnot: self.cnot * factor,
            cphase: self.cphase * factor,
            swap: self.swap * factor,
            diag_phase: self.diag_phase * factor,
        }
    }
}

impl std::ops::Add for GateTally {
    type Output = GateTally;

    fn add(self, o: Self) -> Self {
        Self {
            h: self.h + o.h,
            x: self.x + o.x,
            rz: self.rz + o.rz,
            phase: self.phase + o.phase,
            cnot: self.cnot + o.cnot,
            cphase: self.cphase + o.cphase,
            swap: self.swap + o.swap,
            diag_phase: self.diag_phase + o.diag_phase,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    pub fn counts(&self) -> GateTally {
        let mut tally = GateTally::default();
        for g in &self.gates {
            tally.record(g);
        }
        tally
    }

    /// `# qubits <n>` header followed by one gate per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# qubits {}\n", self.n_qubits);
        for g in &self.gates {
            out.push_str(&g.to_string());
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            if let Some(rest) = line.strip_prefix('#') {
                if circuit.is_none() {
                    let n = rest
                        .trim()
                        .strip_prefix("qubits")
                        .and_then(|v| v.trim().parse().ok())
                        .ok_or_else(|| err("expected `# qubits <n>` header".into()))?;
                    circuit = Some(Circuit::new(n));
                }
                continue;
            }
            let c = circuit
                .as_mut()
                .ok_or_else(|| err("gate before `# qubits <n>` header".into()))?;
            let gate: Gate = line.parse().map_err(err)?;
            c.push(gate).map_err(|e| err(e.to_string()))?;
        }
        circuit.ok_or(Error::Parse {
            line: 1,
            message: "missing `# qubits <n>` header".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_validates_qubits() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::H(1)).is_ok());
        assert!(c.push(Gate::H(2)).is_err());
        assert!(c
            .push(Gate::Cnot {
                control: 1,
                target: 1
            })
            .is_err());
        assert!(c
            .push(Gate::Rz {
                qubit: 0,
                angle: f64::NAN
            })
            .is_err());
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn text_round_trip() {
        let mut c = Circuit::new(3);
        for g in [
            Gate::H(0),
            Gate::X(2),
            Gate::Rz {
                qubit: 1,
                angle: -0.123456789012345,
            },
            Gate::Phase(std::f64::consts::PI),
            Gate::Cnot {
                control: 0,
                target: 2,
            },
            Gate::CPhase {
                control: 2,
                target: 1,
                angle: 1e-300,
            },
            Gate::Swap(0, 2),
            Gate::DiagPhase {
                qubit: 1,
                angle: 2.5,
            },
        ] {
            c.push(g).unwrap();
        }
        let text = c.to_text();
        assert!(text.contains("CPHASE 2 1 "));
        assert_eq!(Circuit::from_text(&text).unwrap(), c);
    }

    #[test]
    fn text_errors() {
        assert!(Circuit::from_text("H 0\n").is_err());
        match Circuit::from_text("# qubits 2\nH 0\nFOO 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(Circuit::from_text("# qubits 2\nCNOT 0\n").is_err());
        assert!(Circuit::from_text("# qubits 2\nH 0 1\n").is_err());
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::CPhase {
            control: 0,
            target: 1,
            angle: 0.5,
        })
        .unwrap();
        let inv = c.inverse();
        assert_eq!(
            inv.gates(),
            &[
                Gate::CPhase {
                    control: 0,
                    target: 1,
                    angle: -0.5
                },
                Gate::H(0)
            ]
        );
    }

    #[test]
    fn tallies() {
        let mut c = Circuit::new(2);
        c.push(Gate::H(0)).unwrap();
        c.push(Gate::Rz {
            qubit: 0,
            angle: 1.0,
        })
        .unwrap();
        c.push(Gate::Phase(1.0)).unwrap();
        c.push(Gate::Cnot {
            control: 0,
            target: 1,
        })
        .unwrap();
        c.push(Gate::Swap(0, 1)).unwrap();
        let t = c.counts();
        assert_eq!(t.rotations(), 2);
        assert_eq!(t.entangling(), 2);
        assert_eq!(t.hadamards(), 1);
        assert_eq!(t.total(), 5);
        assert_eq!((t + t).total(), 10);
        assert_eq!(t.scaled(3).cnot, 3);
    }
}
