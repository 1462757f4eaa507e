//! First-order Trotter steps in the coordinate/momentum split.
//!
//! One step applies, in order: `exp(-i V Δt)` as Z-string rotations on the
//! coordinate register, a centred QFT on every boson, `exp(-i Σ p²/2 Δt)` as
//! Z-string rotations in the momentum basis, and the inverse QFTs.

use serde::Serialize;

use super::{centered_qft_on, Circuit, Gate, GateTally};
use crate::error::{Error, Result};
use crate::hamiltonian::{expand_potential_zsum, kinetic_zsum, HamiltonianSpec};
use crate::operators::TruncationConfig;
use crate::pauli::{PauliSum, PauliTerm};

/// Imaginary parts above this are rejected when exponentiating strings.
const REAL_COEFFICIENT_TOLERANCE: f64 = 1e-12;

/// `exp(-i θ c P)` for a Z string `P` with real coefficient `c`.
pub fn zstring_rotation(term: &PauliTerm, theta: f64) -> Result<Circuit> {
    let mut c = Circuit::new(term.n_qubits());
    append_zstring_rotation(&mut c, term, theta)?;
    Ok(c)
}

/// Appends a CNOT parity ladder onto the highest support qubit, `RZ(2θc)`, and
/// the uncomputing ladder: `2(ℓ-1)` CNOTs and one RZ for a length-ℓ string.
/// The identity string becomes a global `PHASE(-θc)`.
pub fn append_zstring_rotation(circuit: &mut Circuit, term: &PauliTerm, theta: f64) -> Result<()> {
    if !term.is_diagonal() {
        return Err(Error::NonDiagonalString(term.label()));
    }
    if term.n_qubits() != circuit.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_qubits(),
            got: term.n_qubits(),
        });
    }
    let coeff = term.coefficient();
    if coeff.im.abs() > REAL_COEFFICIENT_TOLERANCE {
        return Err(Error::ComplexCoefficient {
            label: term.label(),
            imag: coeff.im,
        });
    }
    let phi = theta * coeff.re;
    if !phi.is_finite() {
        return Err(Error::InvalidGate(format!(
            "rotation angle {phi} is not finite"
        )));
    }
    let support = term.support();
    let Some((&last, rest)) = support.split_last() else {
        return circuit.push(Gate::Phase(-phi));
    };
    for &q in rest {
        circuit.push(Gate::Cnot {
            control: q,
            target: last,
        })?;
    }
    circuit.push(Gate::Rz {
        qubit: last,
        angle: 2.0 * phi,
    })?;
    for &q in rest.iter().rev() {
        circuit.push(Gate::Cnot {
            control: q,
            target: last,
        })?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct LayerBreakdown {
    pub potential: GateTally,
    pub qft: GateTally,
    pub kinetic: GateTally,
    pub inverse_qft: GateTally,
}

impl LayerBreakdown {
    pub fn combined(&self) -> GateTally {
        self.potential + self.qft + self.kinetic + self.inverse_qft
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateCountReport {
    pub steps: usize,
    pub rotations: usize,
    pub entangling: usize,
    pub hadamards: usize,
    pub total: usize,
    pub layers: LayerBreakdown,
    /// `Σ_monomials Q^d` before merging equal strings.
    pub potential_strings_raw: usize,
    pub potential_strings_merged: usize,
    pub kinetic_strings: usize,
}

impl GateCountReport {
    fn new(layers: LayerBreakdown, steps: usize, problem: &TrotterProblem) -> Self {
        let all = layers.combined();
        Self {
            steps,
            rotations: all.rotations(),
            entangling: all.entangling(),
            hadamards: all.hadamards(),
            total: all.total(),
            layers,
            potential_strings_raw: problem.potential_raw,
            potential_strings_merged: problem.potential.len(),
            kinetic_strings: problem.kinetic.len(),
        }
    }

    /// Fraction of gates spent on the potential layer.
    pub fn potential_share(&self) -> f64 {
        self.layers.potential.total() as f64 / self.total.max(1) as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrotterCircuit {
    pub circuit: Circuit,
    pub report: GateCountReport,
}

/// Potential and kinetic Z-string sums on a coordinate register.
///
/// The kinetic sum is interpreted in the momentum basis reached by the
/// centred QFT on each boson. Either sum may be empty.
#[derive(Debug, Clone, PartialEq)]
pub struct TrotterProblem {
    pub config: TruncationConfig,
    pub potential: PauliSum,
    pub kinetic: PauliSum,
    pub potential_raw: usize,
}

impl TrotterProblem {
    pub fn from_spec(spec: &HamiltonianSpec) -> Result<Self> {
        let expansion = expand_potential_zsum(spec)?;
        let kinetic = kinetic_zsum(spec)?;
        Ok(Self {
            config: spec.config,
            potential: expansion.sum,
            kinetic,
            potential_raw: expansion.raw_terms,
        })
    }

    pub fn new(config: TruncationConfig, potential: PauliSum, kinetic: PauliSum) -> Result<Self> {
        for s in [&potential, &kinetic] {
            if s.n_qubits() != config.total_qubits() {
                return Err(Error::DimensionMismatch {
                    expected: config.total_qubits(),
                    got: s.n_qubits(),
                });
            }
            if let Some(t) = s.terms().iter().find(|t| !t.is_diagonal()) {
                return Err(Error::NonDiagonalString(t.label()));
            }
        }
        let potential_raw = potential.len();
        Ok(Self {
            config,
            potential,
            kinetic,
            potential_raw,
        })
    }

    fn layers(&self, dt: f64) -> Result<[Circuit; 4]> {
        let n = self.config.total_qubits();
        let mut potential = Circuit::new(n);
        for t in self.potential.terms() {
            append_zstring_rotation(&mut potential, t, dt)?;
        }
        let mut qft = Circuit::new(n);
        if !self.kinetic.is_empty() {
            for a in 0..self.config.bosons() {
                let offset = self.config.qubit_offset(a)?;
                let register: Vec<usize> =
                    (offset..offset + self.config.qubits_per_boson()).collect();
                centered_qft_on(&mut qft, &register)?;
            }
        }
        let mut kinetic = Circuit::new(n);
        for t in self.kinetic.terms() {
            append_zstring_rotation(&mut kinetic, t, dt)?;
        }
        let inverse = qft.inverse();
        Ok([potential, qft, kinetic, inverse])
    }

    pub fn step(&self, dt: f64) -> Result<TrotterCircuit> {
        self.evolution(dt, 1)
    }

    /// `steps` repetitions of the step with `Δt = dt`.
    pub fn evolution(&self, dt: f64, steps: usize) -> Result<TrotterCircuit> {
        if steps == 0 {
            return Err(Error::InvalidConfig(
                "at least one Trotter step is required".into(),
            ));
        }
        let layers = self.layers(dt)?;
        let mut one = Circuit::new(self.config.total_qubits());
        for layer in &layers {
            one.append(layer)?;
        }
        let mut circuit = Circuit::new(self.config.total_qubits());
        for _ in 0..steps {
            circuit.append(&one)?;
        }
        let breakdown = LayerBreakdown {
            potential: layers[0].counts().scaled(steps),
            qft: layers[1].counts().scaled(steps),
            kinetic: layers[2].counts().scaled(steps),
            inverse_qft: layers[3].counts().scaled(steps),
        };
        let report = GateCountReport::new(breakdown, steps, self);
        Ok(TrotterCircuit { circuit, report })
    }
}

fn require_momentum_pathway(spec: &HamiltonianSpec) -> Result<()> {
    use crate::hamiltonian::{Basis, KineticScheme};
    if spec.basis != Basis::CoordinateQft || spec.kinetic != KineticScheme::MomentumDiagonal {
        return Err(Error::IncompatibleSpec(
            "Trotter circuits need basis = coordinate-qft and kinetic_scheme = momentum-diagonal"
                .into(),
        ));
    }
    Ok(())
}

pub fn trotter_step(spec: &HamiltonianSpec, dt: f64) -> Result<TrotterCircuit> {
    require_momentum_pathway(spec)?;
    TrotterProblem::from_spec(spec)?.step(dt)
}

/// `steps` first-order steps of size `total_time / steps`.
pub fn trotter_evolution(
    spec: &HamiltonianSpec,
    total_time: f64,
    steps: usize,
) -> Result<TrotterCircuit> {
    require_momentum_pathway(spec)?;
    if steps == 0 {
        return Err(Error::InvalidConfig(
            "at least one Trotter step is required".into(),
        ));
    }
    TrotterProblem::from_spec(spec)?.evolution(total_time / steps as f64, steps)
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::hamiltonian::{Basis, KineticScheme, PolynomialPotential};
    use crate::operators::FockParams;

    fn spec(q: usize, v: &[(u32, f64)]) -> HamiltonianSpec {
        HamiltonianSpec::coordinate(
            TruncationConfig::new(1, q, 2.0).unwrap(),
            PolynomialPotential::single_boson(v).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn single_z_is_one_rz() {
        let t = PauliTerm::from_label("IZ", Complex64::new(0.5, 0.0)).unwrap();
        let c = zstring_rotation(&t, 0.3).unwrap();
        assert_eq!(
            c.gates(),
            &[Gate::Rz {
                qubit: 0,
                angle: 0.3
            }]
        );
    }

    #[test]
    fn zz_is_cnot_rz_cnot() {
        let t = PauliTerm::from_label("ZZ", Complex64::new(1.0, 0.0)).unwrap();
        let c = zstring_rotation(&t, 0.25).unwrap();
        assert_eq!(
            c.gates(),
            &[
                Gate::Cnot {
                    control: 0,
                    target: 1
                },
                Gate::Rz {
                    qubit: 1,
                    angle: 0.5
                },
                Gate::Cnot {
                    control: 0,
                    target: 1
                },
            ]
        );
    }

    #[test]
    fn long_string_gate_count() {
        let t = PauliTerm::from_label("ZIZZZ", Complex64::new(1.0, 0.0)).unwrap();
        let counts = zstring_rotation(&t, 1.0).unwrap().counts();
        assert_eq!(counts.cnot, 6);
        assert_eq!(counts.rz, 1);
    }

    #[test]
    fn identity_becomes_global_phase() {
        let t = PauliTerm::identity(2, Complex64::new(2.0, 0.0));
        let c = zstring_rotation(&t, 0.5).unwrap();
        assert_eq!(c.gates(), &[Gate::Phase(-1.0)]);
    }

    #[test]
    fn non_z_letters_rejected() {
        let t = PauliTerm::from_label("XZ", Complex64::new(1.0, 0.0)).unwrap();
        assert!(matches!(
            zstring_rotation(&t, 1.0),
            Err(Error::NonDiagonalString(_))
        ));
        let t = PauliTerm::from_label("ZZ", Complex64::new(1.0, 0.1)).unwrap();
        assert!(matches!(
            zstring_rotation(&t, 1.0),
            Err(Error::ComplexCoefficient { .. })
        ));
    }

    #[test]
    fn step_layer_structure() {
        let step = trotter_step(&spec(2, &[(2, 1.0)]), 0.1).unwrap();
        let l = &step.report.layers;
        // 5/4 I + Z0Z1
        assert_eq!(l.potential.rotations(), 2);
        assert_eq!(l.potential.cnot, 2);
        assert_eq!(l.qft.h, 2);
        assert_eq!(l.qft.cphase, 1);
        assert_eq!(l.inverse_qft, l.qft);
        assert_eq!(step.report.total, step.circuit.len());
        assert_eq!(l.combined().total(), step.report.total);
    }

    #[test]
    fn kinetic_layer_at_four_qubits() {
        let step = trotter_step(&spec(4, &[(2, 0.5)]), 0.1).unwrap();
        let k = &step.report.layers.kinetic;
        assert_eq!(k.rz, 6);
        assert_eq!(k.phase, 1);
        assert_eq!(k.cnot, 12);
    }

    #[test]
    fn potential_rotations_equal_merged_strings() {
        for q in 2..=6 {
            let step = trotter_step(&spec(q, &[(4, 1.0), (2, 1.0)]), 0.1).unwrap();
            assert_eq!(
                step.report.layers.potential.rotations(),
                step.report.potential_strings_merged
            );
            assert_eq!(step.report.potential_strings_raw, q.pow(4) + q.pow(2));
            assert_eq!(step.report.layers.qft.cphase, q * (q - 1) / 2);
        }
    }

    #[test]
    fn evolution_is_linear_in_steps() {
        let s = spec(3, &[(2, 1.0), (4, 1.0)]);
        let one = trotter_evolution(&s, 1.0, 1).unwrap();
        let step = trotter_step(&s, 1.0).unwrap();
        assert_eq!(one.circuit, step.circuit);
        let five = trotter_evolution(&s, 1.0, 5).unwrap();
        assert_eq!(
            five.report.total,
            5 * trotter_step(&s, 0.2).unwrap().report.total
        );
        assert_eq!(five.circuit.len(), five.report.total);
        assert!(trotter_evolution(&s, 1.0, 0).is_err());
    }

    #[test]
    fn zero_potential_omits_layer() {
        let s = spec(3, &[]);
        let step = trotter_step(&s, 0.1).unwrap();
        assert_eq!(step.report.layers.potential.total(), 0);
    }

    #[test]
    fn fock_spec_is_incompatible() {
        let mut s = spec(2, &[(2, 1.0)]);
        s.basis = Basis::Fock(FockParams::default());
        assert!(matches!(
            trotter_step(&s, 0.1),
            Err(Error::IncompatibleSpec(_))
        ));
        let mut s = spec(2, &[(2, 1.0)]);
        s.kinetic = KineticScheme::FiniteDifferenceOpen;
        assert!(matches!(
            trotter_step(&s, 0.1),
            Err(Error::IncompatibleSpec(_))
        ));
    }
}
