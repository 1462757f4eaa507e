//! Dense statevector simulation and exact propagators used as ground truth.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::circuit::{Circuit, Gate, TrotterProblem};
use crate::error::{Error, Result};
use crate::hamiltonian::{potential_on_grid, Basis, HamiltonianSpec, KineticScheme};
use crate::operators::{momentum_grid, register_fourier, TruncationConfig};
use crate::sparse::SparseOperator;

/// Largest register [`apply_circuit`] accepts.
pub const STATE_QUBIT_CAP: usize = 20;
/// Largest register for full unitaries and exact propagators.
pub const MATRIX_QUBIT_CAP: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_state_cap(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index + 1,
            });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::NotPowerOfTwo(amplitudes.len()));
        }
        let n_qubits = amplitudes.len().trailing_zeros() as usize;
        check_state_cap(n_qubits)?;
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Applies one gate in place using bit-strided updates.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.n_qubits) {
            return Err(Error::InvalidGate(format!(
                "{gate} addresses qubit {q} on a {}-qubit state",
                self.n_qubits
            )));
        }
        let amps = &mut self.amplitudes;
        match *gate {
            Gate::H(q) => {
                let bit = 1 << q;
                let s = std::f64::consts::FRAC_1_SQRT_2;
                for i in 0..amps.len() {
                    if i & bit == 0 {
                        let (a, b) = (amps[i], amps[i | bit]);
                        amps[i] = (a + b) * s;
                        amps[i | bit] = (a - b) * s;
                    }
                }
            }
            Gate::X(q) => {
                let bit = 1 << q;
                for i in 0..amps.len() {
                    if i & bit == 0 {
                        amps.swap(i, i | bit);
                    }
                }
            }
            Gate::Rz { qubit, angle } => {
                let bit = 1 << qubit;
                let lo = Complex64::from_polar(1.0, -angle / 2.0);
                let hi = Complex64::from_polar(1.0, angle / 2.0);
                for (i, a) in amps.iter_mut().enumerate() {
                    *a *= if i & bit == 0 { lo } else { hi };
                }
            }
            Gate::Phase(angle) => {
                let ph = Complex64::from_polar(1.0, angle);
                amps.iter_mut().for_each(|a| *a *= ph);
            }
            Gate::Cnot { control, target } => {
                let (c, t) = (1 << control, 1 << target);
                for i in 0..amps.len() {
                    if i & c != 0 && i & t == 0 {
                        amps.swap(i, i | t);
                    }
                }
            }
            Gate::CPhase {
                control,
                target,
                angle,
            } => {
                let mask = (1 << control) | (1 << target);
                let ph = Complex64::from_polar(1.0, angle);
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *a *= ph;
                    }
                }
            }
            Gate::Swap(p, q) => {
                let (bp, bq) = (1 << p, 1 << q);
                for i in 0..amps.len() {
                    if i & bp != 0 && i & bq == 0 {
                        amps.swap(i, i ^ bp ^ bq);
                    }
                }
            }
            Gate::DiagPhase { qubit, angle } => {
                let bit = 1 << qubit;
                let ph = Complex64::from_polar(1.0, angle);
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & bit != 0 {
                        *a *= ph;
                    }
                }
            }
        }
        Ok(())
    }
}

fn check_state_cap(n_qubits: usize) -> Result<()> {
    if n_qubits > STATE_QUBIT_CAP {
        return Err(Error::CapExceeded {
            what: "statevector qubits",
            limit: STATE_QUBIT_CAP,
            got: n_qubits,
        });
    }
    Ok(())
}

fn check_matrix_cap(n_qubits: usize) -> Result<()> {
    if n_qubits > MATRIX_QUBIT_CAP {
        return Err(Error::CapExceeded {
            what: "qubits for full-matrix simulation",
            limit: MATRIX_QUBIT_CAP,
            got: n_qubits,
        });
    }
    Ok(())
}

pub fn apply_circuit(circuit: &Circuit, state: &StateVector) -> Result<StateVector> {
    if circuit.n_qubits() != state.n_qubits {
        return Err(Error::DimensionMismatch {
            expected: circuit.n_qubits(),
            got: state.n_qubits,
        });
    }
    let mut out = state.clone();
    for g in circuit.gates() {
        out.apply_gate(g)?;
    }
    Ok(out)
}

/// Full unitary of a circuit, one basis column at a time.
pub fn circuit_matrix(circuit: &Circuit) -> Result<SparseOperator> {
    let n = circuit.n_qubits();
    check_matrix_cap(n)?;
    let dim = 1usize << n;
    let mut triplets = Vec::new();
    for col in 0..dim {
        let out = apply_circuit(circuit, &StateVector::basis(n, col)?)?;
        triplets.extend(
            out.amplitudes
                .iter()
                .enumerate()
                .map(|(row, &v)| (row, col, v)),
        );
    }
    SparseOperator::from_triplets(dim, triplets)
}

/// `U = exp(-iHt)` computed from the Hermitian eigendecomposition of `H`.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub hamiltonian: SparseOperator,
    pub time: f64,
    pub unitary: DMatrix<Complex64>,
}

impl Propagator {
    pub fn to_sparse(&self) -> SparseOperator {
        SparseOperator::from_dense(&self.unitary).expect("propagator is square")
    }
}

pub fn exact_propagator(hamiltonian: &SparseOperator, time: f64) -> Result<Propagator> {
    if hamiltonian.dimension() > 1 << MATRIX_QUBIT_CAP {
        return Err(Error::CapExceeded {
            what: "propagator dimension",
            limit: 1 << MATRIX_QUBIT_CAP,
            got: hamiltonian.dimension(),
        });
    }
    let herm_err = hamiltonian.hermitian_error();
    if herm_err > crate::sparse::HERMITIAN_TOLERANCE * hamiltonian.max_abs().max(1.0) {
        return Err(Error::NotHermitian(herm_err));
    }
    let dense = hamiltonian.to_dense();
    let eig = SymmetricEigen::new(dense);
    let phases = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|e| Complex64::from_polar(1.0, -e * time)),
    );
    let v = &eig.eigenvectors;
    let unitary = v * phases * v.adjoint();
    Ok(Propagator {
        hamiltonian: hamiltonian.clone(),
        time,
        unitary,
    })
}

/// Coordinate-basis Hamiltonian `V(grid) + F† diag(Σ_a p_a²/2) F`, assembled from
/// direct grid evaluation and the entrywise Fourier kernel.
pub fn assembled_hamiltonian(spec: &HamiltonianSpec) -> Result<SparseOperator> {
    require_qft_pathway(spec)?;
    let config = &spec.config;
    check_matrix_cap(config.total_qubits())?;
    let v = potential_on_grid(config, &spec.potential)?;
    v.add(&fourier_kinetic(config)?)?.certify_hermitian()
}

/// `F† diag(Σ_a p_a²/2) F` on the coordinate register.
pub fn fourier_kinetic(config: &TruncationConfig) -> Result<SparseOperator> {
    let p: Vec<f64> = momentum_grid(config).iter().map(|g| g.value).collect();
    let diag = (0..config.dimension()).map(|i| {
        let e: f64 = (0..config.bosons())
            .map(|a| p[config.level_of(a, i)].powi(2) / 2.0)
            .sum();
        Complex64::new(e, 0.0)
    });
    let k = SparseOperator::diagonal(diag);
    let f = register_fourier(config);
    f.adjoint().matmul(&k)?.matmul(&f)
}

/// Max entrywise `|U_trotter - exp(-iHT)|` for `steps` first-order steps.
pub fn trotter_error(spec: &HamiltonianSpec, total_time: f64, steps: usize) -> Result<f64> {
    require_qft_pathway(spec)?;
    check_matrix_cap(spec.config.total_qubits())?;
    let problem = TrotterProblem::from_spec(spec)?;
    let h = assembled_hamiltonian(spec)?;
    trotter_error_against(&problem, &h, total_time, steps)
}

/// Trotter circuit of `problem` against the exact propagator of `hamiltonian`.
pub fn trotter_error_against(
    problem: &TrotterProblem,
    hamiltonian: &SparseOperator,
    total_time: f64,
    steps: usize,
) -> Result<f64> {
    if steps == 0 {
        return Err(Error::InvalidConfig(
            "at least one Trotter step is required".into(),
        ));
    }
    check_matrix_cap(problem.config.total_qubits())?;
    let circuit = problem.evolution(total_time / steps as f64, steps)?.circuit;
    let u = circuit_matrix(&circuit)?;
    let exact = exact_propagator(hamiltonian, total_time)?.to_sparse();
    u.max_abs_diff(&exact)
}

fn require_qft_pathway(spec: &HamiltonianSpec) -> Result<()> {
    if spec.basis != Basis::CoordinateQft || spec.kinetic != KineticScheme::MomentumDiagonal {
        return Err(Error::IncompatibleSpec(
            "needs basis = coordinate-qft with the momentum-diagonal kinetic term".into(),
        ));
    }
    Ok(())
}
