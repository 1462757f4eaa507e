use std::f64::consts::PI;

use super::{Circuit, Gate};
use crate::error::{Error, Result};

/// Stand-alone QFT on `qubits` qubits.
///
/// With `centered = false` the matrix is `F[k, n] = e^{2πi kn/Λ}/√Λ`. With
/// `centered = true` it is `e^{i p_k x_n}/√Λ` for the centred grids, that is
/// `e^{2πi (k-c)(n-c)/Λ}/√Λ` with `c = (Λ-1)/2`.
pub fn qft_circuit(qubits: usize, centered: bool) -> Result<Circuit> {
    if qubits == 0 {
        return Err(Error::InvalidConfig("QFT needs at least one qubit".into()));
    }
    let mut c = Circuit::new(qubits);
    let register: Vec<usize> = (0..qubits).collect();
    if centered {
        centered_qft_on(&mut c, &register)?;
    } else {
        qft_on(&mut c, &register)?;
    }
    Ok(c)
}

/// Appends the textbook QFT on `register` (least-significant qubit first):
/// Hadamards, a controlled-phase ladder and the closing bit-reversal swaps.
pub fn qft_on(circuit: &mut Circuit, register: &[usize]) -> Result<()> {
    let q = register.len();
    for t in (0..q).rev() {
        circuit.push(Gate::H(register[t]))?;
        for j in (0..t).rev() {
            circuit.push(Gate::CPhase {
                control: register[j],
                target: register[t],
                angle: PI / (1u64 << (t - j)) as f64,
            })?;
        }
    }
    for i in 0..q / 2 {
        circuit.push(Gate::Swap(register[i], register[q - 1 - i]))?;
    }
    Ok(())
}

/// Appends the centred QFT: `e^{iφ} · D · QFT · D` with the index-linear phase
/// `D|n⟩ = e^{-2πi c n/Λ}|n⟩` split into one DIAGPHASE per qubit.
pub fn centered_qft_on(circuit: &mut Circuit, register: &[usize]) -> Result<()> {
    let q = register.len();
    let cutoff = (1u64 << q) as f64;
    let c = (cutoff - 1.0) / 2.0;
    let slope = 2.0 * PI * c / cutoff;
    let linear_layer = |circuit: &mut Circuit| -> Result<()> {
        for (j, &qubit) in register.iter().enumerate() {
            circuit.push(Gate::DiagPhase {
                qubit,
                angle: wrap(-slope * (1u64 << j) as f64),
            })?;
        }
        Ok(())
    };
    linear_layer(circuit)?;
    qft_on(circuit, register)?;
    linear_layer(circuit)?;
    circuit.push(Gate::Phase(wrap(2.0 * PI * c * c / cutoff)))?;
    Ok(())
}

/// Maps an angle into `(-π, π]`.
fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a - 2.0 * PI
    } else {
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gate_counts_are_quadratic() {
        let c = qft_circuit(3, false).unwrap();
        let t = c.counts();
        assert_eq!(t.h, 3);
        assert_eq!(t.cphase, 3);
        assert_eq!(t.swap, 1);
        for q in 1..=8 {
            let t = qft_circuit(q, true).unwrap().counts();
            assert_eq!(t.h, q);
            assert_eq!(t.cphase, q * (q - 1) / 2);
            assert_eq!(t.swap, q / 2);
            assert_eq!(t.diag_phase, 2 * q);
            assert_eq!(t.phase, 1);
        }
    }

    #[test]
    fn single_qubit_is_hadamard() {
        let c = qft_circuit(1, false).unwrap();
        assert_eq!(c.gates(), &[Gate::H(0)]);
    }

    #[test]
    fn zero_qubits_rejected() {
        assert!(qft_circuit(0, true).is_err());
    }

    #[test]
    fn wrap_range() {
        for a in [-10.0, -PI, 0.0, PI, 3.5 * PI, 100.0] {
            let w = wrap(a);
            assert!(w > -PI - 1e-12 && w <= PI + 1e-12);
            assert!(
                ((a - w) / (2.0 * PI)).fract().abs() < 1e-9
                    || ((a - w) / (2.0 * PI)).fract().abs() > 1.0 - 1e-9
            );
        }
    }
}
