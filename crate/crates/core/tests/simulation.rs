use num_complex::Complex64;
use qboson::circuit::{qft_circuit, zstring_rotation, TrotterProblem};
use qboson::hamiltonian::{
    expand_potential_zsum, kinetic_zsum, HamiltonianSpec, PolynomialPotential,
};
use qboson::operators::{centered_fourier, register_fourier};
use qboson::pauli::{reconstruct, PauliSum, PauliTerm};
use qboson::simulator::{
    apply_circuit, assembled_hamiltonian, circuit_matrix, exact_propagator, trotter_error,
    trotter_error_against, StateVector,
};
use qboson::{SparseOperator, TruncationConfig};

fn anharmonic(q: usize, radius: f64) -> HamiltonianSpec {
    let config = TruncationConfig::new(1, q, radius).unwrap();
    let v = PolynomialPotential::single_boson(&[(2, 1.0), (4, 1.0)]).unwrap();
    HamiltonianSpec::coordinate(config, v).unwrap()
}

#[test]
fn centered_qft_matches_kernel() {
    for q in 1..=5 {
        let config = TruncationConfig::new(1, q, 1.7).unwrap();
        let u = circuit_matrix(&qft_circuit(q, true).unwrap()).unwrap();
        assert!(
            u.max_abs_diff(&centered_fourier(&config)).unwrap() <= 1e-10,
            "Q={q}"
        );
        let c = qft_circuit(q, true).unwrap();
        let id = u.matmul(&circuit_matrix(&c.inverse()).unwrap()).unwrap();
        assert!(id.max_abs_diff(&SparseOperator::identity(1 << q)).unwrap() <= 1e-10);
    }
}

#[test]
fn centered_qft_is_radius_independent() {
    let a = centered_fourier(&TruncationConfig::new(1, 3, 0.5).unwrap());
    let b = centered_fourier(&TruncationConfig::new(1, 3, 4.0).unwrap());
    assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
}

#[test]
fn textbook_qft_on_zero_state_is_uniform() {
    let out = apply_circuit(
        &qft_circuit(2, false).unwrap(),
        &StateVector::zero(2).unwrap(),
    )
    .unwrap();
    for a in out.amplitudes() {
        assert!((a - Complex64::new(0.5, 0.0)).norm() < 1e-14);
    }
}

#[test]
fn centered_qft_column_zero() {
    let config = TruncationConfig::new(1, 2, 1.0).unwrap();
    let f = centered_fourier(&config);
    let out = apply_circuit(
        &qft_circuit(2, true).unwrap(),
        &StateVector::zero(2).unwrap(),
    )
    .unwrap();
    for (k, a) in out.amplitudes().iter().enumerate() {
        assert!((a - f.get(k, 0)).norm() < 1e-12);
    }
}

#[test]
fn zstring_rotation_matches_exponential() {
    let t = PauliTerm::from_label("ZIZZ", Complex64::new(-0.8, 0.0)).unwrap();
    let theta = 0.31;
    let circ = circuit_matrix(&zstring_rotation(&t, theta).unwrap()).unwrap();
    let exact = exact_propagator(&t.to_sparse(), theta).unwrap().to_sparse();
    assert!(circ.max_abs_diff(&exact).unwrap() < 1e-12);

    let id = PauliTerm::identity(3, Complex64::new(1.3, 0.0));
    let circ = circuit_matrix(&zstring_rotation(&id, theta).unwrap()).unwrap();
    let exact = exact_propagator(&id.to_sparse(), theta)
        .unwrap()
        .to_sparse();
    assert!(circ.max_abs_diff(&exact).unwrap() < 1e-12);
}

#[test]
fn propagator_is_unitary() {
    let h = assembled_hamiltonian(&anharmonic(3, 2.0)).unwrap();
    let u = exact_propagator(&h, 1.0).unwrap().to_sparse();
    assert!(u.unitarity_error() <= 1e-12);
}

#[test]
fn assembled_hamiltonian_matches_string_sums() {
    for (bosons, q) in [(1, 3), (2, 2), (1, 4)] {
        let config = TruncationConfig::new(bosons, q, 1.6).unwrap();
        let v = if bosons == 1 {
            PolynomialPotential::single_boson(&[(2, 0.5), (3, -0.2), (4, 0.1)]).unwrap()
        } else {
            PolynomialPotential::new(
                2,
                vec![
                    qboson::hamiltonian::Monomial::new(0.5, &[2, 0]).unwrap(),
                    qboson::hamiltonian::Monomial::new(0.5, &[0, 2]).unwrap(),
                    qboson::hamiltonian::Monomial::new(0.3, &[1, 1]).unwrap(),
                    qboson::hamiltonian::Monomial::new(0.1, &[2, 2]).unwrap(),
                ],
            )
            .unwrap()
        };
        let spec = HamiltonianSpec::coordinate(config, v).unwrap();
        let grid = assembled_hamiltonian(&spec).unwrap();
        let f = register_fourier(&config);
        let pot = reconstruct(&expand_potential_zsum(&spec).unwrap().sum);
        let kin = reconstruct(&kinetic_zsum(&spec).unwrap());
        let strings = pot
            .add(&f.adjoint().matmul(&kin).unwrap().matmul(&f).unwrap())
            .unwrap();
        assert!(
            grid.max_abs_diff(&strings).unwrap() < 1e-10,
            "B={bosons} Q={q}"
        );
    }
}

#[test]
fn free_particle_evolution_is_exact() {
    let config = TruncationConfig::new(1, 3, 2.0).unwrap();
    let spec = HamiltonianSpec::coordinate(config, PolynomialPotential::zero(1)).unwrap();
    for n in [1, 3, 8] {
        assert!(trotter_error(&spec, 1.0, n).unwrap() <= 1e-10);
    }
}

#[test]
fn potential_only_evolution_is_exact() {
    let spec = anharmonic(3, 2.0);
    let pot = expand_potential_zsum(&spec).unwrap().sum;
    let problem = TrotterProblem::new(spec.config, pot.clone(), PauliSum::zero(3)).unwrap();
    let h = reconstruct(&pot);
    for n in [1, 4] {
        assert!(trotter_error_against(&problem, &h, 1.0, n).unwrap() <= 1e-10);
    }
}

#[test]
fn trotter_error_halves() {
    let spec = anharmonic(3, 2.0);
    let errs: Vec<f64> = [4, 8, 16, 32, 64]
        .iter()
        .map(|&n| trotter_error(&spec, 1.0, n).unwrap())
        .collect();
    for w in errs.windows(2) {
        assert!(w[1] < w[0], "{errs:?}");
    }
    for w in errs[1..].windows(2) {
        let r = w[1] / w[0];
        assert!((0.4..=0.6).contains(&r), "ratio {r} in {errs:?}");
    }
}

#[test]
fn trotter_error_rejects_large_registers() {
    let config = TruncationConfig::new(2, 7, 2.0).unwrap();
    let v = PolynomialPotential::zero(2);
    let spec = HamiltonianSpec::coordinate(config, v).unwrap();
    assert!(trotter_error(&spec, 1.0, 1).is_err());
}
