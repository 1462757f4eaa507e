//! Pipelines behind each subcommand, returning report tables.

use std::ops::RangeInclusive;

use qboson::block_encoding::{build_plan, verify_block_encoding, BlockEncoding, Subspace};
use qboson::circuit::{trotter_evolution, TrotterCircuit, TrotterProblem};
use qboson::hamiltonian::{
    expand_potential_zsum, fock_hamiltonian, fock_potential, kinetic_finite_difference,
    kinetic_zsum, Basis, HamiltonianInput, HamiltonianSpec, KineticScheme,
};
use qboson::operators::{fock_p, fock_x};
use qboson::pauli::{decompose_tensorized_with, reconstruct, PauliSum};
use qboson::simulator::{assembled_hamiltonian, trotter_error_against};
use qboson::FockParams;

use crate::error::{CliError, CliResult};
use crate::fit::FitResult;
use crate::table::{Cell, Table};

pub const DEFAULT_PRUNE_TOL: f64 = 1e-12;
pub const DEFAULT_BLOCK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Table1Row {
    pub q: usize,
    pub x_strings: usize,
    pub p_strings: usize,
    pub formula: usize,
}

impl Table1Row {
    pub fn matches(&self) -> bool {
        self.x_strings == self.formula && self.p_strings == self.formula
    }
}

/// Fock-basis `x̂` and `p̂` string counts next to `Q·2^{Q-1}`.
pub fn table1(q_max: usize, tol: f64) -> CliResult<Vec<Table1Row>> {
    let params = FockParams::default();
    (1..=q_max)
        .map(|q| {
            let cutoff = 1usize << q;
            let x = decompose_tensorized_with(&fock_x(cutoff, params)?, tol)?;
            let p = decompose_tensorized_with(&fock_p(cutoff, params)?, tol)?;
            Ok(Table1Row {
                q,
                x_strings: x.len(),
                p_strings: p.len(),
                formula: q << (q - 1),
            })
        })
        .collect()
}

pub fn table1_table(rows: &[Table1Row]) -> Table {
    let mut t = Table::new(vec!["q", "x_strings", "p_strings", "formula", "match"]);
    for r in rows {
        t.push(vec![
            r.q.into(),
            r.x_strings.into(),
            r.p_strings.into(),
            r.formula.into(),
            r.matches().into(),
        ]);
    }
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct CountRow {
    pub q: usize,
    pub n_qubits: usize,
    /// Potential strings before merging repeated `σz` factors.
    pub raw: Option<usize>,
    /// Potential strings after merging, identity included.
    pub n_pauli: usize,
    /// Nontrivial kinetic strings.
    pub kinetic_strings: Option<usize>,
    pub census: String,
}

impl CountRow {
    pub fn y(&self) -> Option<f64> {
        (self.n_pauli > 0).then(|| (self.n_pauli as f64).ln() / self.q as f64)
    }
}

/// Per-`Q` string counts; a Pauli document yields a single row.
pub fn count(
    input: &HamiltonianInput,
    qs: RangeInclusive<usize>,
    tol: f64,
) -> CliResult<Vec<CountRow>> {
    match input {
        HamiltonianInput::Pauli(sum) => {
            let sum = sum.clone().pruned(tol);
            Ok(vec![CountRow {
                q: sum.n_qubits(),
                n_qubits: sum.n_qubits(),
                raw: None,
                n_pauli: sum.len(),
                kinetic_strings: None,
                census: sum.census().compact(),
            }])
        }
        HamiltonianInput::Bosonic(spec) => {
            qs.map(|q| count_spec(&spec.with_qubits(q)?, tol)).collect()
        }
    }
}

fn count_spec(spec: &HamiltonianSpec, tol: f64) -> CliResult<CountRow> {
    let config = &spec.config;
    let (raw, potential, kinetic) = match spec.basis {
        Basis::CoordinateQft => {
            let expansion = expand_potential_zsum(spec)?;
            let kinetic = match spec.kinetic {
                KineticScheme::MomentumDiagonal => kinetic_zsum(spec)?.pruned(tol),
                _ => decompose_tensorized_with(&kinetic_finite_difference(spec)?, tol)?,
            };
            (
                Some(expansion.raw_terms),
                expansion.sum.pruned(tol),
                kinetic,
            )
        }
        Basis::Fock(_) => {
            let v = fock_potential(spec)?;
            let k = fock_hamiltonian(spec)?.sub(&v)?;
            (
                None,
                decompose_tensorized_with(&v, tol)?,
                decompose_tensorized_with(&k, tol)?,
            )
        }
    };
    Ok(CountRow {
        q: config.qubits_per_boson(),
        n_qubits: config.total_qubits(),
        raw,
        n_pauli: potential.len(),
        kinetic_strings: Some(kinetic.nontrivial_count()),
        census: potential.census().compact(),
    })
}

pub fn count_table(rows: &[CountRow]) -> Table {
    let mut t = Table::new(vec![
        "q",
        "n_qubits",
        "raw",
        "n_pauli",
        "kinetic_strings",
        "y",
        "census",
    ]);
    for r in rows {
        t.push(vec![
            r.q.into(),
            r.n_qubits.into(),
            r.raw.into(),
            r.n_pauli.into(),
            r.kinetic_strings.into(),
            r.y().into(),
            r.census.clone().into(),
        ]);
    }
    t
}

pub fn fit_table(fit: &FitResult, q_range: (usize, usize)) -> Table {
    let mut t = Table::new(vec![
        "a",
        "b",
        "c",
        "residual_rms",
        "stderr_a",
        "stderr_b",
        "stderr_c",
        "condition",
        "rows",
        "q_min",
        "q_max",
    ]);
    t.push(vec![
        fit.a.into(),
        fit.b.into(),
        fit.c.into(),
        fit.residual_rms.into(),
        fit.stderr[0].into(),
        fit.stderr[1].into(),
        fit.stderr[2].into(),
        fit.condition.into(),
        fit.rows.into(),
        q_range.0.into(),
        q_range.1.into(),
    ]);
    t
}

/// Errors at `n`, `2n` and `4n` steps and the two successive ratios.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrotterCheck {
    pub errors: [f64; 3],
    pub ratios: [f64; 2],
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrotterRun {
    pub time: f64,
    pub evolution: TrotterCircuit,
    pub check: Option<TrotterCheck>,
}

pub fn trotter(
    spec: &HamiltonianSpec,
    time: f64,
    steps: usize,
    verify: bool,
) -> CliResult<TrotterRun> {
    let evolution = trotter_evolution(spec, time, steps)?;
    let check = if verify {
        let problem = TrotterProblem::from_spec(spec)?;
        let h = assembled_hamiltonian(spec)?;
        let mut errors = [0.0; 3];
        for (i, e) in errors.iter_mut().enumerate() {
            *e = trotter_error_against(&problem, &h, time, steps << i)?;
        }
        Some(TrotterCheck {
            errors,
            ratios: [errors[1] / errors[0], errors[2] / errors[1]],
        })
    } else {
        None
    };
    Ok(TrotterRun {
        time,
        evolution,
        check,
    })
}

/// Fails when the verified error is not finite, grows with `n`, or exceeds `tol`.
pub fn check_trotter(run: &TrotterRun, tol: Option<f64>) -> CliResult<()> {
    let Some(check) = run.check else {
        return Ok(());
    };
    let [e1, e2, e4] = check.errors;
    if !check.errors.iter().all(|e| e.is_finite()) {
        return Err(CliError::Verification(format!(
            "non-finite Trotter error {:?}",
            check.errors
        )));
    }
    if e2 > e1 || e4 > e2 {
        return Err(CliError::Verification(format!(
            "Trotter error does not decrease with n: {e1:e}, {e2:e}, {e4:e}"
        )));
    }
    if let Some(tol) = tol {
        if e1 > tol {
            return Err(CliError::Verification(format!(
                "Trotter error {e1:e} exceeds tolerance {tol:e}"
            )));
        }
    }
    Ok(())
}

pub fn trotter_table(run: &TrotterRun) -> Table {
    let r = &run.evolution.report;
    let mut columns = vec![
        "steps",
        "time",
        "potential_strings_raw",
        "potential_strings_merged",
        "kinetic_strings",
    ];
    let layers = [
        ("potential", r.layers.potential),
        ("qft", r.layers.qft),
        ("kinetic", r.layers.kinetic),
        ("inverse_qft", r.layers.inverse_qft),
    ];
    const LAYER_COLUMNS: [[&str; 4]; 4] = [
        [
            "potential_rotations",
            "potential_entangling",
            "potential_hadamards",
            "potential_total",
        ],
        [
            "qft_rotations",
            "qft_entangling",
            "qft_hadamards",
            "qft_total",
        ],
        [
            "kinetic_rotations",
            "kinetic_entangling",
            "kinetic_hadamards",
            "kinetic_total",
        ],
        [
            "inverse_qft_rotations",
            "inverse_qft_entangling",
            "inverse_qft_hadamards",
            "inverse_qft_total",
        ],
    ];
    for names in LAYER_COLUMNS {
        columns.extend(names);
    }
    columns.extend([
        "rotations",
        "entangling",
        "hadamards",
        "total",
        "potential_share",
        "error_n",
        "error_2n",
        "error_4n",
        "ratio_2n",
        "ratio_4n",
    ]);
    let mut row: Vec<Cell> = vec![
        r.steps.into(),
        run.time.into(),
        r.potential_strings_raw.into(),
        r.potential_strings_merged.into(),
        r.kinetic_strings.into(),
    ];
    for (_, tally) in layers {
        row.extend([
            tally.rotations().into(),
            tally.entangling().into(),
            tally.hadamards().into(),
            tally.total().into(),
        ]);
    }
    row.extend([
        r.rotations.into(),
        r.entangling.into(),
        r.hadamards.into(),
        r.total.into(),
        r.potential_share().into(),
    ]);
    match run.check {
        Some(c) => row.extend(c.errors.iter().chain(&c.ratios).map(|&v| Cell::from(v))),
        None => row.extend((0..5).map(|_| Cell::Empty)),
    }
    let mut t = Table::new(columns);
    t.push(row);
    t
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockencReport {
    pub lambda: f64,
    pub terms: usize,
    pub potential_terms: usize,
    pub kinetic_terms: usize,
    pub ancillas: usize,
    pub system_qubits: usize,
    pub unitarity_error: Option<f64>,
    pub block_error: Option<f64>,
}

pub fn blockenc(input: &HamiltonianInput, verify: bool) -> CliResult<BlockencReport> {
    let (potential, kinetic, config) = match input {
        HamiltonianInput::Pauli(sum) => (sum.clone(), PauliSum::zero(sum.n_qubits()), None),
        HamiltonianInput::Bosonic(spec) => {
            if spec.basis != Basis::CoordinateQft || spec.kinetic != KineticScheme::MomentumDiagonal
            {
                return Err(CliError::Input(
                    "block encodings need basis = coordinate-qft with the momentum-diagonal kinetic term"
                        .into(),
                ));
            }
            (
                expand_potential_zsum(spec)?.sum,
                kinetic_zsum(spec)?,
                Some(spec),
            )
        }
    };
    let plan = build_plan(&potential, &kinetic)?;
    let mut report = BlockencReport {
        lambda: plan.lambda,
        terms: plan.len(),
        potential_terms: plan.count(Subspace::Potential),
        kinetic_terms: plan.count(Subspace::Kinetic),
        ancillas: plan.ancilla_count,
        system_qubits: plan.system_qubits,
        unitarity_error: None,
        block_error: None,
    };
    if verify {
        let be = BlockEncoding::new(plan, config.map(|s| &s.config))?;
        let h = match config {
            Some(spec) => assembled_hamiltonian(spec)?,
            None => reconstruct(&potential),
        };
        report.unitarity_error = Some(be.unitary.unitarity_error());
        report.block_error = Some(verify_block_encoding(&be, &h)?);
    }
    Ok(report)
}

pub fn check_blockenc(report: &BlockencReport, tol: f64) -> CliResult<()> {
    for (what, v) in [
        ("block-encoding error", report.block_error),
        ("unitarity error", report.unitarity_error),
    ] {
        if let Some(v) = v {
            if v.is_nan() || v > tol {
                return Err(CliError::Verification(format!(
                    "{what} {v:e} exceeds tolerance {tol:e}"
                )));
            }
        }
    }
    Ok(())
}

pub fn blockenc_table(r: &BlockencReport) -> Table {
    let mut t = Table::new(vec![
        "lambda",
        "terms",
        "potential_terms",
        "kinetic_terms",
        "potential_fraction",
        "ancillas",
        "system_qubits",
        "unitarity_error",
        "block_error",
    ]);
    t.push(vec![
        r.lambda.into(),
        r.terms.into(),
        r.potential_terms.into(),
        r.kinetic_terms.into(),
        (r.potential_terms as f64 / r.terms as f64).into(),
        r.ancillas.into(),
        r.system_qubits.into(),
        r.unitarity_error.into(),
        r.block_error.into(),
    ]);
    t
}
