//! LCU block encodings: `H/λ = (⟨G|⊗I) U (|G⟩⊗I)`.
//!
//! The ancilla register sits on the high bits. Potential strings take the
//! first ancilla indices and kinetic strings the following ones; unused
//! ancilla states select the identity.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::{expand_potential_zsum, kinetic_zsum, HamiltonianSpec};
use crate::operators::{register_fourier, TruncationConfig};
use crate::pauli::{PauliSum, PauliTerm};
use crate::sparse::SparseOperator;

/// Largest ancilla + system register the verifier accepts.
pub const VERIFY_QUBIT_CAP: usize = 14;

const NORMALIZATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Subspace {
    /// Applied directly in the coordinate basis.
    Potential,
    /// Applied between the Fourier transform and its inverse.
    Kinetic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanTerm {
    /// String with its original real coefficient.
    pub term: PauliTerm,
    pub subspace: Subspace,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcuPlan {
    pub terms: Vec<PlanTerm>,
    /// `Σ |α_i|`.
    pub lambda: f64,
    pub ancilla_count: usize,
    /// `g_i = √(|α_i|/λ)`.
    pub amplitudes: Vec<f64>,
    /// `±1`, folded into the selected string.
    pub signs: Vec<f64>,
    pub system_qubits: usize,
}

impl LcuPlan {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn count(&self, subspace: Subspace) -> usize {
        self.terms.iter().filter(|t| t.subspace == subspace).count()
    }

    /// `g` padded with zeros to `2^ancilla_count`.
    pub fn padded_amplitudes(&self) -> Vec<f64> {
        let mut g = self.amplitudes.clone();
        g.resize(1 << self.ancilla_count, 0.0);
        g
    }
}

pub fn build_plan(potential: &PauliSum, kinetic: &PauliSum) -> Result<LcuPlan> {
    if potential.n_qubits() != kinetic.n_qubits() {
        return Err(Error::DimensionMismatch {
            expected: potential.n_qubits(),
            got: kinetic.n_qubits(),
        });
    }
    let tagged = potential
        .terms()
        .iter()
        .map(|t| (t, Subspace::Potential))
        .chain(kinetic.terms().iter().map(|t| (t, Subspace::Kinetic)));

    let scale = potential.max_coefficient().max(kinetic.max_coefficient());
    let mut terms = Vec::new();
    let mut weights = Vec::new();
    let mut signs = Vec::new();
    for (term, subspace) in tagged {
        let c = term.coefficient();
        if c.im.abs() > NORMALIZATION_TOLERANCE * scale.max(1.0) {
            return Err(Error::ComplexCoefficient {
                label: term.label(),
                imag: c.im,
            });
        }
        if c.re == 0.0 {
            continue;
        }
        weights.push(c.re.abs());
        signs.push(c.re.signum());
        terms.push(PlanTerm {
            term: *term,
            subspace,
        });
    }
    if terms.is_empty() {
        return Err(Error::EmptyHamiltonian);
    }
    let lambda: f64 = weights.iter().sum();
    let amplitudes = weights.iter().map(|w| (w / lambda).sqrt()).collect();
    let ancilla_count = terms.len().next_power_of_two().trailing_zeros() as usize;
    Ok(LcuPlan {
        terms,
        lambda,
        ancilla_count,
        amplitudes,
        signs,
        system_qubits: potential.n_qubits(),
    })
}

/// Real orthogonal matrix whose first column is the padded `g`, completed by a
/// Householder reflection.
pub fn prepare_g(plan: &LcuPlan) -> Result<SparseOperator> {
    let g = DVector::from_vec(plan.padded_amplitudes());
    let norm_sq = g.norm_squared();
    if (norm_sq - 1.0).abs() > 1e-10 {
        return Err(Error::NotNormalized(norm_sq));
    }
    let dim = g.len();
    let mut v = -g;
    v[0] += 1.0;
    let vv = v.norm_squared();
    let u = if vv < 1e-30 {
        DMatrix::identity(dim, dim)
    } else {
        DMatrix::identity(dim, dim) - (&v * v.transpose()) * (2.0 / vv)
    };
    SparseOperator::from_dense(&u.map(|x| Complex64::new(x, 0.0)))
}

/// Select operator `(I⊗F†) U_kin (I⊗F) U_pot` on ancilla ⊗ system.
///
/// `config` supplies the centred Fourier transform and is required whenever the
/// plan has kinetic terms.
pub fn build_select(plan: &LcuPlan, config: Option<&TruncationConfig>) -> Result<SparseOperator> {
    let n = plan.system_qubits;
    let total = plan.ancilla_count + n;
    if total > VERIFY_QUBIT_CAP {
        return Err(Error::CapExceeded {
            what: "block-encoding qubits",
            limit: VERIFY_QUBIT_CAP,
            got: total,
        });
    }
    let fourier = if plan.count(Subspace::Kinetic) > 0 {
        let config = config.ok_or_else(|| {
            Error::IncompatibleSpec(
                "kinetic terms need a truncation config for the Fourier transform".into(),
            )
        })?;
        if config.total_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: config.total_qubits(),
            });
        }
        Some(register_fourier(config))
    } else {
        None
    };

    let sys_dim = 1usize << n;
    let identity = SparseOperator::identity(sys_dim);
    let branch = |selected: Option<&SparseOperator>| selected.unwrap_or(&identity).clone();

    let mut pot_blocks = Vec::with_capacity(1 << plan.ancilla_count);
    let mut kin_blocks = Vec::with_capacity(1 << plan.ancilla_count);
    for i in 0..1usize << plan.ancilla_count {
        let (mut pot, mut kin) = (None, None);
        if let Some(t) = plan.terms.get(i) {
            let op = t
                .term
                .with_coefficient(Complex64::new(plan.signs[i], 0.0))
                .to_sparse();
            match t.subspace {
                Subspace::Potential => pot = Some(op),
                Subspace::Kinetic => kin = Some(op),
            }
        }
        pot_blocks.push(branch(pot.as_ref()));
        kin_blocks.push(branch(kin.as_ref()));
    }
    let u_pot = block_diagonal(&pot_blocks, sys_dim)?;
    let u_kin = block_diagonal(&kin_blocks, sys_dim)?;
    match fourier {
        None => u_kin.matmul(&u_pot),
        Some(f) => {
            let anc = SparseOperator::identity(1 << plan.ancilla_count);
            let f_full = anc.kron(&f);
            f_full
                .adjoint()
                .matmul(&u_kin)?
                .matmul(&f_full)?
                .matmul(&u_pot)
        }
    }
}

fn block_diagonal(blocks: &[SparseOperator], block_dim: usize) -> Result<SparseOperator> {
    let triplets = blocks.iter().enumerate().flat_map(|(i, b)| {
        let off = i * block_dim;
        b.entries()
            .iter()
            .map(move |&(r, c, v)| (off + r, off + c, v))
    });
    SparseOperator::from_triplets(blocks.len() * block_dim, triplets)
}

#[derive(Debug, Clone)]
pub struct BlockEncoding {
    pub plan: LcuPlan,
    /// Select operator on ancilla ⊗ system.
    pub unitary: SparseOperator,
    pub prepare: SparseOperator,
    pub system_qubits: usize,
}

impl BlockEncoding {
    pub fn new(plan: LcuPlan, config: Option<&TruncationConfig>) -> Result<Self> {
        let unitary = build_select(&plan, config)?;
        let prepare = prepare_g(&plan)?;
        Ok(Self {
            system_qubits: plan.system_qubits,
            plan,
            unitary,
            prepare,
        })
    }

    /// Potential and kinetic Z strings of a coordinate-basis spec.
    pub fn from_spec(spec: &HamiltonianSpec) -> Result<Self> {
        let potential = expand_potential_zsum(spec)?.sum;
        let kinetic = kinetic_zsum(spec)?;
        Self::new(build_plan(&potential, &kinetic)?, Some(&spec.config))
    }

    pub fn total_qubits(&self) -> usize {
        self.plan.ancilla_count + self.system_qubits
    }

    /// `(P†⊗I) U (P⊗I)`, whose top-left system block is `H/λ`.
    pub fn sandwiched(&self) -> Result<SparseOperator> {
        let p = self
            .prepare
            .kron(&SparseOperator::identity(1 << self.system_qubits));
        p.adjoint().matmul(&self.unitary)?.matmul(&p)
    }
}

/// Max entrywise `|(⟨G|⊗I) U (|G⟩⊗I) - H/λ|`.
pub fn verify_block_encoding(be: &BlockEncoding, hamiltonian: &SparseOperator) -> Result<f64> {
    let total = be.total_qubits();
    if total > VERIFY_QUBIT_CAP {
        return Err(Error::CapExceeded {
            what: "block-encoding qubits",
            limit: VERIFY_QUBIT_CAP,
            got: total,
        });
    }
    let sys_dim = 1usize << be.system_qubits;
    if hamiltonian.dimension() != sys_dim {
        return Err(Error::DimensionMismatch {
            expected: sys_dim,
            got: hamiltonian.dimension(),
        });
    }
    let g = be.plan.padded_amplitudes();
    let triplets = be.unitary.entries().iter().filter_map(|&(r, c, v)| {
        let w = g[r / sys_dim] * g[c / sys_dim];
        (w != 0.0).then(|| (r % sys_dim, c % sys_dim, v * w))
    });
    let block = SparseOperator::from_triplets(sys_dim, triplets)?;
    block.max_abs_diff(&hamiltonian.scale(Complex64::new(1.0 / be.plan.lambda, 0.0)))
}
