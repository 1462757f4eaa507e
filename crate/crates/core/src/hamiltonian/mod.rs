//! Polynomial bosonic Hamiltonians `H = Σ_a p̂_a²/2 + V(x̂_1, …, x̂_B)` and their
//! basis-specific expansions.

mod file;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::operators::{
    self, coordinate_grid, finite_difference_p2, fock_p, fock_x, momentum_zsum, position_zsum,
    Boundary, FockParams, TruncationConfig,
};
use crate::pauli::{PauliSum, PauliTerm};
use crate::sparse::SparseOperator;

pub use file::{parse_document, HamiltonianInput};

/// Largest full-register dimension for Fock-basis matrix construction.
pub const FOCK_DIMENSION_CAP: usize = 1 << 14;

/// Largest register for explicit finite-difference or grid matrices.
pub const GRID_QUBIT_CAP: usize = 20;

/// `coefficient · Π_a x_a^{power_a}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Monomial {
    coefficient: f64,
    /// `(boson, power)` pairs sorted by boson, powers nonzero.
    powers: Vec<(usize, u32)>,
}

impl Monomial {
    /// Builds a monomial from one exponent per boson.
    pub fn new(coefficient: f64, exponents: &[u32]) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "monomial coefficient must be finite, got {coefficient}"
            )));
        }
        let powers = exponents
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0)
            .map(|(a, &p)| (a, p))
            .collect();
        Ok(Self {
            coefficient,
            powers,
        })
    }

    pub fn constant(coefficient: f64) -> Result<Self> {
        Self::new(coefficient, &[])
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn powers(&self) -> &[(usize, u32)] {
        &self.powers
    }

    pub fn degree(&self) -> u32 {
        self.powers.iter().map(|p| p.1).sum()
    }

    pub fn is_constant(&self) -> bool {
        self.powers.is_empty()
    }

    fn max_boson(&self) -> Option<usize> {
        self.powers.last().map(|p| p.0)
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.powers
            .iter()
            .fold(self.coefficient, |acc, &(a, p)| acc * x[a].powi(p as i32))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPotential {
    bosons: usize,
    terms: Vec<Monomial>,
}

impl PolynomialPotential {
    pub fn new(bosons: usize, terms: Vec<Monomial>) -> Result<Self> {
        for t in &terms {
            if let Some(a) = t.max_boson() {
                if a >= bosons {
                    return Err(Error::BosonOutOfRange { index: a, bosons });
                }
            }
        }
        Ok(Self { bosons, terms })
    }

    pub fn zero(bosons: usize) -> Self {
        Self {
            bosons,
            terms: Vec::new(),
        }
    }

    /// Single-boson polynomial `Σ_k c_k x^k` from `(power, coefficient)` pairs.
    pub fn single_boson(terms: &[(u32, f64)]) -> Result<Self> {
        let monomials = terms
            .iter()
            .map(|&(p, c)| Monomial::new(c, &[p]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(1, monomials)
    }

    /// `(m x + g x² + g μ²)²` expanded in powers of `x`.
    pub fn double_well(m: f64, g: f64, mu: f64) -> Result<Self> {
        let mu2 = mu * mu;
        Self::single_boson(&[
            (0, g * g * mu2 * mu2),
            (1, 2.0 * m * g * mu2),
            (2, m * m + 2.0 * g * g * mu2),
            (3, 2.0 * m * g),
            (4, g * g),
        ])
    }

    /// `(m x + g x³)²` expanded in powers of `x`.
    pub fn anharmonic(m: f64, g: f64) -> Result<Self> {
        Self::single_boson(&[(2, m * m), (4, 2.0 * m * g), (6, g * g)])
    }

    pub fn bosons(&self) -> usize {
        self.bosons
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    /// Number of monomials `C`.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    /// True when every monomial is a constant (including the empty potential).
    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(Monomial::is_constant)
    }

    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.terms.iter().map(|t| t.evaluate(x)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KineticScheme {
    /// `p̂²` diagonal in the momentum basis, reached through the centred QFT.
    MomentumDiagonal,
    FiniteDifferenceOpen,
    FiniteDifferencePeriodic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Basis {
    CoordinateQft,
    Fock(FockParams),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    pub config: TruncationConfig,
    pub potential: PolynomialPotential,
    pub kinetic: KineticScheme,
    pub basis: Basis,
}

impl HamiltonianSpec {
    pub fn new(
        config: TruncationConfig,
        potential: PolynomialPotential,
        kinetic: KineticScheme,
        basis: Basis,
    ) -> Result<Self> {
        if potential.bosons() != config.bosons() {
            return Err(Error::IncompatibleSpec(format!(
                "potential is defined on {} bosons but the register holds {}",
                potential.bosons(),
                config.bosons()
            )));
        }
        Ok(Self {
            config,
            potential,
            kinetic,
            basis,
        })
    }

    /// Coordinate grid, momentum-diagonal kinetic term.
    pub fn coordinate(config: TruncationConfig, potential: PolynomialPotential) -> Result<Self> {
        Self::new(
            config,
            potential,
            KineticScheme::MomentumDiagonal,
            Basis::CoordinateQft,
        )
    }

    /// Same Hamiltonian with a different number of qubits per boson.
    pub fn with_qubits(&self, qubits_per_boson: usize) -> Result<Self> {
        Ok(Self {
            config: self.config.with_qubits(qubits_per_boson)?,
            ..self.clone()
        })
    }

    fn require_coordinate(&self, what: &str) -> Result<()> {
        match self.basis {
            Basis::CoordinateQft => Ok(()),
            Basis::Fock(_) => Err(Error::IncompatibleSpec(format!(
                "{what} requires the coordinate basis"
            ))),
        }
    }
}

/// Z-string form of the potential together with the unmerged string count.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialExpansion {
    pub sum: PauliSum,
    /// `Σ_monomials Q^degree`: every factor choice counted before `σz² = I` merging.
    pub raw_terms: usize,
}

impl PotentialExpansion {
    pub fn merged_terms(&self) -> usize {
        self.sum.len()
    }
}

/// Substitutes each `x̂_a` by its Z sum and distributes the products.
pub fn expand_potential_zsum(spec: &HamiltonianSpec) -> Result<PotentialExpansion> {
    spec.require_coordinate("potential Z-string expansion")?;
    let config = &spec.config;
    let n = config.total_qubits();
    let q = config.qubits_per_boson();
    let positions = (0..config.bosons())
        .map(|a| position_zsum(config, a))
        .collect::<Result<Vec<_>>>()?;

    let mut total = PauliSum::zero(n);
    let mut raw_terms = 0usize;
    for monomial in spec.potential.terms() {
        let mut product = PauliSum::single(PauliTerm::identity(
            n,
            Complex64::new(monomial.coefficient(), 0.0),
        ));
        for &(a, power) in monomial.powers() {
            for _ in 0..power {
                product = product.mul(&positions[a])?;
            }
        }
        raw_terms += q.pow(monomial.degree());
        total = total.add(&product)?;
    }
    Ok(PotentialExpansion {
        sum: total,
        raw_terms,
    })
}

/// `Σ_a p̂_a²/2` as Z strings in the momentum basis.
pub fn kinetic_zsum(spec: &HamiltonianSpec) -> Result<PauliSum> {
    spec.require_coordinate("momentum-diagonal kinetic term")?;
    if spec.kinetic != KineticScheme::MomentumDiagonal {
        return Err(Error::IncompatibleSpec(
            "kinetic Z-string expansion needs the momentum-diagonal scheme".into(),
        ));
    }
    let config = &spec.config;
    let mut total = PauliSum::zero(config.total_qubits());
    for a in 0..config.bosons() {
        let p = momentum_zsum(config, a)?;
        total = total.add(&p.mul(&p)?.scale(Complex64::new(0.5, 0.0)))?;
    }
    Ok(total)
}

/// `Σ_a (2I - S_Q)/δx²` on the full register (the regularized `p̂_a²`, no factor 1/2).
pub fn kinetic_finite_difference(spec: &HamiltonianSpec) -> Result<SparseOperator> {
    let boundary = match spec.kinetic {
        KineticScheme::FiniteDifferenceOpen => Boundary::Open,
        KineticScheme::FiniteDifferencePeriodic => Boundary::Periodic,
        KineticScheme::MomentumDiagonal => {
            return Err(Error::IncompatibleSpec(
                "finite-difference kinetic term needs a finite-difference scheme".into(),
            ))
        }
    };
    let config = &spec.config;
    check_grid_cap(config)?;
    let single = finite_difference_p2(config.qubits_per_boson(), config.dx(), boundary)?;
    sum_over_bosons(config.bosons(), config.cutoff(), |_| Ok(single.clone()))
}

/// Diagonal matrix `V(x_{n_1}, …, x_{n_B})` evaluated directly on the coordinate grid.
pub fn potential_on_grid(
    config: &TruncationConfig,
    potential: &PolynomialPotential,
) -> Result<SparseOperator> {
    check_grid_cap(config)?;
    let grid: Vec<f64> = coordinate_grid(config).iter().map(|p| p.value).collect();
    let mut point = vec![0.0; config.bosons()];
    let diag = (0..config.dimension()).map(|i| {
        for (a, x) in point.iter_mut().enumerate() {
            *x = grid[config.level_of(a, i)];
        }
        Complex64::new(potential.evaluate(&point), 0.0)
    });
    Ok(SparseOperator::diagonal(diag))
}

/// Potential evaluated on truncated Fock-basis position matrices.
///
/// Powers are formed by multiplying the already truncated `x̂`, so the result
/// differs from truncating the exact `x̂^k` near the cutoff.
pub fn fock_potential(spec: &HamiltonianSpec) -> Result<SparseOperator> {
    let params = fock_params(spec)?;
    let config = &spec.config;
    check_fock_cap(config)?;
    let cutoff = config.cutoff();
    let x_local = fock_x(cutoff, params)?;
    let xs = (0..config.bosons())
        .map(|a| embed_single(&x_local, a, config.bosons(), cutoff))
        .collect::<Vec<_>>();
    let dim = config.dimension();
    let mut total = SparseOperator::zeros(dim);
    for monomial in spec.potential.terms() {
        let mut term =
            SparseOperator::identity(dim).scale(Complex64::new(monomial.coefficient(), 0.0));
        for &(a, power) in monomial.powers() {
            for _ in 0..power {
                term = term.matmul(&xs[a])?;
            }
        }
        total = total.add(&term)?;
    }
    total.certify_hermitian()
}

/// Full Fock-basis Hamiltonian `Σ_a p̂_a²/2 + V`, with `p̂²` formed after truncation.
pub fn fock_hamiltonian(spec: &HamiltonianSpec) -> Result<SparseOperator> {
    let params = fock_params(spec)?;
    let config = &spec.config;
    let potential = fock_potential(spec)?;
    let p = fock_p(config.cutoff(), params)?;
    let half_p2 = p.matmul(&p)?.scale(Complex64::new(0.5, 0.0));
    let kinetic = sum_over_bosons(config.bosons(), config.cutoff(), |_| Ok(half_p2.clone()))?;
    potential.add(&kinetic)?.certify_hermitian()
}

fn fock_params(spec: &HamiltonianSpec) -> Result<FockParams> {
    match spec.basis {
        Basis::Fock(p) => Ok(p),
        Basis::CoordinateQft => Err(Error::IncompatibleSpec(
            "Fock-basis construction requires basis = fock".into(),
        )),
    }
}

fn check_fock_cap(config: &TruncationConfig) -> Result<()> {
    if config.total_qubits() > 14 {
        return Err(Error::CapExceeded {
            what: "Fock-basis dimension",
            limit: FOCK_DIMENSION_CAP,
            got: 1usize
                .checked_shl(config.total_qubits() as u32)
                .unwrap_or(usize::MAX),
        });
    }
    Ok(())
}

fn check_grid_cap(config: &TruncationConfig) -> Result<()> {
    if config.total_qubits() > GRID_QUBIT_CAP {
        return Err(Error::CapExceeded {
            what: "register qubits for explicit matrices",
            limit: GRID_QUBIT_CAP,
            got: config.total_qubits(),
        });
    }
    Ok(())
}

/// `I_{Λ^{B-1-a}} ⊗ op ⊗ I_{Λ^a}`: boson 0 sits on the lowest index bits.
pub fn embed_single(
    op: &SparseOperator,
    boson: usize,
    bosons: usize,
    cutoff: usize,
) -> SparseOperator {
    let high = SparseOperator::identity(cutoff.pow((bosons - 1 - boson) as u32));
    let low = SparseOperator::identity(cutoff.pow(boson as u32));
    high.kron(op).kron(&low)
}

fn sum_over_bosons<F>(bosons: usize, cutoff: usize, local: F) -> Result<SparseOperator>
where
    F: Fn(usize) -> Result<SparseOperator>,
{
    let dim = cutoff.pow(bosons as u32);
    let mut total = SparseOperator::zeros(dim);
    for a in 0..bosons {
        total = total.add(&embed_single(&local(a)?, a, bosons, cutoff))?;
    }
    Ok(total)
}

/// Momentum eigenvalues `p_ñ` on boson `a`'s levels; re-exported for oracles.
pub fn momentum_values(config: &TruncationConfig) -> Vec<f64> {
    operators::momentum_grid(config)
        .iter()
        .map(|p| p.value)
        .collect()
}
