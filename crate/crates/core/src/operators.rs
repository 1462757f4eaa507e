//! Truncated single-boson operators in the coordinate, momentum and Fock bases.
//!
//! Each boson is encoded on `Q` qubits with `Λ = 2^Q` levels. Boson `a`
//! (zero-based) occupies qubits `a·Q .. a·Q + Q`, and within that block qubit 0
//! is the least-significant bit of the level index `n = b₀ + 2b₁ + … + 2^{Q-1}b_{Q-1}`.
//! Coordinate points sit at `x_n = (n - (Λ-1)/2)·δx` with `δx = 2R/Λ`, and
//! momentum points use the same layout with `δp = π/R`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::{PauliSum, PauliTerm};
use crate::sparse::SparseOperator;

/// Largest per-boson register we construct operators for.
pub const MAX_QUBITS_PER_BOSON: usize = 24;

/// Qubit encoding of `bosons` bosonic modes on `qubits_per_boson` qubits each.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationConfig {
    bosons: usize,
    qubits_per_boson: usize,
    radius: f64,
}

impl TruncationConfig {
    pub fn new(bosons: usize, qubits_per_boson: usize, radius: f64) -> Result<Self> {
        if bosons == 0 {
            return Err(Error::InvalidConfig(
                "at least one boson is required".into(),
            ));
        }
        if qubits_per_boson == 0 || qubits_per_boson > MAX_QUBITS_PER_BOSON {
            return Err(Error::InvalidConfig(format!(
                "qubits per boson must be in 1..={MAX_QUBITS_PER_BOSON}, got {qubits_per_boson}"
            )));
        }
        if bosons * qubits_per_boson > 64 {
            return Err(Error::InvalidConfig(format!(
                "{bosons} bosons x {qubits_per_boson} qubits exceeds a 64-qubit register"
            )));
        }
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self {
            bosons,
            qubits_per_boson,
            radius,
        })
    }

    /// Same encoding with a different number of qubits per boson.
    pub fn with_qubits(&self, qubits_per_boson: usize) -> Result<Self> {
        Self::new(self.bosons, qubits_per_boson, self.radius)
    }

    pub fn bosons(&self) -> usize {
        self.bosons
    }

    pub fn qubits_per_boson(&self) -> usize {
        self.qubits_per_boson
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Λ = 2^Q.
    pub fn cutoff(&self) -> usize {
        1 << self.qubits_per_boson
    }

    /// δx = 2R/Λ.
    pub fn dx(&self) -> f64 {
        2.0 * self.radius / self.cutoff() as f64
    }

    /// δp = π/R.
    pub fn dp(&self) -> f64 {
        PI / self.radius
    }

    pub fn total_qubits(&self) -> usize {
        self.bosons * self.qubits_per_boson
    }

    pub fn dimension(&self) -> usize {
        1 << self.total_qubits()
    }

    /// First qubit of boson `a`'s block.
    pub fn qubit_offset(&self, boson: usize) -> Result<usize> {
        self.check_boson(boson)?;
        Ok(boson * self.qubits_per_boson)
    }

    /// Level index of boson `a` inside a full-register basis index.
    pub fn level_of(&self, boson: usize, basis_index: usize) -> usize {
        (basis_index >> (boson * self.qubits_per_boson)) & (self.cutoff() - 1)
    }

    fn check_boson(&self, boson: usize) -> Result<()> {
        if boson >= self.bosons {
            return Err(Error::BosonOutOfRange {
                index: boson,
                bosons: self.bosons,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub index: usize,
    pub value: f64,
}

/// Centred value `(n - (Λ-1)/2)·spacing`.
pub fn centered_value(index: usize, cutoff: usize, spacing: f64) -> f64 {
    (index as f64 - (cutoff as f64 - 1.0) / 2.0) * spacing
}

pub fn coordinate_grid(config: &TruncationConfig) -> Vec<GridPoint> {
    grid(config.cutoff(), config.dx())
}

pub fn momentum_grid(config: &TruncationConfig) -> Vec<GridPoint> {
    grid(config.cutoff(), config.dp())
}

fn grid(cutoff: usize, spacing: f64) -> Vec<GridPoint> {
    (0..cutoff)
        .map(|index| GridPoint {
            index,
            value: centered_value(index, cutoff, spacing),
        })
        .collect()
}

/// `x̂_a = -δx · Σ_j 2^{j} σz_{a,j} / 2` on the full register.
pub fn position_zsum(config: &TruncationConfig, boson: usize) -> Result<PauliSum> {
    binary_zsum(config, boson, config.dx())
}

/// `p̂_a` in the momentum basis; same shape as [`position_zsum`] with `δp`.
pub fn momentum_zsum(config: &TruncationConfig, boson: usize) -> Result<PauliSum> {
    binary_zsum(config, boson, config.dp())
}

fn binary_zsum(config: &TruncationConfig, boson: usize, spacing: f64) -> Result<PauliSum> {
    let offset = config.qubit_offset(boson)?;
    let n = config.total_qubits();
    let terms = (0..config.qubits_per_boson())
        .map(|j| {
            let weight = -spacing * (1u64 << j) as f64 / 2.0;
            PauliTerm::new(n, 0, 1u64 << (offset + j), Complex64::new(weight, 0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    PauliSum::from_terms(n, terms)
}

/// Centred Fourier kernel `F[k, n] = e^{i p_k x_n}/√Λ` for one boson, built entrywise.
pub fn centered_fourier(config: &TruncationConfig) -> SparseOperator {
    let l = config.cutoff();
    let x: Vec<f64> = coordinate_grid(config).iter().map(|p| p.value).collect();
    let p: Vec<f64> = momentum_grid(config).iter().map(|p| p.value).collect();
    let norm = 1.0 / (l as f64).sqrt();
    let entries = (0..l)
        .flat_map(|k| {
            let (x, p) = (&x, &p);
            (0..l).map(move |n| (k, n, Complex64::from_polar(norm, p[k] * x[n])))
        })
        .collect();
    SparseOperator::from_sorted_unchecked(l, entries)
}

/// Centred Fourier kernel applied to every boson of the register.
pub fn register_fourier(config: &TruncationConfig) -> SparseOperator {
    let single = centered_fourier(config);
    (1..config.bosons()).fold(single.clone(), |acc, _| acc.kron(&single))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    #[default]
    Open,
    Periodic,
}

/// Nearest-neighbour shift `S_{ij} = δ_{i,j+1} + δ_{i,j-1}` on `2^Q` levels.
pub fn shift_matrix(qubits: usize, boundary: Boundary) -> Result<SparseOperator> {
    if qubits == 0 || qubits > MAX_QUBITS_PER_BOSON {
        return Err(Error::InvalidConfig(format!(
            "shift matrix needs 1..={MAX_QUBITS_PER_BOSON} qubits, got {qubits}"
        )));
    }
    let dim = 1usize << qubits;
    let one = Complex64::new(1.0, 0.0);
    let mut triplets = Vec::with_capacity(2 * dim);
    for i in 0..dim - 1 {
        triplets.push((i, i + 1, one));
        triplets.push((i + 1, i, one));
    }
    if boundary == Boundary::Periodic && dim > 2 {
        triplets.push((0, dim - 1, one));
        triplets.push((dim - 1, 0, one));
    }
    SparseOperator::from_triplets(dim, triplets)
}

/// Finite-difference `p̂² = (2I - S_Q)/δx²` for a single boson.
pub fn finite_difference_p2(qubits: usize, dx: f64, boundary: Boundary) -> Result<SparseOperator> {
    let s = shift_matrix(qubits, boundary)?;
    let two = SparseOperator::identity(s.dimension()).scale(Complex64::new(2.0, 0.0));
    Ok(two.sub(&s)?.scale(Complex64::new(1.0 / (dx * dx), 0.0)))
}

/// Basis parameters of the harmonic-oscillator Fock states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockParams {
    mass: f64,
    frequency: f64,
}

impl FockParams {
    pub fn new(mass: f64, frequency: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0 && frequency.is_finite() && frequency > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "Fock parameters must be positive, got m={mass}, omega={frequency}"
            )));
        }
        Ok(Self { mass, frequency })
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }
}

impl Default for FockParams {
    fn default() -> Self {
        Self {
            mass: 1.0,
            frequency: 1.0,
        }
    }
}

fn check_cutoff(cutoff: usize) -> Result<()> {
    if cutoff < 2 {
        return Err(Error::InvalidConfig(format!(
            "Fock cutoff must be >= 2, got {cutoff}"
        )));
    }
    Ok(())
}

/// Truncated creation operator `Σ_{j<Λ-1} √(j+1) |j+1⟩⟨j|`.
pub fn fock_creation(cutoff: usize) -> Result<SparseOperator> {
    check_cutoff(cutoff)?;
    let triplets =
        (0..cutoff - 1).map(|j| (j + 1, j, Complex64::new(((j + 1) as f64).sqrt(), 0.0)));
    SparseOperator::from_triplets(cutoff, triplets)
}

pub fn fock_annihilation(cutoff: usize) -> Result<SparseOperator> {
    Ok(fock_creation(cutoff)?.adjoint())
}

/// `x̂ = (Â† + Â)/√(2mω)`.
pub fn fock_x(cutoff: usize, params: FockParams) -> Result<SparseOperator> {
    let up = fock_creation(cutoff)?;
    let scale = 1.0 / (2.0 * params.mass * params.frequency).sqrt();
    up.add(&up.adjoint())?
        .scale(Complex64::new(scale, 0.0))
        .certify_hermitian()
}

/// `p̂ = i√(mω/2)(Â† - Â)`.
pub fn fock_p(cutoff: usize, params: FockParams) -> Result<SparseOperator> {
    let up = fock_creation(cutoff)?;
    let scale = (params.mass * params.frequency / 2.0).sqrt();
    up.sub(&up.adjoint())?
        .scale(Complex64::new(0.0, scale))
        .certify_hermitian()
}
