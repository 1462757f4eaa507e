//! TOML Hamiltonian documents.
//!
//! A bosonic document:
//!
//! ```toml
//! bosons = 1
//! qubits_per_boson = 3
//! radius = 2.0
//! kinetic_scheme = "momentum-diagonal"   # or finite-difference-open / -periodic
//! basis = "coordinate-qft"               # or "fock"
//!
//! [fock]                                 # required when basis = "fock"
//! mass = 1.0
//! frequency = 1.0
//!
//! [[potential]]
//! coeff = 1.0
//! exponents = [2]                        # one power per boson
//! ```
//!
//! A raw Pauli document instead carries a `[pauli]` table with `n_qubits` and
//! `terms = [{ label = "X", coeff = 1.0 }, …]`, labels most-significant qubit first.

use num_complex::Complex64;
use serde::Deserialize;
use toml::Spanned;

use super::{Basis, HamiltonianSpec, KineticScheme, Monomial, PolynomialPotential};
use crate::error::{Error, Result};
use crate::operators::{FockParams, TruncationConfig};
use crate::pauli::{PauliSum, PauliTerm};

#[derive(Debug, Clone, PartialEq)]
pub enum HamiltonianInput {
    Bosonic(HamiltonianSpec),
    Pauli(PauliSum),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    bosons: Option<Spanned<usize>>,
    qubits_per_boson: Option<Spanned<usize>>,
    radius: Option<Spanned<f64>>,
    kinetic_scheme: Option<Spanned<SchemeDoc>>,
    basis: Option<Spanned<BasisDoc>>,
    fock: Option<Spanned<FockDoc>>,
    #[serde(default)]
    potential: Vec<Spanned<TermDoc>>,
    pauli: Option<Spanned<PauliDoc>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum SchemeDoc {
    MomentumDiagonal,
    FiniteDifferenceOpen,
    FiniteDifferencePeriodic,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum BasisDoc {
    CoordinateQft,
    Fock,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FockDoc {
    mass: f64,
    frequency: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermDoc {
    coeff: f64,
    exponents: Vec<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PauliDoc {
    n_qubits: usize,
    terms: Vec<Spanned<PauliTermDoc>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PauliTermDoc {
    label: String,
    coeff: f64,
    #[serde(default)]
    coeff_im: f64,
}

/// Parses a Hamiltonian document; errors carry 1-based line numbers.
pub fn parse_document(text: &str) -> Result<HamiltonianInput> {
    let doc: Document = toml::from_str(text).map_err(|e| Error::Parse {
        line: e.span().map_or(0, |s| line_of(text, s.start)),
        message: e.message().to_string(),
    })?;
    let at = |offset: usize, message: String| Error::Parse {
        line: line_of(text, offset),
        message,
    };

    if let Some(pauli) = doc.pauli {
        if doc.bosons.is_some() || !doc.potential.is_empty() {
            return Err(at(
                pauli.span().start,
                "a document holds either a [pauli] table or a bosonic Hamiltonian, not both".into(),
            ));
        }
        return parse_pauli(pauli, &at).map(HamiltonianInput::Pauli);
    }

    let bosons = doc
        .bosons
        .ok_or_else(|| at(0, "missing key `bosons`".into()))?;
    let qubits = doc
        .qubits_per_boson
        .ok_or_else(|| at(0, "missing key `qubits_per_boson`".into()))?;
    let radius = doc
        .radius
        .ok_or_else(|| at(0, "missing key `radius`".into()))?;
    let scheme = doc
        .kinetic_scheme
        .ok_or_else(|| at(0, "missing key `kinetic_scheme`".into()))?;
    let basis_doc = doc
        .basis
        .ok_or_else(|| at(0, "missing key `basis`".into()))?;

    let config = TruncationConfig::new(*bosons.get_ref(), *qubits.get_ref(), *radius.get_ref())
        .map_err(|e| at(bosons.span().start, e.to_string()))?;

    let basis = match basis_doc.get_ref() {
        BasisDoc::CoordinateQft => Basis::CoordinateQft,
        BasisDoc::Fock => {
            let fock = doc.fock.ok_or_else(|| {
                at(
                    basis_doc.span().start,
                    "basis = \"fock\" requires a [fock] table with mass and frequency".into(),
                )
            })?;
            let span = fock.span();
            let f = fock.into_inner();
            Basis::Fock(
                FockParams::new(f.mass, f.frequency).map_err(|e| at(span.start, e.to_string()))?,
            )
        }
    };
    let kinetic = match scheme.get_ref() {
        SchemeDoc::MomentumDiagonal => KineticScheme::MomentumDiagonal,
        SchemeDoc::FiniteDifferenceOpen => KineticScheme::FiniteDifferenceOpen,
        SchemeDoc::FiniteDifferencePeriodic => KineticScheme::FiniteDifferencePeriodic,
    };

    let mut monomials = Vec::with_capacity(doc.potential.len());
    for term in doc.potential {
        let span = term.span();
        let t = term.into_inner();
        if t.exponents.len() != config.bosons() {
            return Err(at(
                span.start,
                format!(
                    "potential term has {} exponents, expected one per boson ({})",
                    t.exponents.len(),
                    config.bosons()
                ),
            ));
        }
        monomials
            .push(Monomial::new(t.coeff, &t.exponents).map_err(|e| at(span.start, e.to_string()))?);
    }
    let potential =
        PolynomialPotential::new(config.bosons(), monomials).map_err(|e| at(0, e.to_string()))?;
    HamiltonianSpec::new(config, potential, kinetic, basis)
        .map(HamiltonianInput::Bosonic)
        .map_err(|e| at(0, e.to_string()))
}

fn parse_pauli<F>(pauli: Spanned<PauliDoc>, at: &F) -> Result<PauliSum>
where
    F: Fn(usize, String) -> Error,
{
    let start = pauli.span().start;
    let p = pauli.into_inner();
    let mut terms = Vec::with_capacity(p.terms.len());
    for term in p.terms {
        let span = term.span();
        let t = term.into_inner();
        if t.label.chars().count() != p.n_qubits {
            return Err(at(
                span.start,
                format!("label {:?} does not have {} letters", t.label, p.n_qubits),
            ));
        }
        let term = PauliTerm::from_label(&t.label, Complex64::new(t.coeff, t.coeff_im))
            .map_err(|e| at(span.start, e.to_string()))?;
        terms.push(term);
    }
    PauliSum::from_terms_with_tolerance(p.n_qubits, terms, 0.0)
        .map_err(|e| at(start, e.to_string()))
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}
