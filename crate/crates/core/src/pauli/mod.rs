//! Bit-packed Pauli strings and weighted sums of them.
//!
//! Qubit `j` (zero-based) is bit `j` of both masks, so qubit 0 is the
//! least-significant bit of a computational basis index. A string with masks
//! `(x, z)` represents `i^{|x & z|} X^x Z^z`, which makes every `(1, 1)` letter
//! an exact `Y`. Labels print the most-significant qubit leftmost.

mod census;
mod decompose;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sparse::SparseOperator;

pub use census::{LengthStats, StringCensus};
pub use decompose::{
    decompose_tensorized, decompose_tensorized_with, decompose_trace, decompose_trace_with,
    reconstruct, TRACE_DECOMPOSITION_QUBIT_CAP,
};

/// Default relative tolerance for pruning Pauli coefficients.
pub const DEFAULT_RELATIVE_TOLERANCE: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I_POWERS: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, 1.0),
    Complex64::new(-1.0, 0.0),
    Complex64::new(0.0, -1.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    I,
    X,
    Y,
    Z,
}

impl Letter {
    pub fn as_char(self) -> char {
        match self {
            Letter::I => 'I',
            Letter::X => 'X',
            Letter::Y => 'Y',
            Letter::Z => 'Z',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTerm {
    n_qubits: usize,
    x_mask: u64,
    z_mask: u64,
    coefficient: Complex64,
}

impl PauliTerm {
    pub fn new(n_qubits: usize, x_mask: u64, z_mask: u64, coefficient: Complex64) -> Result<Self> {
        if n_qubits > 64 {
            return Err(Error::CapExceeded {
                what: "Pauli string length",
                limit: 64,
                got: n_qubits,
            });
        }
        let allowed = mask_for(n_qubits);
        if (x_mask | z_mask) & !allowed != 0 {
            return Err(Error::InvalidConfig(format!(
                "Pauli masks {x_mask:#x}/{z_mask:#x} do not fit in {n_qubits} qubits"
            )));
        }
        Ok(Self {
            n_qubits,
            x_mask,
            z_mask,
            coefficient,
        })
    }

    pub fn identity(n_qubits: usize, coefficient: Complex64) -> Self {
        Self {
            n_qubits,
            x_mask: 0,
            z_mask: 0,
            coefficient,
        }
    }

    /// Parses a label such as `"XIZ"`; the leftmost letter is the most-significant qubit.
    pub fn from_label(label: &str, coefficient: Complex64) -> Result<Self> {
        let n = label.chars().count();
        let (mut x, mut z) = (0u64, 0u64);
        for (pos, ch) in label.chars().enumerate() {
            let bit = 1u64 << (n - 1 - pos);
            match ch {
                'I' => {}
                'X' => x |= bit,
                'Z' => z |= bit,
                'Y' => {
                    x |= bit;
                    z |= bit;
                }
                other => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("unknown Pauli letter {other:?} in {label:?}"),
                    })
                }
            }
        }
        Self::new(n, x, z, coefficient)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x_mask
    }

    pub fn z_mask(&self) -> u64 {
        self.z_mask
    }

    pub fn coefficient(&self) -> Complex64 {
        self.coefficient
    }

    pub fn with_coefficient(self, coefficient: Complex64) -> Self {
        Self {
            coefficient,
            ..self
        }
    }

    pub fn letter(&self, qubit: usize) -> Letter {
        let bit = 1u64 << qubit;
        match (self.x_mask & bit != 0, self.z_mask & bit != 0) {
            (false, false) => Letter::I,
            (true, false) => Letter::X,
            (false, true) => Letter::Z,
            (true, true) => Letter::Y,
        }
    }

    /// Letters with the most-significant qubit first.
    pub fn label(&self) -> String {
        (0..self.n_qubits)
            .rev()
            .map(|q| self.letter(q).as_char())
            .collect()
    }

    /// Number of non-identity letters.
    pub fn weight(&self) -> usize {
        (self.x_mask | self.z_mask).count_ones() as usize
    }

    pub fn support(&self) -> Vec<usize> {
        let s = self.x_mask | self.z_mask;
        (0..self.n_qubits).filter(|q| s >> q & 1 == 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.x_mask == 0 && self.z_mask == 0
    }

    /// True when the string only contains I and Z letters.
    pub fn is_diagonal(&self) -> bool {
        self.x_mask == 0
    }

    /// Image of basis state `col` under the unit-weight string: `P|col> = phase |row>`.
    pub fn act_on_basis(&self, col: usize) -> (usize, Complex64) {
        let c = col as u64;
        let ny = (self.x_mask & self.z_mask).count_ones() as usize;
        let sign = (self.z_mask & c).count_ones() as usize;
        let phase = I_POWERS[(ny + 2 * sign) % 4];
        ((c ^ self.x_mask) as usize, phase)
    }

    /// Dense-free matrix of the weighted string.
    pub fn to_sparse(&self) -> SparseOperator {
        let dim = 1usize << self.n_qubits;
        let mut entries: Vec<_> = (0..dim)
            .map(|col| {
                let (row, phase) = self.act_on_basis(col);
                (row, col, phase * self.coefficient)
            })
            .collect();
        entries.sort_by_key(|a| (a.0, a.1));
        SparseOperator::from_sorted_unchecked(dim, entries)
    }

    /// Product of unit strings `self * other`, returned with the accumulated phase
    /// times both coefficients.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                got: other.n_qubits,
            });
        }
        let x = self.x_mask ^ other.x_mask;
        let z = self.z_mask ^ other.z_mask;
        // i^{a} X^{x1} Z^{z1} i^{b} X^{x2} Z^{z2} = i^{a+b} (-1)^{|z1 & x2|} X^{x} Z^{z}
        let a = (self.x_mask & self.z_mask).count_ones() as i64;
        let b = (other.x_mask & other.z_mask).count_ones() as i64;
        let c = (x & z).count_ones() as i64;
        let swap = (self.z_mask & other.x_mask).count_ones() as i64;
        let power = (a + b - c + 2 * swap).rem_euclid(4) as usize;
        Ok(Self {
            n_qubits: self.n_qubits,
            x_mask: x,
            z_mask: z,
            coefficient: I_POWERS[power] * self.coefficient * other.coefficient,
        })
    }

    /// Re-indexes the string into a larger register, shifting qubits up by `offset`.
    pub fn embed(&self, offset: usize, total_qubits: usize) -> Result<Self> {
        if offset + self.n_qubits > total_qubits {
            return Err(Error::DimensionMismatch {
                expected: total_qubits,
                got: offset + self.n_qubits,
            });
        }
        Self::new(
            total_qubits,
            self.x_mask << offset,
            self.z_mask << offset,
            self.coefficient,
        )
    }

    fn key(&self) -> (u64, u64) {
        (self.x_mask, self.z_mask)
    }
}

impl fmt::Display for PauliTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {}",
            self.label(),
            self.coefficient.re,
            self.coefficient.im
        )
    }
}

/// A weighted sum of distinct Pauli strings on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    /// Merges terms on identical strings and prunes coefficients below
    /// [`DEFAULT_RELATIVE_TOLERANCE`] times the largest magnitude.
    pub fn from_terms<I: IntoIterator<Item = PauliTerm>>(
        n_qubits: usize,
        terms: I,
    ) -> Result<Self> {
        Self::from_terms_with_tolerance(n_qubits, terms, DEFAULT_RELATIVE_TOLERANCE)
    }

    pub fn from_terms_with_tolerance<I: IntoIterator<Item = PauliTerm>>(
        n_qubits: usize,
        terms: I,
        relative_tol: f64,
    ) -> Result<Self> {
        let mut acc: BTreeMap<(u64, u64), Complex64> = BTreeMap::new();
        for t in terms {
            if t.n_qubits != n_qubits {
                return Err(Error::DimensionMismatch {
                    expected: n_qubits,
                    got: t.n_qubits,
                });
            }
            *acc.entry(t.key()).or_insert(ZERO) += t.coefficient;
        }
        let terms = acc
            .into_iter()
            .map(|((x, z), c)| PauliTerm {
                n_qubits,
                x_mask: x,
                z_mask: z,
                coefficient: c,
            })
            .collect();
        Ok(Self { n_qubits, terms }.pruned(relative_tol))
    }

    pub fn single(term: PauliTerm) -> Self {
        let mut s = Self::zero(term.n_qubits);
        if term.coefficient != ZERO {
            s.terms.push(term);
        }
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the string with the given masks (zero if absent).
    pub fn coefficient(&self, x_mask: u64, z_mask: u64) -> Complex64 {
        self.terms
            .binary_search_by(|t| t.key().cmp(&(x_mask, z_mask)))
            .map(|i| self.terms[i].coefficient)
            .unwrap_or(ZERO)
    }

    pub fn coefficient_of(&self, label: &str) -> Result<Complex64> {
        let t = PauliTerm::from_label(label, ZERO)?;
        Ok(self.coefficient(t.x_mask, t.z_mask))
    }

    pub fn max_coefficient(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient.norm())
            .fold(0.0, f64::max)
    }

    /// Drops terms with `|c| <= relative_tol * max|c|` (and exact zeros).
    pub fn pruned(mut self, relative_tol: f64) -> Self {
        let cut = relative_tol * self.max_coefficient();
        self.terms
            .retain(|t| t.coefficient != ZERO && t.coefficient.norm() > cut);
        self
    }

    /// Number of terms with `|c| > tol`.
    pub fn count_strings(&self, tol: f64) -> usize {
        self.terms
            .iter()
            .filter(|t| t.coefficient.norm() > tol)
            .count()
    }

    /// Number of terms other than the identity string.
    pub fn nontrivial_count(&self) -> usize {
        self.terms.iter().filter(|t| !t.is_identity()).count()
    }

    /// Number of terms with exactly `weight` non-identity letters.
    pub fn count_with_weight(&self, weight: usize) -> usize {
        self.terms.iter().filter(|t| t.weight() == weight).count()
    }

    pub fn census(&self) -> StringCensus {
        StringCensus::of(self)
    }

    /// Largest imaginary part across coefficients.
    pub fn max_imaginary(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coefficient.im.abs())
            .fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::from_terms(
            self.n_qubits,
            self.terms.iter().chain(other.terms.iter()).copied(),
        )
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| t.with_coefficient(t.coefficient * factor))
            .collect();
        Self {
            n_qubits: self.n_qubits,
            terms,
        }
        .pruned(0.0)
    }

    /// Operator product, distributing over terms and merging equal strings.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut products = Vec::with_capacity(self.len() * other.len());
        for a in &self.terms {
            for b in &other.terms {
                products.push(a.mul(b)?);
            }
        }
        Self::from_terms(self.n_qubits, products)
    }

    pub fn embed(&self, offset: usize, total_qubits: usize) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|t| t.embed(offset, total_qubits))
            .collect::<Result<Vec<_>>>()?;
        Self::from_terms(total_qubits, terms)
    }

    /// Line-oriented text form: a header, then `<label> <re> <im>` per term.
    pub fn to_text(&self) -> String {
        let mut out = format!("# n_qubits={} ordering=msb-left\n", self.n_qubits);
        for t in &self.terms {
            out.push_str(&format!(
                "{} {:e} {:e}\n",
                t.label(),
                t.coefficient.re,
                t.coefficient.im
            ));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let n_qubits = parse_header(header)?;
        let mut terms = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: i + 1,
                message,
            };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(parse_err(format!(
                    "expected 3 fields, found {}",
                    fields.len()
                )));
            }
            if fields[0].len() != n_qubits {
                return Err(parse_err(format!(
                    "label {} has {} letters, header declares {n_qubits}",
                    fields[0],
                    fields[0].len()
                )));
            }
            let re: f64 = fields[1]
                .parse()
                .map_err(|e| parse_err(format!("real part: {e}")))?;
            let im: f64 = fields[2]
                .parse()
                .map_err(|e| parse_err(format!("imaginary part: {e}")))?;
            let term = PauliTerm::from_label(fields[0], Complex64::new(re, im))
                .map_err(|e| parse_err(e.to_string()))?;
            terms.push(term);
        }
        Self::from_terms_with_tolerance(n_qubits, terms, 0.0)
    }
}

fn parse_header(header: &str) -> Result<usize> {
    let err = |message: &str| Error::Parse {
        line: 1,
        message: message.to_string(),
    };
    let body = header
        .strip_prefix('#')
        .ok_or_else(|| err("header must start with '#'"))?;
    let mut n_qubits = None;
    let mut ordering_ok = false;
    for field in body.split_whitespace() {
        if let Some(v) = field.strip_prefix("n_qubits=") {
            n_qubits = Some(v.parse::<usize>().map_err(|_| err("bad n_qubits"))?);
        } else if field == "ordering=msb-left" {
            ordering_ok = true;
        }
    }
    if !ordering_ok {
        return Err(err("header must declare ordering=msb-left"));
    }
    n_qubits.ok_or_else(|| err("header missing n_qubits"))
}

pub(crate) fn mask_for(n_qubits: usize) -> u64 {
    if n_qubits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn letters_and_labels() {
        let t = PauliTerm::from_label("XYZI", r(1.0)).unwrap();
        assert_eq!(t.letter(0), Letter::I);
        assert_eq!(t.letter(1), Letter::Z);
        assert_eq!(t.letter(2), Letter::Y);
        assert_eq!(t.letter(3), Letter::X);
        assert_eq!(t.label(), "XYZI");
        assert_eq!(t.weight(), 3);
    }

    #[test]
    fn y_matrix_is_exact() {
        let y = PauliTerm::from_label("Y", r(1.0)).unwrap().to_sparse();
        assert_eq!(y.get(0, 1), Complex64::new(0.0, -1.0));
        assert_eq!(y.get(1, 0), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn single_qubit_products() {
        let x = PauliTerm::from_label("X", r(1.0)).unwrap();
        let y = PauliTerm::from_label("Y", r(1.0)).unwrap();
        let z = PauliTerm::from_label("Z", r(1.0)).unwrap();
        let xy = x.mul(&y).unwrap();
        assert_eq!(xy.label(), "Z");
        assert_eq!(xy.coefficient(), Complex64::new(0.0, 1.0));
        let zx = z.mul(&x).unwrap();
        assert_eq!(zx.label(), "Y");
        assert_eq!(zx.coefficient(), Complex64::new(0.0, 1.0));
        let yy = y.mul(&y).unwrap();
        assert!(yy.is_identity());
        assert_eq!(yy.coefficient(), r(1.0));
    }

    #[test]
    fn product_matches_matrix_product() {
        let labels = ["XYZ", "YYI", "ZXY", "IZX"];
        for a in labels {
            for b in labels {
                let pa = PauliTerm::from_label(a, r(1.0)).unwrap();
                let pb = PauliTerm::from_label(b, r(1.0)).unwrap();
                let direct = pa.to_sparse().matmul(&pb.to_sparse()).unwrap();
                let via = pa.mul(&pb).unwrap().to_sparse();
                assert!(direct.max_abs_diff(&via).unwrap() < 1e-15, "{a}*{b}");
            }
        }
    }

    #[test]
    fn masks_must_fit() {
        assert!(PauliTerm::new(2, 0b100, 0, r(1.0)).is_err());
    }

    #[test]
    fn sums_merge_and_prune() {
        let terms = vec![
            PauliTerm::from_label("XZ", r(1.0)).unwrap(),
            PauliTerm::from_label("XZ", r(-1.0)).unwrap(),
            PauliTerm::from_label("ZZ", r(2.0)).unwrap(),
            PauliTerm::from_label("II", r(1e-15)).unwrap(),
        ];
        let s = PauliSum::from_terms(2, terms).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s.coefficient_of("ZZ").unwrap(), r(2.0));
    }

    #[test]
    fn text_round_trip() {
        let s = PauliSum::from_terms(
            3,
            vec![
                PauliTerm::from_label("XIY", Complex64::new(0.25, -1.5)).unwrap(),
                PauliTerm::from_label("III", r(-3.0)).unwrap(),
            ],
        )
        .unwrap();
        let text = s.to_text();
        assert!(text.starts_with("# n_qubits=3 ordering=msb-left\n"));
        assert_eq!(PauliSum::from_text(&text).unwrap(), s);
    }

    #[test]
    fn text_errors_name_the_line() {
        let bad = "# n_qubits=2 ordering=msb-left\nXX 1 0\nXQ 1 0\n";
        match PauliSum::from_text(bad) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(PauliSum::from_text("# n_qubits=2\nXX 1 0\n").is_err());
    }
}
