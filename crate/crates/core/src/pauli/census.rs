use std::collections::BTreeMap;

use super::{Letter, PauliSum};

/// Letter statistics for all strings of one length (number of non-identity letters).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LengthStats {
    pub strings: usize,
    pub x_letters: usize,
    pub y_letters: usize,
    pub z_letters: usize,
    /// Number of strings keyed by how many Y letters they contain.
    pub by_y_count: BTreeMap<usize, usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StringCensus {
    pub by_length: BTreeMap<usize, LengthStats>,
}

impl StringCensus {
    pub fn of(sum: &PauliSum) -> Self {
        let mut by_length: BTreeMap<usize, LengthStats> = BTreeMap::new();
        for t in sum.terms() {
            let stats = by_length.entry(t.weight()).or_default();
            stats.strings += 1;
            let mut ys = 0;
            for q in 0..t.n_qubits() {
                match t.letter(q) {
                    Letter::X => stats.x_letters += 1,
                    Letter::Y => {
                        stats.y_letters += 1;
                        ys += 1;
                    }
                    Letter::Z => stats.z_letters += 1,
                    Letter::I => {}
                }
            }
            *stats.by_y_count.entry(ys).or_default() += 1;
        }
        Self { by_length }
    }

    pub fn strings_of_length(&self, length: usize) -> usize {
        self.by_length.get(&length).map_or(0, |s| s.strings)
    }

    pub fn total(&self) -> usize {
        self.by_length.values().map(|s| s.strings).sum()
    }

    /// Compact `length:count` pairs joined by `;`, e.g. `1:3;2:3`.
    pub fn compact(&self) -> String {
        self.by_length
            .iter()
            .map(|(l, s)| format!("{l}:{}", s.strings))
            .collect::<Vec<_>>()
            .join(";")
    }
}

#[cfg(test)]
mod tests {
    use num_complex::Complex64;

    use super::*;
    use crate::pauli::PauliTerm;

    #[test]
    fn single_z_sum_histogram() {
        let q = 4;
        let terms = (0..q).map(|j| PauliTerm::new(q, 0, 1 << j, Complex64::new(1.0, 0.0)).unwrap());
        let census = PauliSum::from_terms(q, terms).unwrap().census();
        assert_eq!(census.by_length.len(), 1);
        assert_eq!(census.strings_of_length(1), 4);
        assert_eq!(census.by_length[&1].z_letters, 4);
        assert_eq!(census.compact(), "1:4");
    }
}
