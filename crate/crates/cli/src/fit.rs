//! Least-squares fit of `(1/Q) ln N = a + b/Q + c ln Q / Q`.

use nalgebra::{Matrix3, Vector3};
use serde::Serialize;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesRow {
    pub q: usize,
    pub n_pauli: f64,
    pub y: f64,
}

/// String counts indexed by strictly increasing `Q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSeries {
    rows: Vec<SeriesRow>,
}

impl ScalingSeries {
    pub fn new<I: IntoIterator<Item = (usize, f64)>>(points: I) -> CliResult<Self> {
        let mut rows: Vec<SeriesRow> = Vec::new();
        for (q, n) in points {
            if q == 0 {
                return Err(CliError::Input("Q must be positive".into()));
            }
            if n.is_nan() || n < 1.0 || !n.is_finite() {
                return Err(CliError::Input(format!(
                    "N_Pauli must be at least 1, got {n} at Q={q}"
                )));
            }
            if let Some(last) = rows.last() {
                if q <= last.q {
                    return Err(CliError::Input(format!(
                        "Q must be strictly increasing ({} then {q})",
                        last.q
                    )));
                }
            }
            rows.push(SeriesRow {
                q,
                n_pauli: n,
                y: n.ln() / q as f64,
            });
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[SeriesRow] {
        &self.rows
    }

    pub fn restrict(&self, q_min: usize, q_max: usize) -> Self {
        Self {
            rows: self
                .rows
                .iter()
                .copied()
                .filter(|r| (q_min..=q_max).contains(&r.q))
                .collect(),
        }
    }

    /// Reads a CSV with `q` and `n_pauli` columns; other columns are ignored.
    pub fn from_csv<R: std::io::Read>(reader: R) -> CliResult<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| CliError::Input(format!("series CSV lacks a `{name}` column")))
        };
        let (qi, ni) = (col("q")?, col("n_pauli")?);
        let mut points = Vec::new();
        for (line, rec) in rdr.records().enumerate() {
            let rec = rec?;
            let parse_err = |what: &str| CliError::Input(format!("row {}: bad {what}", line + 2));
            let q = rec[qi]
                .trim()
                .parse::<usize>()
                .map_err(|_| parse_err("q"))?;
            let n = rec[ni]
                .trim()
                .parse::<f64>()
                .map_err(|_| parse_err("n_pauli"))?;
            points.push((q, n));
        }
        Self::new(points)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// `√(Σ r²/n)` in units of `y`.
    pub residual_rms: f64,
    /// Standard errors from `s² (XᵀX)⁻¹` with `s² = Σ r²/(n-3)`.
    pub stderr: [f64; 3],
    /// Condition number of `XᵀX`.
    pub condition: f64,
    pub rows: usize,
}

fn regressors(q: usize) -> Vector3<f64> {
    let q = q as f64;
    Vector3::new(1.0, 1.0 / q, q.ln() / q)
}

/// Ordinary least squares through the 3×3 normal equations.
pub fn fit_series(series: &ScalingSeries, rcond: f64) -> CliResult<FitResult> {
    let rows = series.rows();
    if rows.len() < 4 {
        return Err(CliError::Input(format!(
            "the fit needs at least 4 rows, got {}",
            rows.len()
        )));
    }
    let mut xtx = Matrix3::zeros();
    let mut xty = Vector3::zeros();
    for r in rows {
        let x = regressors(r.q);
        xtx += x * x.transpose();
        xty += x * r.y;
    }
    let eig = xtx.symmetric_eigenvalues();
    let (lo, hi) = (eig.min(), eig.max());
    if lo <= rcond * hi {
        return Err(CliError::Input(format!(
            "rank-deficient design (eigenvalues of XᵀX span {lo:e}..{hi:e})"
        )));
    }
    let inv = xtx
        .try_inverse()
        .ok_or_else(|| CliError::Input("rank-deficient design".into()))?;
    let beta = inv * xty;
    let ss: f64 = rows
        .iter()
        .map(|r| (r.y - regressors(r.q).dot(&beta)).powi(2))
        .sum();
    let n = rows.len() as f64;
    let s2 = ss / (n - 3.0);
    Ok(FitResult {
        a: beta[0],
        b: beta[1],
        c: beta[2],
        residual_rms: (ss / n).sqrt(),
        stderr: [0, 1, 2].map(|i| (s2 * inv[(i, i)]).sqrt()),
        condition: hi / lo,
        rows: rows.len(),
    })
}
