//! Lower-triangular summability methods `S_n(f) = Σ_{k≤n} γ_{nk} f̂(k) z^k`.
//!
//! Custom matrices are read from plain text, one row per line:
//!
//! ```text
//! file    := { line "\n" }
//! line    := blank | "#" comment | entry { ws entry }
//! entry   := re | re "+" im "i" | re "-" im "i"
//! ```
//!
//! Blank and `#` lines are skipped; the `n`-th data row (from 0) must hold
//! exactly `n + 1` entries.

use std::path::Path;

use num_complex::Complex64;

use crate::csvfmt::parse_complex;
use crate::error::{HbError, Result};
use crate::space::HbPolynomial;

#[derive(Debug, Clone, PartialEq)]
pub struct SummabilityRow {
    pub n: usize,
    /// `γ_{n0}, ..., γ_{nn}`.
    pub weights: Vec<Complex64>,
}

impl SummabilityRow {
    pub fn new(weights: Vec<Complex64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(HbError::InvalidParameter("a summability row needs at least one weight".into()));
        }
        Ok(SummabilityRow {
            n: weights.len() - 1,
            weights,
        })
    }

    /// `γ_{nn}`.
    pub fn diagonal(&self) -> Complex64 {
        self.weights[self.n]
    }

    pub fn max_abs(&self) -> f64 {
        self.weights.iter().map(|w| w.norm()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TriMatrixSpec {
    Cesaro { alpha: f64 },
    Custom { rows: Vec<SummabilityRow> },
}

impl TriMatrixSpec {
    pub fn cesaro(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(TriMatrixSpec::Cesaro { alpha })
    }

    pub fn row(&self, n: usize) -> Result<SummabilityRow> {
        match self {
            TriMatrixSpec::Cesaro { alpha } => cesaro_row(*alpha, n),
            TriMatrixSpec::Custom { rows } => rows.get(n).cloned().ok_or(HbError::MissingRow {
                requested: n,
                available: rows.len(),
            }),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha >= 0.0 && alpha.is_finite() {
        Ok(())
    } else {
        Err(HbError::InvalidParameter(format!("Cesàro order must be >= 0, got {alpha}")))
    }
}

/// Row `n` of the generalised Cesàro method of order `α`:
/// `γ_{nk} = C(n,k) / C(n+α,k) = Π_{i<k} (n - i) / (n + α - i)`.
pub fn cesaro_row(alpha: f64, n: usize) -> Result<SummabilityRow> {
    check_alpha(alpha)?;
    let mut weights = Vec::with_capacity(n + 1);
    let mut w = 1.0f64;
    weights.push(Complex64::new(1.0, 0.0));
    for i in 0..n {
        let i = i as f64;
        let nf = n as f64;
        w *= (nf - i) / (nf + alpha - i);
        weights.push(Complex64::new(w, 0.0));
    }
    SummabilityRow::new(weights)
}

/// `S_n(p)`: coefficient `k` multiplied by `γ_{nk}` for `k ≤ n`, dropped above.
pub fn apply_row(row: &SummabilityRow, p: &HbPolynomial) -> HbPolynomial {
    let len = p.coeffs.len().min(row.n + 1);
    let coeffs: Vec<Complex64> = p.coeffs[..len]
        .iter()
        .zip(&row.weights)
        .map(|(&c, &w)| c * w)
        .collect();
    if coeffs.is_empty() {
        HbPolynomial::zero()
    } else {
        HbPolynomial::new(coeffs)
    }
}

/// Parses the matrix text format described at the module level.
pub fn parse_custom_matrix(text: &str) -> Result<TriMatrixSpec> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let weights = line
            .split_whitespace()
            .map(|tok| {
                parse_complex(tok).ok_or_else(|| HbError::Parse {
                    line: lineno + 1,
                    token: tok.to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let n = rows.len();
        if weights.len() != n + 1 {
            return Err(HbError::RaggedRow {
                row: n,
                expected: n + 1,
                found: weights.len(),
            });
        }
        rows.push(SummabilityRow { n, weights });
    }
    Ok(TriMatrixSpec::Custom { rows })
}

pub fn load_custom_matrix(path: impl AsRef<Path>) -> Result<TriMatrixSpec> {
    parse_custom_matrix(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn re(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    #[test]
    fn cesaro_examples() {
        for n in [0, 1, 7, 100] {
            assert!(cesaro_row(0.0, n).unwrap().weights.iter().all(|w| *w == Complex64::new(1.0, 0.0)));
        }
        let row = cesaro_row(1.0, 2).unwrap();
        for (w, e) in row.weights.iter().zip([1.0, 2.0 / 3.0, 1.0 / 3.0]) {
            assert_relative_eq!(w.re, e, max_relative = 1e-15);
        }
        assert_relative_eq!(cesaro_row(1.0, 9).unwrap().diagonal().re, 0.1, max_relative = 1e-15);
        assert!(cesaro_row(-0.5, 3).is_err());
    }

    #[test]
    fn cesaro_weights_are_binomial_quotients() {
        // direct Gamma-free oracle for integer α: C(n,k)/C(n+α,k) via exact u128
        fn binom(n: u128, k: u128) -> u128 {
            (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
        }
        for alpha in 0..4u128 {
            for n in [0u128, 5, 20] {
                let row = cesaro_row(alpha as f64, n as usize).unwrap();
                for k in 0..=n {
                    let expected = binom(n, k) as f64 / binom(n + alpha, k) as f64;
                    assert_relative_eq!(row.weights[k as usize].re, expected, max_relative = 1e-13);
                }
            }
        }
    }

    #[test]
    fn cesaro_diagonal_asymptotics() {
        for alpha in [0.5, 1.0, 2.0, 3.0] {
            let ratios: Vec<f64> = [1000usize, 2000, 5000, 10000]
                .iter()
                .map(|&n| cesaro_row(alpha, n).unwrap().diagonal().re * (n as f64).powf(alpha))
                .collect();
            let (lo, hi) = ratios.iter().fold((f64::MAX, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
            assert!(hi / lo <= 1.2, "alpha {alpha}: {ratios:?}");
        }
    }

    #[test]
    fn cesaro_weights_are_monotone() {
        for alpha in [0.0, 0.3, 1.0, 2.7] {
            let row = cesaro_row(alpha, 64).unwrap();
            assert_eq!(row.weights[0].re, 1.0);
            assert!(row.weights.iter().all(|w| w.im == 0.0 && w.re > 0.0));
            assert!(row.weights.windows(2).all(|w| w[1].re <= w[0].re));
        }
    }

    #[test]
    fn apply_examples() {
        let p = HbPolynomial::new(re(&[1.0, -2.0, 3.0]));
        assert_eq!(apply_row(&cesaro_row(0.0, 5).unwrap(), &p).coeffs, p.coeffs);
        let row = cesaro_row(1.0, 2).unwrap();
        let out = apply_row(&row, &HbPolynomial::monomial(3));
        assert!(out.coeffs.iter().all(|c| c.norm() == 0.0));
        let out = apply_row(&row, &HbPolynomial::new(re(&[1.0, 1.0, 1.0])));
        assert_eq!(out.coeffs, row.weights);
    }

    #[test]
    fn custom_matrix_examples() {
        let spec = parse_custom_matrix("1\n1 1\n1 1 1\n").unwrap();
        for n in 0..3 {
            assert_eq!(spec.row(n).unwrap(), cesaro_row(0.0, n).unwrap());
        }
        assert_eq!(spec.row(3), Err(HbError::MissingRow { requested: 3, available: 3 }));

        let err = parse_custom_matrix("1\n1 1\n1 1 1 1\n").unwrap_err();
        assert_eq!(err, HbError::RaggedRow { row: 2, expected: 3, found: 4 });

        let err = parse_custom_matrix("# header\n1\n0.5 x\n").unwrap_err();
        assert_eq!(err, HbError::Parse { line: 3, token: "x".into() });

        let text = "1\n1 0.5\n1 0.6666666666666666 0.3333333333333333\n";
        let spec = parse_custom_matrix(text).unwrap();
        for n in 0..3 {
            let a = spec.row(n).unwrap();
            let b = cesaro_row(1.0, n).unwrap();
            for (x, y) in a.weights.iter().zip(&b.weights) {
                assert!((x - y).norm() < 1e-15);
            }
        }

        let spec = parse_custom_matrix("1+1i\n\n2-0.5i 3\n").unwrap();
        assert_eq!(spec.row(1).unwrap().weights, vec![Complex64::new(2.0, -0.5), Complex64::new(3.0, 0.0)]);
    }

    #[test]
    fn custom_matrix_from_file() {
        let dir = std::env::temp_dir().join(format!("hbspace-matrix-{}", std::process::id()));
        std::fs::write(&dir, "1\n1 1\n").unwrap();
        let spec = load_custom_matrix(&dir).unwrap();
        assert_eq!(spec.row(1).unwrap().weights.len(), 2);
        std::fs::remove_file(&dir).unwrap();
        assert!(matches!(load_custom_matrix(&dir), Err(HbError::Io(_))));
    }

    proptest! {
        #[test]
        fn apply_row_is_linear(
            p in prop::collection::vec(-10.0f64..10.0, 1..30),
            q in prop::collection::vec(-10.0f64..10.0, 1..30),
            n in 0usize..40,
            alpha in 0.0f64..4.0,
        ) {
            let row = cesaro_row(alpha, n).unwrap();
            let p = HbPolynomial::new(re(&p));
            let q = HbPolynomial::new(re(&q));
            let lhs = apply_row(&row, &p.add(&q));
            let rhs = apply_row(&row, &p).add(&apply_row(&row, &q));
            let len = lhs.coeffs.len().max(rhs.coeffs.len());
            for k in 0..len {
                // equal up to one rounding of the distributive law
                prop_assert!((lhs.coeff(k) - rhs.coeff(k)).norm() <= 1e-14 * 20.0);
            }
        }
    }
}
