//! Lower bounds and truncated operator norms for `S_n` acting on `H(b)`,
//! plus a model-based reading of the divergence criteria.
//!
//! The lower bound uses the test function `z^n a(z)`, whose `H(b)` norm is
//! at most 1 and whose image under `S_n` is `γ_{nn} a(0) z^n`:
//!
//! ```text
//! ‖S_n‖ ≥ a(0) |γ_{nn}| ‖z^n‖_{H(b)}.
//! ```

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{HbError, Result};
use crate::pythagoras::PythagoreanPair;
use crate::space::{gram, monomial_norm_sq, HbContext};
use crate::summability::{SummabilityRow, TriMatrixSpec};

/// Relative tolerance on the power-iteration eigen-residual.
pub const POWER_TOL: f64 = 1e-8;
/// Power-iteration cap.
pub const POWER_MAX_ITER: usize = 10_000;

/// `a(0) |γ_{nn}| ‖z^n‖_{H(b)}`.
pub fn lemma_lower_bound(pair: &PythagoreanPair, ctx: &HbContext, row: &SummabilityRow) -> Result<f64> {
    lemma_bound_from_a0(pair.a0, ctx, row)
}

fn lemma_bound_from_a0(a0: f64, ctx: &HbContext, row: &SummabilityRow) -> Result<f64> {
    Ok(a0 * row.diagonal().norm() * monomial_norm_sq(ctx, row.n)?.sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct OpNormEstimate {
    pub n: usize,
    /// Degree of the polynomial subspace the norm is taken over.
    pub gram_size: usize,
    pub value: f64,
    pub lemma_bound: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Norm of `S_n` restricted to polynomials of degree `≤ gram_size`.
///
/// With `G' = L L*` the Gram matrix in the `‖p‖² = p* G' p` convention, the
/// operator becomes `M = L* D L^{-*}` in Euclidean coordinates, and its
/// largest singular value is found by power iteration on (a compression of)
/// `M* M` from the normalised all-ones vector.
pub fn truncated_opnorm(
    ctx: &HbContext,
    row: &SummabilityRow,
    gram_size: usize,
    a0: f64,
) -> Result<OpNormEstimate> {
    if row.n > gram_size {
        return Err(HbError::InvalidParameter(format!(
            "row index {} exceeds subspace degree {gram_size}",
            row.n
        )));
    }
    let dim = gram_size + 1;
    // (m, n) entry ⟨z^n, z^m⟩ = conj(⟨z^m, z^n⟩)
    let g = gram(ctx, gram_size)?.map(|x| x.conj());
    let l: DMatrix<Complex64> = g
        .cholesky()
        .ok_or(HbError::NotPositiveDefinite(dim))?
        .unpack();
    // D vanishes beyond n, so with k = n + 1 and E_k the first k coordinates,
    // M*M = L^{-1} D̄ E_k E_k* L L* E_k D L^{-*} shares its nonzero spectrum with
    // Z*Z for Z = (L^{-1} E_k) D̄_k L_k, L_k the leading k×k block of L.
    let k = row.n + 1;
    let mut z = DMatrix::<Complex64>::zeros(dim, k);
    z.view_mut((0, 0), (k, k)).fill_with_identity();
    l.solve_lower_triangular_mut(&mut z);
    let mut lk = l.view((0, 0), (k, k)).into_owned();
    for (i, mut r) in lk.row_iter_mut().enumerate() {
        r *= row.weights[i].conj();
    }
    let z = z * lk;
    let zz = z.ad_mul(&z);
    let apply = |v: &DVector<Complex64>| -> DVector<Complex64> { &zz * v };

    let mut v = DVector::from_element(k, Complex64::new(1.0 / (k as f64).sqrt(), 0.0));
    let mut lambda = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < POWER_MAX_ITER {
        iterations += 1;
        let w = apply(&v);
        lambda = v.dotc(&w).re;
        let wn = w.norm();
        if wn == 0.0 {
            lambda = 0.0;
            converged = true;
            break;
        }
        let residual = (&w - &v * Complex64::new(lambda, 0.0)).norm();
        v = w / Complex64::new(wn, 0.0);
        if residual <= POWER_TOL * lambda {
            converged = true;
            break;
        }
    }
    Ok(OpNormEstimate {
        n: row.n,
        gram_size,
        value: lambda.max(0.0).sqrt(),
        lemma_bound: lemma_bound_from_a0(a0, ctx, row)?,
        iterations,
        converged,
    })
}

/// Maps [`truncated_opnorm`] over `n_list`; the subspace degree is
/// `gram_size` if given, else `4n`.
pub fn opnorm_profile(
    ctx: &HbContext,
    a0: f64,
    spec: &TriMatrixSpec,
    n_list: &[usize],
    gram_size: Option<usize>,
) -> Result<Vec<OpNormEstimate>> {
    n_list
        .iter()
        .map(|&n| truncated_opnorm(ctx, &spec.row(n)?, gram_size.unwrap_or(4 * n), a0))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthModel {
    /// `log ‖z^n‖ ≈ ρ log n + c`.
    PolynomialGrowth { rho: f64 },
    /// `log ‖z^n‖ ≈ C n^δ + c`.
    StretchedExponential { c: f64, delta: f64 },
    Bounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceVerdict {
    /// `sup |γ_{nn}| ‖z^n‖ = ∞`.
    pub case_i: bool,
    /// `Σ |γ_{nn}|^{-2} ‖z^n‖^{-2} < ∞`.
    pub case_ii: bool,
    /// `Σ |γ_{nn}|^{-1} ‖z^n‖^{-1} < ∞`.
    pub case_iii: bool,
    pub fitted_model: GrowthModel,
    /// RMS residual of the selected fit.
    pub residual: f64,
    /// RMS residuals of both candidate fits `(polynomial, stretched)`.
    pub candidate_residuals: (f64, f64),
}

impl DivergenceVerdict {
    pub fn implication_chain_holds(&self) -> bool {
        (!self.case_iii || self.case_ii) && (!self.case_ii || self.case_i)
    }

    pub fn summary(&self) -> String {
        match (self.case_i, self.case_ii, self.case_iii) {
            (false, _, _) => "no case".into(),
            (true, false, _) => "case i only".into(),
            (true, true, false) => "cases i and ii".into(),
            (true, true, true) => "cases i, ii and iii".into(),
        }
    }
}

/// Smallest exponent tried for the stretched-exponential model.
pub const MIN_STRETCH_EXPONENT: f64 = 0.05;
/// Relative residual gap below which the polynomial model is preferred.
pub const MODEL_TIE: f64 = 0.01;

struct LinearFit {
    slope: f64,
    rms: f64,
}

fn least_squares(x: &[f64], y: &[f64]) -> LinearFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|xi| (xi - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(xi, yi)| (xi - mx) * (yi - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rss: f64 = x
        .iter()
        .zip(y)
        .map(|(xi, yi)| (yi - slope * xi - intercept).powi(2))
        .sum();
    LinearFit {
        slope,
        rms: (rss / n).sqrt(),
    }
}

/// Fits `y = C n^δ + c` by a scan over δ followed by golden-section refinement.
fn fit_stretched(ns: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let eval = |delta: f64| {
        let x: Vec<f64> = ns.iter().map(|n| n.powf(delta)).collect();
        let fit = least_squares(&x, y);
        (fit.rms, fit.slope)
    };
    let steps = 96;
    let grid: Vec<f64> = (0..=steps)
        .map(|i| MIN_STRETCH_EXPONENT + (1.0 - MIN_STRETCH_EXPONENT) * i as f64 / steps as f64)
        .collect();
    let scores: Vec<f64> = grid.iter().map(|&d| eval(d).0).collect();
    let best = (0..grid.len())
        .min_by(|&i, &j| scores[i].total_cmp(&scores[j]))
        .unwrap();
    let mut lo = grid[best.saturating_sub(1)];
    let mut hi = grid[(best + 1).min(steps)];
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..80 {
        let a = hi - phi * (hi - lo);
        let b = lo + phi * (hi - lo);
        if eval(a).0 <= eval(b).0 {
            hi = b;
        } else {
            lo = a;
        }
    }
    let mut delta = 0.5 * (lo + hi);
    if scores[best] < eval(delta).0 {
        delta = grid[best];
    }
    let (rms, c) = eval(delta);
    (c, delta, rms)
}

/// Classifies the monomial-norm sequence `norms[n] = ‖z^n‖` against the three
/// divergence criteria for the Cesàro method of order `alpha`, whose
/// diagonal decays like `n^{-α}`.
///
/// `log ‖z^n‖` is fitted over `n ∈ [T/10, T]` by both models and the
/// criteria are decided analytically on the selected one.
pub fn classify(norms: &[f64], alpha: f64) -> Result<DivergenceVerdict> {
    if norms.len() < 101 {
        return Err(HbError::InvalidParameter(format!(
            "classification needs T >= 100, got T = {}",
            norms.len().saturating_sub(1)
        )));
    }
    if !(alpha >= 0.0) {
        return Err(HbError::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
    }
    if norms.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(HbError::InvalidParameter("norms must be finite and positive".into()));
    }
    let t = norms.len() - 1;
    let first = norms[0];
    if norms.iter().all(|&x| (x - first).abs() <= 1e-12 * first) {
        return Ok(DivergenceVerdict {
            case_i: false,
            case_ii: false,
            case_iii: false,
            fitted_model: GrowthModel::Bounded,
            residual: 0.0,
            candidate_residuals: (0.0, 0.0),
        });
    }
    let start = t.div_ceil(10).max(1);
    let ns: Vec<f64> = (start..=t).map(|n| n as f64).collect();
    let y: Vec<f64> = norms[start..=t].iter().map(|x| x.ln()).collect();
    let logn: Vec<f64> = ns.iter().map(|n| n.ln()).collect();

    let poly = least_squares(&logn, &y);
    let (c, delta, stretched_rms) = fit_stretched(&ns, &y);

    let use_stretched = stretched_rms < poly.rms * (1.0 - MODEL_TIE);
    let (model, residual) = if use_stretched {
        (GrowthModel::StretchedExponential { c, delta }, stretched_rms)
    } else {
        (GrowthModel::PolynomialGrowth { rho: poly.slope }, poly.rms)
    };
    let (case_i, case_ii, case_iii) = match model {
        GrowthModel::PolynomialGrowth { rho } => {
            let excess = rho - alpha;
            (excess > 0.0, 2.0 * excess > 1.0, excess > 1.0)
        }
        GrowthModel::StretchedExponential { c, delta } => {
            let grows = c > 0.0 && delta > 0.0;
            (grows, grows, grows)
        }
        GrowthModel::Bounded => (false, false, false),
    };
    let verdict = DivergenceVerdict {
        case_i,
        case_ii,
        case_iii,
        fitted_model: model,
        residual,
        candidate_residuals: (poly.rms, stretched_rms),
    };
    assert!(verdict.implication_chain_holds(), "inconsistent verdict {verdict:?}");
    Ok(verdict)
}
