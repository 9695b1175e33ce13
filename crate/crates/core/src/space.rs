//! Inner products, norms, Gram matrices and reproducing kernels of `H(b)`.
//!
//! Everything is driven by the Taylor coefficients `c_j` of `φ = b / a`.
//! For a polynomial `p`,
//!
//! ```text
//! ‖p‖²_{H(b)} = ‖p‖²_{H²} + ‖p⁺‖²_{H²},   p⁺_k = Σ_{j≥0} conj(c_j) p_{k+j},
//! ```
//!
//! so that on monomials `‖z^n‖² = 1 + Σ_{j≤n} |c_j|²`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{HbError, Result};
use crate::pythagoras::PythagoreanPair;
use crate::series::{horner, phi_coeffs, CoeffSeries, PhiSpec};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Precomputed data for a space `H(b)` given by the coefficients of `φ`.
#[derive(Debug, Clone)]
pub struct HbContext {
    c: CoeffSeries,
    values: Vec<Complex64>,
    cum: Vec<f64>,
}

impl HbContext {
    pub fn new(c: CoeffSeries) -> Result<Self> {
        let values = c.values();
        let mut cum = Vec::with_capacity(values.len());
        let mut acc = 1.0f64;
        for v in &values {
            acc += v.norm_sqr();
            cum.push(acc);
        }
        if !acc.is_finite() || values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(HbError::Overflow(
                "monomial norms exceed f64 range; lower the truncation".into(),
            ));
        }
        Ok(HbContext { c, values, cum })
    }

    pub fn from_phi(spec: &PhiSpec, trunc: usize) -> Result<Self> {
        Self::new(phi_coeffs(spec, trunc)?)
    }

    pub fn trunc(&self) -> usize {
        self.values.len() - 1
    }

    pub fn phi(&self) -> &CoeffSeries {
        &self.c
    }

    /// Materialised `c_j`.
    pub fn c(&self) -> &[Complex64] {
        &self.values
    }

    /// `cum[n] = 1 + Σ_{j≤n} |c_j|²`.
    pub fn cumulative(&self) -> &[f64] {
        &self.cum
    }

    /// `‖z^n‖ ` for all `n ≤ T`.
    pub fn monomial_norms(&self) -> Vec<f64> {
        self.cum.iter().map(|x| x.sqrt()).collect()
    }

    fn check_degree(&self, degree: usize) -> Result<()> {
        if degree > self.trunc() {
            Err(HbError::OutOfRange {
                index: degree,
                trunc: self.trunc(),
            })
        } else {
            Ok(())
        }
    }
}

/// A polynomial, stored by its Taylor coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct HbPolynomial {
    pub coeffs: Vec<Complex64>,
}

impl HbPolynomial {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        HbPolynomial { coeffs }
    }

    pub fn zero() -> Self {
        HbPolynomial { coeffs: vec![ZERO] }
    }

    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = Complex64::new(1.0, 0.0);
        HbPolynomial { coeffs }
    }

    /// Index of the last stored coefficient (not trimmed of trailing zeros).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        horner(&self.coeffs, z)
    }

    pub fn sub(&self, other: &HbPolynomial) -> HbPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        HbPolynomial::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn add(&self, other: &HbPolynomial) -> HbPolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        HbPolynomial::new((0..len).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn h2_norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// `‖z^n‖²_{H(b)}`.
pub fn monomial_norm_sq(ctx: &HbContext, n: usize) -> Result<f64> {
    ctx.check_degree(n)?;
    Ok(ctx.cum[n])
}

/// Analytic projection of `conj(φ)·p`: `q_k = Σ_{j=0..deg p - k} conj(c_j) p_{k+j}`.
pub fn plus_part(ctx: &HbContext, p: &HbPolynomial) -> Result<HbPolynomial> {
    let d = p.degree();
    ctx.check_degree(d)?;
    let c = &ctx.values;
    let q = (0..=d)
        .map(|k| {
            p.coeffs[k..]
                .iter()
                .zip(c)
                .fold(ZERO, |acc, (&pk, &cj)| acc + cj.conj() * pk)
        })
        .collect();
    Ok(HbPolynomial::new(q))
}

fn h2_inner(p: &HbPolynomial, q: &HbPolynomial) -> Complex64 {
    p.coeffs
        .iter()
        .zip(&q.coeffs)
        .fold(ZERO, |acc, (&a, &b)| acc + a * b.conj())
}

/// `⟨p, q⟩_{H(b)}`, linear in `p`.
pub fn hb_inner(ctx: &HbContext, p: &HbPolynomial, q: &HbPolynomial) -> Result<Complex64> {
    let pp = plus_part(ctx, p)?;
    let qp = plus_part(ctx, q)?;
    Ok(h2_inner(p, q) + h2_inner(&pp, &qp))
}

pub fn hb_norm(ctx: &HbContext, p: &HbPolynomial) -> Result<f64> {
    let pp = plus_part(ctx, p)?;
    Ok((p.h2_norm_sq() + pp.h2_norm_sq()).sqrt())
}

/// Gram matrix `G[(m, n)] = ⟨z^m, z^n⟩_{H(b)}` for `0 ≤ m, n ≤ size`.
///
/// Uses `G_{m+1,n+1} - δ = G_{m,n} - δ + conj(c_{m+1}) c_{n+1}`; the
/// diagonal is copied from the cumulative sums.
pub fn gram(ctx: &HbContext, size: usize) -> Result<DMatrix<Complex64>> {
    ctx.check_degree(size)?;
    let c = &ctx.values;
    let dim = size + 1;
    let mut g = DMatrix::from_element(dim, dim, ZERO);
    for n in 0..dim {
        // walk the diagonal band starting at (0, n)
        let mut acc = c[0].conj() * c[n];
        g[(0, n)] = acc;
        for m in 1..dim - n {
            acc += c[m].conj() * c[n + m];
            g[(m, n + m)] = acc;
        }
    }
    for m in 0..dim {
        g[(m, m)] = Complex64::new(ctx.cum[m], 0.0);
        for n in m + 1..dim {
            g[(n, m)] = g[(m, n)].conj();
        }
    }
    Ok(g)
}

/// Degree at which the kernel expansion at `w` is cut off:
/// `ceil(log(1e-9 (1 - |w|)) / log |w|)`.
///
/// This bounds the `1/(1 - conj(w) z)` tail only; when the coefficients of
/// `b` decay more slowly than `|w|^m`, pass a point whose modulus is that
/// decay rate instead.
pub fn kernel_trunc(w: Complex64) -> usize {
    let r = w.norm();
    if r == 0.0 {
        return 0;
    }
    ((1e-9 * (1.0 - r)).ln() / r.ln()).ceil().max(0.0) as usize
}

/// Taylor coefficients in `z` of `k^b(z, w) = (1 - conj(b(w)) b(z)) / (1 - conj(w) z)`.
pub fn kernel_poly(pair: &PythagoreanPair, w: Complex64, trunc: usize) -> Result<HbPolynomial> {
    if w.norm() >= 1.0 {
        return Err(HbError::InvalidParameter(format!(
            "kernel point must lie in the open disk, |w| = {}",
            w.norm()
        )));
    }
    if pair.b.trunc() < trunc {
        return Err(HbError::OutOfRange {
            index: trunc,
            trunc: pair.b.trunc(),
        });
    }
    let b = pair.b.values();
    let bw_conj = horner(&b, w).conj();
    let wc = w.conj();
    // k_m = conj(w)^m - conj(b(w)) Σ_{j≤m} b_j conj(w)^{m-j}
    let mut conv = ZERO;
    let mut wpow = Complex64::new(1.0, 0.0);
    let coeffs = (0..=trunc)
        .map(|m| {
            conv = conv * wc + b[m];
            let k = wpow - bw_conj * conv;
            wpow *= wc;
            k
        })
        .collect();
    Ok(HbPolynomial::new(coeffs))
}
