//! Truncated power series over `Complex64` with an overflow-guard scale.
//!
//! A [`CoeffSeries`] stores `coeffs[0..=T]` together with a real exponent
//! `scale_exp`; the series it represents is `exp(scale_exp) * Σ coeffs[k] z^k`.
//! Operations renormalise whenever a stored magnitude would exceed
//! [`RESCALE_THRESHOLD`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::csvfmt::{format_complex, parse_complex, parse_complex_list};
use crate::error::{HbError, Result};

/// Stored magnitudes are kept below this value.
pub const RESCALE_THRESHOLD: f64 = 1e250;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeries {
    coeffs: Vec<Complex64>,
    scale_exp: f64,
}

impl CoeffSeries {
    /// Series with the given (unscaled) coefficients; truncation is `len - 1`.
    ///
    /// Panics on an empty vector.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Self::with_scale(coeffs, 0.0)
    }

    pub fn with_scale(coeffs: Vec<Complex64>, scale_exp: f64) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        let mut s = CoeffSeries { coeffs, scale_exp };
        s.renormalize();
        s
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(trunc: usize) -> Self {
        Self::new(vec![ZERO; trunc + 1])
    }

    pub fn one(trunc: usize) -> Self {
        Self::monomial(0, trunc)
    }

    /// `z^k` truncated at order `trunc` (zero if `k > trunc`).
    pub fn monomial(k: usize, trunc: usize) -> Self {
        let mut c = vec![ZERO; trunc + 1];
        if k <= trunc {
            c[k] = ONE;
        }
        Self::new(c)
    }

    pub fn trunc(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn scale_exp(&self) -> f64 {
        self.scale_exp
    }

    /// Stored coefficients, before multiplication by `exp(scale_exp)`.
    pub fn raw(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Materialised coefficient `k`; zero beyond the truncation.
    pub fn get(&self, k: usize) -> Complex64 {
        match self.coeffs.get(k) {
            Some(&c) if self.scale_exp == 0.0 => c,
            Some(&c) => c * self.scale_exp.exp(),
            None => ZERO,
        }
    }

    /// `log |c_k|`, computed without materialising the scale.
    pub fn log_abs(&self, k: usize) -> f64 {
        self.coeffs
            .get(k)
            .map_or(f64::NEG_INFINITY, |c| c.norm().ln() + self.scale_exp)
    }

    /// All materialised coefficients.
    pub fn values(&self) -> Vec<Complex64> {
        let f = self.scale_exp.exp();
        if self.scale_exp == 0.0 {
            self.coeffs.clone()
        } else {
            self.coeffs.iter().map(|&c| c * f).collect()
        }
    }

    fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Moves magnitude into `scale_exp` when a stored coefficient exceeds
    /// the threshold. The represented series is unchanged.
    fn renormalize(&mut self) {
        let m = self.max_abs();
        if m > RESCALE_THRESHOLD && m.is_finite() {
            self.rescale_by(m);
        }
    }

    fn rescale_by(&mut self, factor: f64) {
        for c in &mut self.coeffs {
            *c /= factor;
        }
        self.scale_exp += factor.ln();
    }

    /// Copy whose stored coefficients have magnitude at most about `limit`.
    fn bounded(&self, limit: f64) -> Self {
        let mut s = self.clone();
        let m = s.max_abs();
        if m > limit {
            s.rescale_by(m);
        }
        s
    }

    /// Re-expresses the series with `scale_exp` replaced by `target`.
    /// Values far below `exp(target)` may underflow to zero.
    fn aligned_to(&self, target: f64) -> Vec<Complex64> {
        if target == self.scale_exp {
            return self.coeffs.clone();
        }
        let f = (self.scale_exp - target).exp();
        self.coeffs.iter().map(|&c| c * f).collect()
    }

    /// Truncates (or zero-extends) to order `trunc`.
    pub fn truncate(&self, trunc: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(trunc + 1, ZERO);
        CoeffSeries {
            coeffs,
            scale_exp: self.scale_exp,
        }
    }

    /// Cauchy product, truncated at the smaller of the two truncations.
    pub fn mul(&self, other: &CoeffSeries) -> CoeffSeries {
        let t = self.trunc().min(other.trunc());
        let a = self.bounded(1e100);
        let b = other.bounded(1e100);
        let mut out = vec![ZERO; t + 1];
        for (i, &ai) in a.coeffs.iter().take(t + 1).enumerate() {
            if ai == ZERO {
                continue;
            }
            for (o, &bj) in out[i..].iter_mut().zip(&b.coeffs) {
                *o += ai * bj;
            }
        }
        CoeffSeries::with_scale(out, a.scale_exp + b.scale_exp)
    }

    pub fn add(&self, other: &CoeffSeries) -> CoeffSeries {
        self.combine(other, ONE)
    }

    pub fn sub(&self, other: &CoeffSeries) -> CoeffSeries {
        self.combine(other, -ONE)
    }

    fn combine(&self, other: &CoeffSeries, sign: Complex64) -> CoeffSeries {
        let t = self.trunc().min(other.trunc());
        let target = self.scale_exp.max(other.scale_exp);
        let a = self.aligned_to(target);
        let b = other.aligned_to(target);
        let out = a.iter().zip(&b).take(t + 1).map(|(&x, &y)| x + sign * y).collect();
        CoeffSeries::with_scale(out, target)
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: Complex64) -> CoeffSeries {
        let out = self.coeffs.iter().map(|&c| c * s).collect();
        CoeffSeries::with_scale(out, self.scale_exp)
    }

    /// Multiplies by `z^k`, keeping the truncation.
    pub fn shift(&self, k: usize) -> CoeffSeries {
        let t = self.trunc();
        let mut out = vec![ZERO; t + 1];
        if k <= t {
            out[k..].copy_from_slice(&self.coeffs[..=t - k]);
        }
        CoeffSeries {
            coeffs: out,
            scale_exp: self.scale_exp,
        }
    }

    /// Evaluates the truncated series at `z` by Horner's rule.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let acc = self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c);
        acc * self.scale_exp.exp()
    }
}

/// Cauchy product `a * b`.
pub fn mul(a: &CoeffSeries, b: &CoeffSeries) -> CoeffSeries {
    a.mul(b)
}

/// Coefficients of `(1 - z)^{-γ}` up to order `trunc`, by the running
/// product `Π_{i<j} (γ + i) / (i + 1)`.
pub fn binomial_neg(gamma: f64, trunc: usize) -> Result<CoeffSeries> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(HbError::InvalidParameter(format!(
            "binomial exponent must be positive, got {gamma}"
        )));
    }
    let mut out = Vec::with_capacity(trunc + 1);
    let mut scale_exp = 0.0;
    let mut c = 1.0f64;
    out.push(c);
    for i in 0..trunc {
        c *= (gamma + i as f64) / (i as f64 + 1.0);
        if c > RESCALE_THRESHOLD {
            out.iter_mut().for_each(|x| *x /= c);
            scale_exp += c.ln();
            c = 1.0;
        }
        out.push(c);
    }
    Ok(CoeffSeries::with_scale(
        out.into_iter().map(|x| Complex64::new(x, 0.0)).collect(),
        scale_exp,
    ))
}

/// Taylor coefficients of `exp(g)`.
///
/// Uses `f_0 = exp(g_0)` and `n f_n = Σ_{j=1..n} j g_j f_{n-j}`. The real part
/// of `g_0` goes straight into the scale exponent, and the stored values are
/// renormalised whenever one of them crosses [`RESCALE_THRESHOLD`].
pub fn exp_series(g: &CoeffSeries) -> CoeffSeries {
    let t = g.trunc();
    let gv = g.values();
    let jg: Vec<Complex64> = gv.iter().enumerate().map(|(j, &c)| c * j as f64).collect();
    let mut f = Vec::with_capacity(t + 1);
    f.push(Complex64::from_polar(1.0, gv[0].im));
    let mut scale_exp = gv[0].re;
    for n in 1..=t {
        let mut acc = ZERO;
        for j in 1..=n {
            acc += jg[j] * f[n - j];
        }
        let fn_ = acc / n as f64;
        f.push(fn_);
        let m = fn_.norm();
        if m > RESCALE_THRESHOLD && m.is_finite() {
            f.iter_mut().for_each(|x| *x /= m);
            scale_exp += m.ln();
        }
    }
    CoeffSeries::with_scale(f, scale_exp)
}

/// The symbol `φ = b / a`, as one of the supported families.
#[derive(Debug, Clone, PartialEq)]
pub enum PhiSpec {
    /// `z / (ζ - z)` with `|ζ| = 1`.
    LocalDirichlet { zeta: Complex64 },
    /// `z^M / (1 - z)^N`.
    RationalPole { m: usize, n: usize },
    /// `exp(β / (1 - z)^γ)`, `β > 0`, `0 < γ < 1`.
    ExpSingular { beta: f64, gamma: f64 },
    /// `P(z) / Q(z)` given by coefficient vectors, `Q(0) ≠ 0`.
    UserRational {
        numerator: Vec<Complex64>,
        denominator: Vec<Complex64>,
    },
}

impl PhiSpec {
    /// `φ ≡ 0`, so that `H(b) = H²`.
    pub fn zero() -> Self {
        PhiSpec::UserRational {
            numerator: vec![ZERO],
            denominator: vec![ONE],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            PhiSpec::LocalDirichlet { zeta } => {
                if (zeta.norm() - 1.0).abs() > 1e-12 {
                    return Err(HbError::InvalidParameter(format!(
                        "zeta must be unimodular, |zeta| = {}",
                        zeta.norm()
                    )));
                }
            }
            PhiSpec::RationalPole { n, .. } => {
                if *n < 1 {
                    return Err(HbError::InvalidParameter("pole order N must be >= 1".into()));
                }
            }
            PhiSpec::ExpSingular { beta, gamma } => {
                if !(*beta > 0.0 && beta.is_finite()) {
                    return Err(HbError::InvalidParameter(format!("beta must be > 0, got {beta}")));
                }
                if !(*gamma > 0.0 && *gamma < 1.0) {
                    return Err(HbError::InvalidParameter(format!(
                        "gamma must lie in (0, 1), got {gamma}"
                    )));
                }
            }
            PhiSpec::UserRational {
                numerator,
                denominator,
            } => {
                if numerator.is_empty() || denominator.is_empty() {
                    return Err(HbError::InvalidParameter(
                        "rational symbol needs non-empty coefficient lists".into(),
                    ));
                }
                if denominator[0] == ZERO {
                    return Err(HbError::ZeroDenominator);
                }
            }
        }
        Ok(())
    }

    /// Boundary point where `|φ|` is unbounded, for the built-in families.
    pub fn singularity(&self) -> Option<Complex64> {
        match self {
            PhiSpec::LocalDirichlet { zeta } => Some(*zeta),
            PhiSpec::RationalPole { .. } | PhiSpec::ExpSingular { .. } => Some(ONE),
            PhiSpec::UserRational { .. } => None,
        }
    }

    /// `φ(z)` for `|z| ≤ 1`, away from singularities.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            PhiSpec::LocalDirichlet { zeta } => z / (zeta - z),
            PhiSpec::RationalPole { m, n } => z.powu(*m as u32) / (ONE - z).powu(*n as u32),
            PhiSpec::ExpSingular { beta, gamma } => (*beta * (ONE - z).powf(-gamma)).exp(),
            PhiSpec::UserRational {
                numerator,
                denominator,
            } => horner(numerator, z) / horner(denominator, z),
        }
    }
}

pub(crate) fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(ZERO, |acc, &x| acc * z + x)
}

/// Taylor coefficients of `φ` up to order `trunc`.
pub fn phi_coeffs(spec: &PhiSpec, trunc: usize) -> Result<CoeffSeries> {
    spec.validate()?;
    match spec {
        PhiSpec::LocalDirichlet { zeta } => {
            // z/(ζ - z) = Σ_{j≥1} ζ^{-j} z^j
            let theta = zeta.arg();
            let c = (0..=trunc)
                .map(|j| {
                    if j == 0 {
                        ZERO
                    } else if theta == 0.0 {
                        ONE
                    } else {
                        Complex64::from_polar(1.0, -(j as f64) * theta)
                    }
                })
                .collect();
            Ok(CoeffSeries::new(c))
        }
        PhiSpec::RationalPole { m, n } => Ok(binomial_neg(*n as f64, trunc)?.shift(*m)),
        PhiSpec::ExpSingular { beta, gamma } => {
            let g = binomial_neg(*gamma, trunc)?.scale(Complex64::new(*beta, 0.0));
            Ok(exp_series(&g))
        }
        PhiSpec::UserRational {
            numerator,
            denominator,
        } => Ok(long_division(numerator, denominator, trunc)),
    }
}

/// Power-series quotient `P / Q` via `c_k = (P_k - Σ_{j≥1} Q_j c_{k-j}) / Q_0`.
fn long_division(num: &[Complex64], den: &[Complex64], trunc: usize) -> CoeffSeries {
    let q0 = den[0];
    let mut c: Vec<Complex64> = Vec::with_capacity(trunc + 1);
    let mut scale = 1.0f64;
    let mut scale_exp = 0.0;
    for k in 0..=trunc {
        let mut acc = num.get(k).copied().unwrap_or(ZERO) / scale;
        for (j, &qj) in den.iter().enumerate().skip(1).take_while(|(j, _)| *j <= k) {
            acc -= qj * c[k - j];
        }
        let ck = acc / q0;
        c.push(ck);
        let m = ck.norm();
        if m > RESCALE_THRESHOLD && m.is_finite() {
            c.iter_mut().for_each(|x| *x /= m);
            scale *= m;
            scale_exp += m.ln();
        }
    }
    CoeffSeries::with_scale(c, scale_exp)
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiSpec::LocalDirichlet { zeta } => write!(f, "dirichlet:{}", format_complex(*zeta)),
            PhiSpec::RationalPole { m, n } => write!(f, "pole:{m},{n}"),
            PhiSpec::ExpSingular { beta, gamma } => write!(f, "exp:{beta},{gamma}"),
            PhiSpec::UserRational {
                numerator,
                denominator,
            } => {
                let join = |v: &[Complex64]| {
                    v.iter().map(|&z| format_complex(z)).collect::<Vec<_>>().join(",")
                };
                write!(f, "rational:{}/{}", join(numerator), join(denominator))
            }
        }
    }
}

/// Parses the textual form used on the command line:
///
/// ```text
/// zero                      φ = 0
/// dirichlet[:ZETA]          z/(ζ - z), ζ complex (default 1)
/// dirichlet-angle:THETA     same with ζ = e^{iθ}
/// pole:M,N                  z^M/(1 - z)^N
/// exp:BETA,GAMMA            exp(β/(1 - z)^γ)
/// rational:P0,P1,../Q0,Q1,..  P(z)/Q(z)
/// ```
impl FromStr for PhiSpec {
    type Err = HbError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || HbError::InvalidParameter(format!("cannot parse symbol {s:?}"));
        let (head, arg) = s.split_once(':').unwrap_or((s, ""));
        let reals = |arg: &str| -> Result<Vec<f64>> {
            arg.split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
                .collect()
        };
        let spec = match head {
            "zero" if arg.is_empty() => PhiSpec::zero(),
            "dirichlet" => {
                let zeta = if arg.is_empty() {
                    ONE
                } else {
                    parse_complex(arg).ok_or_else(bad)?
                };
                PhiSpec::LocalDirichlet { zeta }
            }
            "dirichlet-angle" => {
                let theta: f64 = arg.trim().parse().map_err(|_| bad())?;
                PhiSpec::LocalDirichlet {
                    zeta: Complex64::from_polar(1.0, theta),
                }
            }
            "pole" => {
                let (m, n) = arg.split_once(',').ok_or_else(bad)?;
                PhiSpec::RationalPole {
                    m: m.trim().parse().map_err(|_| bad())?,
                    n: n.trim().parse().map_err(|_| bad())?,
                }
            }
            "exp" => match reals(arg)?.as_slice() {
                [beta, gamma] => PhiSpec::ExpSingular {
                    beta: *beta,
                    gamma: *gamma,
                },
                _ => return Err(bad()),
            },
            "rational" => {
                let (p, q) = arg.split_once('/').ok_or_else(bad)?;
                PhiSpec::UserRational {
                    numerator: parse_complex_list(p).ok_or_else(bad)?,
                    denominator: parse_complex_list(q).ok_or_else(bad)?,
                }
            }
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

// Used by the outer-function code to place samples off a singularity.
pub(crate) fn angle_of(z: Complex64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}
