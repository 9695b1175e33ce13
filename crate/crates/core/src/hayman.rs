//! Saddle-point asymptotics for the coefficients of `exp(β / (1 - z)^γ)`.
//!
//! With `M(r) = exp(β/(1-r)^γ)`, `A(r) = r (log M)'` and `B(r) = r A'(r)`,
//! the coefficient `c_n` is compared against
//!
//! ```text
//! M(r_n) / (r_n^n sqrt(2π B(r_n))),      A(r_n) = n,
//! exp(C n^{γ/(γ+1)}) / (D n^{(γ+2)/(2γ+2)}),
//! C = (βγ)^{1/(γ+1)} (1 + 1/γ),  D = sqrt(2π(γ+1) / (βγ)^{1/(γ+1)}).
//! ```
//!
//! Every magnitude is carried as a logarithm. The saddle radius is solved in
//! the variable `s = 1 - r`, which stays well conditioned as `r → 1`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{HbError, Result};
use crate::series::{binomial_neg, exp_series};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaymanModel {
    pub beta: f64,
    pub gamma: f64,
    pub c: f64,
    pub d: f64,
}

fn constants(beta: f64, gamma: f64) -> (f64, f64) {
    let k = (beta * gamma).powf(1.0 / (gamma + 1.0));
    let c = k * (1.0 + 1.0 / gamma);
    let d = (2.0 * PI * (gamma + 1.0) / k).sqrt();
    (c, d)
}

impl HaymanModel {
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(HbError::InvalidParameter(format!("beta must be > 0, got {beta}")));
        }
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(HbError::InvalidParameter(format!("gamma must lie in (0, 1), got {gamma}")));
        }
        let (c, d) = constants(beta, gamma);
        let model = HaymanModel { beta, gamma, c, d };
        debug_assert_eq!(constants(model.beta, model.gamma), (model.c, model.d));
        Ok(model)
    }

    /// `A` as a function of `s = 1 - r`.
    fn a_of_s(&self, s: f64) -> f64 {
        self.beta * self.gamma * (1.0 - s) / s.powf(self.gamma + 1.0)
    }

    /// `B` as a function of `s = 1 - r`.
    fn b_of_s(&self, s: f64) -> f64 {
        let r = 1.0 - s;
        self.beta * self.gamma * r * (1.0 + self.gamma * r) / s.powf(self.gamma + 2.0)
    }

    /// First-order approximation `s_n ≈ (βγ/n)^{1/(γ+1)}`.
    pub fn s_first_order(&self, n: f64) -> f64 {
        (self.beta * self.gamma / n).powf(1.0 / (self.gamma + 1.0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mab {
    /// `log M(r)`.
    pub log_m: f64,
    pub a: f64,
    pub b: f64,
}

/// `log M(r)`, `A(r)` and `B(r)` for `0 < r < 1`.
pub fn mab(model: &HaymanModel, r: f64) -> Result<Mab> {
    if !(r > 0.0 && r < 1.0) {
        return Err(HbError::InvalidParameter(format!("r must lie in (0, 1), got {r}")));
    }
    let s = 1.0 - r;
    Ok(Mab {
        log_m: model.beta / s.powf(model.gamma),
        a: model.a_of_s(s),
        b: model.b_of_s(s),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleSolution {
    pub n: usize,
    pub r_n: f64,
    pub s_n: f64,
    /// `A(r_n) - n`.
    pub residual: f64,
    /// `(βγ/n)^{1/(γ+1)}`, for comparison with `s_n`.
    pub s_first_order: f64,
    pub newton_steps: usize,
}

const NEWTON_CAP: usize = 200;

/// Solves `A(r_n) = n`: bisection until the bracket on `s` is within a
/// relative width of 1e-3, then Newton with `dA/ds = -B / r`, falling back to
/// bisection whenever a step leaves the bracket.
pub fn solve_rn(model: &HaymanModel, n: usize) -> Result<SaddleSolution> {
    if n == 0 {
        return Err(HbError::InvalidParameter("saddle radius needs n >= 1".into()));
    }
    let target = n as f64;
    let f = |s: f64| model.a_of_s(s) - target;
    let s0 = model.s_first_order(target);
    // A(s0) = n (1 - s0) ≤ n, so the root lies below s0 (A decreases in s)
    let mut hi = s0.min(1.0);
    let mut lo = 0.5 * hi;
    while f(lo) < 0.0 {
        hi = lo;
        lo *= 0.5;
    }
    while hi - lo > 1e-3 * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut s = 0.5 * (lo + hi);
    let mut steps = 0;
    while steps < NEWTON_CAP {
        steps += 1;
        let fs = f(s);
        if fs == 0.0 {
            break;
        }
        if fs > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let deriv = -model.b_of_s(s) / (1.0 - s);
        let mut next = s - fs / deriv;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let moved = (next - s).abs();
        s = next;
        if moved <= 4.0 * f64::EPSILON * s {
            break;
        }
    }
    Ok(SaddleSolution {
        n,
        r_n: 1.0 - s,
        s_n: s,
        residual: f(s),
        s_first_order: s0,
        newton_steps: steps,
    })
}

/// `log` of `M(r_n) / (r_n^n sqrt(2π B(r_n)))`.
pub fn hayman_estimate(model: &HaymanModel, n: usize) -> Result<f64> {
    let sol = solve_rn(model, n)?;
    let s = sol.s_n;
    let log_m = model.beta / s.powf(model.gamma);
    let log_rn = (-s).ln_1p();
    Ok(log_m - n as f64 * log_rn - 0.5 * (2.0 * PI * model.b_of_s(s)).ln())
}

/// `log` of `exp(C n^{γ/(γ+1)}) / (D n^{(γ+2)/(2γ+2)})`.
pub fn closed_asymptotic(model: &HaymanModel, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(HbError::InvalidParameter("closed-form asymptotic needs n >= 1".into()));
    }
    let g = model.gamma;
    let nf = n as f64;
    Ok(model.c * nf.powf(g / (g + 1.0)) - model.d.ln() - (g + 2.0) / (2.0 * g + 2.0) * nf.ln())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaymanRow {
    pub n: usize,
    pub log_exact: f64,
    /// `None` for `n = 0`, where the saddle equation has no solution.
    pub log_estimate: Option<f64>,
    pub log_closed: Option<f64>,
}

impl HaymanRow {
    /// `c_n / estimate`.
    pub fn ratio_estimate(&self) -> Option<f64> {
        self.log_estimate.map(|e| (self.log_exact - e).exp())
    }

    /// `c_n / closed form`.
    pub fn ratio_closed(&self) -> Option<f64> {
        self.log_closed.map(|e| (self.log_exact - e).exp())
    }
}

/// Exact coefficients from the exponential recurrence against both estimates.
pub fn compare_exact(model: &HaymanModel, n_list: &[usize]) -> Result<Vec<HaymanRow>> {
    let nmax = n_list.iter().copied().max().unwrap_or(0);
    let g = binomial_neg(model.gamma, nmax)?.scale(Complex64::new(model.beta, 0.0));
    let exact = exp_series(&g);
    n_list
        .iter()
        .map(|&n| {
            let (log_estimate, log_closed) = if n == 0 {
                (None, None)
            } else {
                (Some(hayman_estimate(model, n)?), Some(closed_asymptotic(model, n)?))
            };
            Ok(HaymanRow {
                n,
                log_exact: exact.log_abs(n),
                log_estimate,
                log_closed,
            })
        })
        .collect()
}
