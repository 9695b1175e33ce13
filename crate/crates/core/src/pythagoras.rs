//! Pythagorean mates: given `φ = b / a`, recover the outer function `a`
//! (with `a(0) > 0` and `|a|² = 1 / (1 + |φ|²)` on the circle) and `b = a φ`.
//!
//! Boundary data are sampled on the midpoint grid
//! `θ_k = θ_s + 2π (k + 1/2) / K`, where `θ_s` is the argument of the
//! boundary singularity of `φ` (or 0), so no sample ever lands on it.
//! For the built-in families the singular part of `log |a|` is split off
//! as the log-modulus of an explicit analytic factor:
//!
//! | family              | analytic factor `S`          | sampled remainder            |
//! |---------------------|------------------------------|------------------------------|
//! | `z/(ζ - z)`         | `1 - conj(ζ) z`              | `-½ log(|1 - conj(ζ)z|² + 1)` |
//! | `z^M/(1 - z)^N`     | `(1 - z)^N`                  | `-½ log(|1 - z|^{2N} + 1)`    |
//! | `exp(β/(1 - z)^γ)`  | `exp(-β (1 - z)^{-γ})`       | `-½ log(1 + |φ|^{-2})`        |
//!
//! so that only a smooth remainder goes through the discrete Fourier step.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{HbError, Result};
use crate::series::{angle_of, binomial_neg, exp_series, phi_coeffs, CoeffSeries, PhiSpec};

/// Default boundary grid size.
pub const DEFAULT_GRID: usize = 1 << 16;

#[derive(Debug, Clone)]
pub struct PythagoreanPair {
    pub a: CoeffSeries,
    pub b: CoeffSeries,
    /// `a(0)`, the constant coefficient of `a`.
    pub a0: f64,
    /// `a(0)` recomputed as `S(0) · exp(mean of the sampled log-modulus)`.
    pub a0_from_mean: f64,
    pub grid_size: usize,
}

impl PythagoreanPair {
    /// Largest `| |a|² + |b|² - 1 |` over `points` equispaced boundary points
    /// lying at angular distance greater than `exclusion` from the singularity
    /// of `spec`.
    pub fn boundary_defect(&self, spec: &PhiSpec, points: usize, exclusion: f64) -> f64 {
        let sing = spec.singularity().map(angle_of);
        (0..points)
            .map(|k| 2.0 * PI * (k as f64 + 0.25) / points as f64)
            .filter(|&t| sing.map_or(true, |s| angular_distance(t, s) > exclusion))
            .map(|t| {
                let z = Complex64::from_polar(1.0, t);
                (self.a.eval(z).norm_sqr() + self.b.eval(z).norm_sqr() - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }
}

fn angular_distance(s: f64, t: f64) -> f64 {
    let d = (s - t).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn check_grid(k: usize, trunc: usize) -> Result<()> {
    if !k.is_power_of_two() || k < 4 * trunc.max(1) {
        Err(HbError::BadGrid(k))
    } else {
        Ok(())
    }
}

/// Real Fourier coefficients `L̂_m = (1/K) Σ_k L_k e^{-i m θ_k}` on the grid
/// `θ_k = offset + 2π (k + 1/2) / K`, for `0 ≤ m ≤ trunc`.
fn fourier_coeffs(samples: &[f64], offset: f64, trunc: usize) -> Result<Vec<Complex64>> {
    if let Some(index) = samples.iter().position(|x| !x.is_finite()) {
        return Err(HbError::NonFiniteSample { index });
    }
    let k = samples.len();
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(k).process(&mut buf);
    let shift = offset + PI / k as f64;
    Ok((0..=trunc)
        .map(|m| buf[m] * Complex64::from_polar(1.0 / k as f64, -(m as f64) * shift))
        .collect())
}

fn outer_from_samples(samples: &[f64], offset: f64, trunc: usize) -> Result<(CoeffSeries, f64)> {
    check_grid(samples.len(), trunc)?;
    let hat = fourier_coeffs(samples, offset, trunc)?;
    // analytic completion of the real boundary function: L̂_0 + 2 Σ_{m≥1} L̂_m z^m
    let mean = hat[0].re;
    let g = std::iter::once(Complex64::new(mean, 0.0))
        .chain(hat[1..].iter().map(|&h| 2.0 * h))
        .collect();
    Ok((exp_series(&CoeffSeries::new(g)), mean))
}

/// Outer function with boundary modulus `exp(logmod)` and positive value at 0.
///
/// `logmod[k]` is the log-modulus at `θ_k = 2π (k + 1/2) / K`. `K` must be a
/// power of two with `K ≥ 4T`.
pub fn outer_from_log_modulus(logmod: &[f64], trunc: usize) -> Result<CoeffSeries> {
    outer_from_samples(logmod, 0.0, trunc).map(|(s, _)| s)
}

/// Recovers the Pythagorean pair `(b, a)` with `φ = b / a`, using `grid`
/// boundary samples and truncating both series at `trunc`.
pub fn pair_from_phi(spec: &PhiSpec, grid: usize, trunc: usize) -> Result<PythagoreanPair> {
    spec.validate()?;
    check_grid(grid, trunc)?;
    let offset = spec.singularity().map_or(0.0, angle_of);
    let thetas = (0..grid).map(|k| offset + 2.0 * PI * (k as f64 + 0.5) / grid as f64);
    let one = Complex64::new(1.0, 0.0);

    let (factor, samples): (CoeffSeries, Vec<f64>) = match spec {
        PhiSpec::LocalDirichlet { zeta } => {
            let factor = CoeffSeries::new(vec![one, -zeta.conj()]).truncate(trunc);
            let samples = thetas
                .map(|t| {
                    let d = (one - zeta.conj() * Complex64::from_polar(1.0, t)).norm_sqr();
                    -0.5 * (d + 1.0).ln()
                })
                .collect();
            (factor, samples)
        }
        PhiSpec::RationalPole { n, .. } => {
            let mut factor = CoeffSeries::one(trunc);
            let lin = CoeffSeries::new(vec![one, -one]).truncate(trunc);
            for _ in 0..*n {
                factor = factor.mul(&lin);
            }
            let samples = thetas
                .map(|t| {
                    let d = (one - Complex64::from_polar(1.0, t)).norm();
                    -0.5 * d.powi(2 * *n as i32).ln_1p()
                })
                .collect();
            (factor, samples)
        }
        PhiSpec::ExpSingular { beta, gamma } => {
            let g = binomial_neg(*gamma, trunc)?.scale(Complex64::new(-beta, 0.0));
            let factor = exp_series(&g);
            let samples = thetas
                .map(|t| {
                    // log |φ| = β Re (1 - e^{iθ})^{-γ} > 0 for θ ∉ 2πZ
                    let log_phi = beta * (one - Complex64::from_polar(1.0, t)).powf(-gamma).re;
                    -0.5 * (-2.0 * log_phi).exp().ln_1p()
                })
                .collect();
            (factor, samples)
        }
        PhiSpec::UserRational { .. } => {
            let samples = thetas
                .map(|t| -spec.eval(Complex64::from_polar(1.0, t)).norm().hypot(1.0).ln())
                .collect();
            (CoeffSeries::one(trunc), samples)
        }
    };

    let (regular, mean) = outer_from_samples(&samples, offset, trunc)?;
    let a = factor.mul(&regular);
    let b = match spec {
        // a φ = exp(-β(1-z)^{-γ}) O · exp(β(1-z)^{-γ}) = O
        PhiSpec::ExpSingular { .. } => regular,
        _ => a.mul(&phi_coeffs(spec, trunc)?),
    };
    let a0 = a.get(0).re;
    let a0_from_mean = factor.get(0).re * mean.exp();
    Ok(PythagoreanPair {
        a,
        b,
        a0,
        a0_from_mean,
        grid_size: grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn midpoint_grid(k: usize) -> impl Iterator<Item = f64> {
        (0..k).map(move |j| 2.0 * PI * (j as f64 + 0.5) / k as f64)
    }

    fn tau() -> f64 {
        (3.0 - 5f64.sqrt()) / 2.0
    }

    #[test]
    fn outer_of_constant_modulus() {
        let s = outer_from_log_modulus(&vec![0.0; 64], 16).unwrap();
        assert_eq!(s.get(0).re, 1.0);
        assert!((1..=16).all(|k| s.get(k).norm() < 1e-15));

        let s = outer_from_log_modulus(&vec![2f64.ln(); 64], 16).unwrap();
        assert_relative_eq!(s.get(0).re, 2.0, max_relative = 1e-15);
        assert!((1..=16).all(|k| s.get(k).norm() < 1e-15));
    }

    #[test]
    fn outer_of_one_minus_z() {
        // log|1 - e^{iθ}| has a log singularity at θ = 0; the midpoint rule
        // converges like O(1/K) there, so use a fine grid.
        let k = 1 << 21;
        let logmod: Vec<f64> = midpoint_grid(k)
            .map(|t| (Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, t)).norm().ln())
            .collect();
        let s = outer_from_log_modulus(&logmod, 32).unwrap();
        let expected = [1.0, -1.0];
        for j in 0..=32 {
            let e = expected.get(j).copied().unwrap_or(0.0);
            assert!((s.get(j) - Complex64::new(e, 0.0)).norm() <= 1e-6, "coeff {j}: {}", s.get(j));
        }
    }

    #[test]
    fn outer_rejects_bad_input() {
        let mut v = vec![0.0; 64];
        v[3] = f64::NEG_INFINITY;
        assert_eq!(outer_from_log_modulus(&v, 8), Err(HbError::NonFiniteSample { index: 3 }));
        assert_eq!(outer_from_log_modulus(&[0.0; 48], 8), Err(HbError::BadGrid(48)));
        assert_eq!(outer_from_log_modulus(&[0.0; 16], 8), Err(HbError::BadGrid(16)));
    }

    #[test]
    fn local_dirichlet_pair_matches_closed_form() {
        let spec = PhiSpec::LocalDirichlet { zeta: Complex64::new(1.0, 0.0) };
        let pair = pair_from_phi(&spec, DEFAULT_GRID, 4096).unwrap();
        let t = tau();
        for k in 0..200 {
            // b = (1-τ) z/(1-τz), a = (1-τ)(1-z)/(1-τz)
            let b = if k == 0 { 0.0 } else { (1.0 - t) * t.powi(k as i32 - 1) };
            let a = if k == 0 { 1.0 - t } else { (1.0 - t) * (t.powi(k as i32) - t.powi(k as i32 - 1)) };
            assert!((pair.b.get(k) - Complex64::new(b, 0.0)).norm() <= 1e-12, "b_{k}");
            assert!((pair.a.get(k) - Complex64::new(a, 0.0)).norm() <= 1e-12, "a_{k}");
        }
        assert_relative_eq!(pair.a0, (5f64.sqrt() - 1.0) / 2.0, max_relative = 1e-12);
        assert_relative_eq!(pair.a0, pair.a0_from_mean, max_relative = 1e-8);
        assert!(pair.boundary_defect(&spec, 2000, 0.1) <= 1e-6);
    }

    #[test]
    fn rotated_local_dirichlet_is_a_rotation() {
        let zeta = Complex64::from_polar(1.0, 2.5);
        let spec = PhiSpec::LocalDirichlet { zeta };
        let pair = pair_from_phi(&spec, 1 << 12, 256).unwrap();
        let base = pair_from_phi(&PhiSpec::LocalDirichlet { zeta: Complex64::new(1.0, 0.0) }, 1 << 12, 256).unwrap();
        for k in 0..50 {
            let rot = zeta.conj().powu(k as u32);
            assert!((pair.a.get(k) - base.a.get(k) * rot).norm() < 1e-12);
            assert!((pair.b.get(k) - base.b.get(k) * rot).norm() < 1e-12);
        }
        assert!(pair.boundary_defect(&spec, 2000, 0.1) <= 1e-6);
    }

    #[test]
    fn zero_symbol_gives_trivial_pair() {
        let pair = pair_from_phi(&PhiSpec::zero(), 64, 16).unwrap();
        assert_eq!(pair.a0, 1.0);
        assert_eq!(pair.a.values(), CoeffSeries::one(16).values());
        assert!(pair.b.values().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn pythagorean_identity_for_every_family() {
        let cases: Vec<(PhiSpec, usize)> = vec![
            (PhiSpec::RationalPole { m: 0, n: 1 }, 4096),
            (PhiSpec::RationalPole { m: 1, n: 2 }, 4096),
            (PhiSpec::RationalPole { m: 2, n: 3 }, 4096),
            (PhiSpec::ExpSingular { beta: 1.0, gamma: 0.5 }, 4096),
            ("rational:1,1/2,-1".parse().unwrap(), 512),
        ];
        for (spec, trunc) in cases {
            let pair = pair_from_phi(&spec, DEFAULT_GRID, trunc).unwrap();
            let defect = pair.boundary_defect(&spec, 1000, 0.1);
            assert!(defect <= 1e-6, "{spec}: defect {defect}");
            assert!(pair.a0 > 0.0);
            assert_relative_eq!(pair.a0, pair.a0_from_mean, max_relative = 1e-8);
        }
    }

    #[test]
    fn b_over_a_reproduces_phi() {
        for spec in [PhiSpec::RationalPole { m: 1, n: 2 }, PhiSpec::ExpSingular { beta: 1.0, gamma: 0.5 }] {
            let pair = pair_from_phi(&spec, 1 << 14, 1024).unwrap();
            let phi = phi_coeffs(&spec, 1024).unwrap();
            let ab = pair.a.mul(&phi);
            for k in 0..40 {
                let scale = pair.b.get(k).norm().max(1e-3);
                assert!((ab.get(k) - pair.b.get(k)).norm() <= 1e-8 * scale.max(1.0), "{spec} k={k}");
            }
        }
    }

    #[test]
    fn refining_the_grid_does_not_move_a() {
        for spec in [
            PhiSpec::LocalDirichlet { zeta: Complex64::new(1.0, 0.0) },
            PhiSpec::RationalPole { m: 0, n: 3 },
            PhiSpec::ExpSingular { beta: 2.0, gamma: 1.0 / 3.0 },
        ] {
            let t = 1024;
            let coarse = pair_from_phi(&spec, 1 << 14, t).unwrap();
            let fine = pair_from_phi(&spec, 1 << 15, t).unwrap();
            for k in 0..t / 2 {
                assert!((coarse.a.get(k) - fine.a.get(k)).norm() <= 1e-6, "{spec} k={k}");
            }
        }
    }
}
