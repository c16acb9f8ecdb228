//! Algebraic conditions on configurations of blow-up points.
//!
//! Away from the origin, the points `z₁, …, z_n` where the weighted term
//! concentrates satisfy the balance equations
//!
//! ```text
//! (2N − β₀)/z_i − 4 Σ_{j≠i} 1/(z_i − z_j) = 0        (a < 1)
//!     −β₀ /z_i − (4/a) Σ_{j≠i} 1/(z_i − z_j) = 0     (a > 1)
//! ```
//!
//! where `β₀` is the mass left at the origin. With `β₀ = 0` their only
//! solutions are the vertices of a regular `(N+1)`-gon centred at the
//! origin: `z_j^{N+1} = ξ₀`. This module evaluates the residuals and the
//! summed identity, fits the roots-of-unity form, and searches for zeros
//! from random starts to exercise the converse numerically.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance of [`roots_of_unity_fit`].
pub const TAU_FIT: f64 = 1e-8;

/// Which balance identity applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "case")]
pub enum PolygonCase {
    /// `a < 1`: coefficient `2N − β₀`, interaction weight 4.
    #[serde(rename = "a_below_1")]
    BelowOne,
    /// `a > 1`: coefficient `−β₀`, interaction weight `4/a`.
    #[serde(rename = "a_above_1")]
    AboveOne { a: f64 },
}

impl PolygonCase {
    fn coefficients(self, n: f64, beta0: f64) -> (f64, f64) {
        match self {
            PolygonCase::BelowOne => (2.0 * n - beta0, 4.0),
            PolygonCase::AboveOne { a } => (-beta0, 4.0 / a),
        }
    }
}

/// A configuration of nonzero, pairwise distinct blow-up points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfig {
    pub points: Vec<Complex64>,
    /// Mass at the origin (`0` when the origin is not a blow-up point).
    pub beta0: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub case: PolygonCase,
}

impl PointConfig {
    /// Rejects zero or coincident points.
    pub fn validate(&self) -> Result<()> {
        let scale = self.points.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (i, z) in self.points.iter().enumerate() {
            if z.norm() == 0.0 {
                return Err(Error::CoincidentPoints(format!("point {i} is the origin")));
            }
            for (j, w) in self.points.iter().enumerate().skip(i + 1) {
                if (z - w).norm() <= 1e-15 * scale {
                    return Err(Error::CoincidentPoints(format!("points {i} and {j} coincide at {z}")));
                }
            }
        }
        Ok(())
    }
}

/// Per-point residual of the balance equation.
///
/// ```
/// use liouville_lab::polygon::{balance_residual, PointConfig, PolygonCase};
/// use num_complex::Complex64;
/// let cfg = PointConfig {
///     points: vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)],
///     beta0: 0.0,
///     n: 1.0,
///     case: PolygonCase::BelowOne,
/// };
/// assert!(balance_residual(&cfg).unwrap().iter().all(|r| r.norm() < 1e-15));
/// ```
pub fn balance_residual(cfg: &PointConfig) -> Result<Vec<Complex64>> {
    cfg.validate()?;
    let (c, w) = cfg.case.coefficients(cfg.n, cfg.beta0);
    Ok(cfg
        .points
        .iter()
        .enumerate()
        .map(|(i, &zi)| {
            let s: Complex64 =
                cfg.points.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &zj)| (zi - zj).inv()).sum();
            c / zi - w * s
        })
        .collect())
}

/// The scalar consequence obtained by multiplying each balance equation by
/// `z_i` and summing: `2n(n−1) = (2N − β₀)n` for `a < 1`, and
/// `(2/a)n(n−1) = −β₀ n` for `a > 1`.
///
/// ```
/// use liouville_lab::polygon::{sum_identity_check, PointConfig, PolygonCase};
/// use num_complex::Complex64;
/// let two = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
/// let cfg = PointConfig { points: two.clone(), beta0: 2.0 * (3.0 - 1.0), n: 3.0, case: PolygonCase::BelowOne };
/// assert!(sum_identity_check(&cfg));
/// let above = PointConfig { points: two, beta0: 4.0 / 3.0, n: 3.0, case: PolygonCase::AboveOne { a: 3.0 } };
/// assert!(!sum_identity_check(&above));
/// ```
pub fn sum_identity_check(cfg: &PointConfig) -> bool {
    let n = cfg.points.len() as f64;
    let (c, w) = cfg.case.coefficients(cfg.n, cfg.beta0);
    let lhs = w * n * (n - 1.0) / 2.0;
    let rhs = c * n;
    (lhs - rhs).abs() <= 1e-12 * lhs.abs().max(rhs.abs()).max(1.0)
}

/// Result of [`roots_of_unity_fit`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootsFit {
    /// `ξ₀ = (−1)^{n−1} Π z_j`, the constant with `Π_j (z − z_j) = z^n − ξ₀`.
    pub xi0: Complex64,
    /// `max_j |z_j^n − ξ₀|`.
    pub max_deviation: f64,
    /// `max_deviation < TAU_FIT · |ξ₀|`.
    pub fits: bool,
}

/// Tests whether `points` are the `n`-th roots of a single complex number.
///
/// ```
/// use liouville_lab::polygon::roots_of_unity_fit;
/// use num_complex::Complex64;
/// let pts: Vec<_> = (0..3).map(|k| Complex64::from_polar(2.0, 2.0 * std::f64::consts::PI * k as f64 / 3.0)).collect();
/// let fit = roots_of_unity_fit(&pts);
/// assert!(fit.fits && (fit.xi0 - Complex64::new(8.0, 0.0)).norm() < 1e-13);
/// ```
pub fn roots_of_unity_fit(points: &[Complex64]) -> RootsFit {
    let n = points.len() as i32;
    let prod: Complex64 = points.iter().product();
    let xi0 = if (n - 1) % 2 == 0 { prod } else { -prod };
    let max_deviation = points.iter().map(|z| (z.powi(n) - xi0).norm()).fold(0.0, f64::max);
    RootsFit { xi0, max_deviation, fits: !points.is_empty() && max_deviation < TAU_FIT * xi0.norm() }
}

/// Vertices of a regular `n`-gon: `scale · e^{i(rotation + 2πk/n)}`.
pub fn regular_polygon(n: usize, scale: f64, rotation: f64) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(scale, rotation + std::f64::consts::TAU * k as f64 / n as f64))
        .collect()
}

/// Scale-invariant form of the residual: `z_i` times the balance equation.
fn scaled_residual(z: &[Complex64], c: f64, w: f64) -> DVector<Complex64> {
    DVector::from_iterator(
        z.len(),
        (0..z.len()).map(|i| {
            let s: Complex64 = (0..z.len()).filter(|&j| j != i).map(|j| z[i] / (z[i] - z[j])).sum();
            Complex64::new(c, 0.0) - w * s
        }),
    )
}

fn scaled_jacobian(z: &[Complex64], w: f64) -> DMatrix<Complex64> {
    let n = z.len();
    DMatrix::from_fn(n, n, |i, k| {
        if i == k {
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| z[j] / (z[i] - z[j]).powi(2)).sum();
            w * s
        } else {
            -w * z[i] / (z[i] - z[k]).powi(2)
        }
    })
}

/// Outcome of one local solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalSolve {
    pub start: usize,
    pub converged: bool,
    /// `‖z_i · residual_i‖₂` at the end.
    pub residual: f64,
    pub points: Vec<Complex64>,
    /// Roots-of-unity fit of the final points (meaningful when converged).
    pub fit: RootsFit,
}

/// Damped Gauss–Newton (Levenberg–Marquardt) on the scaled residual,
/// renormalizing to unit mean modulus after each step.
fn solve_local(mut z: Vec<Complex64>, c: f64, w: f64) -> (Vec<Complex64>, bool, f64) {
    let n = z.len();
    let mut lambda = 1e-3;
    let norm_of = |z: &[Complex64]| scaled_residual(z, c, w).norm();
    let valid = |z: &[Complex64]| {
        z.iter().all(|x| x.norm() > 1e-8)
            && (0..n).all(|i| (i + 1..n).all(|j| (z[i] - z[j]).norm() > 1e-8))
    };
    let mut f = norm_of(&z);
    for _ in 0..500 {
        if f < 1e-13 {
            return (z, true, f);
        }
        let r = scaled_residual(&z, c, w);
        let j = scaled_jacobian(&z, w);
        let jh = j.adjoint();
        let mut a = &jh * &j;
        for d in 0..n {
            let diag = a[(d, d)].re;
            a[(d, d)] += Complex64::new(lambda * (1.0 + diag), 0.0);
        }
        let rhs = -(&jh * &r);
        let Some(delta) = a.lu().solve(&rhs) else {
            lambda *= 10.0;
            continue;
        };
        let mut trial: Vec<Complex64> = z.iter().zip(delta.iter()).map(|(a, b)| a + b).collect();
        let mean = trial.iter().map(|x| x.norm()).sum::<f64>() / n as f64;
        if mean > 0.0 {
            trial.iter_mut().for_each(|x| *x /= mean);
        }
        if valid(&trial) {
            let ft = norm_of(&trial);
            if ft < f {
                z = trial;
                f = ft;
                lambda = (lambda * 0.3).max(1e-15);
                continue;
            }
        }
        lambda *= 10.0;
        if lambda > 1e12 {
            break;
        }
    }
    (z, f < 1e-13, f)
}

/// Report of [`multistart_search`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultistartReport {
    #[serde(rename = "N")]
    pub n: f64,
    pub points_per_config: usize,
    pub seed: u64,
    pub starts: usize,
    pub converged: usize,
    /// Converged zeros that are not regular polygons (expected: none).
    pub fit_failures: Vec<LocalSolve>,
    /// Converged zeros violating the summed identity (expected: none).
    pub sum_identity_failures: usize,
    pub largest_fit_deviation: f64,
}

/// Searches for zeros of the `β₀ = 0`, `a < 1` balance equations with
/// `N + 1` points from `starts` random initial configurations (seeded by
/// `seed`) and checks that each zero found is a regular polygon.
pub fn multistart_search(n: u32, starts: usize, seed: u64) -> MultistartReport {
    let k = n as usize + 1;
    let c = 2.0 * n as f64;
    let w = 4.0;
    let solves: Vec<LocalSolve> = (0..starts)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 32) ^ s as u64);
            let z0: Vec<Complex64> = (0..k)
                .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let (z, converged, residual) = solve_local(z0, c, w);
            let fit = roots_of_unity_fit(&z);
            LocalSolve { start: s, converged, residual, points: z, fit }
        })
        .collect();
    let mut report = MultistartReport {
        n: n as f64,
        points_per_config: k,
        seed,
        starts,
        converged: 0,
        fit_failures: Vec::new(),
        sum_identity_failures: 0,
        largest_fit_deviation: 0.0,
    };
    for s in solves.into_iter().filter(|s| s.converged) {
        report.converged += 1;
        let rel = s.fit.max_deviation / s.fit.xi0.norm();
        report.largest_fit_deviation = report.largest_fit_deviation.max(rel);
        let cfg = PointConfig { points: s.points.clone(), beta0: 0.0, n: n as f64, case: PolygonCase::BelowOne };
        if !sum_identity_check(&cfg) {
            report.sum_identity_failures += 1;
        }
        if !s.fit.fits {
            report.fit_failures.push(s);
        }
    }
    report
}
