//! Conical metrics on the sphere associated with blow-up configurations.
//!
//! A limiting profile with `m` finite concentration points (and possibly the
//! origin) defines, through `g = e^{2u}|dz|²`, a metric of curvature `1` on
//! the Riemann sphere with conical singularities. Angles are stored as
//! deficits `θ = α/2π − 1`. This module computes these deficits, the
//! Gauss–Bonnet area, the Troyanov-type solvability inequalities, and the
//! two scans that check the classification's geometric claims.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::{beta_formula_a, m_range_with_origin};
use crate::error::{Error, Result};

/// Euler characteristic of the sphere.
pub const EULER_SPHERE: f64 = 2.0;

/// Margin below which a scan point is considered to sit on a boundary of
/// the inequality system.
pub const NEAR_BOUNDARY: f64 = 1e-9;

/// Deficits of a conical metric on the sphere.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicalData {
    /// Deficit at the origin, when the origin is a singular point.
    pub theta0: Option<f64>,
    /// Deficits at the finite concentration points.
    pub thetas: Vec<f64>,
    /// Deficit at infinity.
    pub theta_inf: f64,
    /// Euler characteristic (always 2).
    pub euler: f64,
    /// Set when some cone angle exceeds `2π`; the inequalities are then
    /// sufficient but no longer necessary for existence.
    #[serde(default)]
    pub sufficient_only: bool,
}

impl ConicalData {
    /// Checks that every cone angle is positive (`θ > −1`).
    pub fn validate(&self) -> Result<()> {
        let all = self.theta0.iter().chain(self.thetas.iter()).chain(std::iter::once(&self.theta_inf));
        for &t in all {
            if !(t > -1.0) {
                return Err(Error::AngleNonPositive(format!("deficit {t} <= -1")));
            }
        }
        Ok(())
    }

    /// Sum of all deficits.
    pub fn total_deficit(&self) -> f64 {
        self.theta0.unwrap_or(0.0) + self.thetas.iter().sum::<f64>() + self.theta_inf
    }
}

/// Cone deficits for `m` finite points (and optionally the origin):
/// `θ_j = −2a`, `θ₀ = −2a(N+1)`, and
/// `θ_∞ = −4aM(1 − a(N+1)) / (1 + √(1 − 4aM(1 − a(N+1))))`
/// with `M = m`, or `M = N+1+m` when the origin is included.
///
/// ```
/// use liouville_lab::geometry::angles_from_case;
/// let cd = angles_from_case(0.125, 3.0, 2, false).unwrap();
/// assert_eq!(cd.thetas, vec![-0.25, -0.25]);
/// assert!((cd.theta_inf + 0.5 / (1.0 + 0.5f64.sqrt())).abs() < 1e-15);
/// ```
pub fn angles_from_case(a: f64, n: f64, m: u32, include_origin: bool) -> Result<ConicalData> {
    if !(a > 0.0) || !(n > -1.0) {
        return Err(Error::InvalidInput(format!("need a > 0 and N > -1 (a={a}, N={n})")));
    }
    let n1 = n + 1.0;
    let theta_j = -2.0 * a;
    let theta0 = include_origin.then_some(-2.0 * a * n1);
    if m > 0 && !(theta_j > -1.0) {
        return Err(Error::AngleNonPositive(format!("finite-point angle 2π(1 − 2a) <= 0 for a = {a}")));
    }
    if let Some(t0) = theta0 {
        if !(t0 > -1.0) {
            return Err(Error::AngleNonPositive(format!("origin angle 2π(1 − 2a(N+1)) <= 0 for a = {a}, N = {n}")));
        }
    }
    let big_m = m as f64 + if include_origin { n1 } else { 0.0 };
    let q = 4.0 * a * big_m * (1.0 - a * n1);
    let rad = 1.0 - q;
    if rad < 0.0 {
        return Err(Error::ComplexRoot { context: "angle at infinity".into(), radicand: rad });
    }
    let theta_inf = -q / (1.0 + rad.sqrt());
    let cd = ConicalData {
        theta0,
        thetas: vec![theta_j; m as usize],
        theta_inf,
        euler: EULER_SPHERE,
        sufficient_only: theta_inf > 0.0,
    };
    cd.validate()?;
    Ok(cd)
}

/// Normalized area `χ + Σθ = (1/2π)∫ e^{2u}`.
pub fn gauss_bonnet_mass(cd: &ConicalData) -> f64 {
    cd.euler + cd.total_deficit()
}

/// The closed form of the Gauss–Bonnet area for [`angles_from_case`]:
/// `2 − 2aM' − 4aM(1−a(N+1))/(1+√(1−4aM(1−a(N+1))))`, where `M' = m`
/// without the origin and `M' = M = N+1+m` with it.
pub fn gauss_bonnet_closed_form(a: f64, n: f64, m: u32, include_origin: bool) -> Result<f64> {
    let n1 = n + 1.0;
    let big_m = m as f64 + if include_origin { n1 } else { 0.0 };
    let q = 4.0 * a * big_m * (1.0 - a * n1);
    if q > 1.0 {
        return Err(Error::ComplexRoot { context: "Gauss–Bonnet closed form".into(), radicand: 1.0 - q });
    }
    Ok(2.0 - 2.0 * a * big_m - q / (1.0 + (1.0 - q).sqrt()))
}

/// The same area from the mass formula: `(a/2)(β_A − 4m)`.
pub fn gauss_bonnet_from_formula_a(a: f64, n: f64, m: u32) -> Result<f64> {
    Ok(0.5 * a * (beta_formula_a(a, n, m)? - 4.0 * m as f64))
}

/// One inequality `lhs > rhs` with its margin `lhs − rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub label: String,
    pub margin: f64,
}

/// Outcome of [`troyanov_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TroyanovReport {
    /// `true` iff every inequality holds strictly.
    pub ok: bool,
    pub residuals: Vec<Inequality>,
    /// Copied from the input.
    pub sufficient_only: bool,
}

impl TroyanovReport {
    /// Smallest margin in absolute value.
    pub fn min_abs_margin(&self) -> f64 {
        self.residuals.iter().map(|r| r.margin.abs()).fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the solvability inequalities for a conical metric of curvature
/// 1 on the sphere:
///
/// * each point dominates the others: `θ_i > Σ_{j≠i} θ_j` over all singular
///   points including `∞` (and the origin when present);
/// * positive area: `χ + Σθ > 0`.
///
/// All comparisons are strict and exact.
///
/// ```
/// use liouville_lab::geometry::{angles_from_case, troyanov_check};
/// assert!(troyanov_check(&angles_from_case(0.125, 3.0, 2, false).unwrap()).ok);
/// assert!(!troyanov_check(&angles_from_case(0.125, 3.0, 1, false).unwrap()).ok);
/// ```
pub fn troyanov_check(cd: &ConicalData) -> TroyanovReport {
    let total = cd.total_deficit();
    let mut residuals = Vec::new();
    for (i, &t) in cd.thetas.iter().enumerate() {
        residuals.push(Inequality { label: format!("theta_{}", i + 1), margin: t - (total - t) });
    }
    residuals.push(Inequality { label: "theta_inf".into(), margin: cd.theta_inf - (total - cd.theta_inf) });
    if let Some(t0) = cd.theta0 {
        residuals.push(Inequality { label: "theta_0".into(), margin: t0 - (total - t0) });
    }
    residuals.push(Inequality { label: "gauss_bonnet".into(), margin: cd.euler + total });
    let ok = residuals.iter().all(|r| r.margin > 0.0);
    TroyanovReport { ok, residuals, sufficient_only: cd.sufficient_only }
}

/// A rectangular grid of parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub a_values: Vec<f64>,
    pub n_values: Vec<f64>,
}

impl ScanGrid {
    /// `a ∈ {0.02, …, 0.24}`, `N ∈ {1.5, 2, 3, 4.5}`.
    pub fn default_equivalence() -> Self {
        ScanGrid { a_values: (1..=12).map(|k| 0.02 * k as f64).collect(), n_values: vec![1.5, 2.0, 3.0, 4.5] }
    }

    /// Small exponents (geometric spacing from `1e-3`), `N ∈ {0.5, 1, 2, 3, 4.5}`.
    pub fn default_claim() -> Self {
        ScanGrid {
            a_values: (0..40).map(|k| 1e-3 * 1.12f64.powi(k)).collect(),
            n_values: vec![0.5, 1.0, 2.0, 3.0, 4.5],
        }
    }

    fn points(&self) -> Vec<(f64, f64)> {
        self.n_values.iter().flat_map(|&n| self.a_values.iter().map(move |&a| (a, n))).collect()
    }
}

/// One evaluated `(a, N, m)` of a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub a: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub m: u32,
    /// Result of the inequality system.
    pub troyanov: bool,
    /// The predicted outcome.
    pub expected: bool,
    pub min_abs_margin: f64,
}

/// Result of [`equivalence_scan`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub grid: ScanGrid,
    /// Number of `(a, N, m)` evaluated.
    pub checked: usize,
    /// Grid points outside `0 < a < 1/(N+1)`, skipped.
    pub skipped: usize,
    /// Disagreements with margin at least [`NEAR_BOUNDARY`].
    pub violations: Vec<ScanPoint>,
    /// Points whose smallest margin is below [`NEAR_BOUNDARY`].
    pub near_boundary_excluded: Vec<ScanPoint>,
}

fn classify_point(pt: ScanPoint, violations: &mut Vec<ScanPoint>, near: &mut Vec<ScanPoint>) {
    if pt.min_abs_margin < NEAR_BOUNDARY {
        near.push(pt);
    } else if pt.troyanov != pt.expected {
        violations.push(pt);
    }
}

/// Checks that, for `0 < a < 1/(N+1)` and each `m ∈ [1, ⌈N⌉+3]`, the
/// inequalities for `angles_from_case(a, N, m, false)` hold exactly when
/// `2 ≤ m < N+1`.
pub fn equivalence_scan(grid: &ScanGrid) -> EquivalenceReport {
    let pts = grid.points();
    let per_point: Vec<Option<Vec<ScanPoint>>> = pts
        .par_iter()
        .map(|&(a, n)| {
            if !(a > 0.0 && a < 1.0 / (n + 1.0)) {
                return None;
            }
            let m_max = n.ceil() as u32 + 3;
            Some(
                (1..=m_max)
                    .map(|m| {
                        let expected = m >= 2 && (m as f64) < n + 1.0;
                        let (troyanov, min_abs_margin) = match angles_from_case(a, n, m, false) {
                            Ok(cd) => {
                                let r = troyanov_check(&cd);
                                (r.ok, r.min_abs_margin())
                            }
                            Err(_) => (false, f64::INFINITY),
                        };
                        ScanPoint { a, n, m, troyanov, expected, min_abs_margin }
                    })
                    .collect(),
            )
        })
        .collect();
    let mut report = EquivalenceReport {
        grid: grid.clone(),
        checked: 0,
        skipped: 0,
        violations: Vec::new(),
        near_boundary_excluded: Vec::new(),
    };
    for item in per_point {
        match item {
            None => report.skipped += 1,
            Some(list) => {
                for pt in list {
                    report.checked += 1;
                    classify_point(pt, &mut report.violations, &mut report.near_boundary_excluded);
                }
            }
        }
    }
    report
}

/// Result of [`claim_never_6220`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimReport {
    pub grid: ScanGrid,
    pub checked: usize,
    /// Grid points outside `0 < a < 1/(2(N+1))`, skipped.
    pub skipped: usize,
    /// Grid points whose multiplicity range is empty.
    pub no_admissible_m: Vec<(f64, f64)>,
    /// Points where the inequality held (expected: none).
    pub satisfactions: Vec<ScanPoint>,
    pub near_boundary_excluded: Vec<ScanPoint>,
}

/// Margin of `θ_∞ > −2a(N+1+m)` when the origin and `m` further points
/// concentrate.
pub fn origin_inequality_margin(a: f64, n: f64, m: u32) -> Result<f64> {
    let cd = angles_from_case(a, n, m, true)?;
    Ok(cd.theta_inf + 2.0 * a * (n + 1.0 + m as f64))
}

/// Checks that when the origin concentrates together with `m ≥ 1` further
/// points, the first inequality `θ_∞ > −2a(N+1+m)` of the system fails for
/// every admissible `m`.
pub fn claim_never_6220(grid: &ScanGrid) -> ClaimReport {
    let pts = grid.points();
    enum Item {
        Skip,
        Empty(f64, f64),
        Points(Vec<ScanPoint>),
    }
    let items: Vec<Item> = pts
        .par_iter()
        .map(|&(a, n)| {
            let Ok(range) = m_range_with_origin(a, n) else { return Item::Skip };
            if range.is_empty() {
                return Item::Empty(a, n);
            }
            Item::Points(
                range
                    .iter()
                    .map(|m| {
                        let m = m as u32;
                        let (holds, margin) = match origin_inequality_margin(a, n, m) {
                            Ok(x) => (x > 0.0, x.abs()),
                            Err(_) => (false, f64::INFINITY),
                        };
                        ScanPoint { a, n, m, troyanov: holds, expected: false, min_abs_margin: margin }
                    })
                    .collect(),
            )
        })
        .collect();
    let mut report = ClaimReport {
        grid: grid.clone(),
        checked: 0,
        skipped: 0,
        no_admissible_m: Vec::new(),
        satisfactions: Vec::new(),
        near_boundary_excluded: Vec::new(),
    };
    for item in items {
        match item {
            Item::Skip => report.skipped += 1,
            Item::Empty(a, n) => report.no_admissible_m.push((a, n)),
            Item::Points(list) => {
                for pt in list {
                    report.checked += 1;
                    classify_point(pt, &mut report.satisfactions, &mut report.near_boundary_excluded);
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_example() {
        let cd = angles_from_case(1.0 / 12.0, 1.0, 1, true).unwrap();
        assert!((cd.theta0.unwrap() + 1.0 / 3.0).abs() < 1e-15);
        assert!((cd.thetas[0] + 1.0 / 6.0).abs() < 1e-15);
        let q: f64 = 4.0 / 12.0 * 3.0 * (1.0 - 2.0 / 12.0);
        assert!((cd.theta_inf + q / (1.0 + (1.0 - q).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn gauss_bonnet_examples() {
        let cd = angles_from_case(0.125, 3.0, 2, false).unwrap();
        let g = gauss_bonnet_mass(&cd);
        assert!((g - 1.207_106_781_186_547_5).abs() < 1e-12);
        assert!((g - gauss_bonnet_closed_form(0.125, 3.0, 2, false).unwrap()).abs() < 1e-15);
        assert!((g - gauss_bonnet_from_formula_a(0.125, 3.0, 2).unwrap()).abs() < 1e-12);
        let smooth = angles_from_case(0.2, 1.0, 0, false).unwrap();
        assert_eq!(smooth.theta_inf, 0.0);
        assert_eq!(gauss_bonnet_mass(&smooth), 2.0);
    }

    #[test]
    fn large_exponent_refused() {
        assert!(matches!(angles_from_case(0.5, 1.0, 1, false), Err(Error::AngleNonPositive(_))));
        assert!(matches!(angles_from_case(0.7, 1.0, 2, false), Err(Error::AngleNonPositive(_))));
    }

    #[test]
    fn default_scans_are_clean() {
        let r = equivalence_scan(&ScanGrid::default_equivalence());
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert!(r.checked > 100);
        let c = claim_never_6220(&ScanGrid::default_claim());
        assert!(c.satisfactions.is_empty(), "{:?}", c.satisfactions);
        assert!(c.checked > 0);
    }

    #[test]
    fn claim_small_examples() {
        let r = m_range_with_origin(0.05, 1.0).unwrap();
        assert_eq!((r.lo, r.hi), (1, 3));
        for m in 1..=3 {
            assert!(origin_inequality_margin(0.05, 1.0, m).unwrap() <= 0.0);
        }
    }
}
