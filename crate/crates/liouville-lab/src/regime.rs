//! Problem parameters, regime classification and the algebraic identities
//! that tie the total mass `β` to its decomposition.
//!
//! For a solution of `−Δu = e^{au} + |x|^{2N} e^u` on the plane, the total
//! normalized mass is
//!
//! ```text
//! β = (1/2π) ∫ (e^{au} + |x|^{2N} e^u) = β₁ + β₂,
//! ```
//!
//! and the Pohozaev identity determines the split `(β₁, β₂)` from `β` alone
//! whenever `a ≠ 1/(N+1)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to decide that `a` sits on a threshold.
pub const TAU_EQ: f64 = 1e-12;

/// Absolute tolerance (scaled by `max(1, β)`) below which a negative mass
/// part is treated as rounding noise rather than a window violation.
pub const TAU_MASS: f64 = 1e-10;

/// The pair `(a, N)`: exponent coefficient and weight power.
///
/// `N` is allowed to be any real number larger than `−1`; statements that
/// require `N > 0` or integer `N` are gated where they are used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    /// Coefficient in `e^{au}`; strictly positive.
    pub a: f64,
    /// Weight power in `|x|^{2N}`; strictly larger than `−1`.
    #[serde(rename = "N")]
    pub n: f64,
}

impl Params {
    /// Validates and builds a parameter pair.
    ///
    /// ```
    /// use liouville_lab::regime::Params;
    /// assert!(Params::new(1.0 / 3.0, 1.0).is_ok());
    /// assert!(Params::new(0.0, 1.0).is_err());
    /// assert!(Params::new(1.0, -1.0).is_err());
    /// ```
    pub fn new(a: f64, n: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidInput(format!("a must be positive and finite, got {a}")));
        }
        if !(n.is_finite() && n > -1.0) {
            return Err(Error::InvalidInput(format!("N must be finite and > -1, got {n}")));
        }
        Ok(Params { a, n })
    }

    /// `N + 1`.
    pub fn n1(&self) -> f64 {
        self.n + 1.0
    }

    /// The rigid threshold `1/(N+1)`.
    pub fn critical(&self) -> f64 {
        1.0 / self.n1()
    }

    /// `1 − a(N+1)`; its sign separates the two main regimes.
    pub fn gap(&self) -> f64 {
        1.0 - self.a * self.n1()
    }

    /// `true` when `a` equals `1/(N+1)` within [`TAU_EQ`].
    pub fn is_degenerate(&self) -> bool {
        approx_eq(self.a, self.critical())
    }

    fn ensure_nondegenerate(&self, what: &str) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateParameter(format!(
                "{what}: a = {} equals 1/(N+1) = {}",
                self.a,
                self.critical()
            )))
        } else {
            Ok(())
        }
    }
}

/// Relative equality with tolerance [`TAU_EQ`].
pub(crate) fn approx_eq(x: f64, y: f64) -> bool {
    (x - y).abs() <= TAU_EQ * x.abs().max(y.abs()).max(1e-300)
}

/// The parameter thresholds that organise the case analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Threshold {
    /// `1/(2(N+1))`
    HalfCritical,
    /// `1/(N+1)`
    Critical,
    /// `1/2`
    Half,
    /// `2/(N+2)`
    TwoOverNPlus2,
    /// `2/(N+1)`
    TwoOverNPlus1,
    /// `1`
    One,
    /// `2`
    Two,
}

impl Threshold {
    /// All thresholds, in declaration order.
    pub const ALL: [Threshold; 7] = [
        Threshold::HalfCritical,
        Threshold::Critical,
        Threshold::Half,
        Threshold::TwoOverNPlus2,
        Threshold::TwoOverNPlus1,
        Threshold::One,
        Threshold::Two,
    ];

    /// Numerical value of the threshold for weight power `n`.
    pub fn value(self, n: f64) -> f64 {
        match self {
            Threshold::HalfCritical => 1.0 / (2.0 * (n + 1.0)),
            Threshold::Critical => 1.0 / (n + 1.0),
            Threshold::Half => 0.5,
            Threshold::TwoOverNPlus2 => 2.0 / (n + 2.0),
            Threshold::TwoOverNPlus1 => 2.0 / (n + 1.0),
            Threshold::One => 1.0,
            Threshold::Two => 2.0,
        }
    }

    /// Human-readable symbol.
    pub fn symbol(self) -> &'static str {
        match self {
            Threshold::HalfCritical => "1/(2(N+1))",
            Threshold::Critical => "1/(N+1)",
            Threshold::Half => "1/2",
            Threshold::TwoOverNPlus2 => "2/(N+2)",
            Threshold::TwoOverNPlus1 => "2/(N+1)",
            Threshold::One => "1",
            Threshold::Two => "2",
        }
    }
}

/// Coarse branch of the blow-up analysis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    /// `0 < a < 1/(N+1)`
    Subcritical,
    /// `a = 1/(N+1)` (rigid, scale-invariant case)
    Critical,
    /// `1/(N+1) < a < 1`
    Intermediate,
    /// `a = 1` with `a > 1/(N+1)`
    UnitExponent,
    /// `a > 1` with `a > 1/(N+1)`
    Supercritical,
}

/// Which cell of the threshold partition `a` falls into.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeTag {
    /// Largest threshold strictly below `a` (none if `a` is below all).
    pub lower: Option<Threshold>,
    /// Smallest threshold strictly above `a` (none if `a` is above all).
    pub upper: Option<Threshold>,
    /// Thresholds equal to `a` within [`TAU_EQ`].
    pub equal: Vec<Threshold>,
    /// Coarse branch used by the catalog.
    pub branch: Branch,
    /// Compact description such as `"1/(2(N+1)) < a < 1/(N+1)"`.
    pub label: String,
}

impl RegimeTag {
    /// `true` if `a` equals threshold `t`.
    pub fn is_equal(&self, t: Threshold) -> bool {
        self.equal.contains(&t)
    }
}

/// Locates `a` in the ordered threshold partition for the given `N`.
///
/// ```
/// use liouville_lab::regime::{classify_regime, Params, Threshold, Branch};
/// let tag = classify_regime(Params::new(0.2, 1.0).unwrap());
/// assert_eq!(tag.upper, Some(Threshold::HalfCritical));
/// let tag = classify_regime(Params::new(0.5, 1.0).unwrap());
/// assert!(tag.is_equal(Threshold::Critical));
/// assert_eq!(tag.branch, Branch::Critical);
/// ```
pub fn classify_regime(p: Params) -> RegimeTag {
    let a = p.a;
    let mut equal = Vec::new();
    let mut above: Option<(Threshold, f64)> = None;
    let mut below: Option<(Threshold, f64)> = None;
    for t in Threshold::ALL {
        let v = t.value(p.n);
        if approx_eq(a, v) {
            equal.push(t);
        } else if v < a {
            if above.map_or(true, |(_, w)| v > w) {
                above = Some((t, v));
            }
        } else if below.map_or(true, |(_, w)| v < w) {
            below = Some((t, v));
        }
    }
    let branch = if p.is_degenerate() {
        Branch::Critical
    } else if a < p.critical() {
        Branch::Subcritical
    } else if approx_eq(a, 1.0) {
        Branch::UnitExponent
    } else if a < 1.0 {
        Branch::Intermediate
    } else {
        Branch::Supercritical
    };
    let label = if !equal.is_empty() {
        let syms: Vec<&str> = equal.iter().map(|t| t.symbol()).collect();
        format!("a = {}", syms.join(" = "))
    } else {
        match (above, below) {
            (None, Some((b, _))) => format!("a < {}", b.symbol()),
            (Some((t, _)), None) => format!("{} < a", t.symbol()),
            (Some((t, _)), Some((b, _))) => format!("{} < a < {}", t.symbol(), b.symbol()),
            (None, None) => unreachable!("threshold set is nonempty"),
        }
    };
    RegimeTag { lower: above.map(|x| x.0), upper: below.map(|x| x.0), equal, branch, label }
}

/// An interval of real numbers; `open` records whether the endpoints are
/// excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub open: bool,
}

impl Interval {
    /// Open interval `(lo, hi)`.
    pub fn open(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, open: true }
    }

    /// Closed interval `[lo, hi]`.
    pub fn closed(lo: f64, hi: f64) -> Self {
        Interval { lo, hi, open: false }
    }

    /// Membership respecting openness, with an absolute slack `tol`
    /// (positive slack widens the interval).
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        if self.open {
            x > self.lo - tol && x < self.hi + tol
        } else {
            x >= self.lo - tol && x <= self.hi + tol
        }
    }
}

/// Necessary conditions on the mass of any entire solution:
/// a strict lower bound and the window containing every admissible `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    /// `max{2/a, 2(N+1)}`, a strict lower bound.
    pub lower: f64,
    /// `(min{4/a, 4(N+1)}, max{4/a, 4(N+1)})`.
    pub window: Interval,
}

/// Lower bound and admissible window for the total mass.
///
/// ```
/// use liouville_lab::regime::{necessary_bounds, Params};
/// let b = necessary_bounds(Params::new(1.0 / 3.0, 1.0).unwrap()).unwrap();
/// assert!((b.lower - 6.0).abs() < 1e-12);
/// assert!((b.window.lo - 8.0).abs() < 1e-12 && (b.window.hi - 12.0).abs() < 1e-12);
/// ```
pub fn necessary_bounds(p: Params) -> Result<Bounds> {
    p.ensure_nondegenerate("necessary_bounds")?;
    let four_a = 4.0 / p.a;
    let four_n = 4.0 * p.n1();
    Ok(Bounds {
        lower: (2.0 / p.a).max(2.0 * p.n1()),
        window: Interval::open(four_a.min(four_n), four_a.max(four_n)),
    })
}

/// The open interval of masses attained by radial solutions.
///
/// At `a = 1/(N+1)` every radial solution has mass `4(N+1) = 4/a`; this
/// case is reported as [`Error::DegenerateParameter`].
///
/// ```
/// use liouville_lab::regime::{radial_interval, Params};
/// let i = radial_interval(Params::new(0.2, 1.0).unwrap()).unwrap();
/// assert!((i.lo - 12.0).abs() < 1e-12 && (i.hi - 20.0).abs() < 1e-12);
/// assert!(radial_interval(Params::new(0.5, 1.0).unwrap()).is_err());
/// ```
pub fn radial_interval(p: Params) -> Result<Interval> {
    p.ensure_nondegenerate("radial_interval (the only mass is 4(N+1) = 4/a)")?;
    let four_a = 4.0 / p.a;
    let four_n = 4.0 * p.n1();
    if p.a < p.critical() {
        Ok(Interval::open(four_n.max(four_a - four_n), four_a))
    } else {
        Ok(Interval::open(four_a.max(four_n - four_a), four_n))
    }
}

/// Total mass together with its two parts.
///
/// `beta1` is the normalized mass of `e^{au}`, `beta2` that of
/// `|x|^{2N} e^u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassSplit {
    pub beta: f64,
    pub beta1: f64,
    pub beta2: f64,
}

/// Mass decomposition forced by the Pohozaev identity.
///
/// The smaller part is evaluated in factored form, so that each part
/// vanishes exactly at its window endpoint, and the larger one as the
/// complement to `β`:
///
/// ```text
/// β₁ = aβ(β − 4(N+1)) / (4(1 − a(N+1))),   β₂ = β(4 − aβ) / (4(1 − a(N+1))).
/// ```
///
/// ```
/// use liouville_lab::regime::{mass_split, Params};
/// let s = mass_split(Params::new(1.0 / 3.0, 1.0).unwrap(), 10.0).unwrap();
/// assert!((s.beta1 - 5.0).abs() < 1e-12 && (s.beta2 - 5.0).abs() < 1e-12);
/// ```
pub fn mass_split(p: Params, beta: f64) -> Result<MassSplit> {
    p.ensure_nondegenerate("mass_split")?;
    let split = split_unchecked(p.a, 0.0, p.n, beta);
    let tol = TAU_MASS * beta.abs().max(1.0);
    if split.beta1 < -tol || split.beta2 < -tol {
        return Err(Error::NegativeMass { beta, beta1: split.beta1, beta2: split.beta2 });
    }
    Ok(split)
}

/// The general weighted version: for a concentration point where the two
/// weights behave like `|x|^{2α₁}` and `|x|^{2α₂}`,
///
/// ```text
/// β₀,₁ = aβ₀(β₀ − 4(α₂+1)) / (4((α₁+1) − a(α₂+1))),   β₀,₂ = β₀ − β₀,₁.
/// ```
///
/// ```
/// use liouville_lab::regime::mass_split_general;
/// let s = mass_split_general(0.5, 1.0, 0.0, 8.0).unwrap();
/// assert!((s.beta1 - 8.0 / 3.0).abs() < 1e-12 && (s.beta2 - 16.0 / 3.0).abs() < 1e-12);
/// ```
pub fn mass_split_general(a: f64, alpha1: f64, alpha2: f64, beta0: f64) -> Result<MassSplit> {
    if !(alpha1 > -1.0 && alpha2 > -1.0) {
        return Err(Error::InvalidInput(format!(
            "weights must exceed -1, got alpha1 = {alpha1}, alpha2 = {alpha2}"
        )));
    }
    if !(a > 0.0) {
        return Err(Error::InvalidInput(format!("a must be positive, got {a}")));
    }
    if approx_eq(a * (alpha2 + 1.0), alpha1 + 1.0) {
        return Err(Error::DegenerateParameter(format!(
            "a(alpha2+1) = alpha1+1 with a = {a}, alpha1 = {alpha1}, alpha2 = {alpha2}"
        )));
    }
    Ok(split_unchecked(a, alpha1, alpha2, beta0))
}

fn split_unchecked(a: f64, alpha1: f64, alpha2: f64, beta: f64) -> MassSplit {
    let denom = 4.0 * ((alpha1 + 1.0) - a * (alpha2 + 1.0));
    let beta1 = a * beta * (beta - 4.0 * (alpha2 + 1.0)) / denom;
    let beta2 = beta * (4.0 * (alpha1 + 1.0) - a * beta) / denom;
    // Keep the smaller part in factored form (it is the one that vanishes
    // at the nearby window end) and complete the other to the total, so the
    // parts add up to `β` to within one rounding.
    if beta1.abs() <= beta2.abs() {
        MassSplit { beta, beta1, beta2: beta - beta1 }
    } else {
        MassSplit { beta, beta1: beta - beta2, beta2 }
    }
}

/// Normalized residual of the global Pohozaev identity
///
/// ```text
/// 2N·(2πβ₂) + 2(1/a − 1)·(2πβ₁) = πβ(β − 4),
/// ```
///
/// divided by `max(1, πβ²)`.
///
/// ```
/// use liouville_lab::regime::{mass_split, pohozaev_global_residual, Params, MassSplit};
/// let p = Params::new(1.0 / 3.0, 1.0).unwrap();
/// let s = mass_split(p, 10.0).unwrap();
/// assert!(pohozaev_global_residual(p, &s) < 1e-14);
/// let bad = MassSplit { beta: 10.0, beta1: 10.0, beta2: 0.0 };
/// assert!(pohozaev_global_residual(p, &bad) > 0.1);
/// ```
pub fn pohozaev_global_residual(p: Params, split: &MassSplit) -> f64 {
    use std::f64::consts::PI;
    let i1 = 2.0 * PI * split.beta1;
    let i2 = 2.0 * PI * split.beta2;
    let beta = split.beta;
    let lhs = 2.0 * p.n * i2 + 2.0 * (1.0 / p.a - 1.0) * i1;
    let rhs = PI * beta * (beta - 4.0);
    (lhs - rhs).abs() / (PI * beta * beta).max(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(a: f64, n: f64) -> Params {
        Params::new(a, n).unwrap()
    }

    #[test]
    fn classification_cells() {
        let t = classify_regime(p(3.0, 1.0));
        assert_eq!(t.lower, Some(Threshold::Two));
        assert_eq!(t.upper, None);
        assert_eq!(t.branch, Branch::Supercritical);
        let t = classify_regime(p(0.2, 1.0));
        assert_eq!((t.lower, t.upper), (None, Some(Threshold::HalfCritical)));
        assert_eq!(t.branch, Branch::Subcritical);
        // N = 1: 1/(N+1) and 1/2 coincide, as do 2/(N+1) and 1.
        let t = classify_regime(p(1.0, 1.0));
        assert!(t.is_equal(Threshold::One) && t.is_equal(Threshold::TwoOverNPlus1));
        assert_eq!(t.branch, Branch::UnitExponent);
    }

    #[test]
    fn bounds_examples() {
        let b = necessary_bounds(p(0.25, 1.0)).unwrap();
        assert_eq!(b.lower, 8.0);
        assert_eq!((b.window.lo, b.window.hi), (8.0, 16.0));
        let b = necessary_bounds(p(2.0, 1.0)).unwrap();
        assert_eq!(b.lower, 4.0);
        assert_eq!((b.window.lo, b.window.hi), (2.0, 8.0));
        assert!(matches!(necessary_bounds(p(0.5, 1.0)), Err(Error::DegenerateParameter(_))));
    }

    #[test]
    fn radial_interval_examples() {
        let i = radial_interval(p(1.0 / 3.0, 1.0)).unwrap();
        assert!((i.lo - 8.0).abs() < 1e-12 && (i.hi - 12.0).abs() < 1e-12);
        let i = radial_interval(p(0.6, 1.0)).unwrap();
        assert!((i.lo - 20.0 / 3.0).abs() < 1e-12 && (i.hi - 8.0).abs() < 1e-12);
    }

    #[test]
    fn split_endpoints_are_exact_zeros() {
        let q = p(1.0 / 3.0, 1.0);
        let s = mass_split(q, 8.0).unwrap();
        assert_eq!(s.beta1, 0.0);
        assert!((s.beta2 - 8.0).abs() < 1e-12);
        let s = mass_split(q, 12.0).unwrap();
        assert_eq!(s.beta2, 0.0);
        assert!((s.beta1 - 12.0).abs() < 1e-12);
        assert!(matches!(mass_split(q, 13.0), Err(Error::NegativeMass { .. })));
    }

    #[test]
    fn general_split_examples() {
        let s = mass_split_general(1.0 / 3.0, 0.0, 1.0, 10.0).unwrap();
        assert!((s.beta1 - 5.0).abs() < 1e-12 && (s.beta2 - 5.0).abs() < 1e-12);
        let s = mass_split_general(0.7, 0.3, 2.0, 12.0).unwrap();
        assert_eq!(mass_split_general(0.7, 0.3, 2.0, 4.0 * 3.0).unwrap().beta1, 0.0);
        assert!((s.beta1 + s.beta2 - 12.0).abs() < 1e-12);
        assert!(matches!(
            mass_split_general(0.5, 0.0, 1.0, 8.0),
            Err(Error::DegenerateParameter(_))
        ));
    }

    #[test]
    fn rigid_case_pohozaev_any_split() {
        // At a = 1/(N+1) = 1/2 the identity only sees beta1 + beta2.
        let q = p(0.5, 1.0);
        for b1 in [0.0, 2.0, 5.5, 8.0] {
            let s = MassSplit { beta: 8.0, beta1: b1, beta2: 8.0 - b1 };
            assert!(pohozaev_global_residual(q, &s) < 1e-15);
        }
    }
}
