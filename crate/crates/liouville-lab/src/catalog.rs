//! Admissible limiting masses of blow-up sequences.
//!
//! For a sequence of solutions concentrating at the origin, the limiting
//! mass `β^∞` can only take a restricted set of values. This module holds
//! the closed-form mass formulas, their integer multiplicity ranges, the
//! auxiliary one-variable functions used to derive those ranges, and
//! [`enumerate`], which lists every admissible value for given `(a, N)`.
//!
//! Mechanisms whose occurrence is conjectured to be spurious are still
//! listed, with `suspect = true`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::regime::{self, approx_eq, classify_regime, Branch, Params, RegimeTag};

/// Radicands in `[-SNAP, 0)` (scaled by the magnitude of their terms) are
/// treated as exact zeros: integer endpoints of the ranges sit on them.
pub const SNAP: f64 = 1e-14;

/// Relative tolerance of [`sum_constraint_check`].
pub const TAU_SUM: f64 = 1e-9;

fn sqrt_snap(x: f64, scale: f64, context: &str) -> Result<f64> {
    if x >= 0.0 {
        Ok(x.sqrt())
    } else if x >= -SNAP * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::ComplexRoot { context: context.to_string(), radicand: x })
    }
}

/// How a catalog value arises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Mechanism {
    /// `4(N+1)`: only the weighted term concentrates.
    PolygonOnly4N1,
    /// `4/a − 4(N+1)`: origin mass minus the polygon contribution.
    OriginMinusPolygon,
    /// `4/a`: the whole mass is carried by `e^{au}`.
    FullMass4overA,
    /// `(2/a)(1 + √(1 − 4am(1 − a(N+1))))`.
    FormulaA,
    /// The `m`-point formula with one distinguished unit-modulus point.
    FormulaB,
    /// `2(N+1 + √((N+1)² − (4m/a²)(a(N+1) − 1)))`.
    FormulaC,
    /// `4Nm / ((a(N+1) − 1) + m(1 − a))` with all point masses equal.
    EqualMasses,
    /// The continuous window `2(N+1) ≤ β ≤ 4(N+1) − 4/a`.
    Window06,
    /// Masses compatible with the sum-of-squares budget.
    SumConstraint,
}

/// Whether the sequence blows up or vanishes locally uniformly away from
/// the concentration set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Case {
    BlowUp,
    Vanishing,
}

/// An inclusive integer range; empty when `hi < lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    /// `true` if the range contains no integer.
    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    /// Membership test.
    pub fn contains(&self, m: i64) -> bool {
        self.lo <= m && m <= self.hi
    }

    /// The integers of the range in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

/// Largest integer `≤ x`, treating values within `1e-12` below an integer
/// as that integer.
fn floor_incl(x: f64) -> i64 {
    (x + 1e-12 * x.abs().max(1.0)).floor() as i64
}

/// Largest integer `< x`, treating values within `1e-12` of an integer as
/// that integer (hence excluded).
fn floor_strict(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() <= 1e-12 * x.abs().max(1.0) {
        r as i64 - 1
    } else {
        x.floor() as i64
    }
}

/// `(2/a)(1 + √(1 − 4am(1 − a(N+1))))`.
///
/// The same expression covers `a > 1/(N+1)`, where the radicand exceeds 1.
///
/// ```
/// use liouville_lab::catalog::beta_formula_a;
/// let v = beta_formula_a(0.125, 3.0, 2).unwrap();
/// assert!((v - 16.0 * (1.0 + 0.5f64.sqrt())).abs() < 1e-12);
/// assert!((beta_formula_a(0.4, 1.0, 0).unwrap() - 10.0).abs() < 1e-12);
/// ```
pub fn beta_formula_a(a: f64, n: f64, m: u32) -> Result<f64> {
    let term = 4.0 * a * m as f64 * (1.0 - a * (n + 1.0));
    let root = sqrt_snap(1.0 - term, 1.0 + term.abs(), "formula A")?;
    Ok((2.0 / a) * (1.0 + root))
}

/// A value of the distinguished-point formula together with the mass of the
/// distinguished point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FormulaB {
    /// Total mass `β`.
    pub value: f64,
    /// Mass `β_{j₀}` of the unit-modulus point; `β = β_{j₀} + 4(m − 1)`.
    pub companion: f64,
}

/// The distinguished-point formula
///
/// ```text
/// β = (2/a)(T + √(T² + (4(m−1)ma/N)(1 − a(N+1)))),   T = 1 − 2(m−1)(1 − a(N+1))/N,
/// ```
///
/// with the companion mass `β_{j₀} = (2/a)(T' + √(T'² + 4(1−a)a(m−1)(N+2−m)/N))`,
/// `T' = 1 − 2(m−1)(1−a)/N`.
///
/// This is the raw algebraic formula (`N > 0`, `m ≥ 1`); use
/// [`beta_formula_b_checked`] to also enforce regime and range.
///
/// ```
/// use liouville_lab::catalog::beta_formula_b;
/// let b = beta_formula_b(0.3, 3.0, 2).unwrap();
/// assert!((b.value - 14.6249).abs() < 1e-4);
/// assert!((b.value - (b.companion + 4.0)).abs() < 1e-12);
/// ```
pub fn beta_formula_b(a: f64, n: f64, m: u32) -> Result<FormulaB> {
    if !(n > 0.0) || m < 1 || !(a > 0.0) {
        return Err(Error::OutOfDomain(format!("formula B needs a > 0, N > 0, m >= 1 (a={a}, N={n}, m={m})")));
    }
    let mm1 = m as f64 - 1.0;
    let g = 1.0 - a * (n + 1.0);
    let t = 1.0 - 2.0 * mm1 * g / n;
    let extra = (4.0 * mm1 * m as f64 * a / n) * g;
    let root = sqrt_snap(t * t + extra, t * t + extra.abs(), "formula B")?;
    let value = (2.0 / a) * (t + root);
    let tp = 1.0 - 2.0 * mm1 * (1.0 - a) / n;
    let extra_p = 4.0 * (1.0 - a) * a * mm1 * (n + 2.0 - m as f64) / n;
    let root_p = sqrt_snap(tp * tp + extra_p, tp * tp + extra_p.abs(), "formula B companion")?;
    let companion = (2.0 / a) * (tp + root_p);
    Ok(FormulaB { value, companion })
}

/// [`beta_formula_b`] restricted to `0 < a < 1/(N+1)`, `N ≥ 1` and `m` in
/// its admissible range.
pub fn beta_formula_b_checked(a: f64, n: f64, m: u32) -> Result<FormulaB> {
    let range = m_ranges(a, n, Mechanism::FormulaB)?;
    if !range.contains(m as i64) {
        return Err(Error::OutOfRegime(format!("m = {m} outside the formula B range [{}, {}]", range.lo, range.hi)));
    }
    beta_formula_b(a, n, m)
}

/// `2(N+1 + √((N+1)² − (4m/a²)(a(N+1) − 1)))` for `a > max{1, 2/(N+1)}`.
///
/// ```
/// use liouville_lab::catalog::beta_formula_c;
/// // m = 1 collapses to 4(N+1) - 4/a.
/// let v = beta_formula_c(3.0, 1.0, 1).unwrap();
/// assert!((v - (8.0 - 4.0 / 3.0)).abs() < 1e-12);
/// assert!(beta_formula_c(3.0, 1.0, 2).is_err());
/// ```
pub fn beta_formula_c(a: f64, n: f64, m: u32) -> Result<f64> {
    if !(a > 1.0f64.max(2.0 / (n + 1.0))) {
        return Err(Error::OutOfRegime(format!("formula C needs a > max(1, 2/(N+1)); a = {a}, N = {n}")));
    }
    let n1 = n + 1.0;
    let sub = (4.0 * m as f64 / (a * a)) * (a * n1 - 1.0);
    let root = sqrt_snap(n1 * n1 - sub, n1 * n1 + sub, "formula C")?;
    Ok(2.0 * (n1 + root))
}

/// Total and per-point mass when all `m` concentration points carry the
/// same mass: `β = 4Nm/((a(N+1)−1) + m(1−a))`, `β_each = β/m ≥ 2/a`.
///
/// ```
/// use liouville_lab::catalog::beta_equal_masses;
/// let (b, each) = beta_equal_masses(1.0 / 3.0, 6.0, 2).unwrap();
/// assert!((b - 18.0).abs() < 1e-12 && (each - 9.0).abs() < 1e-12);
/// ```
pub fn beta_equal_masses(a: f64, n: f64, m: u32) -> Result<(f64, f64)> {
    let range = m_ranges(a, n, Mechanism::EqualMasses)?;
    if !range.contains(m as i64) {
        return Err(Error::OutOfRegime(format!("m = {m} outside the equal-mass range [{}, {}]", range.lo, range.hi)));
    }
    let mf = m as f64;
    let beta = 4.0 * n * mf / ((a * (n + 1.0) - 1.0) + mf * (1.0 - a));
    Ok((beta, beta / mf))
}

/// Box and threshold variant of the sum-of-squares constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumCase {
    /// `1/(N+1) < a < 1`: `β_j ∈ [4, 4/a]`, `max β_j ≥ 2/a`.
    BelowOne,
    /// `a > max{1, 2/(N+1)}`: `β_j ∈ [4/a, 4]`, `max β_j ≥ 2`.
    AboveOne,
}

impl SumCase {
    fn for_params(a: f64, n: f64) -> Result<Self> {
        let critical = 1.0 / (n + 1.0);
        if a > critical && a < 1.0 && !approx_eq(a, critical) && !approx_eq(a, 1.0) {
            Ok(SumCase::BelowOne)
        } else if a > 1.0f64.max(2.0 / (n + 1.0)) {
            Ok(SumCase::AboveOne)
        } else {
            Err(Error::OutOfRegime(format!("no sum-of-squares constraint for a = {a}, N = {n}")))
        }
    }

    /// `(box_lo, box_hi, threshold)`.
    pub fn box_and_threshold(self, a: f64) -> (f64, f64, f64) {
        match self {
            SumCase::BelowOne => (4.0, 4.0 / a, 2.0 / a),
            SumCase::AboveOne => (4.0 / a, 4.0, 2.0),
        }
    }
}

/// The sum-of-squares budget `Q(β) = β(4N − (1−a)β)/(a(N+1) − 1)`.
pub fn quadratic_budget(a: f64, n: f64, beta: f64) -> f64 {
    beta * (4.0 * n - (1.0 - a) * beta) / (a * (n + 1.0) - 1.0)
}

/// A candidate list of point masses for the sum-of-squares mechanism.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumConstraintWitness {
    pub betas: Vec<f64>,
    pub m: usize,
}

/// Outcome of [`sum_constraint_check`]; every residual is a signed margin
/// that is `≤ 0` (up to tolerance) when the constraint holds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumConstraintReport {
    pub ok: bool,
    /// Total `β = Σβ_j`.
    pub beta: f64,
    /// Largest violation of the box constraints.
    pub box_violation: f64,
    /// `threshold − max β_j`.
    pub threshold_violation: f64,
    /// `|m − len(betas)|`.
    pub count_mismatch: f64,
    /// `|Σβ_j² − Q(β)|`.
    pub squares_residual: f64,
    /// Whether `m` lies in the admissible multiplicity range.
    pub m_in_range: bool,
}

/// Checks a witness against the box, threshold, count, sum-of-squares and
/// multiplicity constraints of `case`.
///
/// ```
/// use liouville_lab::catalog::{sum_constraint_check, SumCase, SumConstraintWitness};
/// let ok = sum_constraint_check(1.0 / 3.0, 6.0, &SumConstraintWitness { betas: vec![9.0, 9.0], m: 2 }, SumCase::BelowOne);
/// assert!(ok.ok);
/// let bad = sum_constraint_check(1.0 / 3.0, 6.0, &SumConstraintWitness { betas: vec![12.0, 6.0], m: 2 }, SumCase::BelowOne);
/// assert!(!bad.ok);
/// ```
pub fn sum_constraint_check(a: f64, n: f64, w: &SumConstraintWitness, case: SumCase) -> SumConstraintReport {
    let (lo, hi, thr) = case.box_and_threshold(a);
    let beta: f64 = w.betas.iter().sum();
    let scale = beta.abs().max(1.0);
    let box_violation = w.betas.iter().map(|&b| (lo - b).max(b - hi)).fold(f64::NEG_INFINITY, f64::max);
    let max_b = w.betas.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let threshold_violation = thr - max_b;
    let count_mismatch = (w.m as f64 - w.betas.len() as f64).abs();
    let ss: f64 = w.betas.iter().map(|b| b * b).sum();
    let squares_residual = (ss - quadratic_budget(a, n, beta)).abs();
    let m_in_range = match m_ranges(a, n, Mechanism::SumConstraint) {
        Ok(r) => SumCase::for_params(a, n) == Ok(case) && r.contains(w.m as i64),
        Err(_) => false,
    };
    let ok = !w.betas.is_empty()
        && box_violation <= TAU_SUM * scale
        && threshold_violation <= TAU_SUM * scale
        && count_mismatch == 0.0
        && squares_residual <= TAU_SUM * scale * scale
        && m_in_range;
    SumConstraintReport { ok, beta, box_violation, threshold_violation, count_mismatch, squares_residual, m_in_range }
}

/// Smallest `Σx_j²` over `x ∈ [lo, hi]^m`, `x₁ ≥ l1`, `Σx_j = β`
/// (water-filling), or `None` if infeasible.
fn min_sum_squares(m: usize, lo: f64, hi: f64, l1: f64, beta: f64) -> Option<f64> {
    if beta < l1 + (m as f64 - 1.0) * lo - 1e-12 || beta > m as f64 * hi + 1e-12 || l1 > hi {
        return None;
    }
    let total = |mu: f64| mu.clamp(l1, hi) + (m as f64 - 1.0) * mu.clamp(lo, hi);
    let (mut a, mut b) = (lo.min(l1), hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if total(mid) < beta {
            a = mid;
        } else {
            b = mid;
        }
    }
    let mu = 0.5 * (a + b);
    let x1 = mu.clamp(l1, hi);
    let xr = mu.clamp(lo, hi);
    Some(x1 * x1 + (m as f64 - 1.0) * xr * xr)
}

/// Largest `Σx_j²` over the same polytope, by enumerating its vertices
/// (all coordinates at a bound except at most one).
fn max_sum_squares(m: usize, lo: f64, hi: f64, l1: f64, beta: f64) -> Option<f64> {
    let tol = 1e-12 * beta.abs().max(1.0);
    let mut best: Option<f64> = None;
    let mut offer = |v: f64| best = Some(best.map_or(v, |b: f64| b.max(v)));
    let rest = m - 1;
    // x1 at one of its bounds, the other coordinates at a vertex.
    for x1 in [l1, hi] {
        let rem = beta - x1;
        for k in 0..=rest {
            // k at hi, the rest at lo, no free coordinate.
            let s = k as f64 * hi + (rest - k) as f64 * lo;
            if (s - rem).abs() <= tol {
                offer(x1 * x1 + k as f64 * hi * hi + (rest - k) as f64 * lo * lo);
            }
            // k at hi, one free, rest - k - 1 at lo.
            if k < rest {
                let f = rem - k as f64 * hi - (rest - k - 1) as f64 * lo;
                if f >= lo - tol && f <= hi + tol {
                    offer(x1 * x1 + k as f64 * hi * hi + f * f + (rest - k - 1) as f64 * lo * lo);
                }
            }
        }
    }
    // x1 free, the others at bounds.
    for k in 0..=rest {
        let x1 = beta - k as f64 * hi - (rest - k) as f64 * lo;
        if x1 >= l1 - tol && x1 <= hi + tol {
            offer(x1 * x1 + k as f64 * hi * hi + (rest - k) as f64 * lo * lo);
        }
    }
    best
}

/// Whether some witness with `m` points attains total mass `beta`.
pub fn sum_constraint_feasible(a: f64, n: f64, m: usize, case: SumCase, beta: f64) -> bool {
    if m < 1 {
        return false;
    }
    let (lo, hi, thr) = case.box_and_threshold(a);
    let l1 = lo.max(thr);
    let q = quadratic_budget(a, n, beta);
    let tol = 1e-12 * q.abs().max(1.0);
    match (min_sum_squares(m, lo, hi, l1, beta), max_sum_squares(m, lo, hi, l1, beta)) {
        (Some(mn), Some(mx)) => mn <= q + tol && q <= mx + tol,
        _ => false,
    }
}

/// Range of total masses scanned for the sum-of-squares mechanism.
fn sum_constraint_beta_range(a: f64, n: f64, case: SumCase) -> (f64, f64) {
    let n1 = n + 1.0;
    match case {
        SumCase::BelowOne => ((4.0 / a).max(2.0 * n1), 4.0 * n1),
        SumCase::AboveOne => (2.0 * n1, 4.0 * n1),
    }
}

/// Maximal sub-intervals of the admissible mass range on which a witness
/// with `m` points exists. Computed on a 400-point scan with bisection
/// refinement of every edge to `1e-12` relative.
pub fn sum_constraint_intervals(a: f64, n: f64, m: usize, case: SumCase) -> Vec<[f64; 2]> {
    let (b_lo, b_hi) = sum_constraint_beta_range(a, n, case);
    if !(b_hi > b_lo) {
        return Vec::new();
    }
    let k = 400usize;
    let at = |i: usize| b_lo + (b_hi - b_lo) * i as f64 / k as f64;
    let feas = |b: f64| sum_constraint_feasible(a, n, m, case, b);
    let refine = |mut x_in: f64, mut x_out: f64| {
        for _ in 0..80 {
            let mid = 0.5 * (x_in + x_out);
            if feas(mid) {
                x_in = mid;
            } else {
                x_out = mid;
            }
            if (x_in - x_out).abs() <= 1e-12 * x_in.abs() {
                break;
            }
        }
        x_in
    };
    let flags: Vec<bool> = (0..=k).map(|i| feas(at(i))).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i <= k {
        if !flags[i] {
            i += 1;
            continue;
        }
        let start = i;
        while i < k && flags[i + 1] {
            i += 1;
        }
        let lo = if start == 0 { at(0) } else { refine(at(start), at(start - 1)) };
        let hi = if i == k { at(k) } else { refine(at(i), at(i + 1)) };
        out.push([lo, hi]);
        i += 1;
    }
    out
}

/// Admissible integer multiplicities for a mechanism.
///
/// | mechanism | regime | range |
/// |---|---|---|
/// | `FormulaA` | `a < 1/(N+1)`, or `1/(N+1) < a < 1/2` | `2 ≤ m ≤ N+1` (`m = N+1` only for integer `N`) |
/// | `FormulaB` | `a < 1/(N+1)`, `N ≥ 1` | `1 ≤ m−1 ≤ f(a)` |
/// | `EqualMasses` | `1/(N+1) < a < 1` | `2 ≤ m < N+1 − (N/(1−a))·max{0, 1−2a}` |
/// | `FormulaC` | `a > max{1, 2/(N+1)}`, `a > 2` | `1 ≤ m ≤ ((N+1)a/2)²/(a(N+1)−1)` |
/// | `SumConstraint` | `1/(N+1) < a < 1` | `2 ≤ m ≤ N+1 − max{0, (1−2a)/(2a)}` |
/// | `SumConstraint` | `a > max{1, 2/(N+1)}` | `2 ≤ m < a(N+1) − max{0, (a−2)/2}` |
///
/// ```
/// use liouville_lab::catalog::{m_ranges, Mechanism};
/// assert!(m_ranges(0.2, 0.5, Mechanism::FormulaA).unwrap().is_empty());
/// let r = m_ranges(0.1, 3.0, Mechanism::FormulaA).unwrap();
/// assert_eq!((r.lo, r.hi), (2, 4));
/// ```
pub fn m_ranges(a: f64, n: f64, mech: Mechanism) -> Result<IntRange> {
    let p = Params::new(a, n)?;
    let branch = classify_regime(p).branch;
    let n1 = n + 1.0;
    let out_of = |what: &str| Err(Error::OutOfRegime(format!("{what} does not apply for a = {a}, N = {n}")));
    match mech {
        Mechanism::FormulaA => match branch {
            Branch::Subcritical => Ok(IntRange { lo: 2, hi: floor_incl(n1) }),
            Branch::Intermediate if a < 0.5 && !approx_eq(a, 0.5) => Ok(IntRange { lo: 2, hi: floor_incl(n1) }),
            _ => out_of("formula A"),
        },
        Mechanism::FormulaB => {
            if branch != Branch::Subcritical || n < 1.0 {
                return out_of("formula B");
            }
            let f = f_appendix(a, n)?;
            Ok(IntRange { lo: 2, hi: 1 + floor_incl(f) })
        }
        Mechanism::EqualMasses => {
            if branch != Branch::Intermediate {
                return out_of("the equal-mass formula");
            }
            let bound = n1 - (n / (1.0 - a)) * (1.0 - 2.0 * a).max(0.0);
            Ok(IntRange { lo: 2, hi: floor_strict(bound) })
        }
        Mechanism::FormulaC => {
            if !(a > 1.0f64.max(2.0 / n1) && a > 2.0) {
                return out_of("formula C");
            }
            let bound = (n1 * a / 2.0).powi(2) / (a * n1 - 1.0);
            Ok(IntRange { lo: 1, hi: floor_incl(bound) })
        }
        Mechanism::SumConstraint => match SumCase::for_params(a, n)? {
            SumCase::BelowOne => {
                let bound = n1 - ((1.0 - 2.0 * a) / (2.0 * a)).max(0.0);
                Ok(IntRange { lo: 2, hi: floor_incl(bound) })
            }
            SumCase::AboveOne => {
                let bound = a * n1 - ((a - 2.0) / 2.0).max(0.0);
                Ok(IntRange { lo: 2, hi: floor_strict(bound) })
            }
        },
        Mechanism::PolygonOnly4N1 | Mechanism::OriginMinusPolygon | Mechanism::FullMass4overA | Mechanism::Window06 => {
            out_of("a multiplicity range")
        }
    }
}

/// Multiplicities `m` of finite concentration points compatible with a
/// concentrating origin: `1 ≤ m < (1 − 2a(N+1))² / (4a(1 − a(N+1)))`,
/// for `0 < a < 1/(2(N+1))`.
///
/// ```
/// use liouville_lab::catalog::m_range_with_origin;
/// let r = m_range_with_origin(0.05, 1.0).unwrap();
/// assert_eq!((r.lo, r.hi), (1, 3));
/// ```
pub fn m_range_with_origin(a: f64, n: f64) -> Result<IntRange> {
    let n1 = n + 1.0;
    if !(a > 0.0 && a < 1.0 / (2.0 * n1)) {
        return Err(Error::OutOfRegime(format!("origin range needs 0 < a < 1/(2(N+1)); a = {a}, N = {n}")));
    }
    let bound = (1.0 - 2.0 * a * n1).powi(2) / (4.0 * a * (1.0 - a * n1));
    Ok(IntRange { lo: 1, hi: floor_strict(bound) })
}

fn check_f_domain(a: f64, n: f64) -> Result<()> {
    if !(n > 0.0 && a > 0.0 && a < 1.0f64.min(1.0 / (n + 1.0))) {
        return Err(Error::OutOfDomain(format!("f needs N > 0 and 0 < a < min(1, 1/(N+1)); a = {a}, N = {n}")));
    }
    Ok(())
}

/// `f(a) = (1/2a)(√((1−a(N+1))² + Na/(1−a)) − (1 − a(N+1)))`, evaluated in
/// the cancellation-free form `N / (2(1−a)(g + √(g² + Na/(1−a))))` with
/// `g = 1 − a(N+1)`.
///
/// ```
/// use liouville_lab::catalog::{a_threshold, f_appendix};
/// let a2 = a_threshold(2.0).unwrap();
/// assert!((f_appendix(a2, 2.0).unwrap() - 1.0).abs() < 1e-10);
/// ```
pub fn f_appendix(a: f64, n: f64) -> Result<f64> {
    check_f_domain(a, n)?;
    let g = 1.0 - a * (n + 1.0);
    let root = (g * g + n * a / (1.0 - a)).sqrt();
    Ok(n / (2.0 * (1.0 - a) * (g + root)))
}

/// `f(a)` in the direct difference form (used to cross-check the
/// rationalized evaluation).
pub fn f_appendix_direct(a: f64, n: f64) -> Result<f64> {
    check_f_domain(a, n)?;
    let g = 1.0 - a * (n + 1.0);
    Ok(((g * g + n * a / (1.0 - a)).sqrt() - g) / (2.0 * a))
}

/// `f(a)` in the shifted form `(1/2a)(√(…) − 1) + (N+1)/2`.
pub fn f_appendix_shifted(a: f64, n: f64) -> Result<f64> {
    check_f_domain(a, n)?;
    let g = 1.0 - a * (n + 1.0);
    Ok(((g * g + n * a / (1.0 - a)).sqrt() - 1.0) / (2.0 * a) + (n + 1.0) / 2.0)
}

/// `a_N = (4 − N)/(2(N+1+√((N−1)² + N²)))` for `1 ≤ N < 4`, and `0` for
/// `N ≥ 4`: the root of `f(a) = 1`.
pub fn a_threshold(n: f64) -> Result<f64> {
    if !(n >= 1.0) {
        return Err(Error::OutOfDomain(format!("a_N needs N >= 1, got {n}")));
    }
    if n >= 4.0 {
        return Ok(0.0);
    }
    Ok((4.0 - n) / (2.0 * (n + 1.0 + ((n - 1.0).powi(2) + n * n).sqrt())))
}

fn check_phi_domain(a: f64, n: f64) -> Result<()> {
    if !(n > 0.0 && a > 0.0 && a < 1.0 / (n + 1.0) && a < 1.0) {
        return Err(Error::OutOfDomain(format!("phi/psi need 0 < a < 1/(N+1), N > 0; a = {a}, N = {n}")));
    }
    Ok(())
}

/// `φ(t) = 1 − t + √((1−t)² + 2a(N+1)t − (Na/(1−a))t²)`.
pub fn phi(t: f64, a: f64, n: f64) -> Result<f64> {
    check_phi_domain(a, n)?;
    let rad = (1.0 - t).powi(2) + 2.0 * a * (n + 1.0) * t - (n * a / (1.0 - a)) * t * t;
    if rad < 0.0 {
        return Err(Error::OutOfDomain(format!("phi radicand {rad} < 0 at t = {t}")));
    }
    Ok(1.0 - t + rad.sqrt())
}

/// `ψ(s) = 1 − s + √((1−s)² + 2as + (Na/(1−a(N+1)))s²)`.
pub fn psi(s: f64, a: f64, n: f64) -> Result<f64> {
    check_phi_domain(a, n)?;
    let rad = (1.0 - s).powi(2) + 2.0 * a * s + (n * a / (1.0 - a * (n + 1.0))) * s * s;
    if rad < 0.0 {
        return Err(Error::OutOfDomain(format!("psi radicand {rad} < 0 at s = {s}")));
    }
    Ok(1.0 - s + rad.sqrt())
}

/// `t_a = ((1−a)/(aN))(√((1−a(N+1))² + aN/(1−a)) − (1 − a(N+1)))`, the
/// point where `φ(t_a) = 1`.
pub fn t_a(a: f64, n: f64) -> Result<f64> {
    check_phi_domain(a, n)?;
    let g = 1.0 - a * (n + 1.0);
    // Rationalized: ((1−a)/(aN)) · (aN/(1−a)) / (√… + g) = 1/(√… + g).
    Ok(1.0 / ((g * g + a * n / (1.0 - a)).sqrt() + g))
}

/// `s_a = t_a (1 − a(N+1))/(1 − a)`.
pub fn s_a(a: f64, n: f64) -> Result<f64> {
    Ok(t_a(a, n)? * (1.0 - a * (n + 1.0)) / (1.0 - a))
}

/// Record of the conditions licensing a catalog entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constraints {
    /// Regime cell label.
    pub regime: String,
    /// Multiplicity range of the mechanism, if it has one.
    pub m_range: Option<IntRange>,
    /// `max{2/a, 2(N+1)}`.
    pub lower_bound: f64,
    /// `[min{4/a, 4(N+1)}, max{4/a, 4(N+1)}]`.
    pub window: [f64; 2],
    /// Mass of the distinguished point (formula B).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub companion: Option<f64>,
    /// Mass of each point (equal-mass formula).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_each: Option<f64>,
    /// Free-form notes.
    pub notes: Vec<String>,
}

/// Another mechanism producing the same value as an entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alias {
    pub mechanism: Mechanism,
    pub case: Case,
    pub m: Option<u32>,
}

/// One admissible limiting mass (a point) or a continuous window (an
/// interval).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupValue {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<[f64; 2]>,
    pub mechanism: Mechanism,
    pub case: Case,
    pub m: Option<u32>,
    pub constraints: Constraints,
    pub suspect: bool,
    pub also: Vec<Alias>,
}

impl BlowupValue {
    fn key(&self) -> f64 {
        self.value.or(self.interval.map(|i| i[0])).unwrap_or(f64::NAN)
    }

    /// Whether the entry satisfies the lower bound and the closed window,
    /// within `1e-9` relative.
    pub fn satisfies_bounds(&self) -> bool {
        let c = &self.constraints;
        let ok = |x: f64| {
            let tol = 1e-9 * x.abs().max(1.0);
            x >= c.lower_bound - tol && x >= c.window[0] - tol && x <= c.window[1] + tol
        };
        match (self.value, self.interval) {
            (Some(v), _) => ok(v),
            (None, Some([lo, hi])) => lo <= hi && ok(lo) && ok(hi),
            _ => false,
        }
    }
}

/// Result of [`enumerate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub params: Params,
    pub regime: RegimeTag,
    /// Admissible values sorted by value, then mechanism.
    pub entries: Vec<BlowupValue>,
    /// Values produced by a formula but violating the universal bounds;
    /// kept for inspection and expected to be empty.
    pub rejected: Vec<BlowupValue>,
}

struct Builder {
    p: Params,
    regime: String,
    lower: f64,
    window: [f64; 2],
    out: Vec<BlowupValue>,
}

impl Builder {
    fn point(&mut self, value: f64, mech: Mechanism, case: Case, m: Option<u32>) -> &mut BlowupValue {
        let range = m.and_then(|_| m_ranges(self.p.a, self.p.n, mech).ok());
        self.out.push(BlowupValue {
            value: Some(value),
            interval: None,
            mechanism: mech,
            case,
            m,
            constraints: Constraints {
                regime: self.regime.clone(),
                m_range: range,
                lower_bound: self.lower,
                window: self.window,
                companion: None,
                beta_each: None,
                notes: Vec::new(),
            },
            suspect: false,
            also: Vec::new(),
        });
        self.out.last_mut().expect("just pushed")
    }

    fn interval(&mut self, lo: f64, hi: f64, mech: Mechanism, case: Case, m: Option<u32>) -> &mut BlowupValue {
        let e = self.point(f64::NAN, mech, case, m);
        e.value = None;
        e.interval = Some([lo, hi]);
        e
    }
}

/// Lists every admissible limiting mass for `(a, N)`.
///
/// Requires `N > 0`, `a ≠ 1/(N+1)` and `a ≠ 1`. Coinciding point values
/// are merged (the extra mechanisms appear in `also`); continuous windows
/// are interval entries. Entries come sorted by value, then mechanism.
///
/// ```
/// use liouville_lab::{catalog::enumerate, regime::Params};
/// let c = enumerate(Params::new(1.0 / 3.0, 1.0).unwrap()).unwrap();
/// let values: Vec<f64> = c.entries.iter().filter_map(|e| e.value).collect();
/// assert_eq!(values.len(), 2);
/// assert!((values[0] - 8.0).abs() < 1e-12 && (values[1] - 12.0).abs() < 1e-12);
/// ```
pub fn enumerate(p: Params) -> Result<Catalog> {
    let (a, n) = (p.a, p.n);
    if p.is_degenerate() {
        return Err(Error::DegenerateParameter(format!("a = 1/(N+1) = {a}: the mass is rigidly 4(N+1)")));
    }
    if approx_eq(a, 1.0) {
        return Err(Error::DegenerateParameter("a = 1 is excluded from the classification".into()));
    }
    if !(n > 0.0) {
        return Err(Error::OutOfRegime(format!("the classification requires N > 0, got N = {n}")));
    }
    let tag = classify_regime(p);
    let bounds = regime::necessary_bounds(p)?;
    let n1 = n + 1.0;
    let four_n = 4.0 * n1;
    let four_a = 4.0 / a;
    let mut b = Builder {
        p,
        regime: tag.label.clone(),
        lower: bounds.lower,
        window: [bounds.window.lo, bounds.window.hi],
        out: Vec::new(),
    };
    let two_over = 2.0 / n1;
    let le_two_over = a < two_over || approx_eq(a, two_over);

    match tag.branch {
        Branch::Subcritical => {
            let omp = four_a - four_n;
            if four_n >= omp {
                b.point(four_n, Mechanism::PolygonOnly4N1, Case::BlowUp, None);
            } else {
                b.point(omp, Mechanism::OriginMinusPolygon, Case::BlowUp, None);
            }
            b.point(four_a, Mechanism::FullMass4overA, Case::Vanishing, None);
            if n >= 1.0 {
                for m in m_ranges(a, n, Mechanism::FormulaA)?.iter() {
                    let v = beta_formula_a(a, n, m as u32)?;
                    b.point(v, Mechanism::FormulaA, Case::Vanishing, Some(m as u32));
                }
                if a > a_threshold(n)? {
                    for m in m_ranges(a, n, Mechanism::FormulaB)?.iter() {
                        let fb = beta_formula_b(a, n, m as u32)?;
                        let e = b.point(fb.value, Mechanism::FormulaB, Case::Vanishing, Some(m as u32));
                        e.constraints.companion = Some(fb.companion);
                        e.suspect = true;
                        e.constraints.notes.push("conjectured not to occur for m >= 2".into());
                    }
                }
            }
        }
        Branch::Intermediate => {
            b.point(four_n, Mechanism::PolygonOnly4N1, Case::Vanishing, None);
            if n < 1.0 {
                b.point(four_a, Mechanism::FullMass4overA, Case::BlowUp, None);
            } else {
                let wide = !le_two_over; // N > 1 and 2/(N+1) < a < 1
                let start = b.out.len();
                if !wide {
                    b.point(four_a, Mechanism::FullMass4overA, Case::BlowUp, None);
                }
                if a < 0.5 {
                    for m in m_ranges(a, n, Mechanism::FormulaA)?.iter() {
                        let v = beta_formula_a(a, n, m as u32)?;
                        let e = b.point(v, Mechanism::FormulaA, Case::BlowUp, Some(m as u32));
                        e.suspect = true;
                        e.constraints.notes.push("one cone angle exceeds 2π; may be geometrically obstructed".into());
                    }
                }
                let sum_range = m_ranges(a, n, Mechanism::SumConstraint)?;
                for m in sum_range.iter() {
                    for [lo, hi] in sum_constraint_intervals(a, n, m as usize, SumCase::BelowOne) {
                        let e = b.interval(lo, hi, Mechanism::SumConstraint, Case::BlowUp, Some(m as u32));
                        e.suspect = true;
                        e.constraints.notes.push("β_j ∈ [4, 4/a], max β_j ≥ 2/a, Σβ_j² = Q(β)".into());
                        e.constraints.notes.push("unequal point masses conjectured not to occur".into());
                    }
                }
                for m in m_ranges(a, n, Mechanism::EqualMasses)?.iter() {
                    let (v, each) = beta_equal_masses(a, n, m as u32)?;
                    let e = b.point(v, Mechanism::EqualMasses, Case::BlowUp, Some(m as u32));
                    e.constraints.beta_each = Some(each);
                }
                if wide {
                    // In this sub-case every value satisfies β ≥ 2(N+1).
                    let floor = 2.0 * n1;
                    let mut kept = b.out.split_off(start);
                    kept.retain_mut(|e| match (e.value, e.interval.as_mut()) {
                        (Some(v), _) => v >= floor * (1.0 - 1e-12),
                        (None, Some(iv)) => {
                            iv[0] = iv[0].max(floor);
                            iv[0] <= iv[1]
                        }
                        _ => false,
                    });
                    b.out.extend(kept);
                    b.interval(floor, four_n - four_a, Mechanism::Window06, Case::BlowUp, None);
                }
            }
        }
        Branch::Supercritical => {
            let small = n < 1.0 && le_two_over;
            if small {
                b.point(four_a, Mechanism::FullMass4overA, Case::BlowUp, None);
                b.point(four_a, Mechanism::FullMass4overA, Case::Vanishing, None);
                b.point(four_n, Mechanism::PolygonOnly4N1, Case::Vanishing, None);
            } else {
                b.interval(2.0 * n1, four_n - four_a, Mechanism::Window06, Case::BlowUp, None);
                b.point(four_n, Mechanism::PolygonOnly4N1, Case::Vanishing, None);
                b.interval(2.0 * n1, four_n - four_a, Mechanism::Window06, Case::Vanishing, None);
                if a > 2.0 {
                    for m in m_ranges(a, n, Mechanism::FormulaC)?.iter() {
                        match beta_formula_c(a, n, m as u32) {
                            Ok(v) => {
                                let e = b.point(v, Mechanism::FormulaC, Case::Vanishing, Some(m as u32));
                                if m > 1 {
                                    e.suspect = true;
                                    e.constraints.notes.push("expected to occur only for m = 1".into());
                                }
                            }
                            Err(Error::ComplexRoot { .. }) => {}
                            Err(e) => return Err(e),
                        }
                    }
                }
                for m in m_ranges(a, n, Mechanism::SumConstraint)?.iter() {
                    for [lo, hi] in sum_constraint_intervals(a, n, m as usize, SumCase::AboveOne) {
                        let e = b.interval(lo, hi, Mechanism::SumConstraint, Case::Vanishing, Some(m as u32));
                        e.constraints.notes.push("β_j ∈ [4/a, 4], max β_j ≥ 2, Σβ_j² = Q(β)".into());
                    }
                }
            }
        }
        Branch::Critical | Branch::UnitExponent => unreachable!("excluded above"),
    }

    // Validate, sort and merge coinciding point values.
    let (mut good, rejected): (Vec<_>, Vec<_>) = b.out.into_iter().partition(|e| e.satisfies_bounds());
    good.sort_by(|x, y| x.key().total_cmp(&y.key()).then(x.mechanism.cmp(&y.mechanism)).then(x.case.cmp(&y.case)));
    let mut entries: Vec<BlowupValue> = Vec::new();
    for e in good {
        if let (Some(v), Some(last)) = (e.value, entries.last_mut()) {
            if let Some(w) = last.value {
                if (v - w).abs() <= 1e-9 * v.abs().max(1.0) {
                    last.also.push(Alias { mechanism: e.mechanism, case: e.case, m: e.m });
                    last.suspect &= e.suspect;
                    continue;
                }
            }
        }
        entries.push(e);
    }
    Ok(Catalog { params: p, regime: tag, entries, rejected })
}
