//! Radial solutions: shooting from the origin, total mass with asymptotic
//! tail corrections, local Pohozaev identity, sweeps over the initial datum
//! and the closed-form Liouville bubble used as an exact oracle.
//!
//! A radial solution with `u(0) = s` satisfies
//!
//! ```text
//! u'' + u'/r = −(e^{au} + r^{2N} e^u).
//! ```
//!
//! In the variable `t = log r` with `v = r u'` this becomes the autonomous-
//! in-`u` system `u_t = v`, `v_t = −(r² e^{au} + r^{2N+2} e^u)`. The running
//! masses `m₁(r) = ∫₀^r e^{au} ρ dρ` and `m₂(r) = ∫₀^r ρ^{2N+1} e^u dρ` are
//! carried as two extra states, so `−v(r) = m₁(r) + m₂(r)` holds along the
//! whole trajectory and no separate quadrature grid is needed.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ode::{Dopri5, Tolerances};
use crate::regime::{self, Interval, MassSplit, Params};

/// Accuracy target of the local series used to leave the origin.
pub const SERIES_TOL: f64 = 1e-10;

/// Endpoint agreement tolerance used by [`sweep_endpoints`].
pub const SWEEP_AGREEMENT_TOL: f64 = 0.1;

/// Numerical controls of the radial solver. Physical parameters live in
/// [`Params`]; everything here has a sensible default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Relative tolerance of the adaptive integrator.
    pub rel_tol: f64,
    /// Absolute tolerance of the adaptive integrator.
    pub abs_tol: f64,
    /// Upper bound for the series-start radius (the solver may start closer
    /// to the origin to keep the series accurate).
    pub r_init: f64,
    /// Far-field truncation radius.
    pub r_max: f64,
    /// Relative change of `r u'` over one decade that counts as stabilized.
    pub slope_window: f64,
    /// Overflow guard for `u`; `None` means `700/a`.
    pub blowup_threshold: Option<f64>,
    /// Largest step in `t = log r`; keeps the stored trajectory dense enough
    /// for high-order interpolation.
    pub max_dt: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            r_init: 1e-4,
            r_max: 1e8,
            slope_window: 1e-6,
            blowup_threshold: None,
            max_dt: 0.05,
        }
    }
}

impl SolverConfig {
    /// Checks positivity and `r_init < 1 < r_max`.
    pub fn validate(&self) -> Result<()> {
        let pos = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("r_init", self.r_init),
            ("r_max", self.r_max),
            ("slope_window", self.slope_window),
            ("max_dt", self.max_dt),
        ];
        for (name, v) in pos {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(b) = self.blowup_threshold {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::InvalidInput(format!("blowup_threshold must be positive, got {b}")));
            }
        }
        if !(self.r_init < 1.0 && 1.0 < self.r_max) {
            return Err(Error::InvalidInput(format!(
                "need r_init < 1 < r_max, got r_init = {}, r_max = {}",
                self.r_init, self.r_max
            )));
        }
        Ok(())
    }

    fn threshold(&self, p: &Params) -> f64 {
        self.blowup_threshold.unwrap_or(700.0 / p.a)
    }
}

/// Which source terms are active. [`Terms::WeightOnly`] drops `e^{au}` and
/// turns the problem into the Liouville equation `−Δu = |x|^{2N} e^u`,
/// whose solutions are known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Terms {
    Full,
    WeightOnly,
}

/// Far-field data used to close the mass integrals beyond `r_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailInfo {
    /// `c∞ = u(R) + slope·log R`.
    pub c_inf: f64,
    /// `∫_R^∞ e^{au} r dr` from the power-law model.
    pub tail1: f64,
    /// `∫_R^∞ r^{2N+1} e^u dr` from the power-law model.
    pub tail2: f64,
    /// Fixed-point iterations used.
    pub iterations: usize,
}

/// A computed radial solution.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialProfile {
    pub params: Params,
    /// Initial datum `u(0)`.
    pub s: f64,
    /// Active source terms.
    pub terms: Terms,
    /// Strictly increasing radii of the accepted integrator steps.
    pub grid: Vec<f64>,
    /// `u(r_i)`.
    pub u: Vec<f64>,
    /// `r u'(r_i)`.
    pub v: Vec<f64>,
    /// Running mass `∫₀^{r_i} e^{au} ρ dρ`.
    pub m1: Vec<f64>,
    /// Running mass `∫₀^{r_i} ρ^{2N+1} e^u dρ`.
    pub m2: Vec<f64>,
    /// Total masses including tails.
    pub masses: MassSplit,
    /// `−r u'` at the last grid point.
    pub slope_inf: f64,
    /// Whether `r u'` stabilized within `slope_window` before `r_max`.
    pub stabilized: bool,
    /// Far-field closure data.
    pub tail: TailInfo,
}

/// Interpolated state at an arbitrary radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointState {
    pub u: f64,
    pub v: f64,
    pub m1: f64,
    pub m2: f64,
}

struct Rhs {
    a: f64,
    k: f64,
    full: bool,
}

impl Rhs {
    #[inline]
    fn sources(&self, t: f64, u: f64) -> (f64, f64) {
        let e1 = if self.full { (2.0 * t + self.a * u).exp() } else { 0.0 };
        let e2 = (self.k * t + u).exp();
        (e1, e2)
    }

    #[inline]
    fn eval(&self, t: f64, y: &[f64; 4]) -> [f64; 4] {
        let (e1, e2) = self.sources(t, y[0]);
        [y[1], -(e1 + e2), e1, e2]
    }
}

fn hermite5(x: f64, h: f64, f0: f64, d0: f64, s0: f64, f1: f64, d1: f64, s1: f64) -> f64 {
    let x2 = x * x;
    let x3 = x2 * x;
    let x4 = x3 * x;
    let x5 = x4 * x;
    let h0 = 1.0 - 10.0 * x3 + 15.0 * x4 - 6.0 * x5;
    let h1 = x - 6.0 * x3 + 8.0 * x4 - 3.0 * x5;
    let h2 = 0.5 * (x2 - 3.0 * x3 + 3.0 * x4 - x5);
    let h3 = 10.0 * x3 - 15.0 * x4 + 6.0 * x5;
    let h4 = -4.0 * x3 + 7.0 * x4 - 3.0 * x5;
    let h5 = 0.5 * (x3 - 2.0 * x4 + x5);
    f0 * h0 + h * d0 * h1 + h * h * s0 * h2 + f1 * h3 + h * d1 * h4 + h * h * s1 * h5
}

impl RadialProfile {
    fn rhs(&self) -> Rhs {
        Rhs { a: self.params.a, k: 2.0 * self.params.n1(), full: self.terms == Terms::Full }
    }

    /// First and second `t`-derivatives of `(u, v, m1, m2)` at grid index `i`.
    fn derivs(&self, i: usize) -> ([f64; 4], [f64; 4]) {
        let rhs = self.rhs();
        let t = self.grid[i].ln();
        let (e1, e2) = rhs.sources(t, self.u[i]);
        let v = self.v[i];
        let d1 = 2.0 + rhs.a * v;
        let d2 = rhs.k + v;
        ([v, -(e1 + e2), e1, e2], [-(e1 + e2), -(e1 * d1 + e2 * d2), e1 * d1, e2 * d2])
    }

    /// State at radius `r`: quintic Hermite interpolation in `log r` inside
    /// the grid, the local series below it and the power-law asymptote
    /// above it.
    pub fn state_at(&self, r: f64) -> PointState {
        let r0 = self.grid[0];
        let last = self.grid.len() - 1;
        if r <= r0 {
            let (u, v) = series_terms(self.s, &self.params, r, self.terms);
            let (m1, m2) = series_masses(self.s, &self.params, r, self.terms);
            return PointState { u, v, m1, m2 };
        }
        if r >= self.grid[last] {
            let t = r.ln();
            let u = self.tail.c_inf - self.slope_inf * t;
            return PointState { u, v: -self.slope_inf, m1: self.m1[last], m2: self.m2[last] };
        }
        let i = match self.grid.binary_search_by(|x| x.total_cmp(&r)) {
            Ok(i) => return PointState { u: self.u[i], v: self.v[i], m1: self.m1[i], m2: self.m2[i] },
            Err(i) => i - 1,
        };
        let (t0, t1) = (self.grid[i].ln(), self.grid[i + 1].ln());
        let h = t1 - t0;
        let x = (r.ln() - t0) / h;
        let (d0, s0) = self.derivs(i);
        let (d1, s1) = self.derivs(i + 1);
        let val = |k: usize, f0: f64, f1: f64| hermite5(x, h, f0, d0[k], s0[k], f1, d1[k], s1[k]);
        PointState {
            u: val(0, self.u[i], self.u[i + 1]),
            v: val(1, self.v[i], self.v[i + 1]),
            m1: val(2, self.m1[i], self.m1[i + 1]),
            m2: val(3, self.m2[i], self.m2[i + 1]),
        }
    }

    /// `u(r)`, see [`RadialProfile::state_at`].
    pub fn u_at(&self, r: f64) -> f64 {
        self.state_at(r).u
    }

    /// Normalized mass `∫_{|x|<r} (e^{au} + |x|^{2N}e^u) dx / 2π`, using
    /// the power-law tail model beyond the last grid point.
    pub fn mass_within(&self, r: f64) -> f64 {
        let last = self.grid.len() - 1;
        let r_last = self.grid[last];
        if r <= r_last {
            let st = self.state_at(r);
            return st.m1 + st.m2;
        }
        let x = (r / r_last).ln();
        let p1 = self.params.a * self.masses.beta - 2.0;
        let p2 = self.masses.beta - 2.0 * self.params.n1();
        let t1 = self.tail.tail1 * -(-p1 * x).exp_m1();
        let t2 = self.tail.tail2 * -(-p2 * x).exp_m1();
        self.m1[last] + self.m2[last] + t1 + t2
    }

    /// Writes the profile as CSV with header `r,u,ru_prime`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut wr = csv::Writer::from_writer(w);
        wr.write_record(["r", "u", "ru_prime"])?;
        for i in 0..self.grid.len() {
            wr.write_record(&[
                format!("{:e}", self.grid[i]),
                format!("{:e}", self.u[i]),
                format!("{:e}", self.v[i]),
            ])?;
        }
        wr.flush()?;
        Ok(())
    }

    /// JSON sidecar summarising the profile (no trajectory arrays).
    pub fn sidecar(&self) -> serde_json::Value {
        let r_last = *self.grid.last().expect("nonempty grid");
        let radii = decade_radii(self.grid[0], r_last, 5);
        let residuals: Vec<serde_json::Value> = radii
            .iter()
            .map(|&r| serde_json::json!({ "r": r, "local_pohozaev": pohozaev_local_residual(self, r) }))
            .collect();
        let global = if self.params.is_degenerate() {
            None
        } else {
            Some(regime::pohozaev_global_residual(self.params, &self.masses))
        };
        serde_json::json!({
            "params": self.params,
            "s": self.s,
            "terms": self.terms,
            "masses": self.masses,
            "slope_inf": self.slope_inf,
            "stabilized": self.stabilized,
            "tail": self.tail,
            "grid_points": self.grid.len(),
            "r_first": self.grid[0],
            "r_last": r_last,
            "residuals": { "global_pohozaev": global, "local": residuals },
        })
    }
}

/// `count` radii spread log-uniformly over `[lo, hi]` (endpoints excluded).
pub fn decade_radii(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (1..=count).map(|k| (a + (b - a) * k as f64 / (count + 1) as f64).exp()).collect()
}

fn series_terms(s: f64, p: &Params, r: f64, terms: Terms) -> (f64, f64) {
    let k = 2.0 * p.n1();
    let c1 = if terms == Terms::Full { (p.a * s).exp() * r * r } else { 0.0 };
    let c2 = (s + k * r.ln()).exp();
    (s - c1 / 4.0 - c2 / (k * k), -c1 / 2.0 - c2 / k)
}

fn series_masses(s: f64, p: &Params, r: f64, terms: Terms) -> (f64, f64) {
    let k = 2.0 * p.n1();
    let c1 = if terms == Terms::Full { (p.a * s).exp() * r * r } else { 0.0 };
    let c2 = (s + k * r.ln()).exp();
    (c1 / 2.0, c2 / k)
}

fn series_dropped(s: f64, p: &Params, r: f64, terms: Terms) -> f64 {
    let k = 2.0 * p.n1();
    let c1 = if terms == Terms::Full { (p.a * s).exp() * r * r / 4.0 } else { 0.0 };
    let c2 = (s + k * r.ln()).exp() / (k * k);
    (1.0 + p.a) * (c1 + c2).powi(2)
}

/// Two-term expansion of the radial solution near the origin:
/// `u ≈ s − e^{as} r²/4 − e^s r^{2N+2}/(2N+2)²` and the matching `r u'`.
///
/// ```
/// use liouville_lab::{radial::series_start, regime::Params};
/// let p = Params::new(1.0, 1.0).unwrap();
/// let r = 1e-3;
/// let (u, v) = series_start(0.0, p, r).unwrap();
/// assert!((u - (-r * r / 4.0 - r.powi(4) / 16.0)).abs() < 1e-15);
/// assert!((v - (-r * r / 2.0 - r.powi(4) / 4.0)).abs() < 1e-15);
/// ```
pub fn series_start(s: f64, p: Params, r: f64) -> Result<(f64, f64)> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!("series radius must be positive, got {r}")));
    }
    let est = series_dropped(s, &p, r, Terms::Full);
    let tol = SERIES_TOL * (1.0 + s.abs());
    if est > tol {
        return Err(Error::StepTooLarge { estimate: est, tolerance: tol });
    }
    Ok(series_terms(s, &p, r, Terms::Full))
}

/// Integrates the radial problem from `u(0) = s` outwards.
///
/// See [`integrate_terms`] for the general version with a switch for the
/// `e^{au}` source.
pub fn integrate(s: f64, p: Params, cfg: &SolverConfig) -> Result<RadialProfile> {
    integrate_terms(s, p, cfg, Terms::Full)
}

/// Integrates the radial problem with the selected source terms.
///
/// The trajectory is advanced with an adaptive Dormand–Prince pair in
/// `t = log r`, landing exactly on every decade `r = 10^k`. Integration stops
/// once `r u'` changes by less than `slope_window` (relative) over a decade
/// while the power-law tails are integrable, or at `r_max`. In the latter
/// case the last decade is compared with the power-law tail model; a
/// mismatch (or non-integrable tails) is reported as [`Error::NoDecay`].
pub fn integrate_terms(s: f64, p: Params, cfg: &SolverConfig, terms: Terms) -> Result<RadialProfile> {
    cfg.validate()?;
    if !s.is_finite() {
        return Err(Error::InvalidInput(format!("initial datum must be finite, got {s}")));
    }
    let threshold = cfg.threshold(&p);
    if s > threshold {
        return Err(Error::Overflow { u: s, threshold });
    }
    let full = terms == Terms::Full;
    let k = 2.0 * p.n1();

    // Start close enough to the origin that both series corrections are
    // below 1e-12 (1 + |s|).
    let eps = 1e-12 * (1.0 + s.abs());
    let mut t0 = cfg.r_init.ln();
    if full {
        t0 = t0.min(0.5 * ((4.0 * eps).ln() - p.a * s));
    }
    t0 = t0.min(((k * k * eps).ln() - s) / k);
    t0 -= std::f64::consts::LN_2;
    let r0 = t0.exp();
    let (u0, v0) = series_terms(s, &p, r0, terms);
    let (m10, m20) = series_masses(s, &p, r0, terms);

    let rhs = Rhs { a: p.a, k, full };
    let tol = Tolerances { rtol: cfg.rel_tol, atol: cfg.abs_tol, h_max: cfg.max_dt };
    let mut ode = Dopri5::new(|t, y: &[f64; 4]| rhs.eval(t, y), t0, [u0, v0, m10, m20], 0.01, tol);

    let t_end = cfg.r_max.ln();
    let ln10 = std::f64::consts::LN_10;
    let mut grid = vec![r0];
    let (mut us, mut vs, mut m1s, mut m2s) = (vec![u0], vec![v0], vec![m10], vec![m20]);
    // Decade marks reached so far: (t, v).
    let mut marks: Vec<(f64, f64)> = Vec::new();
    let mut next_mark = ((t0 / ln10).floor() + 1.0).max(1.0) * ln10;
    let integrable = |beta: f64| (!full || p.a * beta > 2.0) && beta > k;
    let mut stabilized = false;
    while ode.t < t_end {
        // Snap a decade mark that coincides with the end to the end itself,
        // so no sliver step of rounding size is ever requested.
        let target = if next_mark >= t_end - 1e-9 { t_end } else { next_mark };
        let t = ode.step(target)?;
        let y = ode.y;
        if y[0] > threshold {
            return Err(Error::Overflow { u: y[0], threshold });
        }
        grid.push(t.exp());
        us.push(y[0]);
        vs.push(y[1]);
        m1s.push(y[2]);
        m2s.push(y[3]);
        if t >= target {
            if t >= next_mark - 1e-9 {
                next_mark += ln10;
            }
            if let Some(&(_, v_prev)) = marks.last() {
                let dv = (y[1] - v_prev).abs();
                if dv < cfg.slope_window * y[1].abs() && integrable(-y[1]) {
                    marks.push((t, y[1]));
                    stabilized = true;
                    break;
                }
            }
            marks.push((t, y[1]));
        }
    }

    let last = grid.len() - 1;
    let t_r = grid[last].ln();
    let slope = -vs[last];
    if !integrable(slope) {
        return Err(Error::NoDecay {
            r_max: cfg.r_max,
            reason: format!(
                "-r u' = {slope} at r = {:e} does not give integrable tails (need > {})",
                grid[last],
                if full { (2.0 / p.a).max(k) } else { k }
            ),
        });
    }
    let c_inf = us[last] + slope * t_r;
    let tail_at = |beta: f64| -> (f64, f64) {
        let t1 = if full { (p.a * c_inf + (2.0 - p.a * beta) * t_r).exp() / (p.a * beta - 2.0) } else { 0.0 };
        let t2 = (c_inf + (k - beta) * t_r).exp() / (beta - k);
        (t1, t2)
    };
    if !stabilized {
        // Compare the last decade of mass growth with the tail model.
        if marks.len() >= 2 {
            let (tp, vp) = marks[marks.len() - 2];
            let observed = vp - vs[last];
            let rho_ln = t_r - tp;
            let (t1, t2) = tail_at(slope);
            let predicted = t1 * (((p.a * slope - 2.0) * rho_ln).exp() - 1.0)
                + t2 * (((slope - k) * rho_ln).exp() - 1.0);
            let mismatch = (observed - predicted).abs();
            if mismatch > 0.1 * observed.abs().max(predicted.abs())
                && mismatch > 10.0 * cfg.slope_window * slope
            {
                return Err(Error::NoDecay {
                    r_max: cfg.r_max,
                    reason: format!(
                        "last-decade mass gain {observed:e} disagrees with the power-law tail model {predicted:e}"
                    ),
                });
            }
        } else {
            return Err(Error::NoDecay {
                r_max: cfg.r_max,
                reason: "fewer than two decades integrated beyond r = 1".into(),
            });
        }
    }

    // Fixed point on beta for the tail corrections.
    let (m1r, m2r) = (m1s[last], m2s[last]);
    let mut beta = slope;
    let mut tails = (0.0, 0.0);
    let mut iterations = 0;
    for it in 1..=10 {
        iterations = it;
        if !integrable(beta) {
            return Err(Error::TailDivergent { beta });
        }
        tails = tail_at(beta);
        let next = m1r + m2r + tails.0 + tails.1;
        let done = (next - beta).abs() < 1e-12;
        beta = next;
        if done {
            break;
        }
    }
    if !integrable(beta) {
        return Err(Error::TailDivergent { beta });
    }
    let beta1 = m1r + tails.0;
    let beta2 = m2r + tails.1;
    Ok(RadialProfile {
        params: p,
        s,
        terms,
        grid,
        u: us,
        v: vs,
        m1: m1s,
        m2: m2s,
        masses: MassSplit { beta: beta1 + beta2, beta1, beta2 },
        slope_inf: slope,
        stabilized,
        tail: TailInfo { c_inf, tail1: tails.0, tail2: tails.1, iterations },
    })
}

/// The masses of a converged profile (total and split, tails included).
pub fn masses(profile: &RadialProfile) -> MassSplit {
    profile.masses
}

/// Normalized residual of the local Pohozaev identity on the disk of
/// radius `r`, in radial form:
///
/// ```text
/// −π v² = (2π/a) r² e^{au} + 2π r^{2N+2} e^u − (2/a)·2π m₁(r) − 2(N+1)·2π m₂(r).
/// ```
///
/// The difference is divided by the largest term magnitude (at least 1).
/// For the weight-only problem the `e^{au}` contributions vanish.
pub fn pohozaev_local_residual(profile: &RadialProfile, r: f64) -> f64 {
    use std::f64::consts::PI;
    let st = profile.state_at(r);
    let p = profile.params;
    let t = r.ln();
    let k = 2.0 * p.n1();
    let lhs = -PI * st.v * st.v;
    let (b1, i1) = if profile.terms == Terms::Full {
        ((2.0 * PI / p.a) * (2.0 * t + p.a * st.u).exp(), (2.0 / p.a) * 2.0 * PI * st.m1)
    } else {
        (0.0, 0.0)
    };
    let b2 = 2.0 * PI * (k * t + st.u).exp();
    let i2 = p.n1() * 2.0 * 2.0 * PI * st.m2;
    let rhs = b1 + b2 - i1 - i2;
    let scale = [lhs.abs(), b1, b2, i1, i2].into_iter().fold(1.0f64, f64::max);
    (lhs - rhs).abs() / scale
}

/// Largest truncation radius tried by [`integrate_extended`].
pub const R_MAX_CAP: f64 = 1e40;

/// [`integrate`], retried with the truncation radius enlarged by a factor
/// `1e8` (up to [`R_MAX_CAP`]) while `r u'` has not stabilized or the tails
/// are not yet integrable ([`Error::NoDecay`]).
///
/// Close to the ends of the radial interval the far-field transition of a
/// profile moves to radii of order `e^{c|s|}`; a fixed `r_max` then truncates
/// mass that is still arriving. Integration in `log r` makes the longer runs
/// cheap. The returned profile records the radius actually used in its
/// grid; the last successful unstabilized attempt is returned when the cap
/// is reached.
pub fn integrate_extended(s: f64, p: Params, cfg: &SolverConfig) -> Result<RadialProfile> {
    let mut c = *cfg;
    let mut best = integrate(s, p, &c);
    while c.r_max < R_MAX_CAP {
        let retry = match &best {
            Ok(pr) => !pr.stabilized,
            Err(Error::NoDecay { .. }) => true,
            Err(_) => false,
        };
        if !retry {
            break;
        }
        c.r_max = (c.r_max * 1e8).min(R_MAX_CAP);
        match integrate(s, p, &c) {
            Ok(next) => best = Ok(next),
            Err(e @ Error::NoDecay { .. }) if best.is_err() => best = Err(e),
            Err(e) => {
                if best.is_err() {
                    best = Err(e);
                }
                break;
            }
        }
    }
    best
}

/// Status of one row of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub s: f64,
    pub beta: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub stabilized: bool,
    /// Outermost radius of the integration, see [`integrate_extended`].
    pub r_end: Option<f64>,
    /// `"ok"` or the error message of the failed integration.
    pub status: String,
}

/// Result of [`sweep_endpoints`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub params: Params,
    pub rows: Vec<SweepRow>,
    /// Extrapolated `β` as `s → −∞`.
    pub end_minus: Option<f64>,
    /// Extrapolated `β` as `s → +∞`.
    pub end_plus: Option<f64>,
    /// The predicted radial interval (a point for `a = 1/(N+1)`).
    pub predicted: Interval,
    /// Whether the extrapolated range matches `predicted` within
    /// [`SWEEP_AGREEMENT_TOL`].
    pub agrees: bool,
    /// Whether `β(s)` is strictly monotone over the successful rows.
    pub monotone: bool,
    /// Indices `i` of successful rows where monotonicity breaks between
    /// consecutive successful rows.
    pub monotonicity_violations: Vec<usize>,
}

/// Aitken Δ² extrapolation of three equally spaced samples; falls back to
/// the last sample when the second difference vanishes or the correction
/// is implausibly large.
pub fn aitken(x0: f64, x1: f64, x2: f64) -> f64 {
    let d1 = x1 - x0;
    let d2 = x2 - x1;
    let den = d2 - d1;
    if den.abs() <= 1e-14 * x2.abs().max(1.0) {
        return x2;
    }
    let corr = d2 * d2 / den;
    // Only accept a correction that is consistent with geometric
    // convergence towards the end of the sweep.
    if d1 * d2 > 0.0 && d2.abs() < d1.abs() && corr.abs() <= 50.0 * d2.abs() {
        x2 - corr
    } else {
        x2
    }
}

fn end_estimate(values: &[f64]) -> Option<f64> {
    let n = values.len();
    if n == 0 {
        return None;
    }
    let q = (n / 4).max(3).min(n);
    if q < 3 {
        return Some(values[n - 1]);
    }
    let h = (q - 1) / 2;
    Some(aitken(values[n - 1 - 2 * h], values[n - 1 - h], values[n - 1]))
}

/// Samples `β(s)` for `n` equally spaced data in `[s_min, s_max]` and
/// extrapolates both ends.
///
/// Rows are computed in parallel (each with [`integrate_extended`]) and
/// assembled in order. Each end uses its
/// last quartile: three equally spaced samples spanning the quartile feed an
/// Aitken Δ² extrapolation.
pub fn sweep_endpoints(p: Params, s_min: f64, s_max: f64, n: usize, cfg: &SolverConfig) -> Result<Sweep> {
    if !(s_min < s_max) || n < 8 {
        return Err(Error::InvalidInput(format!(
            "need s_min < s_max and n >= 8, got [{s_min}, {s_max}] with n = {n}"
        )));
    }
    cfg.validate()?;
    let predicted = match regime::radial_interval(p) {
        Ok(i) => i,
        Err(Error::DegenerateParameter(_)) => Interval::closed(4.0 * p.n1(), 4.0 * p.n1()),
        Err(e) => return Err(e),
    };
    let rows: Vec<SweepRow> = (0..n)
        .into_par_iter()
        .map(|i| {
            let s = s_min + (s_max - s_min) * i as f64 / (n - 1) as f64;
            match integrate_extended(s, p, cfg) {
                Ok(pr) => SweepRow {
                    s,
                    beta: Some(pr.masses.beta),
                    beta1: Some(pr.masses.beta1),
                    beta2: Some(pr.masses.beta2),
                    stabilized: pr.stabilized,
                    r_end: pr.grid.last().copied(),
                    status: "ok".into(),
                },
                Err(e) => SweepRow {
                    s,
                    beta: None,
                    beta1: None,
                    beta2: None,
                    stabilized: false,
                    r_end: None,
                    status: e.to_string(),
                },
            }
        })
        .collect();

    let ok: Vec<(usize, f64)> = rows.iter().enumerate().filter_map(|(i, r)| r.beta.map(|b| (i, b))).collect();
    let betas: Vec<f64> = ok.iter().map(|x| x.1).collect();
    let end_plus = end_estimate(&betas);
    let rev: Vec<f64> = betas.iter().rev().copied().collect();
    let end_minus = end_estimate(&rev);

    let mut violations = Vec::new();
    if betas.len() >= 3 {
        let increasing = betas[betas.len() - 1] > betas[0];
        for w in ok.windows(2) {
            let d = w[1].1 - w[0].1;
            if (increasing && d <= 0.0) || (!increasing && d >= 0.0) {
                violations.push(w[1].0);
            }
        }
    }
    let agrees = match (end_minus, end_plus) {
        (Some(x), Some(y)) => {
            let (lo, hi) = (x.min(y), x.max(y));
            (lo - predicted.lo).abs() <= SWEEP_AGREEMENT_TOL && (hi - predicted.hi).abs() <= SWEEP_AGREEMENT_TOL
        }
        _ => false,
    };
    Ok(Sweep {
        params: p,
        rows,
        end_minus,
        end_plus,
        predicted,
        agrees,
        monotone: violations.is_empty(),
        monotonicity_violations: violations,
    })
}

/// Half-widths of the successively searched ranges of initial data in
/// [`solve_for_mass`]. Close to the rigid line `β(s)` drifts slowly and the
/// wider ranges are needed to reach the ends of the interval.
pub const BRACKET_SPANS: [f64; 4] = [40.0, 80.0, 160.0, 320.0];

/// Finds the radial solution with total mass `beta_target`.
///
/// The map `s ↦ β(s)` is bracketed on a grid of initial data with spacing
/// 4, widened through [`BRACKET_SPANS`] until a sign change appears, and
/// then refined with the Illinois variant of regula falsi until
/// `|β − β_target| < 1e-9 · max(1, β_target)`.
pub fn solve_for_mass(p: Params, beta_target: f64, cfg: &SolverConfig) -> Result<RadialProfile> {
    let iv = regime::radial_interval(p)?;
    if !(beta_target > iv.lo && beta_target < iv.hi) {
        return Err(Error::TargetOutsideInterval { target: beta_target, lo: iv.lo, hi: iv.hi });
    }
    let tol = 1e-9 * beta_target.abs().max(1.0);
    let f = |s: f64| integrate_extended(s, p, cfg).map(|pr| (pr.masses.beta - beta_target, pr));

    let mut samples: Vec<(f64, f64)> = Vec::new();
    let mut bracket = None;
    'outer: for span in BRACKET_SPANS {
        let steps = (span / 4.0) as i32;
        for i in -steps..=steps {
            let s = 4.0 * i as f64;
            if samples.iter().any(|x| x.0 == s) {
                continue;
            }
            if let Ok((g, pr)) = f(s) {
                if g.abs() < tol {
                    return Ok(pr);
                }
                samples.push((s, g));
            }
        }
        samples.sort_by(|x, y| x.0.total_cmp(&y.0));
        for w in samples.windows(2) {
            if w[0].1 * w[1].1 < 0.0 {
                bracket = Some((w[0], w[1]));
                break 'outer;
            }
        }
    }
    let ((mut s0, mut g0), (mut s1, mut g1)) = bracket.ok_or_else(|| Error::NonBracketed {
        target: beta_target,
        detail: format!(
            "sampled {} initial data in [-{max}, {max}] without a sign change",
            samples.len(),
            max = BRACKET_SPANS[BRACKET_SPANS.len() - 1]
        ),
    })?;
    let mut side = 0i8;
    for _ in 0..200 {
        let s = if (s1 - s0).abs() < 1e-13 * s0.abs().max(1.0) {
            0.5 * (s0 + s1)
        } else {
            (s0 * g1 - s1 * g0) / (g1 - g0)
        };
        let (g, pr) = f(s)?;
        if g.abs() < tol || (s1 - s0).abs() < 1e-14 * s.abs().max(1.0) {
            return Ok(pr);
        }
        if g * g1 < 0.0 {
            s0 = s1;
            g0 = g1;
            s1 = s;
            g1 = g;
            side = 0;
        } else {
            s1 = s;
            g1 = g;
            if side == 1 {
                g0 *= 0.5;
            }
            side = 1;
        }
    }
    Err(Error::NonBracketed { target: beta_target, detail: "regula falsi did not converge".into() })
}

/// Parameters of the closed-form Liouville bubble solving
/// `−Δw = |x|^{2N} e^{bw}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LiouvilleParams {
    pub b: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub mu: f64,
    pub c: Complex64,
}

impl LiouvilleParams {
    /// Validates `b > 0`, `N > −1`, `μ > 0`, and `c = 0` unless `N` is a
    /// nonnegative integer.
    pub fn new(b: f64, n: f64, mu: f64, c: Complex64) -> Result<Self> {
        if !(b > 0.0 && mu > 0.0 && n > -1.0) {
            return Err(Error::InvalidInput(format!("need b > 0, mu > 0, N > -1; got b={b}, mu={mu}, N={n}")));
        }
        let integer = n >= 0.0 && (n - n.round()).abs() < 1e-12;
        if c != Complex64::new(0.0, 0.0) && !integer {
            return Err(Error::InvalidInput(format!("c must vanish unless N is a nonnegative integer (N = {n})")));
        }
        Ok(LiouvilleParams { b, n, mu, c })
    }
}

/// `w(z) = (1/b) log[ 8(N+1)² μ / (b (1 + μ|z^{N+1} − c|²)²) ]`.
///
/// ```
/// use liouville_lab::radial::{liouville_closed_form, LiouvilleParams};
/// use num_complex::Complex64;
/// let lp = LiouvilleParams::new(1.0, 0.0, 1.0, Complex64::new(0.0, 0.0)).unwrap();
/// assert!((liouville_closed_form(&lp, Complex64::new(0.0, 0.0)) - 8f64.ln()).abs() < 1e-15);
/// ```
pub fn liouville_closed_form(lp: &LiouvilleParams, z: Complex64) -> f64 {
    let n1 = lp.n + 1.0;
    let zp = if z == Complex64::new(0.0, 0.0) {
        Complex64::new(0.0, 0.0)
    } else {
        z.powf(n1)
    };
    let d = (zp - lp.c).norm_sqr();
    (8.0 * n1 * n1 * lp.mu / (lp.b * (1.0 + lp.mu * d).powi(2))).ln() / lp.b
}

/// `(1/2π) ∫ |x|^{2N} e^{bw}` for a radial bubble (`c = 0`) by adaptive
/// Gauss–Kronrod quadrature on the half line.
pub fn liouville_radial_mass(lp: &LiouvilleParams, tol: f64) -> Result<f64> {
    if lp.c != Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidInput("radial mass requires c = 0".into()));
    }
    let (v, _) = crate::quad::integrate_half_line(
        |r| {
            if r == 0.0 {
                return 0.0;
            }
            let w = liouville_closed_form(lp, Complex64::new(r, 0.0));
            (lp.b * w + (2.0 * lp.n + 1.0) * r.ln()).exp()
        },
        tol,
    );
    Ok(v)
}
