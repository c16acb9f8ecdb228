//! Embedded Dormand–Prince 5(4) integrator with PI step-size control.
//!
//! The integrator is deliberately small: a fixed-dimension state, an
//! arbitrary autonomous-or-not right-hand side, and one accepted step per
//! call so that callers can implement their own stopping logic (decade
//! checks, overflow guards) between steps.

use crate::error::{Error, Result};

// Dormand–Prince coefficients.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// Error coefficients: fifth-order weights minus fourth-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Tolerances and step limits.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub h_max: f64,
}

/// State of an adaptive integration in progress.
pub struct Dopri5<F, const D: usize>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    f: F,
    tol: Tolerances,
    /// Current abscissa.
    pub t: f64,
    /// Current state.
    pub y: [f64; D],
    /// Derivative at the current point (first-same-as-last).
    pub dy: [f64; D],
    h: f64,
    err_old: f64,
    /// Number of right-hand-side evaluations so far.
    pub evaluations: usize,
}

fn axpy<const D: usize>(y: &[f64; D], h: f64, terms: &[(f64, &[f64; D])]) -> [f64; D] {
    let mut out = *y;
    for (c, k) in terms {
        for i in 0..D {
            out[i] += h * c * k[i];
        }
    }
    out
}

impl<F, const D: usize> Dopri5<F, D>
where
    F: Fn(f64, &[f64; D]) -> [f64; D],
{
    /// Starts an integration at `(t0, y0)` with initial step guess `h0`.
    pub fn new(f: F, t0: f64, y0: [f64; D], h0: f64, tol: Tolerances) -> Self {
        let dy = f(t0, &y0);
        Dopri5 { f, tol, t: t0, y: y0, dy, h: h0.min(tol.h_max), err_old: 1e-4, evaluations: 1 }
    }

    /// Performs one accepted step, never stepping beyond `t_end`.
    ///
    /// Returns the new abscissa; the state and derivative are updated in
    /// place.
    pub fn step(&mut self, t_end: f64) -> Result<f64> {
        const SAFETY: f64 = 0.9;
        const BETA: f64 = 0.04;
        const ALPHA: f64 = 0.2 - BETA * 0.75;
        loop {
            let mut h = self.h.min(self.tol.h_max);
            let last = self.t + h >= t_end;
            if last {
                h = t_end - self.t;
            }
            if h <= 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::IntegratorStalled { t: self.t, h });
            }
            let (t, y, k1) = (self.t, self.y, self.dy);
            let f = &self.f;
            let k2 = f(t + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
            let k3 = f(t + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
            let k4 = f(t + C4 * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
            let k5 = f(
                t + C5 * h,
                &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
            );
            let k6 = f(
                t + h,
                &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
            );
            let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
            let k7 = f(t + h, &y_new);
            self.evaluations += 6;

            let mut err = 0.0f64;
            let mut finite = true;
            for i in 0..D {
                let e = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = self.tol.atol + self.tol.rtol * y[i].abs().max(y_new[i].abs());
                finite &= y_new[i].is_finite();
                err += (e / sc).powi(2);
            }
            let err = if finite { (err / D as f64).sqrt() } else { f64::INFINITY };

            if err <= 1.0 {
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (SAFETY * err.powf(-ALPHA) * self.err_old.powf(BETA)).clamp(0.2, 5.0)
                };
                self.err_old = err.max(1e-4);
                self.t = if last { t_end } else { t + h };
                self.y = y_new;
                self.dy = k7;
                // Do not let a short final step shrink the next guess.
                self.h = (if last { self.h } else { h }) * fac;
                return Ok(self.t);
            }
            let fac = if err.is_finite() {
                (SAFETY * err.powf(-ALPHA)).clamp(0.1, 1.0)
            } else {
                0.1
            };
            self.h = h * fac;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay_is_accurate() {
        let tol = Tolerances { rtol: 1e-10, atol: 1e-14, h_max: 1.0 };
        let mut s = Dopri5::new(|_t, y: &[f64; 1]| [-y[0]], 0.0, [1.0], 1e-3, tol);
        while s.t < 5.0 {
            s.step(5.0).unwrap();
        }
        assert!((s.y[0] - (-5.0f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn harmonic_oscillator_energy() {
        let tol = Tolerances { rtol: 1e-11, atol: 1e-13, h_max: 0.5 };
        let mut s = Dopri5::new(|_t, y: &[f64; 2]| [y[1], -y[0]], 0.0, [1.0, 0.0], 1e-2, tol);
        let t_end = 20.0 * std::f64::consts::PI;
        while s.t < t_end {
            s.step(t_end).unwrap();
        }
        assert!((s.y[0] - 1.0).abs() < 1e-8 && s.y[1].abs() < 1e-8);
    }
}
