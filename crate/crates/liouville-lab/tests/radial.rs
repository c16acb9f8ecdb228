use liouville_lab::radial::{self, decade_radii, LiouvilleParams, SolverConfig, Terms};
use liouville_lab::regime::{self, Params};
use liouville_lab::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn params(a: f64, n: f64) -> Params {
    Params::new(a, n).unwrap()
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

#[test]
fn sweep_one_third_recovers_sharp_interval() {
    let sw = radial::sweep_endpoints(params(1.0 / 3.0, 1.0), -30.0, 30.0, 61, &cfg()).unwrap();
    assert_eq!(sw.rows.len(), 61);
    assert!(sw.rows.iter().all(|r| r.status == "ok"));
    let lo = sw.end_minus.unwrap().min(sw.end_plus.unwrap());
    let hi = sw.end_minus.unwrap().max(sw.end_plus.unwrap());
    assert!((lo - 8.0).abs() < 0.1 && (hi - 12.0).abs() < 0.1, "{lo} {hi}");
    assert!(sw.agrees && sw.monotone);
}

#[test]
fn sweep_one_fifth_recovers_sharp_interval() {
    let sw = radial::sweep_endpoints(params(0.2, 1.0), -30.0, 30.0, 61, &cfg()).unwrap();
    let lo = sw.end_minus.unwrap().min(sw.end_plus.unwrap());
    let hi = sw.end_minus.unwrap().max(sw.end_plus.unwrap());
    assert!((lo - 12.0).abs() < 0.2 && (hi - 20.0).abs() < 0.2, "{lo} {hi}");
    assert!(sw.monotone);
}

#[test]
fn sweep_far_field_extension_is_recorded() {
    // Near s = 30 the outer transition of the a = 1/5 profile lies beyond
    // the default truncation radius; the sweep must have enlarged it.
    let sw = radial::sweep_endpoints(params(0.2, 1.0), -30.0, 30.0, 61, &cfg()).unwrap();
    let last = sw.rows.last().unwrap();
    assert!(last.r_end.unwrap() > cfg().r_max);
    assert!(last.beta.unwrap() > 12.0 - 1e-3, "{last:?}");
}

#[test]
fn sweep_rigid_case_is_constant() {
    let sw = radial::sweep_endpoints(params(0.5, 1.0), -10.0, 10.0, 21, &cfg()).unwrap();
    for r in &sw.rows {
        assert!((r.beta.unwrap() - 8.0).abs() < 1e-3, "{r:?}");
    }
    assert!((sw.end_minus.unwrap() - sw.end_plus.unwrap()).abs() < 1e-3);
    assert!(sw.agrees);
}

#[test]
fn sweep_rejects_bad_ranges() {
    let p = params(1.0 / 3.0, 1.0);
    assert!(matches!(radial::sweep_endpoints(p, 1.0, 0.0, 10, &cfg()), Err(Error::InvalidInput(_))));
    assert!(matches!(radial::sweep_endpoints(p, 0.0, 1.0, 7, &cfg()), Err(Error::InvalidInput(_))));
}

#[test]
fn solve_for_mass_one_third_ten() {
    let pr = radial::solve_for_mass(params(1.0 / 3.0, 1.0), 10.0, &cfg()).unwrap();
    assert!((pr.masses.beta - 10.0).abs() < 1e-8);
    assert!((pr.masses.beta1 - 5.0).abs() < 1e-4 && (pr.masses.beta2 - 5.0).abs() < 1e-4, "{:?}", pr.masses);
}

#[test]
fn solve_for_mass_without_weight() {
    let p = params(1.0 / 3.0, 0.0);
    let pr = radial::solve_for_mass(p, 9.0, &cfg()).unwrap();
    let split = regime::mass_split(p, 9.0).unwrap();
    assert!((split.beta1 - 45.0 / 8.0).abs() < 1e-12);
    assert!((pr.masses.beta1 - split.beta1).abs() < 1e-4, "{:?} {split:?}", pr.masses);
    assert!((pr.masses.beta2 - split.beta2).abs() < 1e-4);
}

#[test]
fn solve_for_mass_rejects_endpoints() {
    let p = params(1.0 / 3.0, 1.0);
    for b in [8.0, 12.0, 13.0] {
        assert!(matches!(radial::solve_for_mass(p, b, &cfg()), Err(Error::TargetOutsideInterval { .. })));
    }
}

#[test]
fn local_pohozaev_holds_at_every_decade() {
    for (a, n, s) in [(1.0 / 3.0, 1.0, 0.0), (0.2, 2.0, 3.0), (0.8, 1.0, -2.0), (2.0, 0.5, 1.0)] {
        let pr = radial::integrate(s, params(a, n), &cfg()).unwrap();
        let last = *pr.grid.last().unwrap();
        for r in decade_radii(pr.grid[0] * 10.0, last, 64) {
            let res = radial::pohozaev_local_residual(&pr, r);
            assert!(res < 1e-5, "a = {a}, N = {n}, s = {s}, r = {r}: {res}");
        }
    }
}

#[test]
fn weight_only_profile_tracks_closed_form_pointwise() {
    // With μ = 1 and c = 0 the bubble has w(0) = log 8(N+1)².
    for n in [0.0, 1.0, 2.5] {
        let lp = LiouvilleParams::new(1.0, n, 1.0, Complex64::new(0.0, 0.0)).unwrap();
        let s = radial::liouville_closed_form(&lp, Complex64::new(0.0, 0.0));
        let c = cfg();
        let pr = radial::integrate_terms(s, params(1.0, n), &c, Terms::WeightOnly).unwrap();
        for (&r, &u) in pr.grid.iter().zip(&pr.u) {
            if r < c.r_init || r > c.r_max {
                continue;
            }
            let w = radial::liouville_closed_form(&lp, Complex64::new(r, 0.0));
            let tol = 10.0 * c.rel_tol * w.abs().max(1.0);
            assert!((u - w).abs() < tol, "N = {n}, r = {r}: {u} vs {w}");
        }
    }
}

#[test]
fn liouville_mass_oracle() {
    for n in [0.0, 1.0, 2.0] {
        let lp = LiouvilleParams::new(1.0, n, 1.0, Complex64::new(0.0, 0.0)).unwrap();
        let m = radial::liouville_radial_mass(&lp, 1e-10).unwrap();
        assert!((m - 4.0 * (n + 1.0)).abs() < 1e-6, "N = {n}: {m}");
    }
}

#[test]
fn profile_csv_has_fixed_header() {
    let pr = radial::integrate(0.0, params(0.5, 1.0), &cfg()).unwrap();
    let mut buf = Vec::new();
    pr.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "r,u,ru_prime");
    assert_eq!(lines.count(), pr.grid.len());
    let side = pr.sidecar();
    for key in ["params", "s", "masses", "slope_inf", "residuals"] {
        assert!(side.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn overflow_guard_trips() {
    let c = SolverConfig { blowup_threshold: Some(5.0), ..cfg() };
    assert!(matches!(radial::integrate(10.0, params(1.0 / 3.0, 1.0), &c), Err(Error::Overflow { .. })));
}

#[test]
fn invalid_solver_configs_are_refused() {
    let p = params(1.0 / 3.0, 1.0);
    for c in [
        SolverConfig { rel_tol: 0.0, ..cfg() },
        SolverConfig { r_init: 2.0, ..cfg() },
        SolverConfig { r_max: 0.5, ..cfg() },
        SolverConfig { slope_window: -1.0, ..cfg() },
    ] {
        assert!(matches!(radial::integrate(0.0, p, &c), Err(Error::InvalidInput(_))), "{c:?}");
    }
}

/// Samples of `(a, N)` away from the rigid line `a = 1/(N+1)`.
fn regime_point() -> impl Strategy<Value = (f64, f64)> {
    (0.1f64..3.0, 0.0f64..3.0).prop_filter("off the rigid line", |(a, n)| (a * (n + 1.0) - 1.0).abs() > 0.05)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn converged_profiles_satisfy_decay_and_bounds((a, n) in regime_point(), s in -6.0f64..6.0) {
        let p = params(a, n);
        let c = cfg();
        let pr = radial::integrate_extended(s, p, &c).unwrap();
        prop_assert!(pr.grid.windows(2).all(|w| w[0] < w[1]));
        let b = pr.masses.beta;
        if pr.stabilized {
            prop_assert!((pr.slope_inf - b).abs() < 5.0 * c.slope_window * b, "{} vs {}", pr.slope_inf, b);
        }
        let lower = regime::necessary_bounds(p).unwrap().lower;
        prop_assert!(b > lower - 1e-6);
        let iv = regime::radial_interval(p).unwrap();
        prop_assert!(iv.contains(b, 1e-3), "{b} not in {iv:?}");
        prop_assert!(regime::pohozaev_global_residual(p, &pr.masses) < 1e-4);
    }

    #[test]
    fn mass_is_monotone_in_the_datum((a, n) in regime_point(), s in -6.0f64..5.0) {
        let p = params(a, n);
        let b0 = radial::integrate_extended(s, p, &cfg()).unwrap().masses.beta;
        let b1 = radial::integrate_extended(s + 1.0, p, &cfg()).unwrap().masses.beta;
        // Blow-down (s → −∞) reaches the upper end of the radial interval
        // and blow-up (s → +∞) the lower one, on both sides of the rigid line.
        prop_assert!(b1 < b0, "{b0} -> {b1}");
    }
}
