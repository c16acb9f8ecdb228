use liouville_lab::catalog;
use liouville_lab::example::{self, ExampleOptions, FieldEvaluator, FieldKind, Patch};
use liouville_lab::polygon;
use liouville_lab::radial::SolverConfig;
use liouville_lab::Error;
use num_complex::Complex64;
use std::sync::Arc;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn rescaled(a: f64, m1: u32, xi: Complex64) -> FieldEvaluator {
    let spec = example::make_spec(a, m1, xi).unwrap();
    let seed = Arc::new(example::seed_profile(&spec, &SolverConfig::default()).unwrap());
    FieldEvaluator::new(spec, seed, FieldKind::Rescaled)
}

#[test]
fn spec_examples() {
    let s = example::make_spec(1.0 / 3.0, 1, c(1e6)).unwrap();
    assert!((s.beta0 - 9.0).abs() < 1e-12);
    assert!((s.n - 6.0).abs() < 1e-12);
    assert!((s.beta_total - 18.0).abs() < 1e-12);
    assert!((s.r_scale - 2.0 * 1e-3).abs() < 1e-15);
    assert!(matches!(example::make_spec(1.0 / 3.0, 2, c(1e6)), Err(Error::Inadmissible(_))));
    let s = example::make_spec(0.5, 3, c(1e6)).unwrap();
    assert!((s.beta0 - 5.0).abs() < 1e-12 && (s.n - 5.0).abs() < 1e-12);
    assert!(example::m_a(0.5).unwrap().is_infinite());
    assert!((example::m_a(1.0 / 3.0).unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn seed_window_edges_are_refused() {
    // β₀ must lie strictly inside the radial interval of (a, 0).
    let mut s = example::make_spec(1.0 / 3.0, 1, c(1e6)).unwrap();
    s.beta0 = 12.0;
    assert!(matches!(
        example::seed_profile(&s, &SolverConfig::default()),
        Err(Error::TargetOutsideInterval { .. })
    ));
}

#[test]
fn seed_matches_target_mass_and_slope() {
    let eval = rescaled(1.0 / 3.0, 1, c(1e6));
    let seed = eval.seed();
    assert!((seed.masses.beta - 9.0).abs() < 1e-3);
    assert!((seed.slope_inf - 9.0).abs() < 5.0 * SolverConfig::default().slope_window * 9.0);
}

#[test]
fn rescaled_peak_values() {
    for (a, m1) in [(1.0 / 3.0, 1), (0.5, 3), (0.45, 2)] {
        let xi = Complex64::from_polar(1e5, 0.7);
        let eval = rescaled(a, m1, xi);
        let n = (m1 + 1) as f64;
        let target = eval.seed().u_at(0.0) + (2.0 / a) * (n * xi.norm()).ln();
        for z in eval.spec.predicted_peaks() {
            assert!((eval.value(z) - target).abs() < 1e-9 * target.abs(), "a = {a}, z = {z}");
        }
    }
}

#[test]
fn peaks_fit_roots_of_unity_for_large_drift() {
    for xi in [1e4, 1e6, 1e8] {
        let eval = rescaled(1.0 / 3.0, 1, c(xi));
        let peaks = example::find_peaks(&eval);
        assert_eq!(peaks.len(), 2);
        let fit = polygon::roots_of_unity_fit(&peaks);
        assert!(fit.max_deviation / fit.xi0.norm() < 1e-6, "|ξ| = {xi}: {fit:?}");
        assert!((fit.xi0 - c(1.0)).norm() < 1e-6, "|ξ| = {xi}: {fit:?}");
    }
    // Three and four peaks are a non-trivial polygon test.
    for (a, m1) in [(0.45, 2), (0.5, 3)] {
        let eval = rescaled(a, m1, c(1e6));
        let peaks = example::find_peaks(&eval);
        assert_eq!(peaks.len(), m1 as usize + 1);
        let fit = polygon::roots_of_unity_fit(&peaks);
        assert!(fit.max_deviation / fit.xi0.norm() < 1e-6, "a = {a}: {fit:?}");
    }
}

#[test]
fn masses_converge_along_the_schedule() {
    let mut errors = Vec::new();
    for (delta, xi) in [(0.4, 1e4), (0.2, 1e6), (0.1, 1e8)] {
        let eval = rescaled(1.0 / 3.0, 1, c(xi));
        let centers = eval.spec.predicted_peaks();
        let m = example::concentration_masses(&eval, &centers, delta).unwrap();
        let err = m.iter().map(|x| (x.quadrature_route - 9.0).abs()).fold(0.0, f64::max);
        for x in &m {
            assert!((x.quadrature_route - x.seed_route).abs() < 1e-2 * x.seed_route);
        }
        errors.push(err);
    }
    assert!(errors.windows(2).all(|w| w[1] < w[0]), "{errors:?}");
}

#[test]
fn masses_match_equal_mass_formula() {
    for (a, m1) in [(1.0 / 3.0, 1), (0.45, 2), (0.5, 3)] {
        let eval = rescaled(a, m1, c(1e6));
        let s = eval.spec;
        let (beta, each) = catalog::beta_equal_masses(a, s.n, s.peaks()).unwrap();
        assert!((each - s.beta0).abs() < 1e-12 && (beta - s.beta_total).abs() < 1e-12);
        let centers = s.predicted_peaks();
        let m = example::concentration_masses(&eval, &centers, 0.3).unwrap();
        for x in &m {
            assert!((x.quadrature_route - each).abs() < 0.05 * each, "a = {a}: {x:?}");
        }
        let total: f64 = m.iter().map(|x| x.quadrature_route).sum();
        assert!((total - beta).abs() < 0.02 * beta);
        assert!((beta - 2.0 * s.n / (1.0 - a)).abs() < 1e-12);
    }
}

#[test]
fn overlapping_or_central_disks_are_refused() {
    let eval = rescaled(1.0 / 3.0, 1, c(1e4));
    let centers = eval.spec.predicted_peaks();
    assert!(matches!(example::concentration_masses(&eval, &centers, 1.0), Err(Error::DisksOverlap(_))));
    let near = [Complex64::new(0.1, 0.0)];
    assert!(matches!(example::concentration_masses(&eval, &near, 0.2), Err(Error::PatchTooCloseToOrigin(_))));
    let patch = Patch::Square { center: c(0.0), k: 3, h: 1e-3 };
    assert!(matches!(example::build_field(&eval, &patch), Err(Error::PatchTooCloseToOrigin(_))));
}

#[test]
fn residual_is_second_order_on_smooth_patch() {
    let eval = rescaled(1.0 / 3.0, 1, c(1e3));
    let patch = Patch::Square { center: Complex64::new(0.2, 1.1), k: 6, h: 0.02 };
    let field = example::build_field(&eval, &patch).unwrap();
    let r: Vec<f64> = [4e-3, 2e-3, 1e-3]
        .iter()
        .map(|&h| example::residual_stats(&field.clone().with_stencil(h)).max)
        .collect();
    for w in r.windows(2) {
        let order = (w[0] / w[1]).log2();
        assert!((order - 2.0).abs() < 0.2, "{r:?}");
    }
}

#[test]
fn annulus_residual_below_budget() {
    let eval = rescaled(1.0 / 3.0, 1, c(1e3));
    let o = ExampleOptions::default();
    let patch = Patch::Annulus { r_in: 0.5, r_out: 2.0, h: o.annulus_grid, exclude: o.annulus_exclude };
    let field = example::build_field(&eval, &patch).unwrap().with_stencil(o.annulus_h);
    let st = example::residual_stats(&field);
    assert!(st.points > 10_000);
    assert!(st.max < 1e-3, "{st:?}");
}

#[test]
fn field_csv_and_sidecar() {
    let eval = rescaled(1.0 / 3.0, 1, c(1e3));
    let patch = Patch::Points { points: vec![Complex64::new(0.5, 0.5), Complex64::new(-1.0, 0.2)], h: 1e-3 };
    let field = example::build_field(&eval, &patch).unwrap();
    let mut buf = Vec::new();
    field.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().next().unwrap(), "x,y,value");
    assert_eq!(text.lines().count(), 3);
    assert!(field.sidecar().get("spec").is_some());
}

#[test]
fn end_to_end_one_third() {
    let r = example::run_example(1.0 / 3.0, 1, c(1e6), &ExampleOptions::default()).unwrap();
    assert!((r.spec.beta0 - 9.0).abs() < 1e-12 && (r.spec.n - 6.0).abs() < 1e-12);
    assert_eq!(r.peaks.len(), 2);
    assert!(r.fit_relative_deviation < 1e-6 && r.xi0_error < 1e-6);
    for m in &r.masses {
        assert!((m.quadrature_route - 9.0).abs() < 0.05 * 9.0);
    }
    assert!((r.total_mass - 18.0).abs() < 0.02 * 18.0);
    assert!((r.equal_mass_beta_each - 9.0).abs() < 1e-12 && (r.equal_mass_beta - 18.0).abs() < 1e-12);
    assert!((r.seed_split_expected.beta1 - 45.0 / 8.0).abs() < 1e-12);
    assert!((r.seed_split_measured.beta1 - 45.0 / 8.0).abs() < 1e-3);
    assert!(r.annulus_residual.max < 1e-3);
    let j = serde_json::to_value(&r).unwrap();
    assert!(j.get("transition_residual").is_some());
}
