use liouville_lab::polygon::{self, PointConfig, PolygonCase};
use liouville_lab::Error;
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::TAU;

fn config(points: Vec<Complex64>, beta0: f64, n: f64) -> PointConfig {
    PointConfig { points, beta0, n, case: PolygonCase::BelowOne }
}

fn max_norm(r: &[Complex64]) -> f64 {
    r.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn balance_examples() {
    let two = vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
    assert!(max_norm(&polygon::balance_residual(&config(two, 0.0, 1.0)).unwrap()) < 1e-15);
    for n in 1..=4 {
        let pts = polygon::regular_polygon(n + 1, 1.0, 0.0);
        assert!(max_norm(&polygon::balance_residual(&config(pts, 0.0, n as f64)).unwrap()) < 1e-12);
    }
    let one = vec![Complex64::new(0.3, -0.4)];
    assert!(max_norm(&polygon::balance_residual(&config(one, 4.0, 2.0)).unwrap()) < 1e-15);
}

#[test]
fn coincident_and_zero_points_are_refused() {
    let z = Complex64::new(1.0, 1.0);
    assert!(matches!(polygon::balance_residual(&config(vec![z, z], 0.0, 1.0)), Err(Error::CoincidentPoints(_))));
    let o = Complex64::new(0.0, 0.0);
    assert!(matches!(polygon::balance_residual(&config(vec![z, o], 0.0, 1.0)), Err(Error::CoincidentPoints(_))));
}

#[test]
fn sum_identity_examples() {
    for n in 1..=5 {
        let pts = polygon::regular_polygon(n + 1, 1.0, 0.0);
        assert!(polygon::sum_identity_check(&config(pts, 0.0, n as f64)));
    }
    for n in [0.5, 1.0, 2.5, 7.0] {
        let pts = polygon::regular_polygon(2, 1.0, 0.3);
        assert!(polygon::sum_identity_check(&config(pts, 2.0 * (n - 1.0), n)));
    }
    let a = 3.0;
    let cfg = PointConfig {
        points: polygon::regular_polygon(2, 1.0, 0.0),
        beta0: 4.0 / a,
        n: 1.0,
        case: PolygonCase::AboveOne { a },
    };
    assert!(!polygon::sum_identity_check(&cfg));
}

#[test]
fn roots_fit_examples() {
    let pts: Vec<Complex64> = (0..3).map(|k| Complex64::from_polar(2.0, TAU * k as f64 / 3.0)).collect();
    let fit = polygon::roots_of_unity_fit(&pts);
    assert!(fit.fits && (fit.xi0 - Complex64::new(8.0, 0.0)).norm() < 1e-13);
    let mut moved = pts.clone();
    moved[1] += Complex64::new(1e-3, 0.0);
    let fit = polygon::roots_of_unity_fit(&moved);
    assert!(!fit.fits && fit.max_deviation > polygon::TAU_FIT * fit.xi0.norm());
}

#[test]
fn multistart_zeros_are_regular_polygons() {
    for n in 1..=3 {
        let r = polygon::multistart_search(n, 64, 7);
        assert!(r.converged > 0, "N = {n}: no start converged");
        assert!(r.fit_failures.is_empty(), "N = {n}: {:?}", r.fit_failures);
        assert_eq!(r.sum_identity_failures, 0);
        assert!(r.largest_fit_deviation < 1e-8);
    }
}

#[test]
fn multistart_is_deterministic() {
    let a = serde_json::to_string(&polygon::multistart_search(2, 16, 11)).unwrap();
    let b = serde_json::to_string(&polygon::multistart_search(2, 16, 11)).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn regular_polygons_balance_under_rotation_and_scale(n in 1usize..=5, scale in 1e-3f64..1e3, rot in 0.0f64..TAU) {
        let pts = polygon::regular_polygon(n + 1, scale, rot);
        let r = polygon::balance_residual(&config(pts.clone(), 0.0, n as f64)).unwrap();
        // The residual is homogeneous of degree −1; compare at unit scale.
        prop_assert!(max_norm(&r) * scale < 1e-12, "{}", max_norm(&r) * scale);
        let unit = polygon::balance_residual(&config(polygon::regular_polygon(n + 1, 1.0, rot), 0.0, n as f64)).unwrap();
        for (x, y) in r.iter().zip(&unit) {
            prop_assert!((x * scale - y).norm() < 1e-12);
        }
        prop_assert!(polygon::roots_of_unity_fit(&pts).fits);
    }
}
