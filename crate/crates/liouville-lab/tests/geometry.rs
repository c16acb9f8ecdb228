use liouville_lab::catalog;
use liouville_lab::geometry::{self, ScanGrid};
use liouville_lab::Error;
use proptest::prelude::*;

#[test]
fn angle_examples() {
    let cd = geometry::angles_from_case(0.125, 3.0, 2, false).unwrap();
    assert_eq!(cd.thetas, vec![-0.25, -0.25]);
    assert!((cd.theta_inf + 0.292_893_218_813_452_5).abs() < 1e-15);
    assert!(cd.theta0.is_none() && cd.euler == 2.0);

    let cd = geometry::angles_from_case(0.125, 3.0, 0, false).unwrap();
    assert_eq!(cd.theta_inf, 0.0);
    assert_eq!(geometry::gauss_bonnet_mass(&cd), 2.0);

    let cd = geometry::angles_from_case(1.0 / 12.0, 1.0, 1, true).unwrap();
    assert!((cd.theta0.unwrap() + 1.0 / 3.0).abs() < 1e-15);
    assert!((cd.thetas[0] + 1.0 / 6.0).abs() < 1e-15);
}

#[test]
fn gauss_bonnet_two_routes_agree() {
    let cd = geometry::angles_from_case(0.125, 3.0, 2, false).unwrap();
    let gb = geometry::gauss_bonnet_mass(&cd);
    assert!((gb - 1.207_106_781_186_547_5).abs() < 1e-12);
    assert!((gb - geometry::gauss_bonnet_closed_form(0.125, 3.0, 2, false).unwrap()).abs() < 1e-14);
}

#[test]
fn troyanov_examples() {
    let r = geometry::troyanov_check(&geometry::angles_from_case(0.125, 3.0, 2, false).unwrap());
    assert!(r.ok && !r.sufficient_only);
    // At m = N+1 the left side also fails: here a(N+1) = 1/2 makes the cone
    // angle at infinity collapse to zero, so no data are produced at all.
    assert!(matches!(geometry::angles_from_case(0.125, 3.0, 4, false), Err(Error::AngleNonPositive(_))));
    // Otherwise m = N+1 sits exactly on the boundary θ_∞ = Σθ_j, where the
    // strict inequality fails in exact arithmetic; the scans exclude it.
    for a in [0.02, 0.1, 0.2] {
        let r = geometry::troyanov_check(&geometry::angles_from_case(a, 3.0, 4, false).unwrap());
        assert!(r.min_abs_margin() < geometry::NEAR_BOUNDARY, "a = {a}: {r:?}");
    }
    let r = geometry::troyanov_check(&geometry::angles_from_case(0.125, 3.0, 1, false).unwrap());
    assert!(!r.ok);
}

#[test]
fn nonpositive_angles_are_refused() {
    assert!(matches!(geometry::angles_from_case(0.6, 1.0, 2, false), Err(Error::AngleNonPositive(_))));
    assert!(matches!(geometry::angles_from_case(0.3, 1.0, 1, true), Err(Error::AngleNonPositive(_))));
}

#[test]
fn default_equivalence_scan_is_clean() {
    let r = geometry::equivalence_scan(&ScanGrid::default_equivalence());
    assert!(r.checked > 0);
    assert!(r.violations.is_empty(), "{:?}", r.violations);
    let j = serde_json::to_value(&r).unwrap();
    for key in ["grid", "violations", "near_boundary_excluded"] {
        assert!(j.get(key).is_some());
    }
}

#[test]
fn default_claim_scan_is_clean() {
    let r = geometry::claim_never_6220(&ScanGrid::default_claim());
    assert!(r.satisfactions.is_empty(), "{:?}", r.satisfactions);
    assert!(r.checked > 0);
}

#[test]
fn claim_examples() {
    for m in 1..=3 {
        assert!(geometry::origin_inequality_margin(0.05, 1.0, m).unwrap() <= 0.0);
    }
    let r = catalog::m_range_with_origin(0.01, 2.0).unwrap();
    for m in r.iter() {
        assert!(geometry::origin_inequality_margin(0.01, 2.0, m as u32).unwrap() <= 0.0);
    }
    let g = ScanGrid { a_values: vec![0.25 - 1e-6], n_values: vec![1.0] };
    let r = geometry::claim_never_6220(&g);
    assert_eq!(r.no_admissible_m.len(), 1);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, ..ProptestConfig::default() })]

    #[test]
    fn gauss_bonnet_matches_formula_a(n in 0.5f64..6.0, t in 0.01f64..0.99, m in 0u32..8) {
        let a = t * (1.0 / (n + 1.0)).min(0.5);
        prop_assume!(a < 0.5);
        if let (Ok(cd), Ok(_)) = (geometry::angles_from_case(a, n, m, false), catalog::beta_formula_a(a, n, m)) {
            let gb = geometry::gauss_bonnet_mass(&cd);
            let via_a = geometry::gauss_bonnet_from_formula_a(a, n, m).unwrap();
            prop_assert!((gb - via_a).abs() < 1e-12 * gb.abs().max(1.0), "{gb} vs {via_a}");
        }
    }

    #[test]
    fn angles_valid_or_refused(n in 0.0f64..6.0, t in 0.01f64..0.99, m in 0u32..6, origin: bool) {
        // Whenever data are produced, every cone angle is positive; inside
        // the regime the finite-point angles lie in (0, 2π).
        let a = if origin { t * 0.5 / (n + 1.0) } else { t * 0.5 };
        match geometry::angles_from_case(a, n, m, origin) {
            Ok(cd) => {
                prop_assert!(cd.validate().is_ok());
                prop_assert!(cd.thetas.iter().all(|&x| x > -1.0 && x < 0.0));
            }
            Err(e) => prop_assert!(matches!(e, Error::ComplexRoot { .. } | Error::AngleNonPositive(_)), "{e}"),
        }
    }

    #[test]
    fn out_of_regime_angles_are_refused(n in 0.0f64..6.0, t in 1.0f64..3.0, m in 1u32..6) {
        prop_assert!(matches!(geometry::angles_from_case(0.5 * t, n, m, false), Err(Error::AngleNonPositive(_))));
        let a = 0.5 * t / (n + 1.0);
        prop_assert!(matches!(geometry::angles_from_case(a, n, m, true), Err(Error::AngleNonPositive(_))));
    }
}
