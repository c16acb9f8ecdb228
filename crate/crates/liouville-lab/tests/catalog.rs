use liouville_lab::catalog::{self, Case, Mechanism, SumCase, SumConstraintWitness};
use liouville_lab::regime::Params;
use liouville_lab::Error;
use proptest::prelude::*;

fn params(a: f64, n: f64) -> Params {
    Params::new(a, n).unwrap()
}

#[test]
fn formula_a_examples() {
    assert!((catalog::beta_formula_a(0.4, 2.0, 0).unwrap() - 10.0).abs() < 1e-12);
    let v = catalog::beta_formula_a(0.125, 3.0, 2).unwrap();
    assert!((v - 27.313708498984759).abs() < 1e-12);
    for n in 1..=5 {
        let n = n as f64;
        let a = 1.0 / (2.0 * (n + 1.0));
        let v = catalog::beta_formula_a(a, n, n as u32 + 1).unwrap();
        assert!((v - 4.0 * (n + 1.0)).abs() < 1e-9, "N = {n}: {v}");
    }
}

#[test]
fn formula_b_example_and_companion() {
    let b = catalog::beta_formula_b(0.3, 3.0, 2).unwrap();
    let t = 1.0 + 0.4 / 3.0;
    let expected = (2.0 / 0.3) * (t + (t * t - 0.16f64).sqrt());
    assert!((b.value - expected).abs() < 1e-12);
    assert!((b.value - 14.624_9).abs() < 1e-4);
    assert!((b.value - (b.companion + 4.0)).abs() < 1e-12);
}

#[test]
fn formula_c_examples() {
    assert!(matches!(catalog::beta_formula_c(3.0, 1.0, 2), Err(Error::ComplexRoot { .. })));
    assert!((catalog::beta_formula_c(3.0, 1.0, 0).unwrap() - 8.0).abs() < 1e-12);
    assert!(matches!(catalog::beta_formula_c(0.9, 1.0, 1), Err(Error::OutOfRegime(_))));
}

#[test]
fn equal_masses_examples() {
    let (b, each) = catalog::beta_equal_masses(1.0 / 3.0, 6.0, 2).unwrap();
    assert!((b - 18.0).abs() < 1e-12 && (each - 9.0).abs() < 1e-12);
    assert_eq!(each * 2.0, b);
    for m in 2..6 {
        assert!(matches!(catalog::beta_equal_masses(0.5, 1.0, m), Err(Error::OutOfRegime(_))));
    }
}

#[test]
fn sum_constraint_examples() {
    let w = SumConstraintWitness { betas: vec![9.0, 9.0], m: 2 };
    let r = catalog::sum_constraint_check(1.0 / 3.0, 6.0, &w, SumCase::BelowOne);
    assert!(r.ok && r.squares_residual < 1e-12);
    assert!((catalog::quadratic_budget(1.0 / 3.0, 6.0, 18.0) - 162.0).abs() < 1e-12);
    let w = SumConstraintWitness { betas: vec![12.0, 6.0], m: 2 };
    let r = catalog::sum_constraint_check(1.0 / 3.0, 6.0, &w, SumCase::BelowOne);
    assert!(!r.ok && (r.squares_residual - 18.0).abs() < 1e-12);
    let w = SumConstraintWitness { betas: vec![], m: 0 };
    assert!(!catalog::sum_constraint_check(1.0 / 3.0, 6.0, &w, SumCase::BelowOne).ok);
}

#[test]
fn m_range_examples() {
    let r = catalog::m_range_with_origin(0.05, 1.0).unwrap();
    assert_eq!((r.lo, r.hi), (1, 3));
    assert!(catalog::m_ranges(0.3, 0.5, Mechanism::FormulaA).unwrap().is_empty());
}

#[test]
fn formula_b_range_matches_direct_scan() {
    // Oracle: scan m and test the companion mass against 2/a directly.
    // (The value example at a = 0.3, N = 3 lies above 1/(N+1), outside this
    // mechanism's regime.)
    for &(a, n) in &[(0.2, 3.0), (0.1, 2.0), (0.05, 5.0), (0.2, 2.5), (0.15, 4.0), (0.02, 7.0)] {
        let r = catalog::m_ranges(a, n, Mechanism::FormulaB).unwrap();
        for m in 2..40u32 {
            let direct = catalog::beta_formula_b(a, n, m).map(|b| b.companion >= 2.0 / a - 1e-9).unwrap_or(false);
            assert_eq!(r.contains(m as i64), direct, "a = {a}, N = {n}, m = {m}, range {r:?}");
        }
    }
}

#[test]
fn enumerate_examples() {
    let c = catalog::enumerate(params(1.0 / 3.0, 1.0)).unwrap();
    let v: Vec<f64> = c.entries.iter().filter_map(|e| e.value).collect();
    assert_eq!(v.len(), 2);
    assert!((v[0] - 8.0).abs() < 1e-12 && (v[1] - 12.0).abs() < 1e-12);
    let eight = &c.entries[0];
    let mut mechs: Vec<Mechanism> = eight.also.iter().map(|x| x.mechanism).collect();
    mechs.push(eight.mechanism);
    assert!(mechs.contains(&Mechanism::FormulaA));
    assert!(c.entries.iter().any(|e| e.case == Case::BlowUp));

    let c = catalog::enumerate(params(0.4, 0.5)).unwrap();
    let v: Vec<f64> = c.entries.iter().filter_map(|e| e.value).collect();
    assert!(v.iter().any(|x| (x - 10.0).abs() < 1e-12));

    let c = catalog::enumerate(params(3.0, 1.0)).unwrap();
    let w = c.entries.iter().find(|e| e.mechanism == Mechanism::Window06).unwrap();
    let [lo, hi] = w.interval.unwrap();
    assert!((lo - 4.0).abs() < 1e-12 && (hi - 20.0 / 3.0).abs() < 1e-12);
}

#[test]
fn enumerate_refuses_excluded_parameters() {
    assert!(matches!(catalog::enumerate(params(0.5, 1.0)), Err(Error::DegenerateParameter(_))));
    assert!(matches!(catalog::enumerate(params(1.0, 1.0)), Err(Error::DegenerateParameter(_))));
}

#[test]
fn enumerate_json_shape() {
    let c = catalog::enumerate(params(1.0 / 3.0, 1.0)).unwrap();
    let j = serde_json::to_value(&c.entries).unwrap();
    for e in j.as_array().unwrap() {
        assert!(e.get("value").is_some() || e.get("interval").is_some());
        for key in ["mechanism", "m", "constraints", "suspect"] {
            assert!(e.get(key).is_some(), "missing {key} in {e}");
        }
    }
}

#[test]
fn auxiliary_function_examples() {
    assert_eq!(catalog::a_threshold(4.0).unwrap(), 0.0);
    let a2 = catalog::a_threshold(2.0).unwrap();
    assert!((a2 - 1.0 / (3.0 + 5f64.sqrt())).abs() < 1e-15);
    assert!((a2 - 0.190_983_0).abs() < 1e-7);
    for n in [2.0, 3.0] {
        let an = catalog::a_threshold(n).unwrap();
        assert!((catalog::f_appendix(an, n).unwrap() - 1.0).abs() < 1e-10);
    }
    assert!((catalog::phi(0.0, 0.1, 1.0).unwrap() - 2.0).abs() < 1e-15);
    assert!((catalog::psi(0.0, 0.1, 1.0).unwrap() - 2.0).abs() < 1e-15);
    let n = 2.0;
    assert!((catalog::f_appendix(1e-9, n).unwrap() - n / 4.0).abs() < 1e-6);
    assert!((catalog::f_appendix(1.0 / 3.0 - 1e-12, n).unwrap() - 1.5).abs() < 1e-6);
    assert!(matches!(catalog::f_appendix(0.4, n), Err(Error::OutOfDomain(_))));
}

#[test]
fn f_strictly_increasing_on_dense_grids() {
    for n in [1.0, 1.5, 2.0, 3.0, 5.0] {
        let top = (1.0f64 / (n + 1.0)).min(1.0);
        let values: Vec<f64> = (1..=1000)
            .map(|i| catalog::f_appendix(top * i as f64 / 1001.0, n).unwrap())
            .collect();
        assert!(values.windows(2).all(|w| w[1] > w[0]), "N = {n}");
        assert!(values.iter().all(|&f| f > n / 4.0 && f < (n + 1.0) / 2.0), "N = {n}");
    }
}

#[test]
fn f_crosses_one_exactly_above_threshold() {
    for n in [1.0, 1.5, 2.0, 3.0, 3.9, 5.0] {
        let an = catalog::a_threshold(n).unwrap();
        let top = 1.0 / (n + 1.0);
        for i in 1..1000 {
            let a = top * i as f64 / 1000.0;
            if (a - an).abs() < 1e-9 {
                continue;
            }
            let f = catalog::f_appendix(a, n).unwrap();
            assert_eq!(f >= 1.0, n > 1.0 && a >= an, "N = {n}, a = {a}, f = {f}");
            if n > 1.0 && n <= 3.0 {
                assert!(f < 2.0);
            }
        }
    }
}

#[test]
fn phi_and_psi_monotone_with_thresholds() {
    for &(a, n) in &[(0.1, 1.0), (0.05, 3.0), (0.2, 2.0), (0.3, 1.5)] {
        let ta = catalog::t_a(a, n).unwrap();
        let sa = catalog::s_a(a, n).unwrap();
        assert!((catalog::phi(ta, a, n).unwrap() - 1.0).abs() < 1e-12);
        let g = 1.0 - a * (n + 1.0);
        let target = a * (n + 1.0) + (g * g + n * a / (1.0 - a)).sqrt();
        assert!((catalog::psi(sa, a, n).unwrap() - target).abs() < 1e-12);
        let ts: Vec<f64> = (0..500).map(|i| 3.0 * ta * i as f64 / 499.0).collect();
        let ph: Vec<f64> = ts.iter().map(|&t| catalog::phi(t, a, n).unwrap()).collect();
        assert!(ph.windows(2).all(|w| w[1] < w[0]));
        for (&t, &v) in ts.iter().zip(&ph) {
            if (t - ta).abs() > 1e-9 * ta {
                assert_eq!(v >= 1.0, t <= ta);
            }
        }
        let ps: Vec<f64> = (0..500).map(|i| catalog::psi(sa * i as f64 / 499.0, a, n).unwrap()).collect();
        assert!(ps.windows(2).all(|w| w[1] < w[0]));
    }
}

fn subcritical() -> impl Strategy<Value = (f64, f64)> {
    (1.0f64..6.0, 0.001f64..0.999).prop_map(|(n, t)| (t / (n + 1.0), n))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn formula_a_decreasing_to_terminal_value((a, n) in subcritical()) {
        let hi = catalog::m_ranges(a, n, Mechanism::FormulaA).map(|r| r.hi).unwrap_or(0).max(1) as u32;
        let values: Vec<f64> = (0..=hi).map(|m| catalog::beta_formula_a(a, n, m).unwrap()).collect();
        prop_assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
        if n.fract() == 0.0 {
            let last = catalog::beta_formula_a(a, n, n as u32 + 1).unwrap();
            let terminal = (4.0 * (n + 1.0)).max(4.0 / a - 4.0 * (n + 1.0));
            prop_assert!((last - terminal).abs() < 1e-9 * terminal, "{last} vs {terminal}");
        }
    }

    #[test]
    fn formula_b_top_of_range_respects_lower_bound((a, n) in subcritical()) {
        if let Ok(r) = catalog::m_ranges(a, n, Mechanism::FormulaB) {
            if !r.is_empty() {
                let v = catalog::beta_formula_b(a, n, r.hi as u32).unwrap().value;
                let g = 1.0 - a * (n + 1.0);
                let bound = 2.0 * (n + 1.0) + (2.0 / a) * (g * g + n * a / (1.0 - a)).sqrt();
                prop_assert!(v >= bound - 1e-9 * bound, "{v} < {bound}");
            }
        }
    }

    #[test]
    fn formula_c_unit_multiplicity(n in 0.1f64..6.0, t in 0.0f64..1.0) {
        let a = 1.0f64.max(2.0 / (n + 1.0)) * (1.001 + 4.0 * t);
        let v = catalog::beta_formula_c(a, n, 1).unwrap();
        let expected = 4.0 * (n + 1.0) - 4.0 / a;
        prop_assert!((v - expected).abs() < 1e-12 * expected.abs().max(1.0));
    }

    #[test]
    fn enumerate_respects_universal_bounds(a in 0.01f64..4.0, n in 0.05f64..6.0) {
        prop_assume!((a * (n + 1.0) - 1.0).abs() > 1e-9 && (a - 1.0).abs() > 1e-9);
        let c = catalog::enumerate(params(a, n)).unwrap();
        prop_assert!(!c.entries.is_empty());
        prop_assert!(c.entries.iter().all(|e| e.satisfies_bounds()));
        prop_assert!(c.rejected.is_empty(), "{:?}", c.rejected);
        let keys: Vec<f64> = c.entries.iter().map(|e| e.value.or(e.interval.map(|i| i[0])).unwrap()).collect();
        prop_assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    }
}
