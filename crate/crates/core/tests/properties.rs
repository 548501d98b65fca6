use factorize::ansatz::solve_parameters;
use factorize::chf::{eval_m, ChfParams, EvalPolicy};
use factorize::classify::{classify_system, superpotential};
use factorize::systems::SystemSpec;
use factorize::verify::{riccati_check, riccati_points, GridSpec, RICCATI_TOL};
use num_complex::Complex64;
use proptest::prelude::*;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn kummer_transformation(ar in -4.0..4.0f64, ai in -4.0..4.0f64, br in 0.3..5.0f64, bi in -3.0..3.0f64,
                             zr in -6.0..6.0f64, zi in -6.0..6.0f64) {
        let policy = EvalPolicy::default();
        let (a, b, z) = (c64(ar, ai), c64(br, bi), c64(zr, zi));
        let lhs = eval_m(ChfParams::new(a, b), z, &policy).unwrap();
        let rhs = z.exp() * eval_m(ChfParams::new(b - a, b), -z, &policy).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn every_candidate_satisfies_the_zeta_constraint(k in 0.2..3.0f64, l in 0u32..=5, m in -5i32..=5) {
        // `solve_parameters` builds each candidate only after checking the
        // constraint residual at sample points.
        let systems = [
            SystemSpec::free1d(),
            SystemSpec::free2d(m).unwrap(),
            SystemSpec::free3d(l).unwrap(),
            SystemSpec::linear(1.0).unwrap(),
            SystemSpec::hydrogen(l, 1.0, 1.0).unwrap(),
            SystemSpec::morse(1.3, 0.8).unwrap(),
        ];
        for s in &systems {
            let cands = solve_parameters(s, k).unwrap();
            prop_assert_eq!(cands.len(), s.name.table_size());
        }
    }

    #[test]
    fn free2d_verdicts_depend_on_m_only_through_its_modulus(k in 0.2..3.0f64, m in 1i32..=5) {
        let plus = classify_system(&SystemSpec::free2d(m).unwrap(), k).unwrap();
        let minus = classify_system(&SystemSpec::free2d(-m).unwrap(), k).unwrap();
        let sp: Vec<_> = plus.verdicts.iter().map(|v| v.status).collect();
        let sm: Vec<_> = minus.verdicts.iter().map(|v| v.status).collect();
        prop_assert_eq!(sp, sm);
    }

    #[test]
    fn hydrogen_sign_branches_are_conjugate(k in 0.3..3.0f64, l in 0u32..=5, z in 0.2..15.0f64) {
        let s = SystemSpec::hydrogen(l, 1.0, 1.0).unwrap();
        let cands = solve_parameters(&s, k).unwrap();
        let w1 = superpotential(&cands[0], z).unwrap();
        let w3 = superpotential(&cands[2], z).unwrap();
        prop_assert!((w1 - w3.conj()).norm() <= 1e-9 * (1.0 + w1.norm()));
        prop_assert!(w1.im.abs() <= 1e-9 * (1.0 + w1.norm()));
    }

    #[test]
    fn accepted_free3d_states_satisfy_riccati(k in 0.2..3.0f64, l in 0u32..=5) {
        let s = SystemSpec::free3d(l).unwrap();
        let classification = classify_system(&s, k).unwrap();
        let cands = solve_parameters(&s, k).unwrap();
        for v in classification.verdicts.iter().filter(|v| v.status.is_accepted()) {
            let c = &cands[v.case_id - 1];
            let r = riccati_check(c, &riccati_points(c, 20), RICCATI_TOL).unwrap();
            prop_assert!(r.passed, "{:?}", r);
        }
    }

    #[test]
    fn morse_verdicts_hold_across_depths(xi in 0.3..6.0f64, eta in 0.2..3.0f64) {
        let s = SystemSpec::morse(xi * xi / 2.0, 1.0).unwrap();
        let c = classify_system(&s, eta).unwrap();
        prop_assert!(c.matches_table(), "{:?}", c.mismatches);
    }

    #[test]
    fn grid_spec_parses(lo in -50.0..0.0f64, width in 0.5..100.0f64, n in 64usize..10_000) {
        let text = format!("{lo}:{}:{n}", lo + width);
        let g: GridSpec = text.parse().unwrap();
        prop_assert_eq!(g, GridSpec::new(lo, lo + width, n).unwrap());
    }
}
