use nuradial_core::nu_engine::{LowPoly, NUProblem};
use proptest::prelude::*;

fn radial() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.0f64..20.0, 0.01f64..10.0, 0.01f64..5.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn k_candidates_match_analytic_pair((q, w, z) in radial()) {
        let prob = NUProblem::radial(q, w, z).unwrap();
        let ks = prob.k_candidates().unwrap();
        let spread = 2.0 * (z * (q + 0.25)).sqrt();
        prop_assert_eq!(ks.len(), 2);
        prop_assert!((ks[0] - (w - spread)).abs() <= 1e-10 * (1.0 + w.abs()), "{:?}", ks);
        prop_assert!((ks[1] - (w + spread)).abs() <= 1e-10 * (1.0 + w.abs()), "{:?}", ks);
    }

    #[test]
    fn branch_count_and_physicality((q, w, z) in radial()) {
        let prob = NUProblem::radial(q, w, z).unwrap();
        let branches = prob.all_branches().unwrap();
        prop_assert_eq!(branches.len(), 4);
        prop_assert_eq!(branches.iter().filter(|b| b.physical).count(), 2);
        for b in &branches {
            // τ′ = −2√z on the physical branches, +2√z on the others.
            let expected = if b.physical { -2.0 } else { 2.0 } * z.sqrt();
            prop_assert!((b.tau.slope() - expected).abs() <= 1e-10 * (1.0 + expected.abs()));
        }
    }

    #[test]
    fn sigma_bar_identity_on_every_branch((q, w, z) in radial()) {
        let prob = NUProblem::radial(q, w, z).unwrap();
        for b in prob.all_branches().unwrap() {
            let lhs = prob.sigma_bar(&b);
            let rhs = prob.sigma().scale(b.lambda_tilde);
            for (x, y) in [(lhs.c0, rhs.c0), (lhs.c1, rhs.c1), (lhs.c2, rhs.c2)] {
                prop_assert!((x - y).abs() <= 1e-10 * (1.0 + q + w + z), "{lhs:?} vs {rhs:?}");
            }
            // τ = τ̃ + 2π and λ̃ = k + π′ hold by construction.
            let tau = prob.tau_tilde() + b.pi.scale(2.0);
            prop_assert_eq!(tau, b.tau);
            prop_assert_eq!(b.lambda_tilde, b.k + b.pi.slope());
        }
    }

    #[test]
    fn perfect_square_certification((q, w, z) in radial()) {
        let prob = NUProblem::radial(q, w, z).unwrap();
        let g = prob.half_drift();
        for b in prob.all_branches().unwrap() {
            let p = prob.under_root(b.k);
            let scale = 1.0 + p.max_abs_coeff();
            for i in 0..50 {
                let s = -10.0 + 20.0 * i as f64 / 49.0;
                let value = p.eval(s);
                prop_assert!(value >= -1e-9 * scale * (1.0 + s * s), "p({s}) = {value}");
                let root = (b.pi - g).eval(s).abs();
                prop_assert!((value.max(0.0).sqrt() - root).abs() <= 1e-8 * (1.0 + root) * scale.sqrt(), "s = {s}");
            }
        }
    }

    #[test]
    fn generic_problem_identity(
        s0 in -2.0f64..2.0, s1 in -2.0f64..2.0, s2 in -2.0f64..2.0,
        t0 in -2.0f64..2.0, t1 in -2.0f64..2.0,
        u0 in -2.0f64..2.0, u1 in -2.0f64..2.0, u2 in -2.0f64..2.0,
    ) {
        prop_assume!(LowPoly::new(s0, s1, s2).max_abs_coeff() > 0.1);
        let prob = NUProblem::new(LowPoly::new(s0, s1, s2), LowPoly::linear(t0, t1), LowPoly::new(u0, u1, u2)).unwrap();
        if let Ok(branches) = prob.all_branches() {
            for b in branches {
                let lhs = prob.sigma_bar(&b);
                let rhs = prob.sigma().scale(b.lambda_tilde);
                let scale = 1.0 + lhs.max_abs_coeff().max(rhs.max_abs_coeff());
                prop_assert!((lhs - rhs).max_abs_coeff() <= 1e-8 * scale, "{lhs:?} vs {rhs:?}");
            }
        }
    }
}
