use nuradial_core::potential::{expansion_coeffs, landscape, InversePolyPotential, LandscapeMethod};
use proptest::prelude::*;

fn coeffs4() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-5.0f64..5.0, 4)
}

fn pot(a0: f64, inv: Vec<f64>) -> InversePolyPotential {
    InversePolyPotential::new(a0, inv).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn landscape_residuals(inv in coeffs4()) {
        let p = pot(0.0, inv);
        let report = landscape(&p);
        prop_assert_eq!(report.method, LandscapeMethod::ClosedFormCubic);
        for &r in &report.zeros {
            prop_assert!(r > 0.0);
            prop_assert!(p.evaluate(r).unwrap().abs() <= 1e-8 * p.value_scale(r), "zero {r}");
        }
        for e in &report.extrema {
            prop_assert!(e.r > 0.0);
            prop_assert!(p.derivative(e.r).abs() <= 1e-8 * p.derivative_scale(e.r), "extremum {}", e.r);
        }
        prop_assert!(report.zeros.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(report.extrema.windows(2).all(|w| w[0].r < w[1].r));
    }

    #[test]
    fn expansion_is_linear(a in coeffs4(), b in coeffs4(), r0 in 0.2f64..5.0, a0 in -3.0f64..3.0) {
        let (pa, pb) = (pot(a0, a), pot(-a0, b));
        let sum = pa.add(&pb).unwrap();
        let (ta, tb, ts) = (
            expansion_coeffs(&pa, r0).unwrap(),
            expansion_coeffs(&pb, r0).unwrap(),
            expansion_coeffs(&sum, r0).unwrap(),
        );
        let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * (1.0 + x.abs().max(y.abs()));
        prop_assert!(close(ts.q, ta.q + tb.q));
        prop_assert!(close(ts.w, ta.w + tb.w));
        prop_assert!(close(ts.z_pot, ta.z_pot + tb.z_pot));
    }

    #[test]
    fn effective_potential_osculates_at_r0(
        inv in prop::collection::vec(-5.0f64..5.0, 6), r0 in 0.5f64..3.0,
    ) {
        let p = pot(0.0, inv);
        let t = expansion_coeffs(&p, r0).unwrap();
        let h = 1e-4 * r0;
        let v = |r: f64| p.evaluate(r).unwrap();
        let e = |r: f64| t.effective_potential(r);
        let d1 = |f: &dyn Fn(f64) -> f64| (f(r0 + h) - f(r0 - h)) / (2.0 * h);
        let d2 = |f: &dyn Fn(f64) -> f64| (f(r0 + h) - 2.0 * f(r0) + f(r0 - h)) / (h * h);
        // Magnitude scales of V, V′ and V″ at r0, term by term.
        let scale = |order: i32| -> f64 {
            p.inv_coeffs()
                .iter()
                .enumerate()
                .map(|(i, a)| {
                    let hh = (i + 1) as f64;
                    let falling: f64 = (0..order).map(|j| hh + j as f64).product();
                    falling * a.abs() / r0.powf(hh + order as f64)
                })
                .sum::<f64>()
                .max(1e-300)
        };
        prop_assert!((v(r0) - e(r0)).abs() <= 1e-12 * scale(0));
        prop_assert!((d1(&v) - d1(&e)).abs() <= 1e-6 * scale(1), "{} {}", d1(&v), d1(&e));
        prop_assert!((d2(&v) - d2(&e)).abs() <= 1e-6 * scale(2), "{} {}", d2(&v), d2(&e));
    }
}

#[test]
fn landscape_double_well_fixture() {
    let p = pot(0.0, vec![0.0, 1.0, -2.0, 1.0]);
    let report = landscape(&p);
    assert_eq!(report.zeros.len(), 1);
    assert!((report.zeros[0] - 1.0).abs() < 1e-8);
    assert_eq!(report.extrema.len(), 2);
    assert!((report.extrema[0].r - 1.0).abs() < 1e-8 && report.extrema[0].value.abs() < 1e-8);
    assert!((report.extrema[1].r - 2.0).abs() < 1e-8);
    assert!((report.extrema[1].value - 1.0 / 16.0).abs() < 1e-8);
}

#[test]
fn bracketing_path_finds_shifted_zeros() {
    // V = 1 − 1/r has its zero at r = 1 and no extremum.
    let p = pot(1.0, vec![-1.0]);
    let report = landscape(&p);
    assert_eq!(report.method, LandscapeMethod::NumericBracketing);
    assert_eq!(report.zeros.len(), 1);
    assert!((report.zeros[0] - 1.0).abs() < 1e-11);
    assert!(report.extrema.is_empty());
}
