use hpz::coeffs::{intermediate_tables, weak_coeffs, EvalContext, Mode};
use hpz::params::{ModelParams, ModelVariant};
use hpz::roots::solve_characteristic_cubic;
use num_complex::Complex64 as C64;
use proptest::prelude::*;

fn canonical() -> ModelParams {
    ModelParams::natural(40.0, 1.0 / 128.0)
}

#[test]
fn first_order_tables_close() {
    let p = canonical();
    let r = solve_characteristic_cubic(&p, ModelVariant::Original).unwrap();
    let tables = intermediate_tables(&r, &p).unwrap();
    for alpha in [C64::new(0.0, 1.0), C64::new(-3.0, 0.5), C64::new(2.0, 0.0)] {
        let c = tables.at(alpha).unwrap();
        assert!((c.c1.iter().sum::<C64>()).norm() < 1e-12);
        for k in 1..4 {
            assert!((c.d1[k] - r.z[k - 1] * c.c1[k]).norm() < 1e-12);
        }
        assert!((c.d1.iter().sum::<C64>()).norm() < 1e-10);
    }
}

#[test]
fn pole_collision_is_reported() {
    let p = canonical();
    let r = solve_characteristic_cubic(&p, ModelVariant::Original).unwrap();
    let tables = intermediate_tables(&r, &p).unwrap();
    assert!(tables.at(r.z[1]).is_err());
}

#[test]
fn canonical_asymptotics() {
    let c = EvalContext::new(&canonical(), ModelVariant::Original).unwrap();
    let e = c.asymptotics(Mode::Exact).unwrap().values();
    let w = c.asymptotics(Mode::Weak).unwrap().values();
    let want_e = [-0.62485343548, 0.01562744131, -0.02069568854, 0.00507255887];
    let want_w = [-0.62460961899, 0.01561524047, -0.01833552154, 0.00780762024];
    for k in 0..4 {
        assert!((e[k] - want_e[k]).abs() < 1e-10, "exact {k}: {}", e[k]);
        assert!((w[k] - want_w[k]).abs() < 1e-10, "weak {k}: {}", w[k]);
    }
}

#[test]
fn coefficients_vanish_at_zero() {
    let c = EvalContext::new(&canonical(), ModelVariant::Original).unwrap();
    for mode in [Mode::Exact, Mode::Weak] {
        let v = c.evaluate(0.0, mode).unwrap().values();
        assert!(v.iter().all(|x| x.abs() < 1e-14), "{v:?}");
    }
}

#[test]
fn weak_series_matches_pointwise() {
    let p = canonical();
    let ts: Vec<f64> = (1..=60).map(|i| 0.25 * i as f64).collect();
    let series = hpz::coeffs::weak_series(&ts, &p, ModelVariant::Original).unwrap();
    for (t, s) in ts.iter().zip(&series) {
        let w = weak_coeffs(*t, &p, ModelVariant::Original).unwrap().values();
        for (x, y) in s.values().iter().zip(w) {
            assert!((x - y).abs() <= 1e-9 * y.abs().max(1e-3), "t = {t}: {x} vs {y}");
        }
    }
}

#[test]
fn caldeira_leggett_and_shifted_kernel_agree_on_a_b() {
    let p = ModelParams::natural(40.0, 0.5);
    let cl = EvalContext::new(&p, ModelVariant::CaldeiraLeggett).unwrap();
    let ws = EvalContext::new(&p, ModelVariant::WeakShiftedKernel).unwrap();
    for t in [0.1, 1.0, 7.0] {
        let (a, b) = cl.exact_ab(t).unwrap();
        let (a2, b2) = ws.exact_ab(t).unwrap();
        assert_eq!((a, b), (a2, b2));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Rescaling mass, frequency and hbar maps the coefficients by their units.
    #[test]
    fn unit_scaling(m in 0.2f64..5.0, w in 0.3f64..3.0, h in 0.2f64..5.0, t in 0.01f64..20.0, weak in any::<bool>()) {
        let raw = ModelParams::new(m, w, 40.0 * w, w / 128.0, h).unwrap();
        let mode = if weak { Mode::Weak } else { Mode::Exact };
        let scaled = EvalContext::new(&raw, ModelVariant::Original).unwrap().evaluate(t / w, mode).unwrap();
        let unit = EvalContext::new(&canonical(), ModelVariant::Original).unwrap().evaluate(t, mode).unwrap();
        let want = [m * w * w * unit.a, w * unit.b, h * w * unit.c, h * m * w * w * unit.d];
        for (x, y) in scaled.values().iter().zip(want) {
            prop_assert!((x - y).abs() <= 1e-9 * y.abs().max(1e-6), "{x} vs {y}");
        }
    }
}

#[test]
fn exact_coefficients_settle() {
    let c = EvalContext::new(&canonical(), ModelVariant::Original).unwrap();
    let last = c.exact(300.0).unwrap().values();
    let mut worst = [0.0f64; 4];
    for i in 0..=200 {
        let v = c.exact(100.0 + i as f64).unwrap().values();
        for k in 0..4 {
            worst[k] = worst[k].max((v[k] - last[k]).abs());
        }
    }
    assert!(worst.iter().all(|&w| w < 1e-6), "{worst:?}");
}

#[test]
fn sitting_on_critical_coupling_is_an_error() {
    let p = ModelParams::natural(40.0, 0.0125);
    assert!(matches!(EvalContext::new(&p, ModelVariant::Original), Err(hpz::Error::Inconsistent(_))));
}
