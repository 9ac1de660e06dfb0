use hpz::params::{ModelParams, ModelVariant};
use hpz::roots::{gamma_critical, solve_characteristic_cubic, vieta_residuals, Cubic, RootClass};
use num_complex::Complex64 as C64;
use proptest::prelude::*;

#[test]
fn canonical_roots() {
    let r = solve_characteristic_cubic(&ModelParams::natural(40.0, 1.0 / 128.0), ModelVariant::Original).unwrap();
    assert_eq!(r.class, RootClass::RealPlusConjugatePair);
    let want = [
        C64::new(-39.98437255869, 0.0),
        C64::new(-0.0078137206550, 0.61244225058),
        C64::new(-0.0078137206550, -0.61244225058),
    ];
    for (z, w) in r.z.iter().zip(&want) {
        assert!((z - w).norm() < 1e-10, "{z} vs {w}");
    }
}

#[test]
fn closed_form_critical_couplings() {
    let p = ModelParams::natural(40.0, 0.0);
    assert_eq!(gamma_critical(&p, ModelVariant::Original).unwrap(), 0.0125);
    let cl = gamma_critical(&p, ModelVariant::CaldeiraLeggett).unwrap();
    assert!((cl - 5.0125314074).abs() < 1e-9);
    // two real roots merge into a conjugate pair at the critical coupling
    let class = |g: f64| hpz::roots::solve_unchecked(&p.with_gamma(g), ModelVariant::CaldeiraLeggett).unwrap().class;
    assert_eq!(class(cl * 0.999), RootClass::ThreeReal);
    assert_eq!(class(cl * 1.001), RootClass::RealPlusConjugatePair);
}

#[test]
fn beyond_critical_root_enters_right_half_plane() {
    let r = hpz::roots::solve_unchecked(&ModelParams::natural(40.0, 0.02), ModelVariant::Original).unwrap();
    assert!(r.max_real_part() > 0.0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn vieta_relations_hold(omega_c in 10.0f64..200.0, frac in 0.01f64..0.95, cl in any::<bool>()) {
        let variant = if cl { ModelVariant::CaldeiraLeggett } else { ModelVariant::Original };
        let base = ModelParams::natural(omega_c, 0.0);
        let p = base.with_gamma(frac * gamma_critical(&base, variant).unwrap());
        let r = solve_characteristic_cubic(&p, variant).unwrap();
        let (s1, s2, s3) = vieta_residuals(&r, &p, variant);
        let scale = 1e-12 * omega_c * omega_c;
        prop_assert!(s1 < scale && s2 < scale && s3 < scale, "{s1} {s2} {s3}");
        let cubic = Cubic::for_model(&p, variant);
        for z in r.z {
            prop_assert!(z.re < 0.0);
            prop_assert!(cubic.eval(z).norm() <= 1e-9 * (1.0 + z.norm().powi(3)));
        }
    }

    #[test]
    fn ordering_and_conjugacy(omega_c in 5.0f64..200.0, frac in 0.01f64..0.95) {
        let base = ModelParams::natural(omega_c, 0.0);
        let p = base.with_gamma(frac * gamma_critical(&base, ModelVariant::Original).unwrap());
        let r = solve_characteristic_cubic(&p, ModelVariant::Original).unwrap();
        if r.class == RootClass::RealPlusConjugatePair {
            prop_assert_eq!(r.z[0].im, 0.0);
            prop_assert!(r.z[1].im > 0.0);
            prop_assert_eq!(r.z[2], r.z[1].conj());
        } else {
            prop_assert!(r.z.iter().all(|z| z.im == 0.0));
        }
    }
}
