//! Helpers shared by the integration tests.
#![allow(dead_code)]

use hpz::quad::tanh_sinh;
use num_complex::Complex64;

pub type C64 = Complex64;

pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a * (b / a).powf(i as f64 / (n - 1) as f64)).collect()
}

fn integrate_c<F: Fn(f64) -> C64>(f: F, breaks: &[f64]) -> C64 {
    let mut acc = C64::new(0.0, 0.0);
    for w in breaks.windows(2) {
        let re = tanh_sinh(|x| f(x).re, w[0], w[1], 1e-16).0;
        let im = tanh_sinh(|x| f(x).im, w[0], w[1], 1e-16).0;
        acc += C64::new(re, im);
    }
    acc
}

fn sorted_breaks(mut pts: Vec<f64>, hi: f64) -> Vec<f64> {
    pts.retain(|&p| p >= 0.0 && p <= hi);
    pts.push(0.0);
    pts.push(hi);
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// I1(r, t) and I2(r, t) by quadrature of their Laplace representation
///
/// ```text
/// I1 = ½[∫₀^∞ e^{−rs}/(s+t) ds + PV∫₀^∞ e^{−rs}/(s−t) ds]
/// r·I2 = ½[∫₀^∞ e^{−rs}/(s+t) ds − PV∫₀^∞ e^{−rs}/(s−t) ds]
/// ```
///
/// with the contour rotated onto arg s = −arg r, so the integrand decays
/// without oscillating. Crossing the pole at s = t adds half a residue.
pub fn i1_i2_quadrature(r: C64, t: f64) -> (C64, C64) {
    let r = if r.re < 0.0 { -r } else { r };
    let rho = r.norm();
    let th = r.arg();
    let span = 75.0 / rho;
    let (e_part, pv) = if th == 0.0 {
        let f = |s: f64| (-rho * s).exp();
        let ft = f(t);
        let hi = 2.0 * t + span;
        let e_part = integrate_c(|s| C64::new(f(s) / (s + t), 0.0), &sorted_breaks(vec![t, 1.0 / rho, 10.0 / rho], hi));
        let near = integrate_c(
            |s| C64::new(if s == t { -rho * ft } else { (f(s) - ft) / (s - t) }, 0.0),
            &sorted_breaks(vec![t, 1.0 / rho, 10.0 / rho], 2.0 * t),
        );
        let far = integrate_c(|s| C64::new(f(s) / (s - t), 0.0), &[2.0 * t, hi]);
        (e_part, near + far)
    } else {
        let dir = C64::from_polar(1.0, -th);
        let tc = t * th.cos();
        let br = sorted_breaks(vec![tc, 1.0 / rho, 10.0 / rho], span.max(2.0 * t));
        let e_part = integrate_c(|u| (-rho * u).exp() * dir / (dir * u + t), &br);
        let ray = integrate_c(|u| (-rho * u).exp() * dir / (dir * u - t), &br);
        let half_residue = C64::new(0.0, std::f64::consts::PI) * (-r * t).exp();
        (e_part, if th > 0.0 { ray - half_residue } else { ray + half_residue })
    };
    (0.5 * (e_part + pv), 0.5 * (e_part - pv) / r)
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm()
}
