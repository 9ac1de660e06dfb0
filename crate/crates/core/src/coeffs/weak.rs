//! Weak-coupling coefficients A_w … D_w.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{expm1c, CoefficientSet, Provenance};
use crate::defint::DefQuad;
use crate::error::{Error, Result};
use crate::params::{ModelParams, ModelVariant};
use crate::special::nu0_unchecked;

/// Oscillator frequency inside cos(Ωs), sin(Ωs), in normalized units.
fn trig_frequency(norm: &ModelParams, variant: ModelVariant) -> f64 {
    match variant {
        ModelVariant::CaldeiraLeggett => {
            crate::params::effective_frequency_squared(norm, ModelVariant::CaldeiraLeggett).sqrt()
        }
        // the shifted-kernel model keeps the bare frequency in the trigonometric factors
        _ => 1.0,
    }
}

/// A_w, B_w, C_w, D_w at time t.
pub fn weak_coeffs(t: f64, params: &ModelParams, variant: ModelVariant) -> Result<CoefficientSet> {
    let norm = params.normalize()?;
    let units = params.units();
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
    }
    let tn = units.to_normalized_time(t);
    if tn == 0.0 || norm.gamma == 0.0 {
        return Ok(CoefficientSet::zero(t, Provenance::Weak));
    }
    let w = trig_frequency(&norm, variant);
    let k = norm.kernel_strength();
    let wc = norm.omega_c;
    // ∫₀^t e^{−(Ω_c − iw)s} ds
    let beta = Complex64::new(wc, -w);
    let f = -expm1c(-beta * tn) / beta;
    let a = -2.0 * k * f.re;
    let b = 2.0 * k / (norm.mass * w) * f.im;

    let quad = DefQuad::default();
    let (mut cs, mut dc) = (0.0, 0.0);
    for (s, ws) in quad.nodes(0.0, tn, true, false, 0.5) {
        let v = nu0_unchecked(s, &norm);
        cs += ws * v * (w * s).sin();
        dc += ws * v * (w * s).cos();
    }
    let c = norm.hbar / (norm.mass * w) * cs;
    let d = norm.hbar * dc;
    if !(c.is_finite() && d.is_finite()) {
        return Err(Error::Numerical(format!("weak C/D quadrature failed at t = {t}")));
    }
    Ok(CoefficientSet { t, a: units.a(a), b: units.b(b), c: units.c(c), d: units.d(d), provenance: Provenance::Weak })
}

/// Weak coefficients on a nondecreasing time grid, accumulating the C and D
/// integrals interval by interval (cost linear in the grid length).
pub fn weak_series(times: &[f64], params: &ModelParams, variant: ModelVariant) -> Result<Vec<CoefficientSet>> {
    let norm = params.normalize()?;
    let units = params.units();
    if times.iter().any(|t| !(*t >= 0.0) || !t.is_finite()) || times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("weak series needs a finite, nondecreasing grid of times >= 0".into()));
    }
    let w = trig_frequency(&norm, variant);
    let k = norm.kernel_strength();
    let beta = Complex64::new(norm.omega_c, -w);
    let quad = DefQuad::default();
    let (mut cs, mut dc, mut prev) = (0.0, 0.0, 0.0);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let tn = units.to_normalized_time(t);
        if tn == 0.0 || norm.gamma == 0.0 {
            out.push(CoefficientSet::zero(t, Provenance::Weak));
            continue;
        }
        for (s, ws) in quad.nodes(prev, tn, prev == 0.0, false, 0.5) {
            let v = nu0_unchecked(s, &norm);
            cs += ws * v * (w * s).sin();
            dc += ws * v * (w * s).cos();
        }
        prev = tn;
        let f = -expm1c(-beta * tn) / beta;
        out.push(CoefficientSet {
            t,
            a: units.a(-2.0 * k * f.re),
            b: units.b(2.0 * k / (norm.mass * w) * f.im),
            c: units.c(norm.hbar / (norm.mass * w) * cs),
            d: units.d(norm.hbar * dc),
            provenance: Provenance::Weak,
        });
    }
    Ok(out)
}

/// t → ∞ limits of the weak-coupling coefficients.
pub fn weak_asymptotics(params: &ModelParams, variant: ModelVariant) -> CoefficientSet {
    let units = params.units();
    let norm = params.normalize().unwrap_or(*params);
    let w = trig_frequency(&norm, variant);
    let (g, wc, m, hb) = (norm.gamma, norm.omega_c, norm.mass, norm.hbar);
    let den = wc * wc + w * w;
    CoefficientSet {
        t: f64::INFINITY,
        a: units.a(-2.0 * m * g * wc * wc * wc / den),
        b: units.b(2.0 * g * wc * wc / den),
        c: units.c(-2.0 * hb * g * wc * wc / PI * (wc / w).ln() / den),
        d: units.d(hb * m * g * wc * wc * w / den),
        provenance: Provenance::Asymptotic,
    }
}
