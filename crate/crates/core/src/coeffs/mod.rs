//! Exact, weak-coupling, short-time and asymptotic coefficients A, B, C, D.
//!
//! All heavy lifting happens in normalized units (M = Ω = ħ = 1); results
//! are converted back to the units of the caller's [`ModelParams`].

mod algebra;
mod closed;
mod tables;
mod weak;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

pub use tables::{intermediate_tables, ExponentTable, IntermediateCoefficients};
pub use weak::{weak_asymptotics, weak_coeffs, weak_series};

use crate::defint::{CdParts, DefQuad};
use crate::error::{Error, Result};
use crate::green::{cycl, Fundamental};
use crate::params::{ModelParams, ModelVariant, Units};
use crate::roots::{gamma_critical, solve_characteristic_cubic, RootTriple};
use crate::special::EULER_GAMMA;
use closed::ClosedCd;

type C64 = Complex64;

/// Where a coefficient set came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Exact,
    Weak,
    ShortTime,
    Asymptotic,
    Oracle,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Exact => "exact",
            Provenance::Weak => "weak",
            Provenance::ShortTime => "short-time",
            Provenance::Asymptotic => "asymptotic",
            Provenance::Oracle => "oracle",
        })
    }
}

/// Exact coefficients or their weak-coupling counterparts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Exact,
    Weak,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Mode::Exact),
            "weak" => Ok(Mode::Weak),
            _ => Err(Error::Usage(format!("unknown mode '{s}' (expected exact or weak)"))),
        }
    }
}

/// A, B, C, D at one time. For asymptotic sets `t` is infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientSet {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub provenance: Provenance,
}

impl CoefficientSet {
    pub fn zero(t: f64, provenance: Provenance) -> Self {
        CoefficientSet { t, a: 0.0, b: 0.0, c: 0.0, d: 0.0, provenance }
    }

    pub fn values(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    fn to_units(self, u: &Units) -> Self {
        CoefficientSet { t: u.time(self.t), a: u.a(self.a), b: u.b(self.b), c: u.c(self.c), d: u.d(self.d), ..self }
    }
}

/// e^w − 1 without cancellation for small |w|.
pub(crate) fn expm1c(w: C64) -> C64 {
    if w.norm() < 0.5 {
        let mut term = w;
        let mut sum = w;
        for n in 2..30 {
            term *= w / n as f64;
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        w.exp() - 1.0
    }
}

/// Below this Ω_c·t the exact C and D are taken from their defining integrals.
pub const SHORT_TIME_SWITCH: f64 = 0.3;

/// Immutable evaluation context for one parameter point and model variant.
#[derive(Debug, Clone)]
pub struct EvalContext {
    params: ModelParams,
    variant: ModelVariant,
    units: Units,
    norm: ModelParams,
    roots: RootTriple,
    fundamental: Fundamental,
    closed: Option<ClosedCd>,
    quad: DefQuad,
    short_switch: f64,
}

impl EvalContext {
    pub fn new(params: &ModelParams, variant: ModelVariant) -> Result<Self> {
        let norm = params.normalize()?;
        if variant.exact_counterpart() == ModelVariant::Original {
            // a root sits at z = 0 here and the long-time forms lose meaning
            let gcr = gamma_critical(&norm, variant)?;
            if (norm.gamma - gcr).abs() < 1e-10 {
                return Err(Error::Inconsistent(format!("gamma = {} sits on gamma_cr", params.gamma)));
            }
        }
        let roots = solve_characteristic_cubic(&norm, variant.exact_counterpart())?;
        let roots = RootTriple { variant, ..roots };
        let fundamental = Fundamental::new(&roots, &norm);
        let closed = (norm.gamma > 0.0).then(|| ClosedCd::build(roots.z, norm.omega_c, norm.mass, norm.gamma));
        Ok(EvalContext {
            params: *params,
            variant,
            units: params.units(),
            norm,
            roots,
            fundamental,
            closed,
            quad: DefQuad::default(),
            short_switch: SHORT_TIME_SWITCH,
        })
    }

    /// Override the Ω_c·t threshold of the short-time quadrature route.
    pub fn with_short_switch(mut self, omega_c_t: f64) -> Self {
        self.short_switch = omega_c_t;
        self
    }

    /// Use a different quadrature for the short-time route.
    pub fn with_quadrature(mut self, quad: DefQuad) -> Self {
        self.quad = quad;
        self
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn variant(&self) -> ModelVariant {
        self.variant
    }

    /// Roots in normalized units (Ω = 1).
    pub fn normalized_roots(&self) -> &RootTriple {
        &self.roots
    }

    pub fn normalized_params(&self) -> &ModelParams {
        &self.norm
    }

    /// Roots in the caller's units.
    pub fn roots(&self) -> RootTriple {
        let w = self.params.omega;
        RootTriple { z: self.roots.z.map(|z| z * w), ..self.roots }
    }

    pub fn fundamental(&self) -> &Fundamental {
        &self.fundamental
    }

    fn check_time(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("time must be finite and >= 0, got {t}")));
        }
        Ok(self.units.to_normalized_time(t))
    }

    /// A(t), B(t) in normalized units.
    fn ab_normalized(&self, t: f64) -> Result<(f64, f64)> {
        if t == 0.0 || self.norm.gamma == 0.0 {
            return Ok((0.0, 0.0));
        }
        let z = self.roots.z;
        let wc = self.norm.omega_c;
        let kappa: Vec<C64> = vec![z[0] + z[1], z[1] + z[2], z[2] + z[0]];
        let kmax = kappa.iter().map(|k| k.norm()).fold(0.0, f64::max);
        let (na, nb, den) = if kmax * t < 1.0 {
            // Σ(z1−z2)z3 = Σ(z1−z2) = 0: subtract the t = 0 value exactly
            (
                cycl(z, |z1, z2, z3| expm1c((z1 + z2) * t) * (z1 - z2) * z3),
                cycl(z, |z1, z2, _| expm1c((z1 + z2) * t) * (z1 - z2)),
                cycl(z, |z1, z2, _| ((z1 + z2) * t).exp() * (z1 - z2) * (wc + z1) * (wc + z2)),
            )
        } else {
            let shift = kappa.iter().map(|k| k.re).fold(f64::NEG_INFINITY, f64::max);
            let e = |z1: C64, z2: C64| ((z1 + z2 - shift) * t).exp();
            (
                cycl(z, |z1, z2, z3| e(z1, z2) * (z1 - z2) * z3),
                cycl(z, |z1, z2, _| e(z1, z2) * (z1 - z2)),
                cycl(z, |z1, z2, _| e(z1, z2) * (z1 - z2) * (wc + z1) * (wc + z2)),
            )
        };
        if den.norm() == 0.0 || !den.norm().is_finite() {
            return Err(Error::Conditioning { t, what: "A/B denominator vanishes".into() });
        }
        let k = self.norm.kernel_strength();
        let a = 2.0 * k * na / den;
        let b = 2.0 * self.norm.gamma * wc * wc * nb / den;
        Ok((a.re, b.re))
    }

    /// C₁, C₃, D₁, D₃ in normalized units and time.
    pub fn cd_parts_normalized(&self, t: f64) -> Result<CdParts> {
        let Some(closed) = &self.closed else {
            return Ok(CdParts { c1: 0.0, c3: 0.0, d1: 0.0, d3: 0.0 });
        };
        if self.norm.omega_c * t < self.short_switch {
            self.quad.cd_parts(&self.fundamental, t, &self.norm, crate::defint::Bounds::Causal)
        } else {
            closed.eval(t)
        }
    }

    /// C, D from the closed form regardless of the short-time route (normalized units).
    pub fn cd_closed_normalized(&self, t: f64) -> Result<CdParts> {
        match &self.closed {
            Some(c) => c.eval(t),
            None => Ok(CdParts { c1: 0.0, c3: 0.0, d1: 0.0, d3: 0.0 }),
        }
    }

    pub fn exact_ab(&self, t: f64) -> Result<(f64, f64)> {
        let tn = self.check_time(t)?;
        let (a, b) = self.ab_normalized(tn)?;
        Ok((self.units.a(a), self.units.b(b)))
    }

    pub fn exact_cd(&self, t: f64) -> Result<(f64, f64)> {
        let tn = self.check_time(t)?;
        if tn == 0.0 {
            return Err(Error::Domain("C, D need t > 0".into()));
        }
        let parts = self.cd_parts_normalized(tn)?;
        Ok((self.units.c(parts.c(&self.norm)), self.units.d(parts.d(&self.norm))))
    }

    /// All four exact coefficients; C and D are 0 at t = 0.
    pub fn exact(&self, t: f64) -> Result<CoefficientSet> {
        let (a, b) = self.exact_ab(t)?;
        let (c, d) = if t == 0.0 { (0.0, 0.0) } else { self.exact_cd(t)? };
        Ok(CoefficientSet { t, a, b, c, d, provenance: Provenance::Exact })
    }

    pub fn weak(&self, t: f64) -> Result<CoefficientSet> {
        weak_coeffs(t, &self.params, self.variant)
    }

    pub fn evaluate(&self, t: f64, mode: Mode) -> Result<CoefficientSet> {
        match mode {
            Mode::Exact => self.exact(t),
            Mode::Weak => self.weak(t),
        }
    }

    /// t → ∞ values.
    pub fn asymptotics(&self, mode: Mode) -> Result<CoefficientSet> {
        match mode {
            Mode::Weak => Ok(weak_asymptotics(&self.params, self.variant)),
            Mode::Exact => {
                let gcr = gamma_critical(&self.norm, self.variant)?;
                if self.norm.gamma >= gcr {
                    return Err(Error::Inconsistent(format!(
                        "gamma = {} is not below the critical coupling {} (normalized units)",
                        self.norm.gamma, gcr
                    )));
                }
                if self.norm.gamma == 0.0 {
                    return Ok(CoefficientSet::zero(f64::INFINITY, Provenance::Asymptotic));
                }
                Ok(exact_asymptotics_normalized(&self.roots, &self.norm).to_units(&self.units))
            }
        }
    }
}

/// Closed-form t → ∞ limits in normalized units.
fn exact_asymptotics_normalized(roots: &RootTriple, p: &ModelParams) -> CoefficientSet {
    let [z1, z2, z3] = roots.z;
    let z = roots.z;
    let (g, wc) = (p.gamma, p.omega_c);
    let k = p.kernel_strength();
    let a = -2.0 * k * (wc + z2 + z3) / ((wc + z2) * (wc + z3));
    let b = 2.0 * g * wc * wc / ((wc + z2) * (wc + z3));
    let lg = |x: C64| (x * x).ln() - (wc * wc).ln();
    let single = |pow: i32| {
        cycl(z, |x1, x2, x3| x1.powi(pow) * lg(x1) / ((wc - x1) * (x1 - x2) * (x1 - x3)))
    };
    let v = (z1 - z2) * (z2 - z3) * (z3 - z1);
    let tail = v * (wc + z2) * (wc + z3);
    let c_triple = (z2 - z3) * (z1 * z1 * (z2 + z3) + wc * (z1 * z1 + z2 * z3)) * lg(z1)
        / ((wc * wc - z1 * z1) * (z1 + z2) * (z1 + z3))
        + z2 * (z3 - z1) * lg(z2) / ((wc - z2) * (z1 + z2))
        + z3 * (z1 - z2) * lg(z3) / ((wc - z3) * (z1 + z3));
    let d_triple = z1 * z1 * (z2 - z3) * (z1 * z1 + z2 * z3 + wc * (z2 + z3)) * lg(z1)
        / ((wc * wc - z1 * z1) * (z1 + z2) * (z1 + z3))
        + z2 * z2 * (z3 - z1) * lg(z2) / ((wc - z2) * (z1 + z2))
        + z3 * z3 * (z1 - z2) * lg(z3) / ((wc - z3) * (z1 + z3));
    let pre1 = g * wc * wc / PI;
    let pre3 = 2.0 * g * g * wc.powi(4) / PI;
    let c = pre1 * single(1) + pre3 * c_triple / tail;
    let d = pre1 * single(2) + pre3 * d_triple / tail;
    CoefficientSet { t: f64::INFINITY, a: a.re, b: b.re, c: c.re, d: d.re, provenance: Provenance::Asymptotic }
}

/// Exact A(t), B(t) at the roots' variant.
pub fn exact_ab(t: f64, roots: &RootTriple, params: &ModelParams) -> Result<(f64, f64)> {
    EvalContext::new(params, roots.variant)?.exact_ab(t)
}

/// Exact C(t), D(t) at the roots' variant.
pub fn exact_cd(t: f64, roots: &RootTriple, params: &ModelParams) -> Result<(f64, f64)> {
    EvalContext::new(params, roots.variant)?.exact_cd(t)
}

/// t → ∞ limits for the roots' variant.
pub fn asymptotics(roots: &RootTriple, params: &ModelParams, mode: Mode) -> Result<CoefficientSet> {
    EvalContext::new(params, roots.variant)?.asymptotics(mode)
}

/// Leading short-time behavior of the four coefficients.
pub fn short_time(t: f64, p: &ModelParams) -> Result<CoefficientSet> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("short-time laws need t > 0, got {t}")));
    }
    let x = p.omega_c * t;
    if x > 0.3 {
        log::warn!("short-time expansion used at Omega_c t = {x:.3} (> 0.3)");
    }
    let (m, g, wc, hb) = (p.mass, p.gamma, p.omega_c, p.hbar);
    Ok(CoefficientSet {
        t,
        a: -2.0 * m * g * wc * x + m * g * wc * x * x,
        b: g * x * x,
        c: hb * g / (2.0 * PI) * x * x * (1.0 - 2.0 * EULER_GAMMA - 2.0 * x.ln()),
        d: 2.0 * hb * m * g * wc / PI * x * (1.0 - EULER_GAMMA - x.ln()),
        provenance: Provenance::ShortTime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> EvalContext {
        EvalContext::new(&ModelParams::canonical(), ModelVariant::Original).unwrap()
    }

    #[test]
    fn ab_vanish_at_zero_and_match_asymptotics() {
        let c = ctx();
        assert_eq!(c.exact_ab(0.0).unwrap(), (0.0, 0.0));
        let inf = c.asymptotics(Mode::Exact).unwrap();
        let (a, b) = c.exact_ab(200.0).unwrap();
        assert!((a - inf.a).abs() < 1e-8 * inf.a.abs(), "{a} {}", inf.a);
        assert!((b - inf.b).abs() < 1e-8 * inf.b.abs());
    }

    #[test]
    fn closed_cd_matches_definition_quadrature() {
        let c = ctx();
        let q = DefQuad::default();
        for t in [0.05, 1.0, 4.0] {
            let closed = c.cd_closed_normalized(t).unwrap();
            let quad = q.cd_parts(c.fundamental(), t, c.normalized_params(), crate::defint::Bounds::Causal).unwrap();
            for (x, y, n) in [(closed.c1, quad.c1, "c1"), (closed.c3, quad.c3, "c3"), (closed.d1, quad.d1, "d1"), (closed.d3, quad.d3, "d3")] {
                assert!((x - y).abs() < 1e-8 * y.abs().max(1e-6), "t={t} {n}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn zero_coupling_gives_zeros() {
        let c = EvalContext::new(&ModelParams::natural(40.0, 0.0), ModelVariant::Original).unwrap();
        let s = c.exact(3.0).unwrap();
        assert_eq!(s.values(), [0.0; 4]);
    }
}
