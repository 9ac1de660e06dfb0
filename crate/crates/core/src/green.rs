//! Elementary solutions u₁, u₂ and the Green's functions G₁, G₂.
//!
//! Everything is built from the fundamental solution h = G̃₁ with h(0) = 0,
//! h'(0) = 1, written as h(x) = Σ a_k e^{z_k x}.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::roots::{Cubic, RootTriple};

type C64 = Complex64;

/// Apply f to the three cyclic arrangements (z1,z2,z3), (z2,z3,z1), (z3,z1,z2) and sum.
pub fn cycl<F>(z: [C64; 3], f: F) -> C64
where
    F: Fn(C64, C64, C64) -> C64,
{
    f(z[0], z[1], z[2]) + f(z[1], z[2], z[0]) + f(z[2], z[0], z[1])
}

/// Result of a complex evaluation that must be real.
pub(crate) fn real_part(v: C64, scale: f64, what: &str) -> f64 {
    debug_assert!(
        v.im.abs() <= 1e-9 * scale.max(v.re.abs()).max(1e-300) || !v.im.is_finite(),
        "{what}: imaginary residue {} vs {}",
        v.im,
        v.re
    );
    v.re
}

/// Taylor coefficients beyond which the power series is not used.
const TAYLOR_TERMS: usize = 40;
/// Series is used while |z1|·x stays below this.
const TAYLOR_RADIUS: f64 = 0.5;

/// The fundamental solution h and its derivatives.
#[derive(Debug, Clone)]
pub struct Fundamental {
    pub roots: RootTriple,
    pub omega_c: f64,
    pub mass: f64,
    /// Frequency² entering the equation of motion (linear coefficient of the cubic).
    pub freq2: f64,
    /// Residues a_k = (Ω_c + z_k) / Π_{m≠k}(z_k − z_m).
    pub a: [C64; 3],
    /// h^{(n)}(0), n = 0..TAYLOR_TERMS+3.
    taylor: Vec<f64>,
    zmax: f64,
}

impl Fundamental {
    pub fn new(roots: &RootTriple, params: &ModelParams) -> Self {
        let z = roots.z;
        let wc = params.omega_c;
        let v = roots.vandermonde();
        // a_k = −(Ω_c+z_k)(z_{k+1}−z_{k+2}) / V
        let a = [
            -(wc + z[0]) * (z[1] - z[2]) / v,
            -(wc + z[1]) * (z[2] - z[0]) / v,
            -(wc + z[2]) * (z[0] - z[1]) / v,
        ];
        let cubic = Cubic::for_model(params, roots.variant);
        let n = TAYLOR_TERMS + 4;
        let mut taylor = vec![0.0; n];
        taylor[1] = 1.0;
        for k in 0..n - 3 {
            taylor[k + 3] = -cubic.a * taylor[k + 2] - cubic.b * taylor[k + 1] - cubic.c * taylor[k];
        }
        let zmax = z.iter().map(|w| w.norm()).fold(0.0, f64::max);
        Fundamental { roots: *roots, omega_c: wc, mass: params.mass, freq2: cubic.b, a, taylor, zmax }
    }

    fn series(&self, x: f64, order: usize) -> f64 {
        // Σ_n c_{n+order} xⁿ/n!
        let mut sum = 0.0;
        let mut pow = 1.0;
        for n in 0..TAYLOR_TERMS {
            sum += self.taylor[n + order] * pow;
            pow *= x / (n + 1) as f64;
        }
        sum
    }

    fn cyclic(&self, x: f64, order: i32) -> f64 {
        let mut s = C64::new(0.0, 0.0);
        for k in 0..3 {
            let zk = self.roots.z[k];
            s += self.a[k] * zk.powi(order) * (zk * x).exp();
        }
        s.re
    }

    fn eval(&self, x: f64, order: usize) -> f64 {
        if self.zmax * x.abs() <= TAYLOR_RADIUS {
            self.series(x, order)
        } else {
            self.cyclic(x, order as i32)
        }
    }

    /// h(x).
    pub fn h(&self, x: f64) -> f64 {
        self.eval(x, 0)
    }
    /// h'(x).
    pub fn hd(&self, x: f64) -> f64 {
        self.eval(x, 1)
    }
    /// h''(x).
    pub fn hdd(&self, x: f64) -> f64 {
        self.eval(x, 2)
    }
    /// h'''(x).
    pub fn hddd(&self, x: f64) -> f64 {
        self.eval(x, 3)
    }
}

/// Closed-form Green's functions at fixed roots.
#[derive(Debug, Clone)]
pub struct GreenFunctions {
    pub fundamental: Fundamental,
}

impl GreenFunctions {
    pub fn new(roots: &RootTriple, params: &ModelParams) -> Self {
        GreenFunctions { fundamental: Fundamental::new(roots, params) }
    }

    fn z(&self) -> [C64; 3] {
        self.fundamental.roots.z
    }

    fn wc(&self) -> f64 {
        self.fundamental.omega_c
    }

    /// Largest Re(z_i + z_j), used to pre-scale sums of e^{(z_i+z_j)t}.
    fn pair_shift(&self) -> f64 {
        let z = self.z();
        [z[0] + z[1], z[1] + z[2], z[2] + z[0]]
            .iter()
            .map(|w| w.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Σcyc e^{(z1+z2)t}(Ω_c+z1)(Ω_c+z2)(z1−z2), times e^{−shift·t}.
    fn pair_sum_scaled(&self, t: f64, shift: f64) -> C64 {
        let wc = self.wc();
        cycl(self.z(), |z1, z2, _| {
            ((z1 + z2) * t - shift * t).exp() * (wc + z1) * (wc + z2) * (z1 - z2)
        })
    }

    /// The denominator G̃₂den(t) of the second Green's function.
    pub fn g2_denominator(&self, t: f64) -> f64 {
        let v = self.fundamental.roots.vandermonde();
        real_part(v * self.pair_sum_scaled(t, 0.0), 1.0, "G2den")
    }

    /// u₁(s), u₂(s) for the window [0, t].
    pub fn elementary_solutions(&self, s: f64, t: f64) -> Result<(f64, f64)> {
        if !(0.0..=t).contains(&s) {
            return Err(Error::Domain(format!("need 0 <= s <= t, got s = {s}, t = {t}")));
        }
        let wc = self.wc();
        let z = self.z();
        let zmax = z.iter().map(|w| w.re).fold(f64::NEG_INFINITY, f64::max);
        // denominators Σcyc e^{z1 t}(Ω_c+z1)(z2−z3), pre-scaled by e^{−zmax t}
        let den = cycl(z, |z1, z2, z3| ((z1 - zmax) * t).exp() * (wc + z1) * (z2 - z3));
        let scale = cycl(z, |z1, z2, z3| {
            C64::new((((z1 - zmax) * t).exp() * (wc + z1) * (z2 - z3)).norm(), 0.0)
        })
        .re;
        if den.norm() <= 1e-12 * scale {
            return Err(Error::Conditioning {
                t,
                what: "u1/u2 denominator vanishes (h(t) = 0)".into(),
            });
        }
        let n2 = cycl(z, |z1, z2, z3| (z1 * s - zmax * t).exp() * (wc + z1) * (z2 - z3));
        let n1 = cycl(z, |z1, z2, _| {
            ((z1 * t + z2 * s - zmax * t).exp() - (z1 * s + z2 * t - zmax * t).exp())
                * (wc + z1)
                * (wc + z2)
        });
        Ok((real_part(n1 / den, 1.0, "u1"), real_part(n2 / den, 1.0, "u2")))
    }

    /// G₁(s, τ) = Θ(τ)Θ(s−τ) G̃₁(s−τ).
    pub fn g1(&self, s: f64, tau: f64) -> f64 {
        if tau < 0.0 || s < tau {
            return 0.0;
        }
        self.g1_smooth(s - tau)
    }

    /// G̃₁(x) = −(Σcyc e^{z1 x}(Ω_c+z1)(z2−z3)) / ((z1−z2)(z2−z3)(z3−z1)).
    pub fn g1_smooth(&self, x: f64) -> f64 {
        self.fundamental.h(x)
    }

    /// G₂(s, τ) for the window [0, t].
    pub fn g2(&self, s: f64, tau: f64, t: f64) -> Result<f64> {
        if !(0.0..=t).contains(&s) {
            return Err(Error::Domain(format!("need 0 <= s <= t, got s = {s}, t = {t}")));
        }
        let mut out = self.g1(s, tau);
        if tau >= 0.0 && tau <= t {
            out += self.g2_smooth(s, tau, t)?;
        }
        Ok(out)
    }

    /// G̃₂num(s, τ)/G̃₂den(t), both pre-scaled by the dominant pair exponent.
    pub fn g2_smooth(&self, s: f64, tau: f64, t: f64) -> Result<f64> {
        let wc = self.wc();
        let shift = self.pair_shift();
        let den = self.pair_sum_scaled(t, shift);
        let scale: f64 = {
            let z = self.z();
            cycl(z, |z1, z2, _| {
                C64::new((((z1 + z2) * t - shift * t).exp() * (wc + z1) * (wc + z2) * (z1 - z2)).norm(), 0.0)
            })
            .re
        };
        if den.norm() <= 1e-13 * scale {
            return Err(Error::Conditioning { t, what: "G2 denominator vanishes".into() });
        }
        let x = s - tau;
        let num = cycl(self.z(), |z1, z2, z3| {
            ((z1 + z2) * t - shift * t).exp()
                * (wc + z1)
                * (wc + z2)
                * (z1 - z2)
                * ((z2 * x).exp() * (wc + z2) * (z3 - z1) + (z1 * x).exp() * (wc + z1) * (z2 - z3)
                    - (z3 * s - z1 * tau).exp() * (wc + z3) * (z2 - z3)
                    - (z3 * s - z2 * tau).exp() * (wc + z3) * (z3 - z1))
        });
        // the Vandermonde factor of the denominator cancels against the
        // implicit 1/V of the numerator's residues
        let v = self.fundamental.roots.vandermonde();
        Ok(real_part(num / (den * v), 1.0, "G2"))
    }
}

/// Green's functions from an arbitrary fundamental solution.
///
/// `h` returns (h(x), h'(x), h''(x)) for x ≥ 0.
pub fn generic_green_structure<H>(h: H, s: f64, tau: f64, t: f64) -> Result<(f64, f64)>
where
    H: Fn(f64) -> (f64, f64, f64),
{
    let g1 = if tau >= 0.0 && s >= tau { h(s - tau).0 } else { 0.0 };
    let mut g2 = g1;
    if tau >= 0.0 && tau <= t {
        let (ht, hdt, hddt) = h(t);
        let (hs, hds, _) = h(s);
        let (hm, hdm, _) = h(t - tau);
        let det = hdt * hdt - ht * hddt;
        if det.abs() <= 1e-14 * (hdt * hdt + (ht * hddt).abs()) {
            return Err(Error::Conditioning { t, what: "h'(t)^2 - h(t)h''(t) vanishes".into() });
        }
        let d1 = hm * hdt - ht * hdm;
        let d2 = hdt * hdm - hm * hddt;
        g2 += -(hds * d1 + hs * d2) / det;
    }
    Ok((g1, g2))
}
