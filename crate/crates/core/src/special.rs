//! Bath kernels and the exponential-integral family behind them.
//!
//! The two integrals
//!
//! ```text
//! I1(r, t) = ∫₀^∞ ω cos(ωt) / (r² + ω²) dω
//! I2(r, t) = ∫₀^∞   sin(ωt) / (r² + ω²) dω
//! ```
//!
//! are even in r. For Re r ≥ 0 and x = r t they reduce to
//! `I1 = ½[eˣE₁(x) − e⁻ˣEi(x)]` and `r·I2 = ½[eˣE₁(x) + e⁻ˣEi(x)]`,
//! which never subtract exponentially large numbers.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;

type C64 = Complex64;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// |x| at and beyond which the asymptotic series is used.
pub const ASYMPTOTIC_RADIUS: f64 = 40.0;
/// Power series for Ei is used while |x| − Re x stays below this bound,
/// which caps the cancellation among its terms at e⁵.
const SERIES_LOSS: f64 = 5.0;

/// Which representation evaluated a scaled exponential integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Path {
    Series,
    ContinuedFraction,
    Asymptotic,
}

/// Σ_{n≥1} zⁿ / (n·n!).
fn ein_series(z: C64) -> C64 {
    let mut sum = C64::new(0.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    let zn = z.norm();
    for n in 1..2000 {
        let nf = n as f64;
        term *= z / nf;
        let add = term / nf;
        sum += add;
        if nf > zn && add.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// eʷE₁(w) by the even continued fraction, valid off the negative real axis.
fn scaled_e1_cf(w: C64) -> C64 {
    const TINY: f64 = 1e-300;
    let guard = |v: C64| if v.norm() == 0.0 { C64::new(TINY, 0.0) } else { v };
    let mut f = guard(w + 1.0);
    let mut c = f;
    let mut d = C64::new(0.0, 0.0);
    for k in 1..20_000 {
        let kf = k as f64;
        let a = -kf * kf;
        let b = w + (2.0 * kf + 1.0);
        d = guard(b + a * d).inv();
        c = guard(b + a / c);
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() < 1e-16 {
            break;
        }
    }
    f.inv()
}

/// Σ_k s_k k!/x^{k+1} truncated at its smallest term, split into the
/// even-k and odd-k partial sums (with s_k = 1).
fn asymptotic_parts(x: C64) -> (C64, C64) {
    let mut even = C64::new(0.0, 0.0);
    let mut odd = C64::new(0.0, 0.0);
    let mut term = x.inv();
    let mut k = 0usize;
    loop {
        if k % 2 == 0 {
            even += term;
        } else {
            odd += term;
        }
        let next = term * ((k + 1) as f64) / x;
        if next.norm() >= term.norm() || next.norm() <= 1e-18 * (even.norm() + odd.norm()) {
            break;
        }
        term = next;
        k += 1;
    }
    (even, odd)
}

fn im_sign(x: C64) -> f64 {
    if x.im > 0.0 {
        1.0
    } else if x.im < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Exponential integral E₁(z), principal branch.
pub fn e1(z: C64) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::Divergent("E1(0)".into()));
    }
    // For Re z < 0 the series terms have no cancellation as long as z stays
    // near the negative real axis, where the continued fraction is slow.
    if z.norm() <= 1.0 || (z.re < 0.0 && (z.norm() <= 2.0 || z.norm() + z.re <= SERIES_LOSS)) {
        return Ok(-EULER_GAMMA - z.ln() - ein_series(-z));
    }
    Ok(scaled_e1_cf(z) * (-z).exp())
}

/// Exponential integral Ei(z) = γ + ln z + Σ zⁿ/(n·n!) with the principal log.
pub fn ei(z: C64) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::Divergent("Ei(0)".into()));
    }
    if z.re >= 0.0 {
        return Ok(scaled_ei(z).0 * z.exp());
    }
    if z.norm() - z.re.abs() <= SERIES_LOSS || z.norm() <= 2.0 {
        return Ok(EULER_GAMMA + z.ln() + ein_series(z));
    }
    // Ei(z) = −E₁(−z) + iπ sgn(Im z), with −z in the right half-plane.
    Ok(-e1(-z)? + C64::new(0.0, PI * im_sign(z)))
}

/// eˣE₁(x) for Re x ≥ 0.
fn scaled_e1(x: C64) -> (C64, Path) {
    if x.norm() <= 1.0 {
        ((-EULER_GAMMA - x.ln() - ein_series(-x)) * x.exp(), Path::Series)
    } else {
        (scaled_e1_cf(x), Path::ContinuedFraction)
    }
}

/// e⁻ˣEi(x) for Re x ≥ 0, x ≠ 0, away from the asymptotic region.
fn scaled_ei(x: C64) -> (C64, Path) {
    let r = x.norm();
    if r <= 2.0 || r - x.re <= SERIES_LOSS {
        ((EULER_GAMMA + x.ln() + ein_series(x)) * (-x).exp(), Path::Series)
    } else {
        let v = -scaled_e1_cf(-x) + C64::new(0.0, PI * im_sign(x)) * (-x).exp();
        (v, Path::ContinuedFraction)
    }
}

/// Hyperbolic cosine integral Chi(z) = ½[Ei(z) − E₁(z)].
pub fn chi(z: C64) -> Result<C64> {
    if z.norm() == 0.0 {
        return Err(Error::Divergent("Chi(0)".into()));
    }
    Ok(0.5 * (ei(z)? - e1(z)?))
}

/// Hyperbolic sine integral Shi(z) = ½[Ei(z) + E₁(z)].
pub fn shi(z: C64) -> C64 {
    if z.norm() <= 2.0 {
        // odd part of the entire series, no log needed
        let s = ein_series(z);
        let m = ein_series(-z);
        return 0.5 * (s - m);
    }
    0.5 * (ei(z).expect("nonzero") + e1(z).expect("nonzero"))
}

/// (I1, r·I2) at x = r t with Re x ≥ 0, choosing the evaluation path.
fn i1_ri2(x: C64, force: Option<Path>) -> (C64, C64) {
    let asymptotic = match force {
        Some(Path::Asymptotic) => true,
        Some(_) => false,
        None => x.norm() >= ASYMPTOTIC_RADIUS,
    };
    if asymptotic {
        let (even, odd) = asymptotic_parts(x);
        let stokes = C64::new(0.0, 0.5 * PI * im_sign(x)) * (-x).exp();
        return (-odd - stokes, even + stokes);
    }
    let (g, _) = scaled_e1(x);
    let (f, _) = scaled_ei(x);
    (0.5 * (g - f), 0.5 * (g + f))
}

fn reduce(r: C64, t: f64) -> Result<C64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("I1/I2 need t > 0, got {t}")));
    }
    if r.norm() == 0.0 || !r.re.is_finite() || !r.im.is_finite() {
        return Err(Error::Domain(format!("I1/I2 need a finite nonzero r, got {r}")));
    }
    // I1, I2 are even in r; work in the closed right half-plane.
    Ok(if r.re < 0.0 { -r } else { r })
}

/// ∫₀^∞ ω cos(ωt)/(r² + ω²) dω.
pub fn i1(r: C64, t: f64) -> Result<C64> {
    let r = reduce(r, t)?;
    Ok(i1_ri2(r * t, None).0)
}

/// ∫₀^∞ sin(ωt)/(r² + ω²) dω.
pub fn i2(r: C64, t: f64) -> Result<C64> {
    let r = reduce(r, t)?;
    Ok(i1_ri2(r * t, None).1 / r)
}

/// Both integrals in one pass.
pub fn i1_i2(r: C64, t: f64) -> Result<(C64, C64)> {
    let r = reduce(r, t)?;
    let (a, b) = i1_ri2(r * t, None);
    Ok((a, b / r))
}

/// Both integrals through a forced representation, for continuity checks.
pub fn i1_i2_via(path: Path, r: C64, t: f64) -> Result<(C64, C64)> {
    let r = reduce(r, t)?;
    let (a, b) = i1_ri2(r * t, Some(path));
    Ok((a, b / r))
}

/// Lorentz-Drude spectral density 2MγΩ_c²ω / (π(ω² + Ω_c²)).
pub fn spectral_density(omega: f64, p: &ModelParams) -> f64 {
    2.0 * p.kernel_strength() * omega / (PI * (omega * omega + p.omega_c * p.omega_c))
}

/// Dissipation kernel, −MγΩ_c² e^{−Ω_c|s|} sgn(s).
pub fn eta(s: f64, p: &ModelParams) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        -s.signum() * p.kernel_strength() * (-p.omega_c * s.abs()).exp()
    }
}

/// Zero-temperature noise kernel (2MγΩ_c²/π)·I1(Ω_c, |s|).
pub fn nu0(s: f64, p: &ModelParams) -> Result<f64> {
    if s == 0.0 {
        return Err(Error::Divergent("nu(0) at zero temperature".into()));
    }
    if !s.is_finite() {
        return Err(Error::Domain(format!("nu needs a finite argument, got {s}")));
    }
    Ok(nu0_unchecked(s, p))
}

/// ν₀ without the error plumbing; used in quadrature loops.
pub(crate) fn nu0_unchecked(s: f64, p: &ModelParams) -> f64 {
    2.0 * p.kernel_strength() / PI * i1_real(p.omega_c * s.abs())
}

/// I1(1, x) for real x > 0 in real arithmetic.
pub(crate) fn i1_real(x: f64) -> f64 {
    if x >= ASYMPTOTIC_RADIUS {
        // −Σ_{k odd} k!/x^{k+1}, truncated at the smallest term
        let mut term = 1.0 / (x * x);
        let mut sum = 0.0;
        let mut k = 1.0;
        loop {
            sum += term;
            let next = term * (k + 1.0) * (k + 2.0) / (x * x);
            if next >= term || next <= 1e-18 * sum {
                break;
            }
            term = next;
            k += 2.0;
        }
        return -sum;
    }
    // eˣE₁(x)
    let se1 = if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for n in 1..60 {
            let nf = n as f64;
            term *= -x / nf;
            sum += term / nf;
            if term.abs() < 1e-18 {
                break;
            }
        }
        x.exp() * (-EULER_GAMMA - x.ln() - sum)
    } else {
        let (mut f, mut c, mut d) = (x + 1.0, x + 1.0, 0.0f64);
        for k in 1..500 {
            let kf = k as f64;
            let a = -kf * kf;
            let b = x + 2.0 * kf + 1.0;
            d = 1.0 / (b + a * d);
            c = b + a / c;
            let delta = c * d;
            f *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                break;
            }
        }
        1.0 / f
    };
    // e⁻ˣEi(x)
    let mut sum = 0.0;
    let mut term = 1.0;
    for n in 1..400 {
        let nf = n as f64;
        term *= x / nf;
        let add = term / nf;
        sum += add;
        if nf > x && add <= 1e-17 * sum {
            break;
        }
    }
    let sei = (-x).exp() * (EULER_GAMMA + x.ln() + sum);
    0.5 * (se1 - sei)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn chi_shi_values() {
        let c1 = chi(C64::new(1.0, 0.0)).unwrap();
        assert!((c1.re - 0.837_866_940_980_208_2).abs() < 1e-14 && c1.im == 0.0);
        assert_eq!(shi(C64::new(0.0, 0.0)), C64::new(0.0, 0.0));
        let s1 = shi(C64::new(1.0, 0.0));
        assert!((s1.re - 1.057_250_875_375_728_5).abs() < 1e-14);
        let z = C64::new(2.0, 1.0);
        assert!((shi(-z) + shi(z)).norm() < 1e-14);
        assert!(chi(C64::new(0.0, 0.0)).is_err());
        // Chi(z) = γ + ln z + ∫₀^z (cosh t − 1)/t: large real argument
        let big = chi(C64::new(30.0, 0.0)).unwrap();
        assert!(rel(big, C64::new(184_486_604_703.637_1, 0.0)) < 1e-12);
    }

    #[test]
    fn exponential_integrals_against_reference() {
        // mpmath reference values
        let cases = [
            (C64::new(2.0, 3.0), C64::new(-0.361_551_944_599_640_3, 5.270_548_435_813_695)),
            (C64::new(0.5, -7.0), C64::new(0.140_159_907_766_125_08, -2.958_007_462_723_678)),
            (C64::new(3.0, 0.0), C64::new(9.933_832_570_625_416, 0.0)),
        ];
        for (z, want) in cases {
            assert!(rel(ei(z).unwrap(), want) < 1e-13, "{z}");
        }
        let e = e1(C64::new(1.0, 0.0)).unwrap();
        assert!((e.re - 0.219_383_934_395_520_27).abs() < 1e-15);
    }

    #[test]
    fn even_in_r() {
        let r = C64::new(3.0, -2.0);
        let (a, b) = i1_i2(r, 0.7).unwrap();
        let (c, d) = i1_i2(-r, 0.7).unwrap();
        assert_eq!(a, c);
        assert_eq!(b, d);
    }

    #[test]
    fn switchover_is_continuous() {
        for k in 0..41 {
            let th = -std::f64::consts::FRAC_PI_2 + PI * k as f64 / 40.0;
            let r = C64::from_polar(1.0, th);
            let t = ASYMPTOTIC_RADIUS;
            let (a1, a2) = i1_i2_via(Path::Asymptotic, r, t).unwrap();
            let (s1, s2) = i1_i2_via(Path::Series, r, t).unwrap();
            assert!(rel(a1, s1) < 1e-9, "I1 at angle {th}: {}", rel(a1, s1));
            assert!(rel(a2, s2) < 1e-9, "I2 at angle {th}: {}", rel(a2, s2));
        }
    }

    #[test]
    fn domain_errors() {
        assert!(i1(C64::new(1.0, 0.0), 0.0).is_err());
        assert!(i2(C64::new(1.0, 0.0), -1.0).is_err());
        assert!(nu0(0.0, &ModelParams::canonical()).is_err());
    }

    #[test]
    fn kernel_values() {
        let p = ModelParams::canonical();
        assert_eq!(spectral_density(0.0, &p), 0.0);
        assert!((spectral_density(40.0, &p) - (40.0 / 128.0) / PI).abs() < 1e-15);
        assert_eq!(eta(0.0, &p), 0.0);
        let e = eta(1.0 / 40.0, &p);
        assert!((e + 12.5 * (-1.0f64).exp()).abs() < 1e-13);
        assert_eq!(eta(-1.0 / 40.0, &p), -e);
        assert_eq!(nu0(0.3, &p).unwrap(), nu0(-0.3, &p).unwrap());
    }

    #[test]
    fn nu_log_divergence() {
        let p = ModelParams::canonical();
        let c = 2.0 * p.kernel_strength() / PI;
        for s in [1e-6, 1e-7] {
            let lead = -c * (p.omega_c * s).ln() - c * EULER_GAMMA;
            assert!((nu0(s, &p).unwrap() - lead).abs() < 1e-6 * lead.abs());
        }
    }

    #[test]
    fn real_path_matches_complex_path() {
        for x in [1e-9, 0.01, 0.5, 1.0, 1.5, 3.0, 10.0, 25.0, 39.9, 40.0, 41.0, 120.0, 1e4] {
            let a = i1_real(x);
            let b = i1(C64::new(1.0, 0.0), x).unwrap().re;
            assert!((a - b).abs() <= 2e-14 * b.abs(), "x={x}: {a} vs {b}");
        }
    }
}
