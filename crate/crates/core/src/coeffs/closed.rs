//! Closed-form C(t), D(t): exponential sums against the I₁/I₂ basis.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::algebra::{Exponent, Expr, NumTerm, Pole};
use crate::defint::CdParts;
use crate::error::{Error, Result};
use crate::special::i1_i2;

type C64 = Complex64;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Structural pieces shared by the C and D assemblies.
struct Pieces {
    z: [C64; 3],
    omega_c: f64,
    a: [C64; 3],
    /// 1/Π_{n≠m}(z_n − z_m)
    beta: [C64; 3],
    v: C64,
    k: f64,
}

impl Pieces {
    fn new(z: [C64; 3], omega_c: f64, kernel: f64) -> Self {
        let v = (z[0] - z[1]) * (z[1] - z[2]) * (z[2] - z[0]);
        let a = [
            -(omega_c + z[0]) * (z[1] - z[2]) / v,
            -(omega_c + z[1]) * (z[2] - z[0]) / v,
            -(omega_c + z[2]) * (z[0] - z[1]) / v,
        ];
        let beta = std::array::from_fn(|m| 1.0 / ((z[(m + 1) % 3] - z[m]) * (z[(m + 2) % 3] - z[m])));
        Pieces { z, omega_c, a, beta, v, k: kernel }
    }

    /// Σ w_k e^{z_k t}
    fn expsum(&self, w: impl Fn(usize) -> C64) -> Expr {
        (0..3).fold(Expr::new(), |e, k| e.term(w(k), Exponent::root(k), 0, &[]))
    }

    fn h(&self, order: i32) -> Expr {
        self.expsum(|k| self.a[k] * self.z[k].powi(order))
    }

    /// G₂ denominator in the normalization V²(h h'' − h'²).
    fn den(&self) -> Expr {
        self.h(0).times(&self.h(2)).plus(&self.h(1).times(&self.h(1)).scaled(c(-1.0))).scaled(self.v * self.v)
    }

    /// Single-integral operator applied to e^{−αt}.
    fn single(&self, deriv: bool) -> Expr {
        let mut e = Expr::new();
        for k in 0..3 {
            let w = self.a[k] * if deriv { self.z[k] } else { c(1.0) };
            e = e
                .term(w, Exponent::ZERO, 0, &[Pole::plus(k)])
                .term(-w, Exponent::root(k), -1, &[Pole::plus(k)]);
        }
        e
    }

    /// Triple-integral operator applied to e^{−αt}, times the denominator.
    fn triple(&self, deriv: bool) -> Expr {
        let (z, wc, a) = (self.z, self.omega_c, self.a);
        let mut l = Expr::new();
        let mut ha = Expr::new();
        let mut hda = Expr::new();
        let mut first = Expr::new();
        for k in 0..3 {
            let w = a[k] * if deriv { z[k] } else { c(1.0) };
            l = l.term(w, Exponent::ZERO, 1, &[Pole::plus(k)]).term(-w, Exponent::root(k), 0, &[Pole::plus(k)]);
            ha = ha
                .term(a[k], Exponent::root(k), 0, &[Pole::minus(k)])
                .term(-a[k], Exponent::ZERO, -1, &[Pole::minus(k)]);
            let ad = a[k] * z[k];
            hda = hda
                .term(ad, Exponent::root(k), 0, &[Pole::minus(k)])
                .term(-ad, Exponent::ZERO, -1, &[Pole::minus(k)]);
            let q = a[k] / (z[k] + wc);
            first = first
                .term(q, Exponent::root(k), 0, &[Pole::minus(k)])
                .term(-q, Exponent::CUTOFF, 0, &[Pole::minus(k)])
                .term(-self.beta[k], Exponent::ZERO, -1, &[Pole::minus(k)])
                .term(self.beta[k], Exponent::CUTOFF, 0, &[Pole::minus(k)]);
        }
        let v2 = self.v * self.v;
        let (h, hd, hdd) = (self.h(0), self.h(1), self.h(2));
        let pn = hd.times(&hda).plus(&hdd.times(&ha).scaled(c(-1.0))).scaled(v2);
        let rn = hd.times(&ha).plus(&h.times(&hda).scaled(c(-1.0))).scaled(v2);
        let sh = |j: i32| {
            (0..3).fold(Expr::new(), |e, k| {
                let q = a[k] * z[k].powi(j) / (z[k] + wc);
                e.term(q, Exponent::root(k), 0, &[]).term(-q, Exponent::CUTOFF, 0, &[])
            })
        };
        let inner = self
            .den()
            .times(&first)
            .plus(&pn.times(&sh(0)))
            .plus(&rn.times(&sh(1)))
            .scaled(c(-self.k));
        l.times(&inner).split_poles(&z)
    }
}

/// Precomputed closed-form assembly at one parameter point.
#[derive(Debug, Clone)]
pub(crate) struct ClosedCd {
    z: [C64; 3],
    omega_c: f64,
    /// 2MγΩ_c²/π
    amp: f64,
    v: C64,
    c1: Vec<NumTerm>,
    d1: Vec<NumTerm>,
    c3: Vec<NumTerm>,
    d3: Vec<NumTerm>,
    den: Vec<NumTerm>,
    den_shift: f64,
    /// Ψ₀ at the six poles, indexed 2k + negated.
    psi0: [C64; 6],
}

fn pole_index(p: Pole) -> usize {
    2 * p.k as usize + p.negated as usize
}

/// ln(p²/Ω_c²)/(p² − Ω_c²), continuous through p² = Ω_c².
fn log_ratio(p: C64, omega_c: f64) -> C64 {
    let w2 = omega_c * omega_c;
    let u = p * p / w2 - 1.0;
    if u.norm() < 1e-3 {
        // ln(1+u)/u
        let mut s = C64::new(0.0, 0.0);
        let mut pow = c(1.0);
        for n in 0..12 {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            s += pow * (sign / (n + 1) as f64);
            pow *= u;
        }
        s / w2
    } else {
        ((p * p).ln() - w2.ln()) / (p * p - w2)
    }
}

impl ClosedCd {
    pub fn build(z: [C64; 3], omega_c: f64, mass: f64, gamma: f64) -> Self {
        let kernel = mass * gamma * omega_c * omega_c;
        let pieces = Pieces::new(z, omega_c, kernel);
        let amp = 2.0 * kernel / PI;
        let den = pieces.den().lower(&z, omega_c);
        let den_shift = den.iter().map(|t| t.kappa.re).fold(f64::NEG_INFINITY, f64::max);
        let psi0 = std::array::from_fn(|i| {
            let p = Pole { k: (i / 2) as u8, negated: i % 2 == 1 }.value(&z);
            -amp * p * log_ratio(p, omega_c) / 2.0
        });
        ClosedCd {
            z,
            omega_c,
            amp,
            v: pieces.v,
            c1: pieces.single(false).lower(&z, omega_c),
            d1: pieces.single(true).lower(&z, omega_c),
            c3: pieces.triple(false).lower(&z, omega_c),
            d3: pieces.triple(true).lower(&z, omega_c),
            den,
            den_shift,
            psi0,
        }
    }

    /// Ψ_m at every pole: [m = −1, 0, +1][pole index].
    fn psi(&self, t: f64) -> Result<[[C64; 6]; 3]> {
        let wc = self.omega_c;
        let (i1c, i2c) = i1_i2(c(wc), t)?;
        let mut out = [[C64::new(0.0, 0.0); 6]; 3];
        for k in 0..3 {
            let p = self.z[k];
            let (i1p, i2p) = i1_i2(p, t)?;
            let pre = -self.amp / (p * p - wc * wc);
            // Φ(±p, t)
            let phi_plus = pre * (p * (i1c - i1p) + p * p * i2p - wc * wc * i2c);
            let phi_minus = pre * (-p * (i1c - i1p) + p * p * i2p - wc * wc * i2c);
            // pole +p: Ψ₋₁ = Φ(p), Ψ₊₁ = −Φ(−p); pole −p: Ψ₋₁ = Φ(−p), Ψ₊₁ = −Φ(p)
            out[0][2 * k] = phi_plus;
            out[2][2 * k] = -phi_minus;
            out[0][2 * k + 1] = phi_minus;
            out[2][2 * k + 1] = -phi_plus;
        }
        out[1] = self.psi0;
        Ok(out)
    }

    fn sum(terms: &[NumTerm], t: f64, shift: f64, psi: &[[C64; 6]; 3]) -> (C64, f64) {
        let mut s = C64::new(0.0, 0.0);
        let mut mag = 0.0;
        for term in terms {
            let p = term.pole.map(pole_index).expect("pole");
            let v = term.coef * ((term.kappa - shift) * t).exp() * psi[(term.m + 1) as usize][p];
            s += v;
            mag += v.norm();
        }
        (s, mag)
    }

    /// Scaled G₂ denominator V²(h h'' − h'²)·e^{−shift·t}.
    fn den_scaled(&self, t: f64) -> (C64, f64) {
        let mut s = C64::new(0.0, 0.0);
        let mut mag = 0.0;
        for term in &self.den {
            let v = term.coef * ((term.kappa - self.den_shift) * t).exp();
            s += v;
            mag += v.norm();
        }
        (s, mag)
    }

    pub fn eval(&self, t: f64) -> Result<CdParts> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("C, D need t > 0, got {t}")));
        }
        let psi = self.psi(t)?;
        let (den, den_mag) = self.den_scaled(t);
        if den.norm() <= 1e-13 * den_mag || den.norm() == 0.0 {
            return Err(Error::Conditioning { t, what: "G2 denominator underflows".into() });
        }
        let real = |(v, mag): (C64, f64), what: &str| -> Result<f64> {
            if v.im.abs() > 1e-9 * mag.max(f64::MIN_POSITIVE) {
                return Err(Error::Numerical(format!("{what} keeps an imaginary part {:e} at t = {t}", v.im)));
            }
            Ok(v.re)
        };
        let c1 = real(Self::sum(&self.c1, t, 0.0, &psi), "C1")?;
        let d1 = real(Self::sum(&self.d1, t, 0.0, &psi), "D1")?;
        let (nc, mc) = Self::sum(&self.c3, t, self.den_shift, &psi);
        let (nd, md) = Self::sum(&self.d3, t, self.den_shift, &psi);
        let c3 = real((nc / den, mc / den.norm()), "C3")?;
        let d3 = real((nd / den, md / den.norm()), "D3")?;
        Ok(CdParts { c1, c3, d1, d3 })
    }

    /// Coefficients of the operators applied to e^{−αt}, grouped by exponent.
    ///
    /// Returns (single-integral terms, triple-integral terms), each as a list
    /// of (exponent without α, power of e^{−αt}, coefficient). The triple
    /// integral uses the normalization of the Σcyc e^{(z1+z2)t}(Ω_c+z1)(Ω_c+z2)(z1−z2)
    /// denominator; terms growing like e^{+αt} are folded into e^{−αt} with α → −α.
    pub fn operator_terms(&self, alpha: C64, deriv: bool) -> Result<(Vec<(C64, i8, C64)>, Vec<(C64, i8, C64)>)> {
        for k in 0..3 {
            for p in [self.z[k], -self.z[k]] {
                if (alpha - p).norm() <= 1e-10 * p.norm().max(1.0) {
                    return Err(Error::PoleCollision { alpha: alpha.to_string(), pole: p.to_string() });
                }
            }
        }
        let eval = |terms: &[NumTerm], scale: C64| -> Vec<(C64, i8, C64)> {
            terms
                .iter()
                .map(|t| {
                    let p = t.pole.expect("pole").value(&self.z);
                    if t.m == 1 {
                        (t.kappa, -1, t.coef * scale / (-alpha - p))
                    } else {
                        (t.kappa, -t.m.abs(), t.coef * scale / (alpha - p))
                    }
                })
                .collect()
        };
        let single = if deriv { &self.d1 } else { &self.c1 };
        let triple = if deriv { &self.d3 } else { &self.c3 };
        Ok((eval(single, c(1.0)), eval(triple, 1.0 / self.v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_ratio_is_continuous() {
        let wc = 40.0;
        let p = C64::new(-40.0 + 1e-4, 0.0);
        let a = log_ratio(p, wc);
        let b = ((p * p).ln() - (wc * wc).ln()) / (p * p - wc * wc);
        assert!((a - b).norm() < 1e-10 * b.norm());
    }
}
