//! Symbolic bookkeeping for the exponential-sum representation of C and D.
//!
//! A term is `coef · e^{κ t} · e^{m α t} / Π (α − p_i)`, where κ is an
//! integer combination of z1, z2, z3 and −Ω_c, and the poles are ±z_k.
//! The ω-integral over α = ±iω is applied at evaluation time.

use std::collections::BTreeMap;

use num_complex::Complex64;

type C64 = Complex64;

/// κ = n₀ z1 + n₁ z2 + n₂ z3 + n₃ (−Ω_c).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Exponent(pub [i8; 4]);

impl Exponent {
    pub const ZERO: Exponent = Exponent([0; 4]);
    pub const CUTOFF: Exponent = Exponent([0, 0, 0, 1]);

    pub fn root(k: usize) -> Exponent {
        let mut n = [0; 4];
        n[k] = 1;
        Exponent(n)
    }

    pub fn value(&self, z: &[C64; 3], omega_c: f64) -> C64 {
        let n = self.0;
        z[0] * n[0] as f64 + z[1] * n[1] as f64 + z[2] * n[2] as f64 - omega_c * n[3] as f64
    }
}

impl std::ops::Add for Exponent {
    type Output = Exponent;
    fn add(self, o: Exponent) -> Exponent {
        let mut n = self.0;
        for i in 0..4 {
            n[i] += o.0[i];
        }
        Exponent(n)
    }
}

/// α = ±z_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Pole {
    pub k: u8,
    pub negated: bool,
}

impl Pole {
    pub fn plus(k: usize) -> Pole {
        Pole { k: k as u8, negated: false }
    }
    pub fn minus(k: usize) -> Pole {
        Pole { k: k as u8, negated: true }
    }
    pub fn value(&self, z: &[C64; 3]) -> C64 {
        let v = z[self.k as usize];
        if self.negated {
            -v
        } else {
            v
        }
    }
}

type Key = (Exponent, i8, Vec<Pole>);

/// Sum of terms, merged on identical structure.
#[derive(Debug, Clone, Default)]
pub(crate) struct Expr {
    terms: BTreeMap<Key, C64>,
}

impl Expr {
    pub fn new() -> Self {
        Expr::default()
    }

    pub fn term(mut self, coef: C64, exp: Exponent, m: i8, poles: &[Pole]) -> Self {
        self.push(coef, exp, m, poles.to_vec());
        self
    }

    fn push(&mut self, coef: C64, exp: Exponent, m: i8, mut poles: Vec<Pole>) {
        poles.sort();
        *self.terms.entry((exp, m, poles)).or_insert(C64::new(0.0, 0.0)) += coef;
    }

    pub fn plus(mut self, other: &Expr) -> Self {
        for ((e, m, p), c) in &other.terms {
            self.push(*c, *e, *m, p.clone());
        }
        self
    }

    pub fn scaled(mut self, s: C64) -> Self {
        for c in self.terms.values_mut() {
            *c *= s;
        }
        self
    }

    pub fn times(&self, other: &Expr) -> Expr {
        let mut out = Expr::new();
        for ((e1, m1, p1), c1) in &self.terms {
            for ((e2, m2, p2), c2) in &other.terms {
                let mut poles = p1.clone();
                poles.extend_from_slice(p2);
                out.push(c1 * c2, *e1 + *e2, m1 + m2, poles);
            }
        }
        out
    }

    /// Reduce two-pole terms to single poles by partial fractions.
    pub fn split_poles(&self, z: &[C64; 3]) -> Expr {
        let mut out = Expr::new();
        for ((e, m, poles), c) in &self.terms {
            match poles.as_slice() {
                [p1, p2] => {
                    let d = p1.value(z) - p2.value(z);
                    out.push(c / d, *e, *m, vec![*p1]);
                    out.push(-c / d, *e, *m, vec![*p2]);
                }
                _ => out.push(*c, *e, *m, poles.clone()),
            }
        }
        out
    }

    /// Lower to numeric terms; every term must carry at most one pole.
    pub fn lower(&self, z: &[C64; 3], omega_c: f64) -> Vec<NumTerm> {
        self.terms
            .iter()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|((e, m, poles), c)| {
                assert!(poles.len() <= 1, "unsplit multi-pole term");
                NumTerm {
                    coef: *c,
                    kappa: e.value(z, omega_c),
                    m: *m,
                    pole: poles.first().copied(),
                }
            })
            .collect()
    }

    #[cfg(test)]
    pub fn len(&self) -> usize {
        self.terms.len()
    }
}

/// Numeric form of a term.
#[derive(Debug, Clone, Copy)]
pub(crate) struct NumTerm {
    pub coef: C64,
    pub kappa: C64,
    pub m: i8,
    pub pole: Option<Pole>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merging_and_partial_fractions() {
        let z = [C64::new(-3.0, 0.0), C64::new(-1.0, 2.0), C64::new(-1.0, -2.0)];
        let one = C64::new(1.0, 0.0);
        let a = Expr::new().term(one, Exponent::root(0), 0, &[Pole::plus(0)]);
        let b = Expr::new().term(one, Exponent::root(1), 0, &[Pole::minus(1)]);
        let ab = a.times(&b).split_poles(&z);
        // 1/((α−z1)(α+z2)) at α = 0.3
        let alpha = C64::new(0.3, 0.0);
        let direct = 1.0 / ((alpha - z[0]) * (alpha + z[1]));
        let lowered = ab.lower(&z, 5.0);
        let sum: C64 = lowered.iter().map(|t| t.coef / (alpha - t.pole.unwrap().value(&z))).sum();
        assert!((sum - direct).norm() < 1e-14);
        let twice = a.clone().plus(&a);
        assert_eq!(twice.len(), 1);
    }
}
