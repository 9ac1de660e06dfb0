//! Coefficients of the operators Ĉ₁, D̂₁, Ĉ₃, D̂₃ acting on e^{−αt}.
//!
//! Everything here is in normalized units (Ω = 1, α in units of Ω).

use num_complex::Complex64;

use super::closed::ClosedCd;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::roots::RootTriple;

type C64 = Complex64;

/// The thirteen exponents ε₁ … ε₁₃ built from root sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentTable {
    pub eps: [C64; 13],
}

impl ExponentTable {
    pub fn new(z: [C64; 3]) -> Self {
        let [z1, z2, z3] = z;
        ExponentTable {
            eps: [
                2.0 * z1 + z2 + z3,
                z1 + 2.0 * z2 + z3,
                z1 + z2 + 2.0 * z3,
                z1 + z2,
                z2 + z3,
                z3 + z1,
                2.0 * z1 + z2,
                2.0 * z2 + z3,
                2.0 * z3 + z1,
                2.0 * z1 + z3,
                2.0 * z2 + z1,
                2.0 * z3 + z2,
                z1 + z2 + z3,
            ],
        }
    }
}

/// Operator coefficients at one value of α.
#[derive(Debug, Clone, PartialEq)]
pub struct IntermediateCoefficients {
    pub alpha: C64,
    /// C₁,₀ … C₁,₃
    pub c1: [C64; 4],
    /// D₁,₀ … D₁,₃
    pub d1: [C64; 4],
    /// C₃,₁ … C₃,₁₃
    pub c3: [C64; 13],
    /// D₃,₁ … D₃,₁₃
    pub d3: [C64; 13],
    pub exponents: ExponentTable,
}

/// Prepared tables for one parameter point.
#[derive(Debug, Clone)]
pub struct IntermediateTables {
    z: [C64; 3],
    omega_c: f64,
    closed: ClosedCd,
}

/// Tables for the roots' variant; `params` may be in any units.
pub fn intermediate_tables(roots: &RootTriple, params: &ModelParams) -> Result<IntermediateTables> {
    let norm = params.normalize()?;
    let z = roots.z.map(|z| z / params.omega);
    let (_, _, d) = RootTriple { z, ..*roots }.min_separation();
    if d < crate::roots::DEGENERACY_TOLERANCE {
        return Err(Error::Inconsistent("tables need non-degenerate roots".into()));
    }
    Ok(IntermediateTables { z, omega_c: norm.omega_c, closed: ClosedCd::build(z, norm.omega_c, norm.mass, norm.gamma) })
}

impl IntermediateTables {
    /// C₁ₖ(α) by cyclic replacement of
    /// C₁,₁ = (Ω_c+z1)/((α−z1)(z1−z2)(z3−z1)).
    fn c1(&self, alpha: C64) -> [C64; 4] {
        let z = self.z;
        let wc = self.omega_c;
        let one = |z1: C64, z2: C64, z3: C64| (wc + z1) / ((alpha - z1) * (z1 - z2) * (z3 - z1));
        let c11 = one(z[0], z[1], z[2]);
        let c12 = one(z[1], z[2], z[0]);
        let c13 = one(z[2], z[0], z[1]);
        [-(c11 + c12 + c13), c11, c12, c13]
    }

    pub fn at(&self, alpha: C64) -> Result<IntermediateCoefficients> {
        let eps = ExponentTable::new(self.z);
        let c1 = self.c1(alpha);
        let d1 = [
            -(1..4).map(|k| self.z[k - 1] * c1[k]).sum::<C64>(),
            self.z[0] * c1[1],
            self.z[1] * c1[2],
            self.z[2] * c1[3],
        ];
        let (_, c3t) = self.closed.operator_terms(alpha, false)?;
        let (_, d3t) = self.closed.operator_terms(alpha, true)?;
        Ok(IntermediateCoefficients {
            alpha,
            c1,
            d1,
            c3: collect(&c3t, &eps)?,
            d3: collect(&d3t, &eps)?,
            exponents: eps,
        })
    }
}

/// Group terms by exponent value and assign them to the ε table.
fn collect(terms: &[(C64, i8, C64)], eps: &ExponentTable) -> Result<[C64; 13]> {
    let mut groups: Vec<(C64, i8, C64, f64)> = Vec::new();
    for &(kappa, power, coef) in terms {
        let scale = kappa.norm().max(1.0);
        match groups.iter_mut().find(|g| g.1 == power && (g.0 - kappa).norm() <= 1e-9 * scale) {
            Some(g) => {
                g.2 += coef;
                g.3 = g.3.max(coef.norm());
            }
            None => groups.push((kappa, power, coef, coef.norm())),
        }
    }
    // residues of cancelled groups are judged against the whole table
    let scale_all = terms.iter().map(|t| t.2.norm()).fold(0.0, f64::max);
    let mut out = [C64::new(0.0, 0.0); 13];
    for (kappa, power, coef, mag) in groups {
        if coef.norm() <= 1e-9 * mag.max(scale_all) {
            continue;
        }
        let range = if power == 0 { 0..6 } else { 6..13 };
        let scale = kappa.norm().max(1.0);
        match range.clone().find(|&i| (eps.eps[i] - kappa).norm() <= 1e-9 * scale) {
            Some(i) => out[i] += coef,
            None => {
                return Err(Error::Numerical(format!(
                    "exponent {kappa} (power {power}) with weight {coef} has no slot in the table"
                )))
            }
        }
    }
    Ok(out)
}
