//! Characteristic cubic, root ordering and critical coupling.

use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{effective_frequency_squared, ModelParams, ModelVariant};

type C64 = Complex64;

/// Relative size below which an imaginary part is treated as round-off.
pub const REAL_TOLERANCE: f64 = 1e-10;
/// Minimal pairwise root distance, in units of Ω.
pub const DEGENERACY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootClass {
    ThreeReal,
    RealPlusConjugatePair,
}

impl RootClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RootClass::ThreeReal => "three-real",
            RootClass::RealPlusConjugatePair => "one-real-plus-pair",
        }
    }
}

/// Ordered roots of the characteristic cubic.
///
/// `z[0]` is the real root with the smallest real part. A conjugate pair
/// sits in `z[1]`, `z[2]` with `Im z[1] > 0`; three real roots are sorted
/// ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTriple {
    pub z: [C64; 3],
    pub class: RootClass,
    pub variant: ModelVariant,
}

/// Monic cubic z³ + a z² + b z + c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cubic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl Cubic {
    pub fn for_model(params: &ModelParams, variant: ModelVariant) -> Cubic {
        let w2 = params.omega * params.omega;
        let wc = params.omega_c;
        match variant.exact_counterpart() {
            ModelVariant::CaldeiraLeggett => Cubic {
                a: wc,
                b: effective_frequency_squared(params, ModelVariant::CaldeiraLeggett),
                c: w2 * wc,
            },
            _ => Cubic { a: wc, b: w2, c: w2 * wc - 2.0 * params.gamma * wc * wc },
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        ((z + self.a) * z + self.b) * z + self.c
    }

    fn deriv(&self, z: C64) -> C64 {
        (3.0 * z + 2.0 * self.a) * z + self.b
    }

    pub fn discriminant(&self) -> f64 {
        let (a, b, c) = (self.a, self.b, self.c);
        18.0 * a * b * c - 4.0 * a.powi(3) * c + a * a * b * b - 4.0 * b.powi(3) - 27.0 * c * c
    }
}

impl RootTriple {
    pub fn z1(&self) -> C64 {
        self.z[0]
    }
    pub fn z2(&self) -> C64 {
        self.z[1]
    }
    pub fn z3(&self) -> C64 {
        self.z[2]
    }

    pub fn max_real_part(&self) -> f64 {
        self.z.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max)
    }

    /// (z1 − z2)(z2 − z3)(z3 − z1).
    pub fn vandermonde(&self) -> C64 {
        let [z1, z2, z3] = self.z;
        (z1 - z2) * (z2 - z3) * (z3 - z1)
    }

    /// Smallest pairwise distance and the pair attaining it.
    pub fn min_separation(&self) -> (usize, usize, f64) {
        let mut best = (0, 1, f64::INFINITY);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            let d = (self.z[i] - self.z[j]).norm();
            if d < best.2 {
                best = (i, j, d);
            }
        }
        best
    }
}

/// Roots with ordering and classification but without the degeneracy check.
pub fn solve_unchecked(params: &ModelParams, variant: ModelVariant) -> Result<RootTriple> {
    params.validate()?;
    let cubic = Cubic::for_model(params, variant);
    let companion = Matrix3::new(
        -cubic.a, -cubic.b, -cubic.c, //
        1.0, 0.0, 0.0, //
        0.0, 1.0, 0.0,
    );
    let eig = companion.complex_eigenvalues();
    let mut z = [eig[0], eig[1], eig[2]];
    for zk in z.iter_mut() {
        *zk = polish(&cubic, *zk);
    }
    for zk in z.iter() {
        let tol = 1e-10 * zk.norm().powi(3).max(1.0);
        if !(cubic.eval(*zk).norm() <= tol) {
            return Err(Error::Numerical(format!(
                "root {zk} leaves residual {:e} after polishing",
                cubic.eval(*zk).norm()
            )));
        }
    }
    Ok(order(z, variant))
}

/// Solve the cubic of the variant, apply the ordering convention and
/// reject nearly coincident roots.
pub fn solve_characteristic_cubic(params: &ModelParams, variant: ModelVariant) -> Result<RootTriple> {
    let roots = solve_unchecked(params, variant)?;
    let (i, j, d) = roots.min_separation();
    if d < DEGENERACY_TOLERANCE * params.omega {
        return Err(Error::DegenerateRoots { i: i + 1, j: j + 1, distance: d });
    }
    Ok(roots)
}

fn polish(cubic: &Cubic, mut z: C64) -> C64 {
    for _ in 0..8 {
        let d = cubic.deriv(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = cubic.eval(z) / d;
        let next = z - step;
        if cubic.eval(next).norm() >= cubic.eval(z).norm() {
            break;
        }
        z = next;
        if step.norm() <= 1e-16 * z.norm().max(1.0) {
            break;
        }
    }
    z
}

fn order(mut z: [C64; 3], variant: ModelVariant) -> RootTriple {
    let is_real = |w: &C64| w.im.abs() <= REAL_TOLERANCE * w.norm().max(1.0);
    let n_real = z.iter().filter(|w| is_real(w)).count();
    if n_real == 3 {
        for w in z.iter_mut() {
            w.im = 0.0;
        }
        z.sort_by(|a, b| a.re.total_cmp(&b.re));
        return RootTriple { z, class: RootClass::ThreeReal, variant };
    }
    // One real root and a pair; the real root is the one with the smallest
    // imaginary magnitude.
    let k = (0..3)
        .min_by(|&a, &b| z[a].im.abs().total_cmp(&z[b].im.abs()))
        .unwrap_or(0);
    let real = C64::new(z[k].re, 0.0);
    let others: Vec<C64> = (0..3).filter(|&i| i != k).map(|i| z[i]).collect();
    let mid = 0.5 * (others[0] + others[1].conj());
    let upper = C64::new(mid.re, mid.im.abs());
    RootTriple {
        z: [real, upper, upper.conj()],
        class: RootClass::RealPlusConjugatePair,
        variant,
    }
}

/// |Σz + Ω_c|, |Σ z_i z_j − b|, |Π z + c| for the variant's cubic.
pub fn vieta_residuals(roots: &RootTriple, params: &ModelParams, variant: ModelVariant) -> (f64, f64, f64) {
    let cubic = Cubic::for_model(params, variant);
    let [z1, z2, z3] = roots.z;
    (
        (z1 + z2 + z3 + cubic.a).norm(),
        (z1 * z2 + z2 * z3 + z3 * z1 - cubic.b).norm(),
        (z1 * z2 * z3 + cubic.c).norm(),
    )
}

/// Coupling at which the model stops being consistent.
///
/// Original: a root crosses into the right half-plane at Ω²/(2Ω_c).
/// Counter-term model: two real roots merge into a conjugate pair; the
/// largest such coupling is located by bisection on the discriminant.
pub fn gamma_critical(params: &ModelParams, variant: ModelVariant) -> Result<f64> {
    params.validate()?;
    match variant.exact_counterpart() {
        ModelVariant::CaldeiraLeggett => cl_gamma_critical(params),
        _ => Ok(params.omega * params.omega / (2.0 * params.omega_c)),
    }
}

fn cl_gamma_critical(params: &ModelParams) -> Result<f64> {
    let disc = |g: f64| Cubic::for_model(&params.with_gamma(g), ModelVariant::CaldeiraLeggett).discriminant();
    let scale = params.omega.max(params.omega_c);
    let (lo, hi) = (1e-8 * scale, 1e4 * scale);
    let n = 4000;
    let ratio = (hi / lo).powf(1.0 / n as f64);
    let mut bracket = None;
    let mut g = lo;
    let mut d = disc(g);
    for _ in 0..n {
        let g2 = g * ratio;
        let d2 = disc(g2);
        if d > 0.0 && d2 <= 0.0 {
            bracket = Some((g, g2));
        }
        g = g2;
        d = d2;
    }
    let (mut a, mut b) = bracket.ok_or_else(|| {
        Error::Numerical(format!(
            "no three-real-root window found for Omega_c = {}; bisection bracket unavailable",
            params.omega_c
        ))
    })?;
    while (b - a) > 1e-15 * b {
        let m = 0.5 * (a + b);
        if disc(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn free_oscillator_roots() {
        let p = ModelParams::natural(40.0, 0.0);
        let r = solve_characteristic_cubic(&p, ModelVariant::Original).unwrap();
        assert_abs_diff_eq!(r.z1().re, -40.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.z2().im, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.z2().re, 0.0, epsilon = 1e-12);
        assert_eq!(r.z3(), r.z2().conj());
        let (a, b, c) = vieta_residuals(&r, &p, ModelVariant::Original);
        assert!(a < 1e-12 && b < 1e-12 && c < 1e-10);
    }

    #[test]
    fn canonical_roots() {
        let p = ModelParams::canonical();
        let r = solve_characteristic_cubic(&p, ModelVariant::Original).unwrap();
        assert_eq!(r.class, RootClass::RealPlusConjugatePair);
        assert_abs_diff_eq!(r.z1().re, -39.98437255869, epsilon = 1e-9);
        assert_abs_diff_eq!(r.z2().re, -0.0078137206550, epsilon = 1e-11);
        assert_abs_diff_eq!(r.z2().im, 0.61244225058, epsilon = 1e-10);
        let (a, b, c) = vieta_residuals(&r, &p, ModelVariant::Original);
        assert!(a < 1e-10 && b < 1e-10 && c < 1e-10);
        let mut bad = r;
        bad.z[0] += 1e-3;
        let (a, _, _) = vieta_residuals(&bad, &p, ModelVariant::Original);
        assert_abs_diff_eq!(a, 1e-3, epsilon = 1e-10);
    }

    #[test]
    fn critical_couplings() {
        let p = ModelParams::natural(40.0, 0.0);
        assert_eq!(gamma_critical(&p, ModelVariant::Original).unwrap(), 0.0125);
        assert_eq!(gamma_critical(&ModelParams::natural(80.0, 0.0), ModelVariant::Original).unwrap(), 0.00625);
        let g = gamma_critical(&p, ModelVariant::CaldeiraLeggett).unwrap();
        assert!((g - 5.01253).abs() < 1e-4, "{g}");
        let r = solve_unchecked(&p.with_gamma(0.0125), ModelVariant::Original).unwrap();
        assert!(r.max_real_part().abs() < 1e-8);
    }

    #[test]
    fn cl_roots_have_negative_real_parts() {
        for g in [0.1, 1.0, 3.0, 5.0, 5.2, 8.0] {
            let r = solve_unchecked(&ModelParams::natural(40.0, g), ModelVariant::CaldeiraLeggett).unwrap();
            assert!(r.max_real_part() < 0.0);
            assert_eq!(r.z[0].im, 0.0);
        }
        let r = solve_unchecked(&ModelParams::natural(40.0, 3.0), ModelVariant::CaldeiraLeggett).unwrap();
        assert_eq!(r.class, RootClass::ThreeReal);
    }
}
