//! Quadrature helpers: Gauss-Legendre rules, tanh-sinh panels and graded meshes.

use nalgebra::{DMatrix, SymmetricEigen};

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// n-point rule from the Golub-Welsch eigenproblem, nodes refined by Newton.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 1..n {
            let kf = k as f64;
            let b = kf / (4.0 * kf * kf - 1.0).sqrt();
            jacobi[(k - 1, k)] = b;
            jacobi[(k, k - 1)] = b;
        }
        let eig = SymmetricEigen::new(jacobi);
        let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        nodes.sort_by(|a, b| a.total_cmp(b));
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, dp) = legendre(n, *x);
                *x -= p / dp;
            }
            let (_, dp) = legendre(n, *x);
            weights.push(2.0 / ((1.0 - *x * *x) * dp * dp));
        }
        GaussRule { nodes, weights }
    }

    /// ∫_a^b f.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (b - a);
        let d = 0.5 * (a + b);
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(c * x + d);
        }
        s * c
    }

    /// Nodes and weights mapped to [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (b - a);
        let d = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c * x + d, w * c))
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Tanh-sinh integral of f on [a, b]; tolerates integrable endpoint singularities.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let out = quadrature::double_exponential::integrate(f, a, b, abs_tol);
    (out.integral, out.error_estimate)
}

/// Breakpoints of [a, b] graded geometrically towards the listed points.
///
/// Each special point gets panels of width first, first·ratio, ... on both
/// sides until `max_width` is reached; the remainder is split uniformly.
pub fn graded_breaks(a: f64, b: f64, special: &[f64], first: f64, ratio: f64, max_width: f64) -> Vec<f64> {
    let mut pts = vec![a, b];
    for &p in special {
        if p < a || p > b {
            continue;
        }
        pts.push(p);
        let mut w = first;
        let mut off = first;
        while w < max_width {
            pts.push(p - off);
            pts.push(p + off);
            w *= ratio;
            off += w;
        }
    }
    pts.retain(|x| *x >= a && *x <= b);
    pts.sort_by(|x, y| x.total_cmp(y));
    pts.dedup_by(|x, y| (*x - *y).abs() <= 1e-14 * (1.0 + y.abs()));
    let mut out = vec![pts[0]];
    for w in pts.windows(2) {
        let n = ((w[1] - w[0]) / max_width).ceil().max(1.0) as usize;
        for k in 1..=n {
            out.push(w[0] + (w[1] - w[0]) * k as f64 / n as f64);
        }
    }
    out
}

/// Sum of tanh-sinh integrals over consecutive panels.
pub fn panels<F: Fn(f64) -> f64>(f: F, breaks: &[f64], abs_tol: f64) -> (f64, f64) {
    let n = breaks.len().saturating_sub(1).max(1) as f64;
    breaks.windows(2).fold((0.0, 0.0), |(s, e), w| {
        let (v, err) = tanh_sinh(&f, w[0], w[1], abs_tol / n);
        (s + v, e + err)
    })
}
