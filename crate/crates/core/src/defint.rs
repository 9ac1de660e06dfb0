//! Coefficients evaluated straight from their integral definitions.
//!
//! Given any fundamental solution h (h(0) = 0, h'(0) = 1) together with
//! its memory integrals, A and B follow algebraically and C, D by nested
//! quadrature over the causal domains. Used by the oracle (with a Volterra
//! solution) and by the exact path at short times (with the power series
//! of h), where the closed forms cancel catastrophically.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::quad::GaussRule;
use crate::special::{eta, nu0_unchecked};

/// A fundamental solution and its memory integrals.
pub trait Response: Sync {
    fn h(&self, x: f64) -> f64;
    fn hd(&self, x: f64) -> f64;
    fn hdd(&self, x: f64) -> f64;
    /// ∫₀^x η(x−u) h(u) du.
    fn mem(&self, x: f64) -> f64;
    /// ∫₀^x η(x−u) h'(u) du.
    fn mem_d(&self, x: f64) -> f64;
    /// Analytic continuation of h to negative arguments.
    fn h_ext(&self, x: f64) -> Result<f64>;
}

impl Response for crate::green::Fundamental {
    fn h(&self, x: f64) -> f64 {
        crate::green::Fundamental::h(self, x)
    }
    fn hd(&self, x: f64) -> f64 {
        crate::green::Fundamental::hd(self, x)
    }
    fn hdd(&self, x: f64) -> f64 {
        crate::green::Fundamental::hdd(self, x)
    }
    fn mem(&self, x: f64) -> f64 {
        -0.5 * self.mass * (crate::green::Fundamental::hdd(self, x) + self.freq2 * crate::green::Fundamental::h(self, x))
    }
    fn mem_d(&self, x: f64) -> f64 {
        -0.5 * self.mass * (self.hddd(x) + self.freq2 * crate::green::Fundamental::hd(self, x))
    }
    fn h_ext(&self, x: f64) -> Result<f64> {
        Ok(crate::green::Fundamental::h(self, x))
    }
}

/// Integration domain of the triple integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Bounds {
    /// τ ≤ s in the G₁ part; ν only at nonnegative arguments.
    #[default]
    Causal,
    /// τ over all of [0, t] in the G₁ part, with h continued to negative arguments.
    FullSquare,
}

/// Single and triple integrals entering C and D.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CdParts {
    pub c1: f64,
    pub c3: f64,
    pub d1: f64,
    pub d3: f64,
}

impl CdParts {
    pub fn c(&self, p: &ModelParams) -> f64 {
        p.hbar / p.mass * self.c1 - 2.0 * p.hbar / (p.mass * p.mass) * self.c3
    }
    pub fn d(&self, p: &ModelParams) -> f64 {
        p.hbar * self.d1 - 2.0 * p.hbar / p.mass * self.d3
    }
}

/// A and B from h, h', h'' and the memory integrals at t.
pub fn ab_from_response<R: Response + ?Sized>(r: &R, t: f64, p: &ModelParams) -> Result<(f64, f64)> {
    if t == 0.0 {
        return Ok((0.0, 0.0));
    }
    let (h, hd, hdd) = (r.h(t), r.hd(t), r.hdd(t));
    let (e, ed) = (r.mem(t), r.mem_d(t));
    let det = h * hdd - hd * hd;
    if det.abs() <= 1e-14 * (hd * hd + (h * hdd).abs()) {
        return Err(Error::Conditioning { t, what: "u1'(t) vanishes".into() });
    }
    let a = 2.0 * (e * hdd - hd * ed) / det;
    let b = 2.0 / p.mass * (h * ed - hd * e) / det;
    Ok((a, b))
}

/// Nested Gauss-Legendre quadrature on meshes graded towards the log
/// singularities of ν.
#[derive(Debug, Clone)]
pub struct DefQuad {
    rule: GaussRule,
    /// Geometric grading ratio towards a singular endpoint.
    sigma: f64,
    /// Smallest graded panel relative to the graded stretch.
    floor: f64,
    /// Largest panel width, in units of 1/Ω.
    max_width: f64,
}

impl Default for DefQuad {
    fn default() -> Self {
        DefQuad::new(20, 0.2, 1e-16, 0.5)
    }
}

impl DefQuad {
    pub fn new(order: usize, sigma: f64, floor: f64, max_width: f64) -> Self {
        DefQuad { rule: GaussRule::new(order), sigma, floor, max_width }
    }

    /// Cheaper settings, adequate for about 1e-8 relative accuracy.
    pub fn coarse() -> Self {
        DefQuad::new(10, 0.2, 1e-12, 1.0)
    }

    /// Nodes and weights on [a, b], graded towards the flagged endpoints.
    pub fn nodes(&self, a: f64, b: f64, sing_a: bool, sing_b: bool, width: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        if !(b > a) {
            return out;
        }
        let len = b - a;
        let mut breaks = Vec::new();
        match (sing_a, sing_b) {
            (false, false) => {
                breaks.push(a);
                uniform(&mut breaks, a, b, width);
            }
            (true, false) => {
                let g = width.min(len);
                self.grade_left(&mut breaks, a, g);
                uniform(&mut breaks, a + g, b, width);
            }
            (false, true) => {
                let g = width.min(len);
                breaks.push(a);
                uniform(&mut breaks, a, b - g, width);
                self.grade_right(&mut breaks, b, g);
            }
            (true, true) => {
                let g = width.min(0.5 * len);
                self.grade_left(&mut breaks, a, g);
                uniform(&mut breaks, a + g, b - g, width);
                self.grade_right(&mut breaks, b, g);
            }
        }
        breaks.dedup();
        for w in breaks.windows(2) {
            if w[1] > w[0] {
                out.extend(self.rule.mapped(w[0], w[1]));
            }
        }
        out
    }

    /// Smallest graded panel: relative floor, but never below the spacing of
    /// representable numbers around the singular point.
    fn min_width(&self, at: f64, g: f64) -> f64 {
        (self.floor * g).max(8192.0 * f64::EPSILON * at.abs())
    }

    fn grade_left(&self, breaks: &mut Vec<f64>, a: f64, g: f64) {
        let mut pts = vec![];
        let mut w = g;
        let stop = self.min_width(a, g);
        while w > stop {
            pts.push(a + w);
            w *= self.sigma;
        }
        breaks.push(a);
        breaks.extend(pts.into_iter().rev());
    }

    fn grade_right(&self, breaks: &mut Vec<f64>, b: f64, g: f64) {
        let mut w = g;
        let stop = self.min_width(b, g);
        while w > stop {
            breaks.push(b - w);
            w *= self.sigma;
        }
        breaks.push(b);
    }

    /// C₁, D₁ and the causal (or full-square) triple integrals at t.
    pub fn cd_parts<R: Response + ?Sized>(&self, r: &R, t: f64, p: &ModelParams, bounds: Bounds) -> Result<CdParts> {
        self.cd_parts_with_kernel(r, t, p, bounds, &|x| nu0_unchecked(x, p))
    }

    /// Same as [`DefQuad::cd_parts`] with a caller-supplied ν, evaluated only at x ∈ (0, t].
    pub fn cd_parts_with_kernel<R, N>(&self, r: &R, t: f64, p: &ModelParams, bounds: Bounds, nu: &N) -> Result<CdParts>
    where
        R: Response + ?Sized,
        N: Fn(f64) -> f64 + Sync,
    {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("C, D need t > 0, got {t}")));
        }
        let width = self.max_width / p.omega;
        // single integrals, ν singular at x = 0
        let single = self.nodes(0.0, t, true, false, width);
        let (mut c1, mut d1) = (0.0, 0.0);
        for &(x, w) in &single {
            let v = nu(x);
            c1 += w * r.h(x) * v;
            d1 += w * r.hd(x) * v;
        }

        let (ht, hdt, hddt) = (r.h(t), r.hd(t), r.hdd(t));
        let d0 = hdt * hdt - ht * hddt;
        if d0.abs() <= 1e-14 * (hdt * hdt + (ht * hddt).abs()) {
            return Err(Error::Conditioning { t, what: "h'(t)^2 - h(t)h''(t) vanishes".into() });
        }
        let (et, edt) = (r.mem(t), r.mem_d(t));
        let outer = self.nodes(0.0, t, true, true, width);
        let full = bounds == Bounds::FullSquare;

        let terms: Result<Vec<(f64, f64)>> = outer
            .par_iter()
            .map(|&(tau, wt)| {
                // ∫₀^t ds η(t−s) G₂(s, τ)
                let hm = r.h(t - tau);
                let hdm = r.hd(t - tau);
                let pp = -(hdt * hdm - hddt * hm) / d0;
                let rr = -(hm * hdt - ht * hdm) / d0;
                let mut kern = r.mem(t - tau) + et * pp + edt * rr;
                if full {
                    // s < τ part of the smooth G₁ term
                    let mut extra = 0.0;
                    for (s, ws) in self.rule.mapped(0.0, tau) {
                        extra += ws * eta(t - s, p) * r.h_ext(s - tau)?;
                    }
                    kern += extra;
                }
                // W(τ) = ∫₀^t g(λ) ν(|τ−λ|) dλ, g = h(t−λ) or h'(t−λ)
                let (mut wc, mut wd) = (0.0, 0.0);
                for (lo, hi, sl, sh) in [(0.0, tau, false, true), (tau, t, true, false)] {
                    for (lam, wl) in self.nodes(lo, hi, sl, sh, width) {
                        let x = (tau - lam).abs();
                        let v = if x > 0.0 { nu(x) } else { 0.0 };
                        wc += wl * r.h(t - lam) * v;
                        wd += wl * r.hd(t - lam) * v;
                    }
                }
                Ok((wt * wc * kern, wt * wd * kern))
            })
            .collect();
        let (c3, d3) = terms?.into_iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        Ok(CdParts { c1, c3, d1, d3 })
    }
}

fn uniform(breaks: &mut Vec<f64>, a: f64, b: f64, width: f64) {
    if !(b > a) {
        return;
    }
    let n = ((b - a) / width).ceil().max(1.0) as usize;
    for k in 1..=n {
        breaks.push(if k == n { b } else { a + (b - a) * k as f64 / n as f64 });
    }
}
