//! Independent ground truth: a Volterra solver for the homogeneous equation
//! of motion and direct quadrature of the coefficient definitions.

use std::fmt;

use crate::coeffs::{CoefficientSet, Provenance};
use crate::defint::{Bounds, CdParts, DefQuad, Response};
use crate::error::{Error, Result};
use crate::params::{effective_frequency_squared, ModelParams, ModelVariant};

/// Default Volterra step, in units of 1/Ω.
pub const DEFAULT_STEP: f64 = 2e-5;

/// Solution of u'' + ω²u + (2/M)∫₀^s η(s−λ)u(λ)dλ = 0 on a uniform grid.
#[derive(Debug, Clone)]
pub struct GridSolution {
    pub step: f64,
    /// u, u', u'' at the nodes.
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub acc: Vec<f64>,
    /// ∫₀^s η(s−λ)u(λ)dλ and ∫₀^s η(s−λ)u'(λ)dλ at the nodes.
    pub mem: Vec<f64>,
    pub mem_d: Vec<f64>,
    /// Largest mismatch between the stored u'' and a central difference of u'.
    pub residual: f64,
    freq2: f64,
    mass: f64,
    kernel: f64,
    omega_c: f64,
}

fn hermite(s: f64, y0: f64, d0: f64, y1: f64, d1: f64, h: f64) -> f64 {
    let s2 = s * s;
    let s3 = s2 * s;
    (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * h * d0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * h * d1
}

/// Solve the homogeneous equation from u(0), u'(0) up to `t_end`.
///
/// Crank-Nicolson in time with product-trapezoidal weights for the
/// exponential memory, which is carried forward recursively.
pub fn volterra_solve(
    init_value: f64,
    init_slope: f64,
    t_end: f64,
    params: &ModelParams,
    variant: ModelVariant,
    step: f64,
) -> Result<GridSolution> {
    params.validate()?;
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::Domain(format!("t_end must be positive, got {t_end}")));
    }
    if !(step > 0.0) || step > 0.05 / params.omega_c {
        return Err(Error::InvalidParameter(format!(
            "step {step} does not resolve the kernel (need 0 < step <= 0.05/Omega_c = {})",
            0.05 / params.omega_c
        )));
    }
    let n = (t_end / step).ceil() as usize;
    let dt = t_end / n as f64;
    let w2 = effective_frequency_squared(params, variant.exact_counterpart());
    let m = params.mass;
    let k = params.kernel_strength();
    let wc = params.omega_c;
    let e = (-wc * dt).exp();
    // ∫₀^Δ e^{−Ω_c(Δ−x)} (x/Δ) dx and the complementary weight
    let beta1 = 1.0 / wc - (1.0 - e) / (wc * wc * dt);
    let beta0 = (1.0 - e) / wc - beta1;
    let c = w2 - 2.0 * k * beta1 / m;
    let denom = 1.0 + c * dt * dt / 4.0;

    let mut u = Vec::with_capacity(n + 1);
    let mut v = Vec::with_capacity(n + 1);
    let mut acc = Vec::with_capacity(n + 1);
    let mut mem = Vec::with_capacity(n + 1);
    let mut mem_d = Vec::with_capacity(n + 1);
    u.push(init_value);
    v.push(init_slope);
    acc.push(-w2 * init_value);
    mem.push(0.0);
    mem_d.push(0.0);
    for i in 0..n {
        let (u0, v0, a0, m0) = (u[i], v[i], acc[i], mem[i]);
        let r = -(2.0 / m) * (e * m0 - k * beta0 * u0);
        let u1 = (u0 + dt * v0 + dt * dt / 4.0 * (a0 + r)) / denom;
        let m1 = e * m0 - k * (beta0 * u0 + beta1 * u1);
        let a1 = -w2 * u1 - 2.0 / m * m1;
        let v1 = v0 + 0.5 * dt * (a0 + a1);
        let md1 = e * mem_d[i] - k * (beta0 * v0 + beta1 * v1);
        u.push(u1);
        v.push(v1);
        acc.push(a1);
        mem.push(m1);
        mem_d.push(md1);
    }
    let mut residual: f64 = 0.0;
    for i in 1..n {
        let vd = (v[i + 1] - v[i - 1]) / (2.0 * dt);
        residual = residual.max((vd - acc[i]).abs());
    }
    Ok(GridSolution { step: dt, u, v, acc, mem, mem_d, residual, freq2: w2, mass: m, kernel: k, omega_c: wc })
}

impl GridSolution {
    pub fn t_end(&self) -> f64 {
        self.step * (self.u.len() - 1) as f64
    }

    fn locate(&self, x: f64) -> (usize, f64) {
        let pos = (x / self.step).max(0.0);
        let i = (pos.floor() as usize).min(self.u.len() - 2);
        (i, pos - i as f64)
    }

    fn interp(&self, x: f64, y: &[f64], dy: impl Fn(usize) -> f64) -> f64 {
        let (i, s) = self.locate(x);
        hermite(s, y[i], dy(i), y[i + 1], dy(i + 1), self.step)
    }

    pub fn value(&self, x: f64) -> f64 {
        self.interp(x, &self.u, |i| self.v[i])
    }

    pub fn slope(&self, x: f64) -> f64 {
        self.interp(x, &self.v, |i| self.acc[i])
    }

    pub fn memory(&self, x: f64) -> f64 {
        self.interp(x, &self.mem, |i| -self.kernel * self.u[i] - self.omega_c * self.mem[i])
    }

    pub fn memory_d(&self, x: f64) -> f64 {
        self.interp(x, &self.mem_d, |i| -self.kernel * self.v[i] - self.omega_c * self.mem_d[i])
    }
}

/// The (0, 1) basis solution viewed as a fundamental solution h.
#[derive(Debug, Clone)]
pub struct VolterraResponse {
    pub grid: GridSolution,
    /// h, h', h'' on a backward grid for the full-square diagnostic.
    backward: Option<(f64, Vec<[f64; 3]>)>,
    cubic: (f64, f64, f64),
}

impl VolterraResponse {
    pub fn new(t_end: f64, params: &ModelParams, variant: ModelVariant, step: f64) -> Result<Self> {
        let grid = volterra_solve(0.0, 1.0, t_end, params, variant, step)?;
        let wc = params.omega_c;
        let cubic = (wc, grid.freq2, grid.freq2 * wc - 2.0 * grid.kernel * wc / grid.mass);
        Ok(VolterraResponse { grid, backward: None, cubic })
    }

    /// Continue h to [−t_end, 0] by integrating the equivalent third-order
    /// equation backwards with RK4.
    pub fn with_backward(mut self) -> Self {
        let t_end = self.grid.t_end();
        let dt = self.grid.step;
        let n = (t_end / dt).ceil() as usize + 1;
        let (a, b, c) = self.cubic;
        let f = |y: [f64; 3]| [y[1], y[2], -a * y[2] - b * y[1] - c * y[0]];
        let mut ys = Vec::with_capacity(n + 1);
        let mut y = [0.0, 1.0, 0.0];
        ys.push(y);
        let h = -dt;
        for _ in 0..n {
            let k1 = f(y);
            let k2 = f(std::array::from_fn(|i| y[i] + 0.5 * h * k1[i]));
            let k3 = f(std::array::from_fn(|i| y[i] + 0.5 * h * k2[i]));
            let k4 = f(std::array::from_fn(|i| y[i] + h * k3[i]));
            y = std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]));
            ys.push(y);
        }
        self.backward = Some((dt, ys));
        self
    }
}

impl Response for VolterraResponse {
    fn h(&self, x: f64) -> f64 {
        self.grid.value(x)
    }
    fn hd(&self, x: f64) -> f64 {
        self.grid.slope(x)
    }
    fn hdd(&self, x: f64) -> f64 {
        -self.grid.freq2 * self.grid.value(x) - 2.0 / self.grid.mass * self.grid.memory(x)
    }
    fn mem(&self, x: f64) -> f64 {
        self.grid.memory(x)
    }
    fn mem_d(&self, x: f64) -> f64 {
        self.grid.memory_d(x)
    }
    fn h_ext(&self, x: f64) -> Result<f64> {
        if x >= 0.0 {
            return Ok(self.h(x));
        }
        let (dt, ys) = self
            .backward
            .as_ref()
            .ok_or_else(|| Error::Usage("backward continuation not prepared".into()))?;
        let pos = -x / dt;
        let i = (pos.floor() as usize).min(ys.len() - 2);
        let s = pos - i as f64;
        // stepping in −x: derivatives flip sign
        Ok(hermite(s, ys[i][0], -ys[i][1], ys[i + 1][0], -ys[i + 1][1], *dt))
    }
}

/// Oracle for one parameter point: Volterra bases solved once up to t_max.
#[derive(Debug, Clone)]
pub struct Oracle {
    params: ModelParams,
    norm: ModelParams,
    variant: ModelVariant,
    /// Basis with u(0) = 1, u'(0) = 0.
    p: GridSolution,
    /// Basis with u(0) = 0, u'(0) = 1.
    q: VolterraResponse,
    quad: DefQuad,
}

impl Oracle {
    /// `t_max` and `step` in the caller's time units.
    pub fn new(params: &ModelParams, variant: ModelVariant, t_max: f64, step: f64) -> Result<Self> {
        let norm = params.normalize()?;
        let units = params.units();
        let tn = units.to_normalized_time(t_max);
        let sn = units.to_normalized_time(step);
        let p = volterra_solve(1.0, 0.0, tn, &norm, variant, sn)?;
        let q = VolterraResponse::new(tn, &norm, variant, sn)?;
        Ok(Oracle { params: *params, norm, variant, p, q, quad: DefQuad::default() })
    }

    pub fn with_quadrature(mut self, quad: DefQuad) -> Self {
        self.quad = quad;
        self
    }

    pub fn variant(&self) -> ModelVariant {
        self.variant
    }

    pub fn response(&self) -> &VolterraResponse {
        &self.q
    }

    fn normalized_time(&self, t: f64) -> Result<f64> {
        let tn = self.params.units().to_normalized_time(t);
        if !(tn >= 0.0) || tn > self.q.grid.t_end() * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("t = {t} outside the solved window")));
        }
        Ok(tn.min(self.q.grid.t_end()))
    }

    /// A(t), B(t) from the definitions with u₁, u₂ fixed by the boundary values at t.
    pub fn ab(&self, t: f64) -> Result<(f64, f64)> {
        let tn = self.normalized_time(t)?;
        if tn == 0.0 {
            return Ok((0.0, 0.0));
        }
        let (p, q) = (&self.p, &self.q.grid);
        // u = α p + β q; u₁: (1, 0) at (0, t); u₂: (0, 1)
        let (pt, qt) = (p.value(tn), q.value(tn));
        if qt.abs() <= 1e-13 * (pt.abs() + 1.0) {
            return Err(Error::Conditioning { t, what: "boundary system singular (q(t) = 0)".into() });
        }
        let b1 = -pt / qt;
        let b2 = 1.0 / qt;
        let i1 = p.memory(tn) + b1 * q.memory(tn);
        let i2 = b2 * q.memory(tn);
        let u1d = p.slope(tn) + b1 * q.slope(tn);
        let u2d = b2 * q.slope(tn);
        if u1d.abs() <= 1e-300 {
            return Err(Error::Conditioning { t, what: "u1'(t) vanishes".into() });
        }
        let m = self.norm.mass;
        let a = 2.0 * i2 - 2.0 * u2d / u1d * i1;
        let b = 2.0 / (m * u1d) * i1;
        let u = self.params.units();
        Ok((u.a(a), u.b(b)))
    }

    /// Single and triple integrals of C and D, normalized units and time.
    pub fn cd_parts_normalized(&self, tn: f64, bounds: Bounds) -> Result<CdParts> {
        if self.norm.gamma == 0.0 {
            return Ok(CdParts { c1: 0.0, c3: 0.0, d1: 0.0, d3: 0.0 });
        }
        match bounds {
            Bounds::Causal => self.quad.cd_parts(&self.q, tn, &self.norm, bounds),
            Bounds::FullSquare => {
                let r = self.q.clone().with_backward();
                self.quad.cd_parts(&r, tn, &self.norm, bounds)
            }
        }
    }

    pub fn cd(&self, t: f64, bounds: Bounds) -> Result<(f64, f64)> {
        let tn = self.normalized_time(t)?;
        if tn == 0.0 {
            return Err(Error::Domain("C, D need t > 0".into()));
        }
        let parts = self.cd_parts_normalized(tn, bounds)?;
        let u = self.params.units();
        Ok((u.c(parts.c(&self.norm)), u.d(parts.d(&self.norm))))
    }

    pub fn coefficients(&self, t: f64, bounds: Bounds) -> Result<CoefficientSet> {
        let (a, b) = self.ab(t)?;
        let (c, d) = if t == 0.0 { (0.0, 0.0) } else { self.cd(t, bounds)? };
        Ok(CoefficientSet { t, a, b, c, d, provenance: Provenance::Oracle })
    }
}

/// A(t), B(t) from a fresh Volterra solve.
pub fn oracle_ab(t: f64, params: &ModelParams, variant: ModelVariant, step: f64) -> Result<(f64, f64)> {
    if t == 0.0 {
        return Ok((0.0, 0.0));
    }
    Oracle::new(params, variant, t, step)?.ab(t)
}

/// C(t), D(t) from a fresh Volterra solve and the causal quadrature.
pub fn oracle_cd(t: f64, params: &ModelParams, variant: ModelVariant, step: f64, bounds: Bounds) -> Result<(f64, f64)> {
    Oracle::new(params, variant, t, step)?.cd(t, bounds)
}

/// Acceptance thresholds per coefficient: |closed − oracle| ≤ tol·max(floor, |closed|).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub tol: [f64; 4],
    pub floor: [f64; 4],
}

impl Tolerance {
    /// 1e-6 on A, B (absolute below unit size), 1e-4 relative on C, D.
    pub const CANONICAL: Tolerance = Tolerance { tol: [1e-6, 1e-6, 1e-4, 1e-4], floor: [1.0, 1.0, 0.0, 0.0] };

    pub fn uniform(tol: f64) -> Tolerance {
        Tolerance { tol: [tol; 4], floor: [0.0; 4] }
    }
}

/// Worst deviation of one coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deviation {
    pub max_abs: f64,
    pub max_rel: f64,
    /// Largest |diff| / (tol·max(floor, |closed|)); ≤ 1 passes.
    pub worst_ratio: f64,
    pub worst_t: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub deviations: [Deviation; 4],
    pub pass: bool,
}

impl fmt::Display for ComparisonReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, d) in ["A", "B", "C", "D"].iter().zip(&self.deviations) {
            writeln!(
                f,
                "{name}: max_abs={:.3e} max_rel={:.3e} worst_t={:.6e} {}",
                d.max_abs,
                d.max_rel,
                d.worst_t,
                if d.pass { "PASS" } else { "FAIL" }
            )?;
        }
        write!(f, "overall: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Compare two coefficient series on the same time grid.
pub fn compare(closed: &[CoefficientSet], oracle: &[CoefficientSet], tol: &Tolerance) -> Result<ComparisonReport> {
    if closed.len() != oracle.len() || closed.is_empty() {
        return Err(Error::Usage(format!("series lengths differ ({} vs {})", closed.len(), oracle.len())));
    }
    for (a, b) in closed.iter().zip(oracle) {
        if (a.t - b.t).abs() > 1e-12 * a.t.abs().max(1e-300) {
            return Err(Error::Usage(format!("time grids differ at t = {} vs {}", a.t, b.t)));
        }
    }
    let deviations = std::array::from_fn(|k| {
        let mut d = Deviation { max_abs: 0.0, max_rel: 0.0, worst_ratio: 0.0, worst_t: closed[0].t, pass: true };
        for (a, b) in closed.iter().zip(oracle) {
            let (x, y) = (a.values()[k], b.values()[k]);
            let diff = (x - y).abs();
            let rel = if x != 0.0 { diff / x.abs() } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
            let scale = tol.tol[k] * tol.floor[k].max(x.abs());
            let ratio = if scale > 0.0 { diff / scale } else if diff == 0.0 { 0.0 } else { f64::INFINITY };
            d.max_abs = d.max_abs.max(diff);
            d.max_rel = d.max_rel.max(rel);
            if ratio > d.worst_ratio || !ratio.is_finite() {
                d.worst_ratio = ratio;
                d.worst_t = a.t;
            }
        }
        d.pass = d.worst_ratio <= 1.0;
        d
    });
    let pass = deviations.iter().all(|d: &Deviation| d.pass);
    Ok(ComparisonReport { deviations, pass })
}
