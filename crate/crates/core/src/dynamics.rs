//! Gaussian moment dynamics, observable frequency and stationary positivity.

use nalgebra::{Matrix3, Vector3};
use rayon::prelude::*;

use crate::coeffs::{weak_asymptotics, weak_series, CoefficientSet, EvalContext, Mode};
use crate::error::{Error, Result};
use crate::params::{system_frequency_squared, ModelParams, ModelVariant};
use crate::roots::{gamma_critical, solve_unchecked, RootClass, RootTriple};

/// Coupling (in units of Ω) at which Q is evaluated in place of γ = 0.
pub const SMALL_GAMMA: f64 = 1e-6;

/// First and second moments of a Gaussian Wigner function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianState {
    pub mean_q: f64,
    pub mean_p: f64,
    pub s_qq: f64,
    pub s_qp: f64,
    pub s_pp: f64,
}

impl GaussianState {
    /// Ground state of the bare oscillator.
    pub fn ground(p: &ModelParams) -> Self {
        GaussianState {
            mean_q: 0.0,
            mean_p: 0.0,
            s_qq: p.hbar / (2.0 * p.mass * p.omega),
            s_qp: 0.0,
            s_pp: p.hbar * p.mass * p.omega / 2.0,
        }
    }

    /// Robertson-Schrödinger function σ_qq σ_pp − σ_qp².
    pub fn rs(&self) -> f64 {
        self.s_qq * self.s_pp - self.s_qp * self.s_qp
    }

    /// 4(σ_qq σ_pp − σ_qp²)/ħ²; at least 1 for a physical state.
    pub fn rs_ratio(&self, hbar: f64) -> f64 {
        4.0 * self.rs() / (hbar * hbar)
    }

    /// ⟨p²⟩/2M + MΩ²⟨q²⟩/2 for the bare oscillator.
    pub fn energy(&self, p: &ModelParams) -> f64 {
        let p2 = self.s_pp + self.mean_p * self.mean_p;
        let q2 = self.s_qq + self.mean_q * self.mean_q;
        p2 / (2.0 * p.mass) + 0.5 * p.mass * p.omega * p.omega * q2
    }

    pub fn validate(&self) -> Result<()> {
        let v = [self.mean_q, self.mean_p, self.s_qq, self.s_qp, self.s_pp];
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidParameter("state has non-finite entries".into()));
        }
        if !(self.s_qq > 0.0 && self.s_pp > 0.0 && self.rs() > 0.0) {
            return Err(Error::InvalidParameter("covariance must be positive definite".into()));
        }
        Ok(())
    }

    fn axpy(&self, h: f64, d: &GaussianState) -> GaussianState {
        GaussianState {
            mean_q: self.mean_q + h * d.mean_q,
            mean_p: self.mean_p + h * d.mean_p,
            s_qq: self.s_qq + h * d.s_qq,
            s_qp: self.s_qp + h * d.s_qp,
            s_pp: self.s_pp + h * d.s_pp,
        }
    }
}

/// Time derivative of the moments under the master equation with the
/// given coefficients.
pub fn moment_rhs(s: &GaussianState, c: &CoefficientSet, p: &ModelParams, variant: ModelVariant) -> GaussianState {
    let m = p.mass;
    let kq = m * system_frequency_squared(p, variant) + c.a;
    GaussianState {
        mean_q: s.mean_p / m,
        mean_p: -kq * s.mean_q - c.b * s.mean_p,
        s_qq: 2.0 * s.s_qp / m,
        s_qp: s.s_pp / m - kq * s.s_qq - c.b * s.s_qp + c.c,
        s_pp: -2.0 * kq * s.s_qp - 2.0 * c.b * s.s_pp + 2.0 * c.d,
    }
}

/// Fixed point of the covariance equations for constant coefficients.
pub fn stationary_covariance(c: &CoefficientSet, p: &ModelParams, variant: ModelVariant) -> Result<GaussianState> {
    let m = p.mass;
    let kq = m * system_frequency_squared(p, variant) + c.a;
    // unknowns (σ_qq, σ_qp, σ_pp)
    let mat = Matrix3::new(
        0.0, 2.0 / m, 0.0, //
        -kq, -c.b, 1.0 / m, //
        0.0, -2.0 * kq, -2.0 * c.b,
    );
    let rhs = Vector3::new(0.0, -c.c, -2.0 * c.d);
    let x = mat
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Inconsistent("stationary moment system is singular".into()))?;
    Ok(GaussianState { mean_q: 0.0, mean_p: 0.0, s_qq: x[0], s_qp: x[1], s_pp: x[2] })
}

/// One output row of a propagation run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: f64,
    pub state: GaussianState,
    pub rs: f64,
}

/// Integrate the moment system from t = 0 to `t_end` with classical RK4.
///
/// The coefficients are tabulated once on the half-step grid; the step is
/// shrunk so that it divides `t_end`.
pub fn propagate(
    state0: &GaussianState,
    params: &ModelParams,
    variant: ModelVariant,
    mode: Mode,
    t_end: f64,
    dt: f64,
) -> Result<Vec<Sample>> {
    params.validate()?;
    state0.validate()?;
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::Domain(format!("t_end must be positive, got {t_end}")));
    }
    let dt_max = 0.02 / params.omega_c;
    if !(dt > 0.0) || dt > dt_max * (1.0 + 1e-12) {
        return Err(Error::InvalidParameter(format!("dt = {dt} must lie in (0, 0.02/Omega_c = {dt_max}]")));
    }
    let n = (t_end / dt).ceil() as usize;
    let h = t_end / n as f64;
    let times: Vec<f64> = (0..=2 * n).map(|j| 0.5 * h * j as f64).collect();
    let coeffs = coefficient_table(&times, params, variant, mode)?;

    let mut out = Vec::with_capacity(n + 1);
    let mut s = *state0;
    out.push(Sample { t: 0.0, state: s, rs: s.rs() });
    for i in 0..n {
        let (c0, c1, c2) = (&coeffs[2 * i], &coeffs[2 * i + 1], &coeffs[2 * i + 2]);
        let k1 = moment_rhs(&s, c0, params, variant);
        let k2 = moment_rhs(&s.axpy(0.5 * h, &k1), c1, params, variant);
        let k3 = moment_rhs(&s.axpy(0.5 * h, &k2), c1, params, variant);
        let k4 = moment_rhs(&s.axpy(h, &k3), c2, params, variant);
        s = GaussianState {
            mean_q: s.mean_q + h / 6.0 * (k1.mean_q + 2.0 * k2.mean_q + 2.0 * k3.mean_q + k4.mean_q),
            mean_p: s.mean_p + h / 6.0 * (k1.mean_p + 2.0 * k2.mean_p + 2.0 * k3.mean_p + k4.mean_p),
            s_qq: s.s_qq + h / 6.0 * (k1.s_qq + 2.0 * k2.s_qq + 2.0 * k3.s_qq + k4.s_qq),
            s_qp: s.s_qp + h / 6.0 * (k1.s_qp + 2.0 * k2.s_qp + 2.0 * k3.s_qp + k4.s_qp),
            s_pp: s.s_pp + h / 6.0 * (k1.s_pp + 2.0 * k2.s_pp + 2.0 * k3.s_pp + k4.s_pp),
        };
        let t = h * (i + 1) as f64;
        out.push(Sample { t, state: s, rs: s.rs() });
    }
    Ok(out)
}

/// Coefficients on a nondecreasing grid of times.
pub fn coefficient_table(
    times: &[f64],
    params: &ModelParams,
    variant: ModelVariant,
    mode: Mode,
) -> Result<Vec<CoefficientSet>> {
    match mode {
        Mode::Weak => weak_series(times, params, variant),
        Mode::Exact => {
            let ctx = EvalContext::new(params, variant)?;
            times.par_iter().map(|&t| ctx.exact(t)).collect()
        }
    }
}

/// Ω_obs² = Ω_sys² + A/M at one time; negative values are kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservedFrequency {
    pub t: f64,
    pub omega2: f64,
}

impl ObservedFrequency {
    /// The frequency itself, or `None` when Ω_obs² < 0.
    pub fn omega(&self) -> Option<f64> {
        (self.omega2 >= 0.0).then(|| self.omega2.sqrt())
    }

    pub fn negative(&self) -> bool {
        self.omega2 < 0.0
    }
}

/// Instantaneous observable frequency from the exact A(t).
pub fn omega_obs(t: f64, params: &ModelParams, variant: ModelVariant) -> Result<ObservedFrequency> {
    omega_obs_with(&EvalContext::new(params, variant)?, t)
}

pub fn omega_obs_with(ctx: &EvalContext, t: f64) -> Result<ObservedFrequency> {
    let p = ctx.params();
    let (a, _) = ctx.exact_ab(t)?;
    Ok(ObservedFrequency { t, omega2: system_frequency_squared(p, ctx.variant()) + a / p.mass })
}

/// Q together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryQ {
    pub q: f64,
    /// Coupling actually used (differs from the input only in the γ → 0 limit).
    pub gamma: f64,
    /// Set when γ = 0 was replaced by a small positive coupling.
    pub small_gamma_limit: bool,
    /// Set when a weak-coupling value was continued past γ_cr.
    pub beyond_critical: bool,
}

/// Q from asymptotic coefficients; Q ≥ 1 iff the stationary Gaussian state
/// is a valid density operator.
pub fn q_from_coefficients(c: &CoefficientSet, p: &ModelParams, variant: ModelVariant) -> f64 {
    let (m, hb) = (p.mass, p.hbar);
    let w2 = system_frequency_squared(p, variant);
    4.0 * c.d * (c.d + m * c.c * c.b) / (hb * hb * m * m * c.b * c.b * (w2 + c.a / m))
}

pub fn stationary_q(params: &ModelParams, variant: ModelVariant, mode: Mode) -> Result<StationaryQ> {
    params.validate()?;
    let mut p = *params;
    let small = p.gamma < SMALL_GAMMA * p.omega;
    if small {
        p.gamma = SMALL_GAMMA * p.omega;
    }
    let gcr = gamma_critical(&p, variant)?;
    let beyond = p.gamma >= gcr;
    let coeffs = match mode {
        Mode::Exact => {
            if beyond {
                return Err(Error::Inconsistent(format!("gamma = {} is not below gamma_cr = {gcr}", p.gamma)));
            }
            EvalContext::new(&p, variant)?.asymptotics(Mode::Exact)?
        }
        Mode::Weak => {
            if beyond {
                if variant == ModelVariant::Original {
                    return Err(Error::Inconsistent(format!("gamma = {} is not below gamma_cr = {gcr}", p.gamma)));
                }
                log::warn!("Q_w continued beyond gamma_cr = {gcr}; the model itself is not valid there");
            }
            weak_asymptotics(&p, variant)
        }
    };
    let q = q_from_coefficients(&coeffs, &p, variant);
    if !q.is_finite() {
        return Err(Error::Numerical(format!("Q is not finite at gamma = {}", p.gamma)));
    }
    Ok(StationaryQ { q, gamma: p.gamma, small_gamma_limit: small, beyond_critical: beyond })
}

/// lim A(t) from the dominant pair of roots; `None` when two complex
/// pair sums tie for dominance (A(t) then keeps diverging periodically).
pub fn asymptotic_a(roots: &RootTriple, norm: &ModelParams) -> Option<f64> {
    let z = roots.z;
    let pairs = [(0, 1, 2), (1, 2, 0), (2, 0, 1)];
    let key = |&(i, j, _): &(usize, usize, usize)| (z[i] + z[j]).re;
    let mut sorted = pairs;
    sorted.sort_by(|a, b| key(b).total_cmp(&key(a)));
    let (i, j, k) = sorted[0];
    let lead = z[i] + z[j];
    let gap = key(&sorted[0]) - key(&sorted[1]);
    if lead.im.abs() > 1e-12 * lead.norm().max(1.0) || gap <= 1e-12 * lead.norm().max(1.0) {
        return None;
    }
    let wc = norm.omega_c;
    let a = 2.0 * norm.kernel_strength() * z[k] / ((wc + z[i]) * (wc + z[j]));
    Some(a.re)
}

/// Consistency verdict for one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub variant: ModelVariant,
    pub gamma: f64,
    pub gamma_cr: f64,
    pub roots: RootTriple,
    /// NaN when A(t) has no limit.
    pub omega_obs2_inf: f64,
    pub q: Option<f64>,
    pub q_w: Option<f64>,
    pub frequency_consistent: bool,
    pub positivity_consistent: bool,
    pub notes: Vec<String>,
}

impl ConsistencyReport {
    pub fn root_class(&self) -> RootClass {
        self.roots.class
    }

    pub fn consistent(&self) -> bool {
        self.frequency_consistent && self.positivity_consistent
    }
}

pub fn consistency_report(params: &ModelParams, variant: ModelVariant) -> Result<ConsistencyReport> {
    let norm = params.normalize()?;
    let roots = solve_unchecked(&norm, variant.exact_counterpart())?;
    let roots = RootTriple { variant, ..roots };
    let gamma_cr = gamma_critical(params, variant)?;
    let mut notes = Vec::new();
    let w2 = system_frequency_squared(&norm, variant);
    let omega_obs2_inf = match asymptotic_a(&roots, &norm) {
        Some(a) => (w2 + a / norm.mass) * params.omega * params.omega,
        None => {
            notes.push("A(t) has no limit: Omega_obs^2(t) diverges periodically".into());
            f64::NAN
        }
    };
    let q = match stationary_q(params, variant, Mode::Exact) {
        Ok(q) => Some(q.q),
        Err(e) => {
            notes.push(format!("Q unavailable: {e}"));
            None
        }
    };
    let q_w = match stationary_q(params, variant, Mode::Weak) {
        Ok(q) => {
            if q.beyond_critical {
                notes.push("Q_w continued beyond gamma_cr".into());
            }
            Some(q.q)
        }
        Err(e) => {
            notes.push(format!("Q_w unavailable: {e}"));
            None
        }
    };
    if norm.gamma < SMALL_GAMMA {
        notes.push(format!("Q evaluated at gamma = {SMALL_GAMMA} Omega (zero-coupling limit)"));
    }
    let frequency_consistent = omega_obs2_inf > 0.0;
    if !frequency_consistent && !omega_obs2_inf.is_nan() {
        notes.push("Omega_obs^2(inf) is negative".into());
    }
    Ok(ConsistencyReport {
        variant,
        gamma: params.gamma,
        gamma_cr,
        roots: RootTriple { z: roots.z.map(|z| z * params.omega), ..roots },
        omega_obs2_inf,
        q,
        q_w,
        frequency_consistent,
        positivity_consistent: q.is_some_and(|q| q >= 1.0),
        notes,
    })
}
