//! Physical parameters, model variants and the normalization to M = Ω = ħ = 1.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Which Hamiltonian the coefficients are computed for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ModelVariant {
    /// Bilinear coupling without counter term.
    #[default]
    Original,
    /// Counter term included: Ω² → Ω² + 2γΩ_c everywhere.
    CaldeiraLeggett,
    /// Weak-coupling treatment of the counter-term model: the shifted
    /// frequency enters the system Hamiltonian, the weak coefficients keep
    /// the bare trigonometric factors.
    WeakShiftedKernel,
}

impl ModelVariant {
    pub const ALL: [ModelVariant; 3] = [
        ModelVariant::Original,
        ModelVariant::CaldeiraLeggett,
        ModelVariant::WeakShiftedKernel,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ModelVariant::Original => "original",
            ModelVariant::CaldeiraLeggett => "caldeira-leggett",
            ModelVariant::WeakShiftedKernel => "weak-shifted",
        }
    }

    /// Variant whose characteristic cubic governs the exact coefficients.
    /// The weak-shifted model has no exact counterpart of its own; its
    /// Hamiltonian is the counter-term one.
    pub fn exact_counterpart(&self) -> ModelVariant {
        match self {
            ModelVariant::WeakShiftedKernel => ModelVariant::CaldeiraLeggett,
            v => *v,
        }
    }
}

impl fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "original" | "orig" => Ok(ModelVariant::Original),
            "caldeira-leggett" | "cl" | "caldeiraleggett" => Ok(ModelVariant::CaldeiraLeggett),
            "weak-shifted" | "weak-shifted-kernel" | "weakshiftedkernel" => {
                Ok(ModelVariant::WeakShiftedKernel)
            }
            other => Err(Error::InvalidParameter(format!("unknown variant '{other}'"))),
        }
    }
}

/// Mass, bare frequency, cutoff, coupling and ħ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub mass: f64,
    pub omega: f64,
    pub omega_c: f64,
    pub gamma: f64,
    pub hbar: f64,
}

/// Scale factors that map normalized outputs back to raw units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Units {
    pub mass: f64,
    pub omega: f64,
    pub hbar: f64,
}

impl Units {
    pub const NATURAL: Units = Units { mass: 1.0, omega: 1.0, hbar: 1.0 };

    pub fn time(&self, t_normalized: f64) -> f64 {
        t_normalized / self.omega
    }
    pub fn to_normalized_time(&self, t: f64) -> f64 {
        t * self.omega
    }
    /// A carries mass/time².
    pub fn a(&self, a: f64) -> f64 {
        a * self.mass * self.omega * self.omega
    }
    /// B carries 1/time.
    pub fn b(&self, b: f64) -> f64 {
        b * self.omega
    }
    /// C carries action/time.
    pub fn c(&self, c: f64) -> f64 {
        c * self.hbar * self.omega
    }
    /// D carries momentum²/time.
    pub fn d(&self, d: f64) -> f64 {
        d * self.hbar * self.mass * self.omega * self.omega
    }
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::canonical()
    }
}

impl ModelParams {
    /// Validating constructor.
    pub fn new(mass: f64, omega: f64, omega_c: f64, gamma: f64, hbar: f64) -> Result<Self> {
        let p = ModelParams { mass, omega, omega_c, gamma, hbar };
        p.validate()?;
        Ok(p)
    }

    /// Ω_c = 40, γ = 1/128 in natural units.
    pub fn canonical() -> Self {
        ModelParams { mass: 1.0, omega: 1.0, omega_c: 40.0, gamma: 1.0 / 128.0, hbar: 1.0 }
    }

    /// Natural units with the given cutoff and coupling.
    pub fn natural(omega_c: f64, gamma: f64) -> Self {
        ModelParams { mass: 1.0, omega: 1.0, omega_c, gamma, hbar: 1.0 }
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("M", self.mass),
            ("Omega", self.omega),
            ("Omega_c", self.omega_c),
            ("hbar", self.hbar),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be non-negative, got {}",
                self.gamma
            )));
        }
        Ok(())
    }

    /// Rescale to M = Ω = ħ = 1. Ω_c and γ end up in units of Ω.
    pub fn normalize(&self) -> Result<ModelParams> {
        self.validate()?;
        Ok(ModelParams {
            mass: 1.0,
            omega: 1.0,
            omega_c: self.omega_c / self.omega,
            gamma: self.gamma / self.omega,
            hbar: 1.0,
        })
    }

    /// Scale factors of these raw parameters.
    pub fn units(&self) -> Units {
        Units { mass: self.mass, omega: self.omega, hbar: self.hbar }
    }

    /// Inverse of [`normalize`](Self::normalize).
    pub fn denormalize(&self, units: &Units) -> ModelParams {
        ModelParams {
            mass: self.mass * units.mass,
            omega: self.omega * units.omega,
            omega_c: self.omega_c * units.omega,
            gamma: self.gamma * units.omega,
            hbar: self.hbar * units.hbar,
        }
    }

    pub fn is_normalized(&self) -> bool {
        self.mass == 1.0 && self.omega == 1.0 && self.hbar == 1.0
    }

    /// Prefactor MγΩ_c² of the dissipation kernel.
    pub fn kernel_strength(&self) -> f64 {
        self.mass * self.gamma * self.omega_c * self.omega_c
    }

    /// Non-fatal remarks about the parameter point.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.omega_c < 10.0 * self.omega {
            out.push(format!(
                "Omega_c = {} is less than 10 Omega = {}; the cutoff is not well separated",
                self.omega_c,
                10.0 * self.omega
            ));
        }
        out
    }
}

/// Squared frequency entering the trigonometric factors and the cubic.
///
/// Only the counter-term model shifts it; the weak-shifted model keeps the
/// bare Ω² in its weak formulas.
pub fn effective_frequency_squared(params: &ModelParams, variant: ModelVariant) -> f64 {
    let w2 = params.omega * params.omega;
    match variant {
        ModelVariant::CaldeiraLeggett => w2 + 2.0 * params.gamma * params.omega_c,
        ModelVariant::Original | ModelVariant::WeakShiftedKernel => w2,
    }
}

/// Squared frequency of the system Hamiltonian (moment equations, Q, Ω_obs).
pub fn system_frequency_squared(params: &ModelParams, variant: ModelVariant) -> f64 {
    let w2 = params.omega * params.omega;
    match variant {
        ModelVariant::Original => w2,
        ModelVariant::CaldeiraLeggett | ModelVariant::WeakShiftedKernel => {
            w2 + 2.0 * params.gamma * params.omega_c
        }
    }
}

/// Values read from a `key=value` parameter file. Missing keys stay `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParamFile {
    pub mass: Option<f64>,
    pub omega: Option<f64>,
    pub omega_c: Option<f64>,
    pub gamma: Option<f64>,
    pub hbar: Option<f64>,
    pub variant: Option<ModelVariant>,
}

impl ParamFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = ParamFile::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Usage(format!("line {}: expected key=value, got '{raw}'", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            let num = || {
                value.parse::<f64>().map_err(|e| {
                    Error::Usage(format!("line {}: bad number for {key}: {e}", lineno + 1))
                })
            };
            match key {
                "M" | "mass" => out.mass = Some(num()?),
                "Omega" | "omega" => out.omega = Some(num()?),
                "Omega_c" | "omega_c" => out.omega_c = Some(num()?),
                "gamma" => out.gamma = Some(num()?),
                "hbar" => out.hbar = Some(num()?),
                "variant" => out.variant = Some(value.parse()?),
                other => {
                    return Err(Error::Usage(format!(
                        "line {}: unknown key '{other}'",
                        lineno + 1
                    )))
                }
            }
        }
        Ok(out)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Fill missing values from `base`.
    pub fn apply(&self, base: ModelParams) -> ModelParams {
        ModelParams {
            mass: self.mass.unwrap_or(base.mass),
            omega: self.omega.unwrap_or(base.omega),
            omega_c: self.omega_c.unwrap_or(base.omega_c),
            gamma: self.gamma.unwrap_or(base.gamma),
            hbar: self.hbar.unwrap_or(base.hbar),
        }
    }
}
