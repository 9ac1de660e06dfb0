//! Command-line front end. Every subcommand writes CSV with a `#` metadata header.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::coeffs::{CoefficientSet, EvalContext, Mode};
use crate::defint::Bounds;
use crate::dynamics::{consistency_report, omega_obs_with, propagate, stationary_q, GaussianState};
use crate::error::{Error, Result};
use crate::oracle::{compare, Oracle, Tolerance, DEFAULT_STEP};
use crate::params::{ModelParams, ModelVariant, ParamFile};
use crate::roots::{gamma_critical, solve_unchecked};
use crate::special::{eta, nu0};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "hpz", version, about = "HPZ master-equation coefficients, consistency checks and figure data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots of the characteristic cubic, optionally swept over gamma.
    Roots(Opts),
    /// Kernels eta(t) and nu(t).
    Kernel(Opts),
    /// A, B, C, D on a time grid.
    Coeffs(Opts),
    /// Closed forms against the Volterra/quadrature oracle.
    Validate(Opts),
    /// Q and Q_w over a gamma grid.
    QScan(Opts),
    /// Observable frequency squared over a time grid.
    OmegaObs(Opts),
    /// Gaussian moments propagated from the ground state.
    Propagate(Opts),
    /// Consistency verdict for one parameter point.
    Report(Opts),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    #[arg(long)]
    pub omega: Option<f64>,
    #[arg(long = "omega-c")]
    pub omega_c: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub hbar: Option<f64>,
    /// original | caldeira-leggett | weak-shifted
    #[arg(long)]
    pub variant: Option<String>,
    /// exact | weak
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long = "t-min")]
    pub t_min: Option<f64>,
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    /// Number of grid points (times or couplings).
    #[arg(short = 'n')]
    pub n: Option<usize>,
    /// Logarithmic time spacing.
    #[arg(long = "log-grid")]
    pub log_grid: bool,
    /// Integration step (Volterra step for validate, RK4 step for propagate).
    #[arg(long)]
    pub step: Option<f64>,
    /// Override all four validation tolerances.
    #[arg(long)]
    pub tol: Option<f64>,
    /// key=value parameter file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (stdout if absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// canonical, fig1 ... fig7, fig6-inset, beyond-critical
    #[arg(long)]
    pub preset: Option<String>,
    /// Upper end of a gamma sweep.
    #[arg(long = "gamma-max")]
    pub gamma_max: Option<f64>,
    /// Validate the triple integrals over the full square (diagnostic).
    #[arg(long = "full-square")]
    pub full_square: bool,
}

/// Parameter set and grid defaults bundled under a name.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub omega_c: f64,
    pub gamma: f64,
    pub variant: ModelVariant,
    pub t_max: f64,
    pub n: usize,
    pub gamma_max: Option<f64>,
}

pub const PRESETS: [Preset; 10] = [
    Preset { name: "canonical", omega_c: 40.0, gamma: 1.0 / 128.0, variant: ModelVariant::Original, t_max: 10.0, n: 200, gamma_max: None },
    Preset { name: "fig1", omega_c: 40.0, gamma: 1.0 / 128.0, variant: ModelVariant::Original, t_max: 10.0, n: 400, gamma_max: Some(0.02) },
    Preset { name: "fig2", omega_c: 40.0, gamma: 1.0 / 128.0, variant: ModelVariant::Original, t_max: 10.0, n: 200, gamma_max: None },
    Preset { name: "fig3", omega_c: 40.0, gamma: 1.0 / 128.0, variant: ModelVariant::Original, t_max: 10.0, n: 200, gamma_max: None },
    Preset { name: "fig4", omega_c: 40.0, gamma: 1.0 / 128.0, variant: ModelVariant::Original, t_max: 10.0, n: 50, gamma_max: None },
    Preset { name: "fig5", omega_c: 40.0, gamma: 5.0, variant: ModelVariant::CaldeiraLeggett, t_max: 10.0, n: 400, gamma_max: Some(8.0) },
    Preset { name: "fig6", omega_c: 40.0, gamma: 5.0, variant: ModelVariant::CaldeiraLeggett, t_max: 20.0, n: 2000, gamma_max: None },
    Preset { name: "fig6-inset", omega_c: 40.0, gamma: 5.2, variant: ModelVariant::CaldeiraLeggett, t_max: 20.0, n: 2000, gamma_max: None },
    Preset { name: "fig7", omega_c: 40.0, gamma: 5.0, variant: ModelVariant::CaldeiraLeggett, t_max: 10.0, n: 50, gamma_max: Some(8.0) },
    Preset { name: "beyond-critical", omega_c: 40.0, gamma: 1.0 / 40.0, variant: ModelVariant::Original, t_max: 10.0, n: 200, gamma_max: None },
];

pub fn preset(name: &str) -> Result<Preset> {
    PRESETS.iter().copied().find(|p| p.name == name).ok_or_else(|| {
        let names: Vec<_> = PRESETS.iter().map(|p| p.name).collect();
        Error::Usage(format!("unknown preset '{name}' (available: {})", names.join(", ")))
    })
}

/// Time grid description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub t_min: f64,
    pub t_max: f64,
    pub n: usize,
    pub log: bool,
}

impl TimeGrid {
    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Usage(format!("-n must be at least 2, got {}", self.n)));
        }
        if !(self.t_max > self.t_min && self.t_min >= 0.0) || !self.t_max.is_finite() {
            return Err(Error::Usage(format!("need t_max > t_min >= 0, got [{}, {}]", self.t_min, self.t_max)));
        }
        if self.log && self.t_min <= 0.0 {
            return Err(Error::Usage("a log grid needs t_min > 0".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                let f = i as f64 / last;
                if i == self.n - 1 {
                    self.t_max
                } else if self.log {
                    self.t_min * (self.t_max / self.t_min).powf(f)
                } else {
                    self.t_min + (self.t_max - self.t_min) * f
                }
            })
            .collect()
    }
}

/// Fully resolved run configuration: defaults, then preset, then config
/// file, then flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ModelParams,
    pub variant: ModelVariant,
    pub mode: Mode,
    pub grid: TimeGrid,
    pub step: Option<f64>,
    pub tol: Option<f64>,
    pub gamma_max: Option<f64>,
    pub preset: Option<String>,
    pub out: Option<PathBuf>,
    pub full_square: bool,
}

impl RunConfig {
    pub fn resolve(o: &Opts, default_grid: (f64, f64, usize, bool)) -> Result<RunConfig> {
        let mut params = ModelParams::canonical();
        let mut variant = ModelVariant::Original;
        let (mut t_min, mut t_max, mut n, mut log) = default_grid;
        let mut gamma_max = None;
        if let Some(name) = &o.preset {
            let p = preset(name)?;
            params.omega_c = p.omega_c;
            params.gamma = p.gamma;
            variant = p.variant;
            t_max = p.t_max;
            n = p.n;
            gamma_max = p.gamma_max;
        }
        if let Some(path) = &o.config {
            let file = ParamFile::load(path)?;
            params = file.apply(params);
            variant = file.variant.unwrap_or(variant);
        }
        let set = |v: &mut f64, x: Option<f64>| {
            if let Some(x) = x {
                *v = x;
            }
        };
        set(&mut params.omega, o.omega);
        set(&mut params.omega_c, o.omega_c);
        set(&mut params.gamma, o.gamma);
        set(&mut params.mass, o.mass);
        set(&mut params.hbar, o.hbar);
        if let Some(v) = &o.variant {
            variant = v.parse().map_err(|_| Error::Usage(format!("unknown variant '{v}'")))?;
        }
        let mode = match &o.mode {
            Some(m) => m.parse()?,
            None => Mode::Exact,
        };
        if o.log_grid {
            log = true;
        }
        set(&mut t_max, o.t_max);
        if let Some(x) = o.t_min {
            t_min = x;
        } else if log && t_min <= 0.0 {
            t_min = 1e-3 * t_max.min(1.0);
        }
        n = o.n.unwrap_or(n);
        if let Some(g) = o.gamma_max {
            gamma_max = Some(g);
        }
        params.validate().map_err(|e| Error::Usage(e.to_string()))?;
        for w in params.warnings() {
            log::warn!("{w}");
        }
        let grid = TimeGrid { t_min, t_max, n, log };
        for (name, v) in [("step", o.step), ("tol", o.tol), ("gamma-max", gamma_max)] {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::Usage(format!("--{name} must be positive, got {v}")));
                }
            }
        }
        Ok(RunConfig {
            params,
            variant,
            mode,
            grid,
            step: o.step,
            tol: o.tol,
            gamma_max,
            preset: o.preset.clone(),
            out: o.out.clone(),
            full_square: o.full_square,
        })
    }

    fn header(&self, command: &str, extra: &[String]) -> Vec<String> {
        let p = &self.params;
        let mut h = vec![
            format!("# hpz {VERSION} {command}"),
            format!(
                "# mass={} omega={} omega_c={} gamma={} hbar={} variant={} mode={}",
                p.mass,
                p.omega,
                p.omega_c,
                p.gamma,
                p.hbar,
                self.variant,
                match self.mode {
                    Mode::Exact => "exact",
                    Mode::Weak => "weak",
                }
            ),
        ];
        if let Some(name) = &self.preset {
            h.push(format!("# preset={name}"));
        }
        h.extend(extra.iter().map(|e| format!("# {e}")));
        h
    }
}

/// CSV table with metadata lines.
struct Table {
    header: Vec<String>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn write(&self, out: Option<&PathBuf>) -> Result<()> {
        let io_err = |e: io::Error| Error::Usage(format!("cannot write output: {e}"));
        let mut w: Box<dyn Write> = match out {
            Some(path) => Box::new(BufWriter::new(File::create(path).map_err(io_err)?)),
            None => Box::new(BufWriter::new(io::stdout().lock())),
        };
        for line in &self.header {
            writeln!(w, "{line}").map_err(io_err)?;
        }
        writeln!(w, "{}", self.columns.join(",")).map_err(io_err)?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(",")).map_err(io_err)?;
        }
        w.flush().map_err(io_err)
    }
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "nan".to_string(), num)
}

/// Parse and execute; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Usage(_) => 1,
                _ => 2,
            }
        }
    }
}

/// Runs one subcommand; `Ok(false)` signals a failed validation.
pub fn execute(cmd: &Command) -> Result<bool> {
    match cmd {
        Command::Roots(o) => roots_cmd(&RunConfig::resolve(o, (0.0, 10.0, 200, false))?),
        Command::Kernel(o) => kernel_cmd(&RunConfig::resolve(o, (0.0, 1.0, 200, false))?),
        Command::Coeffs(o) => coeffs_cmd(&RunConfig::resolve(o, (0.0, 10.0, 200, false))?),
        Command::Validate(o) => {
            let mut o = o.clone();
            o.log_grid = true;
            let mut cfg = RunConfig::resolve(&o, (1e-3, 10.0, 50, true))?;
            if o.n.is_none() {
                cfg.grid.n = 50;
            }
            validate_cmd(&cfg)
        }
        Command::QScan(o) => qscan_cmd(&RunConfig::resolve(o, (0.0, 10.0, 50, false))?),
        Command::OmegaObs(o) => omega_cmd(&RunConfig::resolve(o, (0.0, 20.0, 2000, false))?),
        Command::Propagate(o) => propagate_cmd(&RunConfig::resolve(o, (0.0, 100.0, 1000, false))?),
        Command::Report(o) => report_cmd(&RunConfig::resolve(o, (0.0, 10.0, 200, false))?),
    }
}

fn roots_cmd(cfg: &RunConfig) -> Result<bool> {
    let gammas: Vec<f64> = match cfg.gamma_max {
        Some(gmax) => {
            let n = cfg.grid.n.max(2);
            (0..n).map(|i| gmax * i as f64 / (n - 1) as f64).collect()
        }
        None => vec![cfg.params.gamma],
    };
    let gcr = gamma_critical(&cfg.params, cfg.variant)?;
    let rows: Result<Vec<Vec<String>>> = gammas
        .par_iter()
        .map(|&g| {
            let r = solve_unchecked(&cfg.params.with_gamma(g), cfg.variant.exact_counterpart())?;
            let mut row = vec![num(g)];
            for z in r.z {
                row.push(num(z.re));
                row.push(num(z.im));
            }
            row.push(num(r.max_real_part()));
            row.push(r.class.as_str().to_string());
            Ok(row)
        })
        .collect();
    Table {
        header: cfg.header("roots", &[format!("gamma_cr={gcr:e}")]),
        columns: vec!["gamma", "re_z1", "im_z1", "re_z2", "im_z2", "re_z3", "im_z3", "max_re", "class"],
        rows: rows?,
    }
    .write(cfg.out.as_ref())?;
    Ok(true)
}

fn kernel_cmd(cfg: &RunConfig) -> Result<bool> {
    cfg.grid.validate()?;
    let p = &cfg.params;
    let rows = cfg
        .grid
        .points()
        .into_iter()
        .map(|t| {
            let nu = if t == 0.0 { f64::INFINITY } else { nu0(t, p)? };
            Ok(vec![num(t), num(eta(t, p)), num(nu)])
        })
        .collect::<Result<Vec<_>>>()?;
    Table { header: cfg.header("kernel", &[]), columns: vec!["t", "eta", "nu"], rows }.write(cfg.out.as_ref())?;
    Ok(true)
}

fn coeff_row(s: &CoefficientSet) -> Vec<String> {
    vec![num(s.t), num(s.a), num(s.b), num(s.c), num(s.d), s.provenance.to_string()]
}

fn coeffs_cmd(cfg: &RunConfig) -> Result<bool> {
    cfg.grid.validate()?;
    let ctx = EvalContext::new(&cfg.params, cfg.variant)?;
    let mut extra = Vec::new();
    match ctx.asymptotics(cfg.mode) {
        Ok(inf) => extra.push(format!("asymptotic A={:e} B={:e} C={:e} D={:e}", inf.a, inf.b, inf.c, inf.d)),
        Err(e) => extra.push(format!("asymptotic values unavailable: {e}")),
    }
    let times = cfg.grid.points();
    let sets = match cfg.mode {
        Mode::Weak => crate::coeffs::weak_series(&times, &cfg.params, cfg.variant)?,
        Mode::Exact => times.par_iter().map(|&t| ctx.exact(t)).collect::<Result<Vec<_>>>()?,
    };
    Table {
        header: cfg.header("coeffs", &extra),
        columns: vec!["t", "A", "B", "C", "D", "provenance"],
        rows: sets.iter().map(coeff_row).collect(),
    }
    .write(cfg.out.as_ref())?;
    Ok(true)
}

/// Number of grid points on which the C, D oracle runs.
const CD_POINTS: usize = 12;

fn validate_cmd(cfg: &RunConfig) -> Result<bool> {
    cfg.grid.validate()?;
    let times = cfg.grid.points();
    let step = cfg.step.unwrap_or(DEFAULT_STEP / cfg.params.omega);
    let ctx = EvalContext::new(&cfg.params, cfg.variant)?;
    let oracle = Oracle::new(&cfg.params, cfg.variant, cfg.grid.t_max, step)?;
    let bounds = if cfg.full_square { Bounds::FullSquare } else { Bounds::Causal };
    let n = times.len();
    let cd_idx: Vec<usize> = (0..CD_POINTS.min(n))
        .map(|k| ((k * (n - 1)) as f64 / (CD_POINTS.min(n) - 1).max(1) as f64).round() as usize)
        .collect();

    let closed: Vec<CoefficientSet> = times.par_iter().map(|&t| ctx.exact(t)).collect::<Result<_>>()?;
    let oracle_ab: Vec<(f64, f64)> = times.par_iter().map(|&t| oracle.ab(t)).collect::<Result<_>>()?;
    let oracle_cd: Vec<(f64, f64)> = cd_idx.iter().map(|&i| oracle.cd(times[i], bounds)).collect::<Result<_>>()?;

    let mut tol = Tolerance::CANONICAL;
    if let Some(t) = cfg.tol {
        tol.tol = [t; 4];
    }
    let ab_only = |c: &CoefficientSet, a: f64, b: f64| CoefficientSet { a, b, c: 0.0, d: 0.0, ..*c };
    let ab_report = compare(
        &closed.iter().map(|c| ab_only(c, c.a, c.b)).collect::<Vec<_>>(),
        &closed.iter().zip(&oracle_ab).map(|(c, &(a, b))| ab_only(c, a, b)).collect::<Vec<_>>(),
        &tol,
    )?;
    let cd_closed: Vec<CoefficientSet> = cd_idx.iter().map(|&i| closed[i]).collect();
    let cd_oracle: Vec<CoefficientSet> =
        cd_closed.iter().zip(&oracle_cd).map(|(c, &(cc, dd))| CoefficientSet { c: cc, d: dd, ..*c }).collect();
    let cd_report = compare(&cd_closed, &cd_oracle, &tol)?;
    let devs = [ab_report.deviations[0], ab_report.deviations[1], cd_report.deviations[2], cd_report.deviations[3]];
    let pass = devs.iter().all(|d| d.pass);

    let mut extra = vec![format!("volterra_step={step:e} bounds={bounds:?}")];
    for (name, d) in ["A", "B", "C", "D"].iter().zip(&devs) {
        extra.push(format!(
            "{name}: max_abs={:e} max_rel={:e} worst_t={:e} {}",
            d.max_abs,
            d.max_rel,
            d.worst_t,
            if d.pass { "PASS" } else { "FAIL" }
        ));
    }
    extra.push(format!("overall: {}", if pass { "PASS" } else { "FAIL" }));
    for line in &extra[1..] {
        eprintln!("{line}");
    }
    let mut cd_iter = cd_idx.iter().zip(&oracle_cd).peekable();
    let rows = (0..n)
        .map(|i| {
            let c = &closed[i];
            let (oc, od) = match cd_iter.peek() {
                Some(&(&j, &v)) if j == i => {
                    cd_iter.next();
                    (Some(v.0), Some(v.1))
                }
                _ => (None, None),
            };
            vec![num(c.t), num(c.a), num(oracle_ab[i].0), num(c.b), num(oracle_ab[i].1), num(c.c), opt(oc), num(c.d), opt(od)]
        })
        .collect();
    Table {
        header: cfg.header("validate", &extra),
        columns: vec!["t", "A", "A_oracle", "B", "B_oracle", "C", "C_oracle", "D", "D_oracle"],
        rows,
    }
    .write(cfg.out.as_ref())?;
    Ok(pass)
}

fn qscan_cmd(cfg: &RunConfig) -> Result<bool> {
    let gcr = gamma_critical(&cfg.params, cfg.variant)?;
    let gmax = cfg.gamma_max.unwrap_or(gcr);
    let n = cfg.grid.n.max(1);
    let gammas: Vec<f64> = (1..=n).map(|i| gmax * i as f64 / (n + 1) as f64).collect();
    let rows: Vec<Vec<String>> = gammas
        .par_iter()
        .map(|&g| {
            let p = cfg.params.with_gamma(g);
            let q = stationary_q(&p, cfg.variant, Mode::Exact).ok().map(|q| q.q);
            let qw = stationary_q(&p, cfg.variant, Mode::Weak).ok().map(|q| q.q);
            vec![num(g), opt(q), opt(qw)]
        })
        .collect();
    Table { header: cfg.header("q-scan", &[format!("gamma_cr={gcr:e}")]), columns: vec!["gamma", "Q", "Q_w"], rows }
        .write(cfg.out.as_ref())?;
    Ok(true)
}

fn omega_cmd(cfg: &RunConfig) -> Result<bool> {
    cfg.grid.validate()?;
    let ctx = EvalContext::new(&cfg.params, cfg.variant)?;
    let rows = cfg
        .grid
        .points()
        .par_iter()
        .map(|&t| {
            let w = omega_obs_with(&ctx, t)?;
            Ok(vec![num(t), num(w.omega2), opt(w.omega()), (w.negative() as u8).to_string()])
        })
        .collect::<Result<Vec<_>>>()?;
    Table { header: cfg.header("omega-obs", &[]), columns: vec!["t", "omega_obs2", "omega_obs", "negative"], rows }
        .write(cfg.out.as_ref())?;
    Ok(true)
}

fn propagate_cmd(cfg: &RunConfig) -> Result<bool> {
    let p = &cfg.params;
    let dt = cfg.step.unwrap_or(0.02 / p.omega_c);
    let run = propagate(&GaussianState::ground(p), p, cfg.variant, cfg.mode, cfg.grid.t_max, dt)?;
    let stride = (run.len().saturating_sub(1) / cfg.grid.n.max(1)).max(1);
    let last = run.len() - 1;
    let rows = run
        .iter()
        .enumerate()
        .filter(|(i, _)| i % stride == 0 || *i == last)
        .map(|(_, s)| {
            let st = &s.state;
            vec![
                num(s.t),
                num(st.mean_q),
                num(st.mean_p),
                num(st.s_qq),
                num(st.s_qp),
                num(st.s_pp),
                num(s.rs),
                num(st.rs_ratio(p.hbar)),
            ]
        })
        .collect();
    Table {
        header: cfg.header("propagate", &[format!("dt={dt:e} initial=ground")]),
        columns: vec!["t", "mean_q", "mean_p", "s_qq", "s_qp", "s_pp", "rs", "rs_ratio"],
        rows,
    }
    .write(cfg.out.as_ref())?;
    Ok(true)
}

fn report_cmd(cfg: &RunConfig) -> Result<bool> {
    let r = consistency_report(&cfg.params, cfg.variant)?;
    let mut rows = vec![
        vec!["gamma".into(), num(r.gamma)],
        vec!["gamma_cr".into(), num(r.gamma_cr)],
        vec!["root_class".into(), r.root_class().as_str().into()],
    ];
    for (k, z) in r.roots.z.iter().enumerate() {
        rows.push(vec![format!("z{}", k + 1), format!("{:e}{:+e}i", z.re, z.im)]);
    }
    rows.extend([
        vec!["omega_obs2_inf".into(), num(r.omega_obs2_inf)],
        vec!["Q".into(), opt(r.q)],
        vec!["Q_w".into(), opt(r.q_w)],
        vec!["frequency_consistent".into(), r.frequency_consistent.to_string()],
        vec!["positivity_consistent".into(), r.positivity_consistent.to_string()],
        vec!["consistent".into(), r.consistent().to_string()],
    ]);
    for note in &r.notes {
        rows.push(vec!["note".into(), format!("\"{}\"", note.replace('"', "'"))]);
    }
    Table { header: cfg.header("report", &[]), columns: vec!["key", "value"], rows }.write(cfg.out.as_ref())?;
    Ok(true)
}
