//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use common::{i1_i2_quadrature, log_grid, rel, C64};
use hpz::coeffs::{short_time, CoefficientSet, EvalContext, Mode};
use hpz::dynamics::{omega_obs_with, propagate, stationary_covariance, stationary_q, GaussianState};
use hpz::green::{generic_green_structure, GreenFunctions};
use hpz::oracle::{Oracle, VolterraResponse, DEFAULT_STEP};
use hpz::params::{ModelParams, ModelVariant};
use hpz::roots::{gamma_critical, solve_characteristic_cubic, solve_unchecked};
use hpz::special::i1_i2;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

const OMEGA_C: f64 = 40.0;
const GAMMA: f64 = 1.0 / 128.0;

const TOL_GAMMA_BRACKET: f64 = 1e-8;
const TARGET_GAMMA_CR_CL: f64 = 5.01253;
const TOL_GAMMA_CR_CL: f64 = 1e-4;
const TOL_ORACLE_AB: f64 = 1e-6;
const TOL_ORACLE_CD: f64 = 1e-4;
const MIN_SHORT_TIME_ORDER: f64 = 2.7;
const T_ASYMPTOTIC: f64 = 300.0;
const TOL_ASYMPTOTIC_EXACT: f64 = 1e-6;
const TOL_ASYMPTOTIC_WEAK: f64 = 1e-8;
const WEAK_PROXIMITY_FACTOR: f64 = 100.0;
const JOLT_FACTOR: f64 = 1.5;
const TOL_RS_FLOOR: f64 = 1e-9;
const TOL_STATIONARY_Q: f64 = 1e-6;
const TOL_GREEN: f64 = 1e-6;
const TOL_SPECIAL: f64 = 1e-6;

struct Outcome {
    pass: bool,
    detail: String,
}

fn canonical() -> ModelParams {
    ModelParams::natural(OMEGA_C, GAMMA)
}

fn ctx() -> EvalContext {
    EvalContext::new(&canonical(), ModelVariant::Original).expect("canonical context")
}

fn c1_gamma_critical_original() -> Outcome {
    let p = ModelParams::natural(OMEGA_C, 0.0);
    let gcr = gamma_critical(&p, ModelVariant::Original).unwrap();
    let max_re = |g: f64| solve_unchecked(&p.with_gamma(g), ModelVariant::Original).unwrap().max_real_part();
    // scan for the sign change, then bisect
    let grid: Vec<f64> = (1..=400).map(|i| 0.03 * i as f64 / 400.0).collect();
    let k = grid.windows(2).position(|w| max_re(w[0]) < 0.0 && max_re(w[1]) >= 0.0);
    let Some(k) = k else {
        return Outcome { pass: false, detail: "no sign change of max Re z found".into() };
    };
    let (mut lo, mut hi) = (grid[k], grid[k + 1]);
    while hi - lo > TOL_GAMMA_BRACKET {
        let mid = 0.5 * (lo + hi);
        if max_re(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let pass = gcr == 0.0125 && lo <= 0.0125 && 0.0125 <= hi;
    Outcome { pass, detail: format!("closed form {gcr}, scan bracket [{lo:.10}, {hi:.10}]") }
}

fn c2_gamma_critical_cl() -> Outcome {
    let g = gamma_critical(&ModelParams::natural(OMEGA_C, 0.0), ModelVariant::CaldeiraLeggett).unwrap();
    let dev = (g - TARGET_GAMMA_CR_CL).abs();
    Outcome { pass: dev <= TOL_GAMMA_CR_CL, detail: format!("gamma_cr = {g:.8} (|dev| = {dev:.2e})") }
}

fn oracle_grid() -> Vec<f64> {
    log_grid(1e-3, 10.0, 50)
}

fn c3_oracle_ab() -> Outcome {
    let c = ctx();
    let o = Oracle::new(&canonical(), ModelVariant::Original, 10.0, DEFAULT_STEP).unwrap();
    let mut worst: (f64, f64, &str) = (0.0, 0.0, "");
    for t in oracle_grid() {
        let (a, b) = c.exact_ab(t).unwrap();
        let (oa, ob) = o.ab(t).unwrap();
        for (x, y, name) in [(a, oa, "A"), (b, ob, "B")] {
            let r = (x - y).abs() / x.abs().max(1.0);
            if r > worst.0 {
                worst = (r, t, name);
            }
        }
    }
    Outcome {
        pass: worst.0 <= TOL_ORACLE_AB,
        detail: format!("worst scaled deviation {:.2e} ({} at t = {:.4e})", worst.0, worst.2, worst.1),
    }
}

fn c4_oracle_cd() -> Outcome {
    let c = ctx();
    let o = Oracle::new(&canonical(), ModelVariant::Original, 10.0, DEFAULT_STEP).unwrap();
    let grid = oracle_grid();
    let mut worst: (f64, f64, &str) = (0.0, 0.0, "");
    for k in 0..12 {
        let t = grid[(k as f64 * 49.0 / 11.0).round() as usize];
        let (cc, dd) = c.exact_cd(t).unwrap();
        let (oc, od) = o.cd(t, hpz::defint::Bounds::Causal).unwrap();
        for (x, y, name) in [(cc, oc, "C"), (dd, od, "D")] {
            let r = (x - y).abs() / x.abs();
            if r > worst.0 {
                worst = (r, t, name);
            }
        }
    }
    Outcome {
        pass: worst.0 <= TOL_ORACLE_CD,
        detail: format!("worst relative deviation {:.2e} ({} at t = {:.4e})", worst.0, worst.2, worst.1),
    }
}

fn fitted_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn c5_short_time() -> Outcome {
    let c = ctx();
    let p = canonical();
    let ts: Vec<f64> = [1e-3, 5e-4, 2.5e-4].iter().map(|x| x / OMEGA_C).collect();
    let mut excess = [[0.0; 3]; 4];
    for (j, &t) in ts.iter().enumerate() {
        let e = c.exact(t).unwrap().values();
        let s = short_time(t, &p).unwrap().values();
        for k in 0..4 {
            excess[k][j] = (e[k] - s[k]).abs();
        }
    }
    let orders: Vec<f64> = excess.iter().map(|ex| fitted_slope(&ts, ex)).collect();
    let pass = orders.iter().all(|&o| o >= MIN_SHORT_TIME_ORDER);
    Outcome {
        pass,
        detail: format!(
            "excess orders A {:.2}, B {:.2}, C {:.2}, D {:.2}",
            orders[0], orders[1], orders[2], orders[3]
        ),
    }
}

fn rel_devs(x: &CoefficientSet, inf: &CoefficientSet) -> [f64; 4] {
    let (a, b) = (x.values(), inf.values());
    std::array::from_fn(|k| (a[k] - b[k]).abs() / b[k].abs())
}

fn c6_asymptotics() -> Outcome {
    let c = ctx();
    let exact = rel_devs(&c.exact(T_ASYMPTOTIC).unwrap(), &c.asymptotics(Mode::Exact).unwrap());
    let weak = rel_devs(&c.weak(T_ASYMPTOTIC).unwrap(), &c.asymptotics(Mode::Weak).unwrap());
    let pass = exact.iter().all(|&d| d <= TOL_ASYMPTOTIC_EXACT) && weak.iter().all(|&d| d <= TOL_ASYMPTOTIC_WEAK);
    Outcome {
        pass,
        detail: format!(
            "exact rel A {:.1e} B {:.1e} C {:.1e} D {:.1e}; weak rel A {:.1e} B {:.1e} C {:.1e} D {:.1e}",
            exact[0], exact[1], exact[2], exact[3], weak[0], weak[1], weak[2], weak[3]
        ),
    }
}

fn c7_weak_proximity() -> Outcome {
    let c = ctx();
    let ts: Vec<f64> = (1..=1000).map(|i| 0.02 * i as f64).collect();
    let weak = hpz::coeffs::weak_series(&ts, &canonical(), ModelVariant::Original).unwrap();
    let (mut sa, mut sb, mut da, mut db) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (&t, w) in ts.iter().zip(&weak) {
        let (a, b) = c.exact_ab(t).unwrap();
        sa = sa.max(a.abs());
        sb = sb.max(b.abs());
        da = da.max((a - w.a).abs());
        db = db.max((b - w.b).abs());
    }
    let pass = da * WEAK_PROXIMITY_FACTOR <= sa && db * WEAK_PROXIMITY_FACTOR <= sb;
    Outcome { pass, detail: format!("sup|A-A_w|/sup|A| = {:.2e}, sup|B-B_w|/sup|B| = {:.2e}", da / sa, db / sb) }
}

fn c8_jolt() -> Outcome {
    let c = ctx();
    let d_inf = c.asymptotics(Mode::Exact).unwrap().d;
    let mut dmax = f64::NEG_INFINITY;
    for i in 1..=300 {
        let t = 3.0 / OMEGA_C * i as f64 / 300.0;
        dmax = dmax.max(c.exact_cd(t).unwrap().1);
    }
    Outcome {
        pass: dmax > JOLT_FACTOR * d_inf.abs(),
        detail: format!("max D = {dmax:.6e}, |D(inf)| = {:.6e}, ratio {:.2}", d_inf.abs(), dmax / d_inf.abs()),
    }
}

fn c9_positivity_region() -> Outcome {
    let p = ModelParams::natural(OMEGA_C, 0.0);
    let gcr = gamma_critical(&p, ModelVariant::Original).unwrap();
    let q = |g: f64, m: Mode| stationary_q(&p.with_gamma(g), ModelVariant::Original, m).unwrap().q;
    let (mut qmin, mut qwmin) = (f64::INFINITY, f64::INFINITY);
    for i in 1..=50 {
        let g = gcr * i as f64 / 51.0;
        qmin = qmin.min(q(g, Mode::Exact));
        qwmin = qwmin.min(q(g, Mode::Weak));
    }
    let (q99, q50) = (q(0.99 * gcr, Mode::Exact), q(0.5 * gcr, Mode::Exact));
    Outcome {
        pass: qmin > 1.0 && qwmin > 1.0 && q99 > q50,
        detail: format!("min Q {qmin:.6}, min Q_w {qwmin:.6}, Q(0.99 gcr) {q99:.4} vs Q(0.5 gcr) {q50:.4}"),
    }
}

fn c10_rs_preservation() -> Outcome {
    let p = canonical();
    let run = propagate(&GaussianState::ground(&p), &p, ModelVariant::Original, Mode::Exact, 100.0, 0.02 / OMEGA_C)
        .unwrap();
    let floor = p.hbar * p.hbar / 4.0;
    let worst = run.iter().map(|s| s.rs - floor).fold(f64::INFINITY, f64::min);
    let inf = ctx().asymptotics(Mode::Exact).unwrap();
    let st = stationary_covariance(&inf, &p, ModelVariant::Original).unwrap();
    let q = stationary_q(&p, ModelVariant::Original, Mode::Exact).unwrap().q;
    let qdev = (st.rs_ratio(p.hbar) - q).abs() / q;
    Outcome {
        pass: worst >= -TOL_RS_FLOOR && qdev <= TOL_STATIONARY_Q,
        detail: format!("min(rs - hbar^2/4) = {worst:.3e}, stationary RS ratio vs Q rel {qdev:.1e}"),
    }
}

fn c11_model2_divergence() -> Outcome {
    let c = EvalContext::new(&ModelParams::natural(OMEGA_C, 5.2), ModelVariant::CaldeiraLeggett).unwrap();
    let mut changes = 0;
    let mut last = omega_obs_with(&c, 0.0).unwrap().omega2;
    for i in 1..=4000 {
        let w = omega_obs_with(&c, 20.0 * i as f64 / 4000.0).unwrap().omega2;
        if w.signum() != last.signum() {
            changes += 1;
        }
        last = w;
    }
    Outcome { pass: changes >= 2, detail: format!("{changes} sign changes of Omega_obs^2 on [0, 20]") }
}

fn c12_green_identity() -> Outcome {
    let p = canonical();
    let roots = solve_characteristic_cubic(&p, ModelVariant::Original).unwrap();
    let closed = GreenFunctions::new(&roots, &p);
    let vol = VolterraResponse::new(10.0, &p, ModelVariant::Original, DEFAULT_STEP).unwrap();
    let h = |x: f64| (vol.grid.value(x), vol.grid.slope(x), {
        use hpz::defint::Response;
        vol.hdd(x)
    });
    let mut rng = StdRng::seed_from_u64(12);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let t = rng.gen_range(0.1..10.0);
        let s = rng.gen_range(0.0..t);
        let tau = rng.gen_range(0.0..t);
        let (_, g2) = generic_green_structure(h, s, tau, t).unwrap();
        let want = closed.g2(s, tau, t).unwrap();
        worst = worst.max((g2 - want).abs() / want.abs().max(1.0));
    }
    Outcome { pass: worst <= TOL_GREEN, detail: format!("worst scaled deviation {worst:.2e} over 20 points") }
}

fn c13_special_functions() -> Outcome {
    let mut rng = StdRng::seed_from_u64(13);
    let (mut worst, mut large) = (0.0f64, 0);
    for i in 0..100 {
        let th = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
        let t = 10f64.powf(rng.gen_range(-2.0..1.3));
        // every third point is pushed past |rt| = 50
        let x = if i % 3 == 0 { rng.gen_range(50.5..400.0) } else { 10f64.powf(rng.gen_range(-2.0..1.7)) };
        let r = C64::from_polar(x / t, th);
        if x > 50.0 {
            large += 1;
        }
        let (a, b) = i1_i2(r, t).unwrap();
        let (qa, qb) = i1_i2_quadrature(r, t);
        worst = worst.max(rel(a, qa)).max(rel(b, qb));
    }
    Outcome {
        pass: worst <= TOL_SPECIAL && large > 0,
        detail: format!("worst relative deviation {worst:.2e}; {large} points with |rt| > 50"),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("critical coupling, original model", c1_gamma_critical_original),
        ("critical coupling, Caldeira-Leggett model", c2_gamma_critical_cl),
        ("oracle equivalence A, B", c3_oracle_ab),
        ("oracle equivalence C, D", c4_oracle_cd),
        ("short-time laws", c5_short_time),
        ("asymptotic values", c6_asymptotics),
        ("weak/exact proximity of A, B", c7_weak_proximity),
        ("jolt in D", c8_jolt),
        ("positivity region", c9_positivity_region),
        ("uncertainty preservation", c10_rs_preservation),
        ("periodic divergence, second model", c11_model2_divergence),
        ("Green function identity", c12_green_identity),
        ("special functions", c13_special_functions),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!(
                "panicked: {}",
                e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
            ),
        });
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} [{}] {name}: {} ({:.1}s)",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
