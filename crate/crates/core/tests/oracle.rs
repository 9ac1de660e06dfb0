use hpz::coeffs::EvalContext;
use hpz::defint::Bounds;
use hpz::oracle::{compare, oracle_ab, Oracle, Tolerance};
use hpz::params::{ModelParams, ModelVariant};

fn canonical() -> ModelParams {
    ModelParams::natural(40.0, 1.0 / 128.0)
}

#[test]
fn volterra_oracle_converges_at_second_order() {
    let p = canonical();
    let c = EvalContext::new(&p, ModelVariant::Original).unwrap();
    let t = 3.7;
    let (a, _) = c.exact_ab(t).unwrap();
    let err = |h: f64| (oracle_ab(t, &p, ModelVariant::Original, h).unwrap().0 - a).abs();
    let ratio = err(4e-4) / err(2e-4);
    assert!((3.5..4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn oracle_agrees_for_counter_term_model() {
    let p = ModelParams::natural(40.0, 2.0);
    let c = EvalContext::new(&p, ModelVariant::CaldeiraLeggett).unwrap();
    let o = Oracle::new(&p, ModelVariant::CaldeiraLeggett, 4.0, 2e-5).unwrap();
    let ts = [0.05, 0.5, 1.5, 4.0];
    let closed: Vec<_> = ts.iter().map(|&t| c.exact(t).unwrap()).collect();
    let oracle: Vec<_> = ts.iter().map(|&t| o.coefficients(t, Bounds::Causal).unwrap()).collect();
    let report = compare(&closed, &oracle, &Tolerance::CANONICAL).unwrap();
    assert!(report.pass, "{report}");
}

#[test]
fn oversized_step_is_rejected() {
    assert!(Oracle::new(&canonical(), ModelVariant::Original, 1.0, 0.01).is_err());
}
