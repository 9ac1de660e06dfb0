use std::process::{Command, Output};

fn hpz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hpz")).args(args).output().expect("run hpz")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(hpz(&["--help"]).status.code(), Some(0));
    let v = hpz(&["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(stdout(&v).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(hpz(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(hpz(&["coeffs", "--gamma=-1"]).status.code(), Some(1));
    assert_eq!(hpz(&["coeffs", "--preset", "nope"]).status.code(), Some(1));
}

#[test]
fn numerical_errors_exit_two() {
    let o = hpz(&["coeffs", "--gamma", "0.0125", "-n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gamma_cr"));
}

#[test]
fn coeffs_table_is_deterministic() {
    let args = ["coeffs", "--preset", "canonical", "--t-max", "5", "-n", "11"];
    let (a, b) = (hpz(&args), hpz(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "t,A,B,C,D,provenance");
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 11);
    let last: Vec<f64> = rows[10].split(',').take(5).map(|x| x.parse().unwrap()).collect();
    assert_eq!(last[0], 5.0);
    assert!((last[1] + 0.62485343548).abs() < 1e-9);
}

#[test]
fn writes_to_file_and_reads_config() {
    let dir = std::env::temp_dir().join(format!("hpz-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("params.txt");
    std::fs::write(&cfg, "# canonical point\nOmega_c = 40\ngamma = 0.0078125\n").unwrap();
    let out = dir.join("report.csv");
    let o = hpz(&["report", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("consistent,true"), "{text}");
    assert!(text.contains("Q,1.05178063"), "{text}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn q_scan_stays_above_one() {
    let o = hpz(&["q-scan", "--preset", "fig4", "-n", "10"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let qi = header.iter().position(|h| *h == "Q").unwrap();
    let n = lines.map(|l| l.split(',').nth(qi).unwrap().parse::<f64>().unwrap()).inspect(|q| assert!(*q > 1.0)).count();
    assert_eq!(n, 10);
}

#[test]
fn flags_override_presets() {
    let text = stdout(&hpz(&["roots", "--preset", "fig6", "--gamma", "1"]));
    assert!(text.contains("gamma=1 "), "{text}");
    assert!(text.contains("variant=caldeira-leggett"), "{text}");
}
