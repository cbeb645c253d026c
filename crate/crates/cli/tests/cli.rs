use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use heisenberg_hodge::model::{dyadic_grid, random_form, seeded, FormFieldJson};
use heisenberg_hodge::{FormField, Model, ModelConfig, MultiplierSpec};
use serde_json::Value;
use tempfile::TempDir;

const SMALL: &str =
    "[model]\nn = 1\nlambda_min_exp = -1\nlambda_max_exp = 1\nfock_max = 5\n[fan]\nlambda_min_exp = -1\nlambda_max_exp = 1\nm_max = 3\n";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_heisenberg-hodge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn form_file(dir: &Path) -> PathBuf {
    let model = Model::new(ModelConfig::new(1, dyadic_grid(-1, 1), 5, 1e-10).unwrap()).unwrap();
    let omega = random_form(&model, &mut seeded(3), 1, model.exact_grade_limit(&[1]));
    write(dir, "form.json", &serde_json::to_string(&omega.to_json(&model)).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_report_is_sorted_and_reproducible() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "small.ini", SMALL);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = run(&["--config", s(&cfg), "--out", s(out), "--seed", "7", "verify", "exterior"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let v: Value = serde_json::from_slice(&ta).unwrap();
    let rows = v.as_array().unwrap();
    assert!(!rows.is_empty());
    let ids: Vec<&str> = rows.iter().map(|r| r["check"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for r in rows {
        assert_eq!(r["suite"], "exterior");
        assert!(!r["anchor"].as_str().unwrap().is_empty());
        assert_eq!(r["pass"], true);
        assert!(r["runtime_ms"].is_null());
    }
}

#[test]
fn verify_csv_and_timings() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "small.ini", SMALL);
    let o = run(&["--config", s(&cfg), "--format", "csv", "--timings", "verify", "fan-eigen"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("suite,check,anchor,max_error,tolerance,pass,runtime_ms"));
    for l in lines {
        assert!(l.starts_with("fan-eigen,"), "{l}");
        assert!(!l.ends_with(','), "timing missing: {l}");
    }
}

#[test]
fn failing_checks_exit_one_and_still_write() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "strict.ini", &SMALL.replace("fock_max = 5\n", "fock_max = 5\ntol = 1e-300\n"));
    let out = dir.path().join("r.csv");
    let o = run(&["--config", s(&cfg), "--out", s(&out), "--format", "csv", "verify", "operators"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.lines().skip(1).any(|l| l.contains(",false,")));
}

#[test]
fn bad_input_exits_two() {
    let dir = TempDir::new().unwrap();
    let o = run(&["verify", "nonsense"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite 'nonsense'"));

    let cfg = write(dir.path(), "bad.ini", "[model]\nfock_max = 2\n[norms]\nj_max = 1\n");
    let o = run(&["--config", s(&cfg), "verify"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("M >= 4") && err.contains("[norms]"), "{err}");

    let o = run(&["mh-norm", "riesz_ratio", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fan_dump_has_one_row_per_point() {
    let dir = TempDir::new().unwrap();
    let cfg = write(dir.path(), "small.ini", SMALL);
    let o = run(&["--config", s(&cfg), "--format", "csv", "fan"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("n,lambda,m,xi,a,q_pp,q_pm,q_mp,q_mm,eig_0,eig_plus,eig_minus,"));
    // 6 lambdas, m = 0..=3
    assert_eq!(lines.len() - 1, 6 * 4);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    for rec in rdr.records() {
        let rec = rec.unwrap();
        let resid: f64 = rec[12].parse().unwrap();
        assert!(resid < 1e-10);
    }
}

#[test]
fn decompose_reports_all_parts() {
    let dir = TempDir::new().unwrap();
    let form = form_file(dir.path());
    let o = run(&["decompose", s(&form)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["pass"], true);
    let names: Vec<&str> = v["parts"].as_array().unwrap().iter().map(|p| p["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["exact", "coclosed10", "coclosed01", "v3plus", "v3minus"]);
    let total: f64 = v["parts"].as_array().unwrap().iter().map(|p| p["norm"].as_f64().unwrap().powi(2)).sum();
    let input = v["input_norm"].as_f64().unwrap();
    assert!((total.sqrt() - input).abs() < 1e-10 * input);

    let o = run(&["--format", "csv", "decompose", s(&form)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn multiplier_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let form = form_file(dir.path());
    let out = dir.path().join("heat.json");
    let o = run(&["--out", s(&out), "multiplier", "heat", "--t", "0.5", s(&form)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["multiplier"], "heat(t=0.5)");
    assert!(v["agreement"]["max_error"].as_f64().unwrap() < 1e-8);

    let model = Model::new(ModelConfig::new(1, dyadic_grid(-1, 1), 5, 1e-10).unwrap()).unwrap();
    let json: FormFieldJson = serde_json::from_value(v["form"].clone()).unwrap();
    let got = FormField::from_json(&model, &json).unwrap();
    let input: FormFieldJson = serde_json::from_str(&std::fs::read_to_string(&form).unwrap()).unwrap();
    let omega = FormField::from_json(&model, &input).unwrap();
    let want = heisenberg_hodge::multiplier::m_delta1_oracle(&model, &MultiplierSpec::heat(0.5).unwrap(), &omega).unwrap();
    assert!(got.sub(&model, &want).unwrap().norm(&model) < 1e-8 * want.norm(&model));
}

#[test]
fn mh_norm_named_and_sampled_agree() {
    let dir = TempDir::new().unwrap();
    let named = run(&["mh-norm", "heat", "--t", "1", "--tau", "1", "-J", "4", "--resolution", "32"]);
    assert!(named.status.success(), "{}", String::from_utf8_lossy(&named.stderr));
    let a: Value = serde_json::from_slice(&named.stdout).unwrap();
    assert_eq!(a["per_r_norms"].as_array().unwrap().len(), 9);
    assert!(a["stability_ratio"].as_f64().unwrap() < 1.05);

    let mut csv = String::from("s,re,im\n");
    let count = 20_000;
    for k in 0..=count {
        let x = 2f64.powf(-5.0 + 11.0 * k as f64 / count as f64);
        csv.push_str(&format!("{x},{},0\n", (-x).exp()));
    }
    let samples = write(dir.path(), "heat.csv", &csv);
    let o = run(&["mh-norm", "--samples", s(&samples), "--tau", "1", "-J", "4", "--resolution", "32"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let b: Value = serde_json::from_slice(&o.stdout).unwrap();
    let (x, y) = (a["sup"].as_f64().unwrap(), b["sup"].as_f64().unwrap());
    assert!((x / y - 1.0).abs() < 0.01, "{x} vs {y}");

    let o = run(&["mh-norm", "--samples", s(&samples), "-J", "8"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("must cover"));
}
