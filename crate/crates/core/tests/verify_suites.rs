use heisenberg_hodge::verify::{run_suite, run_suites, Suite, VerifyConfig};

#[test]
fn every_suite_passes_at_default_settings() {
    let cfg = VerifyConfig::default();
    for suite in Suite::ALL {
        let t = std::time::Instant::now();
        let checks = run_suite(suite, &cfg).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            println!(
                "{:<14} {:<48} {:>12.3e} {:>10.1e} {}",
                c.suite,
                c.check,
                c.max_error,
                c.tolerance,
                if c.passed { "ok" } else { "FAIL" }
            );
        }
        println!("{suite}: {:.2}s", t.elapsed().as_secs_f64());
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.check.clone()).collect();
        assert!(failed.is_empty(), "{suite}: {failed:?}");
    }
}

#[test]
fn reports_are_sorted_and_deterministic() {
    let cfg = VerifyConfig { n_values: vec![1], fan_m_max: 4, random_inputs: 1, ..VerifyConfig::default() };
    let suites = [Suite::Fan, Suite::Exterior, Suite::Fan];
    let a = run_suites(&suites, &cfg).unwrap();
    let b = run_suites(&suites, &cfg).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let keys: Vec<_> = a.iter().map(|c| (c.suite, c.check.clone())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(keys, sorted);
}
