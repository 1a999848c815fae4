use dg2_core::verify::{run_suite, PresetName};

#[test]
fn every_suite_passes() {
    let mut total = 0;
    for p in PresetName::ALL {
        let report = run_suite(p, None);
        let failures: Vec<_> = report.checks.iter().filter(|c| !c.passed).collect();
        assert!(report.passed, "{p}: {failures:?}");
        total += report.checks.len();
    }
    assert!(total >= 40, "{total} checks");
}

#[test]
fn preset_names() {
    assert_eq!("cy3".parse::<PresetName>().unwrap(), PresetName::Cy3);
    assert!("bogus".parse::<PresetName>().is_err());
}

#[test]
fn cy3_suite_mentions_dhym_roots() {
    let report = run_suite(PresetName::Cy3, None);
    assert!(report
        .checks
        .iter()
        .any(|c| c.name.starts_with("dHYM solutions") && c.passed));
}
