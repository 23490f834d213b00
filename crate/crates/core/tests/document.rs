use weakval_core::document::ScenarioDocument;
use weakval_core::scenarios::hardy::{build_hardy, HardyCoefficients};
use weakval_core::scenarios::spin::{build_spin, SpinBasis, SpinScenarioParams};
use weakval_core::suite::run_checks;

#[test]
fn built_in_scenarios_round_trip() {
    let scenarios = [
        build_hardy(&HardyCoefficients::standard()).unwrap(),
        build_spin(SpinScenarioParams::default(), SpinBasis::Computational).unwrap(),
        build_spin(SpinScenarioParams::plus_x(), SpinBasis::YBasis).unwrap(),
    ];
    for s in scenarios {
        let doc = ScenarioDocument::from_scenario(&s);
        let parsed = ScenarioDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(doc, parsed);
        let rebuilt = parsed.to_scenario().unwrap();
        assert_eq!(rebuilt.pre_state.amplitudes(), s.pre_state.amplitudes());
        for (name, o) in &s.observables {
            assert_eq!(rebuilt.observable(name).unwrap().matrix(), o.matrix());
        }
        let report = run_checks(&rebuilt);
        assert!(report.passed());
        assert!(report.max_residual() < 1e-10);
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let s = build_spin(SpinScenarioParams::default(), SpinBasis::Computational).unwrap();
    let mut v: serde_json::Value = serde_json::from_str(&ScenarioDocument::from_scenario(&s).to_json()).unwrap();
    v["extra"] = serde_json::json!(1);
    let err = ScenarioDocument::from_json(&v.to_string()).unwrap_err().to_string();
    assert!(err.contains("extra"), "{err}");
}
