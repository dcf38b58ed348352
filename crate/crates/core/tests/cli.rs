use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_calibrated-torsion"))
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_out(args: &[&str]) -> Value {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(name)
}

#[test]
fn verify_corrupted_form_exits_one() {
    let report = tmp("corrupt_report.json");
    let o = run(&["verify", "--suite", "g2", "--quiet", "--g2-form", &fixture("corrupt_phi.json"), "--json", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    let failing: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert!(failing.iter().any(|id| id.contains("epsilon")), "{failing:?}");
    assert!(failing.contains(&"g2.projectors.ranks"), "{failing:?}");
}

#[test]
fn verify_model_form_passes_and_lists_typos() {
    let report = tmp("g2_report.json");
    let o = run(&["verify", "--suite", "g2", "--quiet", "--g2-form", &fixture("phi0.json"), "--json", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(v["totals"]["fail"], 0);
    let typos: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["status"] == "documented-typo")
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    for id in ["so4.delta4", "g2t.blocks.A antisymmetric (1,2)", "g2t.trace_factor", "g2t.blocks.t57_label"] {
        assert!(typos.contains(&id), "{id} missing from {typos:?}");
    }
}

#[test]
fn verify_report_is_byte_deterministic() {
    let a = tmp("spin7_a.json");
    let b = tmp("spin7_b.json");
    for p in [&a, &b] {
        assert_eq!(run(&["verify", "--suite", "spin7", "--quiet", "--json", p.to_str().unwrap()]).status.code(), Some(0));
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn decompose_examples() {
    let v = json_out(&["decompose", &fixture("phi0.json")]);
    let nonzero = |v: &Value| -> Vec<String> {
        v["components"].as_object().unwrap().iter().filter(|(_, c)| c["norm_sq"] != "0").map(|(k, _)| k.clone()).collect()
    };
    assert_eq!(nonzero(&v), ["p1"]);
    assert_eq!(v["components"]["p1"]["norm_sq"], "7");
    assert_eq!(nonzero(&json_out(&["decompose", &fixture("gamma1.json")])), ["p14A"]);
    assert_eq!(nonzero(&json_out(&["decompose", "--structure", "spin7", &fixture("rho5.json")])), ["p48L"]);
    assert_eq!(run(&["decompose", "--structure", "spin7", &fixture("phi0.json")]).status.code(), Some(2));
    assert_eq!(run(&["decompose", &fixture("g2_tau0.json")]).status.code(), Some(2));
}

#[test]
fn torsion_examples_and_roundtrip() {
    let t = json_out(&["torsion", &fixture("g2_tau0.json")]);
    let entries = t["entries"].as_array().unwrap();
    for (i, row) in entries.iter().enumerate() {
        for (j, x) in row.as_array().unwrap().iter().enumerate() {
            let e = <calibrated_torsion::ParamExpr as calibrated_torsion::Coeff>::from_json(x).unwrap();
            let want = if i == j { "1/24" } else { "0" };
            assert_eq!(e.to_string(), want);
        }
    }

    let t_path = tmp("mixed_t.json");
    let o = run(&["torsion", &fixture("g2_mixed.json"), "--json", t_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let back = json_out(&["torsion-invert", t_path.to_str().unwrap()]);
    let orig: Value = serde_json::from_str(&std::fs::read_to_string(fixture("g2_mixed.json")).unwrap()).unwrap();
    for (k, v) in orig.as_object().unwrap() {
        assert_eq!(&back[k], v, "{k}");
    }
    let again = tmp("mixed_back.json");
    std::fs::write(&again, serde_json::to_string(&back).unwrap()).unwrap();
    let first = run(&["torsion", &fixture("g2_mixed.json")]).stdout;
    let second = run(&["torsion", again.to_str().unwrap()]).stdout;
    assert_eq!(first, second);

    let t = json_out(&["torsion", "--structure", "spin7", &fixture("spin7_b5.json")]);
    assert_eq!(t["rows"], 7);
    assert_eq!(t["cols"], 8);
    assert_eq!(run(&["torsion", &fixture("bad_schema.json")]).status.code(), Some(2));
}

#[test]
fn curvature_examples() {
    let h = json_out(&["curvature", "assoc", &fixture("g2_m4.json")]);
    assert_eq!(h["H"], serde_json::json!(["0", "0", "0", "-18", "0", "0", "0"]));
    assert_eq!(h["minimality"]["adapted_plane_minimal"], false);
    let h = json_out(&["curvature", "coassoc", &fixture("g2_c1.json")]);
    assert_eq!(h["H"][0], "24");
    let h = json_out(&["curvature", "cayley", &fixture("spin7_b5_d5.json")]);
    assert_eq!(h["H"], serde_json::json!(["0", "0", "0", "0", "-128", "0", "0", "0"]));
    assert_eq!(run(&["curvature", "cayley", &fixture("g2_m4.json")]).status.code(), Some(2));
    assert_eq!(run(&["curvature", "assoc", "--structure", "spin7", &fixture("g2_m4.json")]).status.code(), Some(2));
}

#[test]
fn obstruction_verdicts() {
    let v = json_out(&["obstruction", &fixture("g2_tau0.json")]);
    assert_eq!(v["verdict"], "OBSTRUCTED");
    let v = json_out(&["obstruction", &fixture("g2_zero.json")]);
    assert_eq!((v["verdict"].as_str(), v["residual"].as_str()), (Some("UNOBSTRUCTED"), Some("0")));
    let v = json_out(&["obstruction", &fixture("g2_balanced.json")]);
    assert_eq!(v["verdict"], "UNOBSTRUCTED");
    assert_eq!(run(&["obstruction", &fixture("bad_schema.json")]).status.code(), Some(2));
    assert_eq!(run(&["obstruction", "no/such/file.json"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "e8"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
