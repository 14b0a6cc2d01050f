use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hilbloc(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hilbloc"))
        .args(args)
        .env("HILBLOC_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited")
}

#[test]
fn partitions_of_four_have_one_singular_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = hilbloc(dir.path(), &["partitions", "--r", "3", "--n", "4", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json_of(&out);
    assert_eq!(v["schema"], "hilbloc.partitions");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    assert_eq!(rows.iter().filter(|r| r["extra_dim"] == 6).count(), 1);
}

#[test]
fn one_non_borel_class_at_six() {
    let dir = tempfile::tempdir().unwrap();
    let out = hilbloc(dir.path(), &["partitions", "--n", "6", "--classes", "--format", "json"]);
    let v = json_of(&out);
    let bad: Vec<&Value> = v["rows"].as_array().unwrap().iter().filter(|r| r["class"] == "non-borel").collect();
    assert_eq!(bad.len(), 1);
    assert_eq!(bad[0]["orbit"], 3);
    assert_eq!(bad[0]["extra_dim"], 6);
}

#[test]
fn plane_partitions_are_smooth() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&hilbloc(dir.path(), &["partitions", "--r", "2", "--n", "5", "--format", "json"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["extra_dim"] == 0));
}

#[test]
fn haiman_dumps() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&hilbloc(dir.path(), &["haiman", "(1)<(3,1)", "--eliminate", "--format", "json"]));
    assert_eq!(v["vars"].as_array().unwrap().len(), 21);
    let v = json_of(&hilbloc(dir.path(), &["haiman", "[[0,0,0]]", "--weights", "--format", "json"]));
    assert_eq!(v["vars"].as_array().unwrap().len(), 3);
    assert_eq!(v["equations"].as_array().unwrap().len(), 0);
    assert_eq!(v["extra_dim"], 0);
    let out = hilbloc(dir.path(), &["haiman", "pyr2", "--potential"]);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("18 variables, 46 terms"));
}

#[test]
fn single_box_series() {
    let dir = tempfile::tempdir().unwrap();
    let v = json_of(&hilbloc(dir.path(), &["hilbert", "[[0,0,0]]", "--format", "json", "--specialize", "2,3,1/2"]));
    assert_eq!(v["source"], "smooth");
    assert_eq!(v["series"]["schema"], "hilbloc.hilbert_series");
    // 1 / ((1-4)(1-9)(1-1/4))
    assert_eq!(v["specialization"]["value"], "1/18");
}

#[test]
fn plucker_routes_agree() {
    let dir = tempfile::tempdir().unwrap();
    let out = hilbloc(dir.path(), &["hilbert", "plucker", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["equal"], true);
}

#[test]
fn registry_and_groebner_agree_for_121() {
    let dir = tempfile::tempdir().unwrap();
    let out = hilbloc(dir.path(), &["hilbert", "lambda_121", "--compare", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["comparison"]["registry_vs_groebner"], true);
}

#[test]
fn ideal_file_series() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("i.json");
    std::fs::write(&f, r#"{"vars": ["x", "y"], "gens": ["x^2", "x*y"], "weights": [[1], [1]], "order": "lex"}"#).unwrap();
    let out = hilbloc(dir.path(), &["hilbert", "--ideal", f.to_str().unwrap(), "--specialize", "1/2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    // H = (1 + t - t^2) / (1 - t)... evaluated at t = 1/4: 1/(1-t) + t = 4/3 + 1/4
    assert!(String::from_utf8_lossy(&out.stdout).contains(": 19/12"));
}

#[test]
fn verifications_pass() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["verify", "--exp-identity"],
        vec!["verify", "--pyramid", "2"],
        vec!["verify", "--reciprocity"],
        vec!["verify", "--wz", "--r", "3", "--trunc", "4", "--backend", "groebner"],
        vec!["verify-wz", "--r", "2", "--trunc", "6", "--backend", "smooth"],
        vec!["verify", "--toric", "p3"],
    ] {
        let out = hilbloc(dir.path(), &args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let v = json_of(&out);
        assert_eq!(v["verdict"], true, "{args:?}");
        assert!(v["schema"].as_str().unwrap().starts_with("hilbloc."));
    }
}

#[test]
fn warm_cache_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify-wz", "--r", "3", "--trunc", "5", "--backend", "groebner", "--seed", "11"];
    let cold = hilbloc(dir.path(), &args);
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert!(entries >= 2, "chart and report entries");
    let warm = hilbloc(dir.path(), &args);
    assert_eq!(code(&cold), 0);
    assert_eq!(cold.stdout, warm.stdout);
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), entries);
}

#[test]
fn cache_dir_precedence() {
    let env_dir = tempfile::tempdir().unwrap();
    let cfg_dir = tempfile::tempdir().unwrap();
    let cfg = cfg_dir.path().join("config.json");
    let target = cfg_dir.path().join("cache");
    std::fs::write(&cfg, serde_json::json!({ "seed": 4, "cache_dir": target }).to_string()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_hilbloc"))
        .args(["--config", cfg.to_str().unwrap(), "verify", "--pyramid", "2"])
        .env_remove("HILBLOC_CACHE_DIR")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(json_of(&out)["seed"], 4);
    assert_eq!(std::fs::read_dir(&target).unwrap().count(), 1);
    // the environment wins over the config file
    let out = hilbloc(env_dir.path(), &["--config", cfg.to_str().unwrap(), "verify", "--exp-identity", "--trunc", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_dir(&target).unwrap().count(), 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let budget = hilbloc(dir.path(), &["--no-cache", "--budget", "1", "hilbert", "lambda_131", "--backend", "groebner"]);
    assert_eq!(code(&budget), 2, "{}", String::from_utf8_lossy(&budget.stderr));
    assert_eq!(code(&hilbloc(dir.path(), &["hilbert", "(1)<(3,x)"])), 3);
    assert_eq!(code(&hilbloc(dir.path(), &["hilbert", "lambda_121", "--backend", "smooth"])), 3);
    assert_eq!(code(&hilbloc(dir.path(), &["verify-wz", "--backend", "nope"])), 3);
    assert_eq!(code(&hilbloc(dir.path(), &["verify"])), 3);
    assert_eq!(code(&hilbloc(dir.path(), &["--help"])), 0);
    // a wrong expectation is a failed verification
    let f = dir.path().join("t.json");
    let mut data: Value = serde_json::json!({
        "points": [
            {"cotangent": [[1]], "bundles": {}},
            {"cotangent": [[-1]], "bundles": {}}
        ],
        "n_max": 3,
        "expect": ["1", "1", "1"]
    });
    std::fs::write(&f, data.to_string()).unwrap();
    assert_eq!(code(&hilbloc(dir.path(), &["verify", "--toric", f.to_str().unwrap()])), 0);
    data["expect"] = serde_json::json!(["1", "2", "1"]);
    std::fs::write(&f, data.to_string()).unwrap();
    assert_eq!(code(&hilbloc(dir.path(), &["verify", "--toric", f.to_str().unwrap()])), 1);
}
