use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn data(name: &str) -> String {
    root().join("data").join(name).to_string_lossy().into_owned()
}

fn spectre(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spectre")).args(args).output().expect("binary runs")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn assert_schema(name: &str, v: &Value) {
    let text = std::fs::read_to_string(root().join("schemas").join(name)).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
}

#[test]
fn input_fixtures_match_their_schemas() {
    for (file, schema) in [
        ("two_point.json", "triple.schema.json"),
        ("two_point_real.json", "triple.schema.json"),
        ("minkowski_9.json", "lattice.schema.json"),
        ("chain3.json", "poset.schema.json"),
        ("cone3.json", "cone.schema.json"),
        ("power.json", "profile.schema.json"),
    ] {
        let v: Value = serde_json::from_str(&std::fs::read_to_string(data(file)).unwrap()).unwrap();
        assert_schema(schema, &v);
    }
}

#[test]
fn validate_two_point() {
    let o = spectre(&["validate", "--in", &data("two_point.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_schema("report.schema.json", &v);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn validate_real_triple_and_product() {
    let o = spectre(&["validate", "--in", &data("two_point_real.json")]);
    assert_eq!(o.status.code(), Some(0));
    let p = spectre(&["product", "--in", &data("two_point_real.json"), "--in2", &data("two_point_real.json")]);
    assert_eq!(p.status.code(), Some(0));
    let v = json_of(&p);
    assert_schema("product.schema.json", &v);
    assert_eq!(v["ko_dim"], 0);
    assert_schema("triple.schema.json", &v["triple"]);
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"hilbert_dim\": 2,\n  \"dirac\": [[ }").unwrap();
    let o = spectre(&["validate", "--in", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_schema("error.schema.json", &e);
    assert_eq!(e["error"], "schema");
    assert_eq!(e["line"], 2);
    assert!(e["column"].as_u64().unwrap() > 0);
}

#[test]
fn unknown_field_and_missing_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("x.json");
    std::fs::write(&p, r#"{"hilbert_dim": 1, "dirac": [[[0,0]]], "algebra_basis": [[[[1,0]]]], "colour": 3}"#).unwrap();
    assert_eq!(spectre(&["validate", "--in", p.to_str().unwrap()]).status.code(), Some(2));
    let o = spectre(&["validate", "--in", dir.path().join("none.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(e["error"], "io");
}

#[test]
fn ko_table_and_gauge_samples() {
    let o = spectre(&["ko", "--gauge-samples", "100", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_schema("ko.schema.json", &v);
    assert_eq!(v["table"].as_array().unwrap().len(), 8);
    assert!(v["gauge"]["max_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn seeded_runs_are_deterministic() {
    let a = spectre(&["ko", "--dim", "6", "--gauge-samples", "20", "--seed", "11"]);
    let b = spectre(&["ko", "--dim", "6", "--gauge-samples", "20", "--seed", "11"]);
    assert_eq!(a.stdout, b.stdout);
    let a = spectre(&["distance-lorentzian", "--lattice", &data("minkowski_9.json"), "--from", "0,4", "--to", "8,5"]);
    let b = spectre(&["distance-lorentzian", "--lattice", &data("minkowski_9.json"), "--from", "0,4", "--to", "8,5"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn riemannian_distance_pair_and_matrix() {
    let o = spectre(&["distance-riemannian", "--in", &data("two_point.json"), "--from", "0", "--to", "1"]);
    let v = json_of(&o);
    assert_schema("distance.schema.json", &v);
    assert!((v["distance"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    let o = spectre(&["distance-riemannian", "--in", &data("two_point.json"), "--format", "csv"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("c0,c1"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn lorentzian_distance_and_witness() {
    let o = spectre(&["distance-lorentzian", "--lattice", &data("minkowski_9.json"), "--from", "0,4", "--to", "8,4"]);
    let v = json_of(&o);
    assert_schema("lorentz_distance.schema.json", &v);
    assert!((v["dp"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((v["variational"].as_f64().unwrap() - 1.0).abs() < 0.05);
    let o = spectre(&["equality-witness", "--lattice", &data("minkowski_9.json"), "--from", "2,4", "--to", "6,4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_schema("witness.schema.json", &json_of(&o));
    let o = spectre(&[
        "equality-witness", "--lattice", &data("minkowski_9.json"), "--from", "2,4", "--to", "6,4", "--format", "csv",
    ]);
    assert_eq!(String::from_utf8(o.stdout).unwrap().lines().count(), 82);
}

#[test]
fn dixmier_outputs() {
    let o = spectre(&["dixmier", "--profile", &data("power.json")]);
    let v = json_of(&o);
    assert_schema("dixmier.schema.json", &v);
    assert!((v["estimate"]["value"].as_f64().unwrap() - 1.0).abs() < 0.03);
    let o = spectre(&["dixmier", "--power", "1", "--method", "all"]);
    assert_schema("dixmier.schema.json", &json_of(&o));
    let o = spectre(&["dixmier", "--power", "1", "--format", "csv", "--points", "10"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("N,sigma_N,sigma_over_logN,tau_N"));
    assert_eq!(spectre(&["dixmier"]).status.code(), Some(2));
}

#[test]
fn nc_integral_and_signature() {
    let o = spectre(&["nc-integral", "--constant", "2", "--cos", "1:1"]);
    let v = json_of(&o);
    assert_schema("nc_integral.schema.json", &v);
    assert!(v["rel_error"].as_f64().unwrap() < 0.05);
    let o = spectre(&["nc-integral", "--dim", "2", "--cutoff", "40"]);
    assert_schema("nc_integral.schema.json", &json_of(&o));
    let o = spectre(&["signature", "--exponent", "3"]);
    let v = json_of(&o);
    assert_schema("signature.schema.json", &v);
    assert!(v["lhs"]["value"].as_f64().unwrap().abs() < 0.05);
    assert_eq!(spectre(&["nc-integral", "--cos", "1,1:1"]).status.code(), Some(2));
}

#[test]
fn temporal_fixtures() {
    let o = spectre(&["temporal-validate", "--fixture", "cylinder"]);
    assert_eq!(o.status.code(), Some(0));
    assert_schema("temporal_report.schema.json", &json_of(&o));
    let o = spectre(&["temporal-validate", "--fixture", "fault"]);
    assert_eq!(o.status.code(), Some(1));
    assert_schema("temporal_report.schema.json", &json_of(&o));
}

#[test]
fn order_reconstruction() {
    let o = spectre(&["order-reconstruct", "--lattice", &data("minkowski_9.json")]);
    assert_eq!(o.status.code(), Some(0));
    let v = json_of(&o);
    assert_schema("order.schema.json", &v);
    assert_eq!(v["completely_separated"], true);
    let o = spectre(&["order-reconstruct", "--cone", &data("cone3.json"), "--poset", &data("chain3.json")]);
    assert_eq!(o.status.code(), Some(0));
    let o = spectre(&["order-reconstruct", "--cone", &data("cone3.json"), "--poset", &data("chain3.json"), "--format", "csv"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "x,y\n0,1\n0,2\n1,2\n");
}

#[test]
fn junk_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("junk.json");
    let o = spectre(&["junk", "--in", &data("two_point.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_schema("junk.schema.json", &v);
    assert_eq!(v["dimension"], 1);
}
