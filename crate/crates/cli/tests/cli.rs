use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sphvar::geometry::svg_vertices;
use sphvar::signal::grid::GridSpec;
use sphvar::sparse::{build_sparse_family, CellFunction, StoppingRule};

fn sphvar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sphvar")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn variation_of_alternating_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("path.csv");
    std::fs::write(&csv, "0,1,0,1\n").unwrap();
    let o = sphvar(&["variation", "--input", path_str(&csv), "--r", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "1.7320508");

    let json = dir.path().join("v.json");
    let o = sphvar(&["variation", "--values", "0,1,0,1", "--r", "inf", "--json", path_str(&json)]);
    assert_eq!(stdout(&o).trim(), "1.0000000");
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(v["r"], "inf");
    assert_eq!(v["variation"], 1.0);
}

#[test]
fn classify_on_lower_edge_is_strong() {
    let o = sphvar(&["classify", "--d", "3", "--r", "3", "--p", "3", "--q", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "StrongType");
}

#[test]
fn planar_small_r_has_no_region() {
    let o = sphvar(&["region", "--d", "2", "--r", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no bounded region"), "{}", stderr(&o));
}

#[test]
fn region_svg_matches_json() {
    let dir = tempfile::tempdir().unwrap();
    for (d, r, count) in [("4", "3", 5), ("2", "2.2", 4)] {
        let svg = dir.path().join("r.svg");
        let json = dir.path().join("r.json");
        let o = sphvar(&["region", "--d", d, "--r", r, "--svg", path_str(&svg), "--json", path_str(&json)]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
        let verts = v["vertices"].as_array().unwrap();
        assert_eq!(verts.len(), count);
        let drawn = svg_vertices(&std::fs::read_to_string(&svg).unwrap());
        assert_eq!(drawn.len(), count);
        for (label, ip, iq) in drawn {
            let vj = verts.iter().find(|w| w["label"] == label.as_str()).unwrap();
            assert!((vj["inv_p"].as_f64().unwrap() - ip).abs() < 1e-9);
            assert!((vj["inv_q"].as_f64().unwrap() - iq).abs() < 1e-9);
        }
    }
}

#[test]
fn counterexample_outputs_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let run = |tag: &str| {
        let csv = dir.path().join(format!("{tag}.csv"));
        let json = dir.path().join(format!("{tag}.json"));
        let o = sphvar(&[
            "counterexample", "--kind", "alternating-shells", "--d", "2", "--p", "4", "--q", "4", "--r", "3", "--jmin", "3", "--jmax", "6",
            "--csv", path_str(&csv), "--json", path_str(&json),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        (std::fs::read(&csv).unwrap(), std::fs::read(&json).unwrap())
    };
    let (c1, j1) = run("a");
    let (c2, j2) = run("b");
    assert_eq!(c1, c2);
    assert_eq!(j1, j2);
    let csv = String::from_utf8(c1).unwrap();
    assert_eq!(csv.lines().next(), Some("j,ratio"));
    assert_eq!(csv.lines().count(), 5);
    let v: Value = serde_json::from_slice(&j1).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn unresolvable_jmax_is_a_usage_error() {
    let o = sphvar(&["counterexample", "--kind", "disks", "--d", "2", "--p", "2", "--q", "2", "--r", "2", "--jmin", "3", "--jmax", "14"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sphvar(&["counterexample", "--kind", "disks", "--d", "2", "--p", "2", "--q", "2", "--r", "2", "--jmin", "3", "--jmax", "6", "--M", "65"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("resol"));
}

#[test]
fn configs_round_trip_through_commands() {
    let c = configs();
    for name in ["region", "classify", "variation", "counterexample"] {
        let file = c.join(format!("{name}.json"));
        let o = sphvar(&[name, "--config", path_str(&file)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stderr(&o));
    }
    let o = sphvar(&["operator", "--config", path_str(&c.join("operator.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"d": 4, "r": 3, "colour": "red"}"#).unwrap();
    let o = sphvar(&["region", "--config", path_str(&file)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("colour"));
}

#[test]
fn operator_slope_assertion() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(configs().join("operator.json")).unwrap();
    let mut v: Value = serde_json::from_str(&text).unwrap();
    v["max_slope"] = Value::from(-5.0);
    let file = dir.path().join("op.json");
    std::fs::write(&file, v.to_string()).unwrap();
    let o = sphvar(&["operator", "--config", path_str(&file)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn schema_lists_every_config_key() {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("config.schema.json")).unwrap()).unwrap();
    for name in ["region", "classify", "variation", "operator", "counterexample", "sparse-check"] {
        let config: Value = serde_json::from_str(&std::fs::read_to_string(configs().join(format!("{name}.json"))).unwrap()).unwrap();
        let props = schema["$defs"][name]["properties"].as_object().unwrap();
        for key in config.as_object().unwrap().keys() {
            assert!(props.contains_key(key), "{name}: {key} missing from schema");
        }
        for req in schema["$defs"][name]["required"].as_array().unwrap() {
            assert!(config.get(req.as_str().unwrap()).is_some(), "{name}: example lacks {req}");
        }
    }
}

#[test]
fn sparse_family_files() {
    let dir = tempfile::tempdir().unwrap();
    let grid = GridSpec::window(2, 32, 1.0).unwrap();
    let vals: Vec<f64> = (0..grid.len()).map(|i| if i % 41 == 0 { 5.0 } else { 0.2 }).collect();
    let f1 = CellFunction::samples(grid, vals).unwrap();
    let f2 = CellFunction::samples(grid, vec![1.0; grid.len()]).unwrap();
    let fam = build_sparse_family(&f1, &f2, 1.5, 3.0, StoppingRule::default()).unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, fam.to_json().unwrap()).unwrap();
    let o = sphvar(&["sparse-check", "--family", path_str(&good)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let mut bad = fam.clone();
    bad.cubes.push(bad.cubes[0].clone());
    bad.certificates.push(bad.certificates[0].clone());
    let badf = dir.path().join("bad.json");
    std::fs::write(&badf, bad.to_json().unwrap()).unwrap();
    let o = sphvar(&["sparse-check", "--family", path_str(&badf)]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["family"]["violation"]["kind"], "overlap");
}

#[test]
fn small_sparse_suite() {
    let o = sphvar(&["sparse-check", "--d", "2", "--r", "3", "--pairs", "2", "--random-pairs", "5", "--grids", "32,64", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["corpus"]["grids"], serde_json::json!([32, 64]));
}

#[test]
fn thread_variable() {
    let o = Command::new(env!("CARGO_BIN_EXE_sphvar"))
        .args(["classify", "--d", "3", "--r", "3", "--p", "3", "--q", "9"])
        .env("SPHVAR_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_sphvar"))
        .args(["classify", "--d", "3", "--r", "3", "--p", "3", "--q", "9"])
        .env("SPHVAR_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn missing_flags_are_usage_errors() {
    let o = sphvar(&["classify", "--d", "3"]);
    assert_eq!(o.status.code(), Some(2));
    let o = sphvar(&["bogus"]);
    assert_eq!(o.status.code(), Some(2));
}
