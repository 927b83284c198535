use std::process::{Command, Output};

use serde_json::Value;

fn wordgeom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wordgeom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn gamma_of_standard_set() {
    let v = stdout_json(&wordgeom(&["gamma"]));
    assert_eq!(v["gamma"], "1/16");
    assert_eq!(v["extreme_set"].as_array().unwrap().len(), 4);
}

#[test]
fn gamma_abelianizes_heisenberg_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("hex.json");
    std::fs::write(
        &path,
        r#"{"name":"hex","elements":[[1,0,0],[-1,0,0],[0,1,0],[0,-1,0],[1,1,0],[-1,-1,1]]}"#,
    )
    .unwrap();
    let v = stdout_json(&wordgeom(&["gamma", "--genset", path.to_str().unwrap()]));
    assert_eq!(v["gamma"], "1/12");

    std::fs::write(&path, r#"{"elements":[[1,0],[-1,0],[0,1],[0,-1],[1,1],[-1,-1]]}"#).unwrap();
    let v = stdout_json(&wordgeom(&["gamma", "--genset", path.to_str().unwrap()]));
    assert_eq!(v["gamma"], "1/12");
}

#[test]
fn faces_of_integers_one_ten() {
    let v = stdout_json(&wordgeom(&["faces", "--integers", "1,10"]));
    let faces = v["faces"].as_array().unwrap();
    assert_eq!(faces.len(), 2);
    let gens: Vec<&Value> = faces.iter().map(|f| &f["generators"]).collect();
    assert_eq!(gens[0], &serde_json::json!([[10]]));
    assert_eq!(gens[1], &serde_json::json!([[-10]]));
    assert_eq!(v["total"], "20");
    assert!(v["order"].as_array().unwrap().is_empty());
}

#[test]
fn horoboundary_window_csv() {
    let out = wordgeom(&["horoboundary", "--integers", "1,10", "--window", "5"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("function,face,class,offset,point,value"));
    // 20 functions on 11 points
    assert_eq!(lines.count(), 20 * 11);
}

#[test]
fn ball_is_cached_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let run = |out: &str| {
        let out_path = dir.path().join(out);
        let o = wordgeom(&[
            "ball",
            "--radius",
            "10",
            "--cache-dir",
            cache.to_str().unwrap(),
            "--out",
            out_path.to_str().unwrap(),
        ]);
        assert!(o.status.success());
        (String::from_utf8(o.stderr).unwrap(), std::fs::read(out_path).unwrap())
    };
    let (first_log, first) = run("a.json");
    let (second_log, second) = run("b.json");
    assert!(first_log.contains("cache: built"));
    assert!(second_log.contains("cache: loaded"));
    assert_eq!(first, second);
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["radius"], 10);
}

#[test]
fn norm_and_central_word() {
    let v = stdout_json(&wordgeom(&["norm", "--radius", "8", "--element", "0,0,4", "--element", "1,1,0"]));
    assert_eq!(v[0]["norm"], 8);
    assert_eq!(v[1]["norm"], 2);
    let v = stdout_json(&wordgeom(&["central-word", "--z", "9,-9"]));
    assert_eq!(v["words"][0]["length"], 12);
    assert_eq!(v["words"][0]["word"].as_array().unwrap().len(), 12);
    assert_eq!(v["words"][1]["z"], -9);
}

#[test]
fn verify_norm_csv_header() {
    let out = wordgeom(&["verify-norm", "--radius", "8"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("z,norm,estimate,deviation\n"));
    assert!(text.contains("\n4,8,8.0,0.0\n"));
}

#[test]
fn report_chains_everything() {
    let v = stdout_json(&wordgeom(&["report", "--radius", "10", "--L-grid", "1/10,1"]));
    assert_eq!(v["gamma"]["gamma"], "1/16");
    assert_eq!(v["verify_norm"]["regimes"].as_array().unwrap().len(), 2);
    assert!(v["eh"]["observed"].is_u64());
}

#[test]
fn errors_are_json() {
    let out = wordgeom(&["gamma", "--genset", "/nonexistent/genset.json"]);
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");

    let out = wordgeom(&["norm", "--radius", "3", "--element", "0,0,100"]);
    assert!(!out.status.success());
    let line = String::from_utf8(out.stderr).unwrap();
    let err: Value = serde_json::from_str(line.lines().last().unwrap()).unwrap();
    assert_eq!(err["error"]["kind"], "metric");

    let out = wordgeom(&["faces"]);
    assert!(!out.status.success());
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "input");
}
