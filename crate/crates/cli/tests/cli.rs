use std::path::PathBuf;
use std::process::{Command, Output};

fn graph(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../graphs");
    root.join(name).to_string_lossy().into_owned()
}

fn torushom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torushom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (serde_json::Value, bool) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let out = torushom(&all);
    (
        serde_json::from_slice(&out.stdout).expect("valid JSON"),
        out.status.success(),
    )
}

#[test]
fn patterns_of_k5_and_hard_core() {
    let (k5, ok) = json(&["patterns", "--graph", &graph("k5.graph")]);
    assert!(ok);
    assert_eq!(k5["eta"], "6/1");
    let rows = k5["patterns"].as_array().unwrap();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| r["delta"] == "2/3"));

    let (hc, _) = json(&["patterns", "--graph", &graph("hardcore_x1.graph")]);
    assert_eq!(hc["eta"], "2/1");
    assert_eq!(hc["patterns"].as_array().unwrap().len(), 2);
    assert!(hc["patterns"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["delta"] == "1/2"));
}

#[test]
fn empty_graph_is_an_error() {
    let out = torushom(&["patterns", "--graph", &graph("empty.graph")]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("no pattern exists"));
}

#[test]
fn malformed_graph_reports_file_and_line() {
    let dir = std::env::temp_dir().join(format!("torushom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.graph");
    std::fs::write(&path, "q 2\nedge 1 3\n").unwrap();
    let out = torushom(&["patterns", "--graph", path.to_str().unwrap()]);
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(!out.status.success());
    assert!(err.contains("bad.graph") && err.contains("line 2"), "{err}");
}

#[test]
fn lk_for_k5_and_hard_core() {
    let (k5, ok) = json(&["lk", "--graph", &graph("k5.graph"), "--m", "2", "--k", "2"]);
    assert!(ok);
    let class = &k5["classes"][0];
    assert_eq!(class["multiplicity"], 20);
    let l1 = &class["terms"][0];
    assert_eq!(
        l1,
        &serde_json::json!([
            {"base": "1/1", "coeff": "1/3", "npow": 0},
            {"base": "4/3", "coeff": "3/4", "npow": 0},
        ])
    );

    let (hc, _) = json(&[
        "lk",
        "--graph",
        &graph("hardcore_x1.graph"),
        "--m",
        "16",
        "--k",
        "2",
    ]);
    let terms = &hc["classes"][0]["terms"];
    assert_eq!(
        terms[0],
        serde_json::json!([{"base": "4/1", "coeff": "1/2", "npow": 0}])
    );
    assert_eq!(terms[1].as_array().unwrap().len(), 3);
}

#[test]
fn lk_single_pattern_selector() {
    let (out, ok) = json(&[
        "lk",
        "--graph",
        &graph("k3.graph"),
        "--k",
        "1",
        "--pattern",
        "2",
    ]);
    assert!(ok);
    assert_eq!(out["classes"].as_array().unwrap().len(), 1);
    assert_eq!(out["classes"][0]["index"], 2);
    let out = torushom(&["lk", "--graph", &graph("k3.graph"), "--pattern", "7"]);
    assert!(!out.status.success());
}

#[test]
fn verify_brute_and_kbounded() {
    let out = torushom(&[
        "verify",
        "--graph",
        &graph("k3.graph"),
        "--m",
        "2",
        "--n",
        "3",
        "--alpha",
        "1/8",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("tilde-identity: PASS (exact)"));

    let out = torushom(&[
        "brute",
        "--graph",
        &graph("k3.graph"),
        "--m",
        "2",
        "--n",
        "2",
    ]);
    assert_eq!(stdout(&out), "Z = 18\n");

    let out = torushom(&["kbounded", "--k", "1", "--n", "2", "--exact"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next(), Some("6"));
}

#[test]
fn brute_respects_the_cap() {
    let out = torushom(&[
        "brute",
        "--graph",
        &graph("k3.graph"),
        "--m",
        "2",
        "--n",
        "6",
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--unsafe-cap"));
}

#[test]
fn rejects_bad_alpha_and_odd_side() {
    let out = torushom(&[
        "verify",
        "--graph",
        &graph("k3.graph"),
        "--n",
        "2",
        "--alpha",
        "3/2",
    ]);
    assert!(!out.status.success());
    let out = torushom(&[
        "brute",
        "--graph",
        &graph("k3.graph"),
        "--m",
        "3",
        "--n",
        "1",
    ]);
    assert!(!out.status.success());
}

#[test]
fn qcolor_exit_status_tracks_checks() {
    let (q4, ok) = json(&["qcolor", "--q", "4", "--k", "2"]);
    assert!(ok, "{q4}");
    let (q5, ok) = json(&["qcolor", "--q", "5", "--k", "2"]);
    assert!(!ok);
    let failed: Vec<_> = q5["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["check"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].starts_with("c_2"));
}

#[test]
fn zformula_reports_evaluation() {
    let (out, ok) = json(&[
        "zformula",
        "--graph",
        &graph("k3.graph"),
        "--k",
        "3",
        "--n",
        "10",
    ]);
    assert!(ok);
    let ln_z: f64 = out["ln_Z_at_n"].as_str().unwrap().parse().unwrap();
    let expected = 6f64.ln() + 512.0 * 2f64.ln() + 1.0;
    assert!((ln_z - expected).abs() < 0.05);
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "lk",
        "--graph",
        &graph("k4.graph"),
        "--m",
        "4",
        "--k",
        "2",
        "--format",
        "json",
        "--threads",
        "2",
    ];
    let a = torushom(&args);
    let b = torushom(&args);
    assert_eq!(a.stdout, b.stdout);
}
