use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sgs_core::{subset_stats, Graph, Potential};
use tempfile::TempDir;

fn sgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sgs"))
        .args(args)
        .env_remove("SGS_THREADS")
        .output()
        .expect("binary runs")
}

fn gen(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let out = sgs(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn analyze(task: &str, file: &Path, extra: &[&str]) -> (i32, Value) {
    let mut args = vec!["analyze", task, file.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = sgs(&args);
    let code = out.status.code().unwrap();
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, report)
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Rebuilds the core graph from a graph file, independently of the CLI.
fn core_graph(file: &Value) -> (Graph, Potential, Vec<String>) {
    let vertices = file["vertices"].as_array().unwrap();
    let ids: Vec<String> = vertices.iter().map(|v| v["id"].as_str().unwrap().to_string()).collect();
    let index = |id: &Value| ids.iter().position(|x| x == id.as_str().unwrap()).unwrap();
    let edges: Vec<(usize, usize)> = file["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (index(&e["u"]), index(&e["v"])))
        .collect();
    let g = Graph::from_edges(ids.len(), edges).unwrap();
    let host = vertices
        .iter()
        .enumerate()
        .map(|(x, v)| v.get("host_degree").map_or(g.degree(x), |h| h.as_u64().unwrap() as usize))
        .collect();
    let g = g.with_host_degrees(host).unwrap();
    let q = Potential::new(vertices.iter().map(|v| v["q"].as_f64().unwrap()).collect());
    (g, q, ids)
}

fn witness(cert: &Value, ids: &[String]) -> Vec<usize> {
    cert["witness"]
        .as_array()
        .unwrap()
        .iter()
        .map(|w| ids.iter().position(|x| x == w.as_str().unwrap()).unwrap())
        .collect()
}

fn margin(report: &Value, id: &str) -> f64 {
    report["margins"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["id"] == id)
        .unwrap_or_else(|| panic!("no margin {id}"))["margin"]
        .as_f64()
        .unwrap()
}

#[test]
fn path_sparsity_uses_whole_path() {
    let dir = TempDir::new().unwrap();
    let p3 = gen(&dir, "p3.json", &["path", "--n", "3"]);
    let (code, r) = analyze("sparsity", &p3, &["--a-grid", "0"]);
    assert_eq!(code, 0);
    let cert = &r["results"]["profile"][0];
    assert!((cert["k"].as_f64().unwrap() - 4.0 / 3.0).abs() < 1e-15);
    assert_eq!(cert["witness"], serde_json::json!(["0", "1", "2"]));
}

#[test]
fn figure_family_file() {
    let dir = TempDir::new().unwrap();
    let f = read_json(&gen(&dir, "fig.json", &["tree", "--beta", "3,3,4", "--gamma", "0,2,4", "--depth", "2"]));
    let (g, _, _) = core_graph(&f);
    // 1 + 3 + 6 vertices; 9 tree edges, a triangle on S_1, a 4-regular S_2.
    assert_eq!((g.vertex_count(), g.edge_count()), (10, 24));
    let degrees: Vec<usize> = (0..10).map(|x| g.degree(x)).collect();
    assert_eq!(degrees, [3, 5, 5, 5, 5, 5, 5, 5, 5, 5]);
    // The outer sphere is missing its β_2 − 1 = 3 children.
    assert!((4..10).all(|x| g.host_degree(x) == 8));
}

#[test]
fn regular_tree_ball_verifies() {
    let dir = TempDir::new().unwrap();
    let ball = gen(&dir, "ball.json", &["ball", "--host", "regular-tree", "--d", "3", "--radius", "8"]);
    let (g, _, _) = core_graph(&read_json(&ball));
    assert_eq!((g.vertex_count(), g.edge_count()), (766, 765));
    assert_eq!((0..766).filter(|&x| g.deficit(x) == 2).count(), 384);
    let (code, r) = analyze("verify", &ball, &[]);
    assert_eq!(code, 0);
    let lambda0 = r["results"]["lambda_0"].as_f64().unwrap();
    let m = margin(&r, "cor13_forest[k=2]");
    assert!((m - (lambda0 - (3.0 - 2.0 * 2f64.sqrt()))).abs() < 1e-12);
    assert!(m >= 0.0);
}

#[test]
fn grid_interior_cheeger_methods_agree() {
    let dir = TempDir::new().unwrap();
    let grid = gen(&dir, "grid5.json", &["grid", "--m", "5"]);
    let (code, r) = analyze("cheeger", &grid, &["--region", "all-but-border", "--method", "both"]);
    assert_eq!(code, 0);
    assert_eq!(r["results"]["region_size"], 9);
    assert_eq!(margin(&r, "agreement"), 0.0);
    let cert = &r["results"]["certificate"];
    let (g, q, ids) = core_graph(&read_json(&grid));
    let w = witness(cert, &ids);
    assert!(w.iter().all(|&x| g.degree(x) == 4));
    let s = subset_stats(&g, &q, &w).unwrap();
    assert!((s.cheeger_ratio() - cert["alpha"].as_f64().unwrap()).abs() <= 1e-12);
}

#[test]
fn certificates_round_trip() {
    let dir = TempDir::new().unwrap();
    let file = gen(&dir, "anti.json", &["antitree", "--sizes", "1,2,3,2", "--q", "0.75"]);
    let (g, q, ids) = core_graph(&read_json(&file));
    let (code, r) = analyze("sparsity", &file, &["--a-grid", "0,0.3,1,4", "--method", "both"]);
    assert_eq!(code, 0);
    for cert in r["results"]["profile"].as_array().unwrap() {
        let s = subset_stats(&g, &q, &witness(cert, &ids)).unwrap();
        let a = cert["a"].as_f64().unwrap();
        assert!((s.sparseness_ratio(a) - cert["ratio"].as_f64().unwrap()).abs() <= 1e-12);
    }
    let amin = &r["results"]["amin_zero_k"];
    let s = subset_stats(&g, &q, &witness(amin, &ids)).unwrap();
    let value = 2.0 * s.induced_edges as f64 / (s.boundary as f64 + s.q_plus_sum);
    assert!((value - amin["value"].as_f64().unwrap()).abs() <= 1e-12);
    let (code, r) = analyze("cheeger", &file, &[]);
    assert_eq!(code, 0);
    let cert = &r["results"]["certificate"];
    let s = subset_stats(&g, &q, &witness(cert, &ids)).unwrap();
    assert!((s.cheeger_ratio() - cert["alpha"].as_f64().unwrap()).abs() <= 1e-12);
}

fn strip_clock(mut r: Value) -> Value {
    r.as_object_mut().unwrap().remove("wall_clock_s");
    r
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let file = gen(&dir, "c.json", &["cycle", "--n", "9", "--q", "0.5"]);
    let first = analyze("verify", &file, &["--seed", "4"]).1;
    let second = analyze("verify", &file, &["--seed", "4"]).1;
    assert_eq!(strip_clock(first.clone()), strip_clock(second));
    let out = Command::new(env!("CARGO_BIN_EXE_sgs"))
        .args(["analyze", "verify", file.to_str().unwrap(), "--seed", "4"])
        .env("SGS_THREADS", "1")
        .output()
        .unwrap();
    let single: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(strip_clock(first), strip_clock(single));
}

#[test]
fn generated_files_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let a = gen(&dir, "a.json", &["ball", "--host", "radial", "--beta", "3,4", "--gamma", "0,2", "--radius", "3"]);
    let b = gen(&dir, "b.json", &["ball", "--host", "radial", "--beta", "3,4", "--gamma", "0,2", "--radius", "3"]);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn spectrum_writes_csv() {
    let dir = TempDir::new().unwrap();
    let file = gen(&dir, "k4.json", &["complete", "--n", "4"]);
    let csv = dir.path().join("k4.csv");
    let (code, r) = analyze("spectrum", &file, &["--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let ev: Vec<f64> = r["results"]["eigenvalues"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for (got, want) in ev.iter().zip([0.0, 4.0, 4.0, 4.0]) {
        assert!((got - want).abs() < 1e-12);
    }
    let text = std::fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("index,eigenvalue,diag_eigenvalue,ratio\n"));
}

#[test]
fn negative_potential_skips_sparse_suites() {
    let dir = TempDir::new().unwrap();
    let file = gen(&dir, "neg.json", &["star", "--leaves", "4", "--q", "-0.5"]);
    let (code, r) = analyze("verify", &file, &[]);
    assert_eq!(code, 0);
    let skipped: Vec<&str> = r["skipped"].as_array().unwrap().iter().map(|s| s["suite"].as_str().unwrap()).collect();
    assert!(skipped.contains(&"sandwich_sparse") && skipped.contains(&"cor13"));
    let (code, _) = analyze("cheeger", &file, &[]);
    assert_eq!(code, 2);
}

#[test]
fn input_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"vertices\": [\n  {\"id\": \"a\", \"q\": }\n]}").unwrap();
    let out = sgs(&["analyze", "sparsity", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    std::fs::write(&bad, r#"{"vertices":[{"id":"a"},{"id":"a"}],"edges":[]}"#).unwrap();
    let out = sgs(&["analyze", "sparsity", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("vertices[1].id"));

    let path = gen(&dir, "p30.json", &["path", "--n", "30"]);
    assert_eq!(analyze("sparsity", &path, &["--method", "bruteforce"]).0, 2);
    assert_eq!(sgs(&["analyze", "sparsity", path.to_str().unwrap(), "--bogus"]).status.code(), Some(2));
    assert_eq!(sgs(&["gen", "tree", "--beta", "3", "--gamma", "1", "--depth", "2"]).status.code(), Some(2));
    assert_eq!(analyze("cheeger", &path, &["--region", "nope"]).0, 2);
}
