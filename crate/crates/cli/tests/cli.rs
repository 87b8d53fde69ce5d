use std::io::Write;
use std::process::Command;

use serde_json::{json, Value};
use tempfile::NamedTempFile;

use flowtri::catalog;
use flowtri::io::graph_to_json;
use flowtri::planar::PlanarEmbedding;
use flowtri::Dag;

struct Run {
    code: i32,
    stdout: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", self.stdout))
    }
}

fn file(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn with_embedding(g: &Dag, emb: &PlanarEmbedding) -> String {
    let mut v: Value = serde_json::from_str(&graph_to_json(g)).unwrap();
    v["embedding"] = serde_json::to_value(emb).unwrap();
    v.to_string()
}

fn flowtri(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_flowtri")).args(args).output().unwrap();
    Run { code: out.status.code().unwrap(), stdout: String::from_utf8(out.stdout).unwrap() }
}

fn on_graph(cmd: &str, text: &str, extra: &[&str]) -> Run {
    let f = file(text);
    let mut args = vec![cmd, f.path().to_str().unwrap()];
    args.extend_from_slice(extra);
    flowtri(&args)
}

fn check_ok(report: &Value, name: &str) -> bool {
    report["checks"].as_array().unwrap().iter().any(|c| c["name"] == name && c["ok"] == true)
}

#[test]
fn analyze_reports_ehrhart_data() {
    let r = on_graph("analyze", &graph_to_json(&catalog::d1()), &["--max-dilate", "3"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_eq!(v["data"]["dimension"], 2);
    assert_eq!(v["data"]["h_star"], json!([1, 1]));
    assert_eq!(v["data"]["codegree"], 2);
    assert_eq!(v["data"]["lattice_counts"], json!([1, 4, 9, 16]));
    assert!(v.get("timings_ms").is_none_or(Value::is_null));

    let v = on_graph("analyze", &graph_to_json(&catalog::parallel(3)), &[]).json();
    assert_eq!(v["data"]["h_star"], json!([1]));
    assert_eq!(v["data"]["dimension"], 2);
    assert_eq!(v["data"]["normalized_volume"], 1);
}

#[test]
fn malformed_input_exits_with_2() {
    assert_eq!(on_graph("analyze", "{ not json", &[]).code, 2);
    let cyclic = r#"{"inner_count": 1, "edges": [{"id": "a", "tail": 1, "head": "s"}]}"#;
    assert_eq!(on_graph("dkk", cyclic, &[]).code, 2);
    assert_eq!(flowtri(&["analyze", "/nonexistent/graph.json"]).code, 2);
    let d1 = graph_to_json(&catalog::d1());
    let dec = file(r#"[["a", "d"], ["a", "c"]]"#);
    assert_eq!(on_graph("equatorial", &d1, &["--decomposition", dec.path().to_str().unwrap()]).code, 2);
}

#[test]
fn equatorial_on_d2() {
    let r = on_graph("equatorial", &graph_to_json(&catalog::d2()), &[]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v = r.json();
    assert_eq!(v["data"]["h_vector"], json!([1, 4, 1]));
    assert_eq!(v["data"]["triangulation"].as_array().unwrap().len(), 6);
    for name in ["h_equals_hstar", "triangulation_valid", "facet_transversals"] {
        assert!(check_ok(&v, name), "{name}");
    }
}

#[test]
fn d3_equatorial_is_not_dkk() {
    let r = on_graph("equatorial", &graph_to_json(&catalog::d3()), &["--exhaustive-dkk"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json()["data"]["dkk_verdict"], "not a DKK triangulation");
}

#[test]
fn explicit_decomposition_is_used() {
    let d3 = graph_to_json(&catalog::d3());
    let dec = file(r#"[["a", "d"], ["b", "e"], ["c", "f"]]"#);
    let r = on_graph("decompose", &d3, &["--decomposition", dec.path().to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v = r.json();
    assert_eq!(v["data"]["source"], "file");
    assert_eq!(v["data"]["routes"], json!([["a", "d"], ["b", "e"], ["c", "f"]]));
}

#[test]
fn unbalanced_graph_is_not_gorenstein() {
    let r = on_graph("equatorial", &graph_to_json(&catalog::unbalanced()), &[]);
    assert_eq!(r.code, 1);
    assert!(r.json()["error"].as_str().unwrap().contains("not Gorenstein"));
}

#[test]
fn dkk_on_catalog_graphs() {
    for g in [catalog::d1(), catalog::d2(), catalog::d3(), catalog::spine()] {
        let r = on_graph("dkk", &graph_to_json(&g), &[]);
        assert_eq!(r.code, 0, "{}", r.stdout);
        let v = r.json();
        assert_eq!(v["data"]["framing_source"], "decomposition");
        assert!(check_ok(&v, "triangulation_valid"));
    }
    let v = on_graph("dkk", &with_embedding(&catalog::d1(), &catalog::d1_embedding()), &[]).json();
    assert_eq!(v["data"]["framing_source"], "planar");
}

#[test]
fn quotients() {
    let v = on_graph("quotient", &graph_to_json(&catalog::d1()), &[]).json();
    assert_eq!(v["data"]["dimension"], 1);
    assert_eq!(v["data"]["facets"].as_array().unwrap().len(), 2);
    let r = on_graph("quotient", &graph_to_json(&catalog::d3()), &[]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v = r.json();
    assert_eq!(v["data"]["dimension"], 2);
    assert_eq!(v["data"]["vertices"].as_object().unwrap().len(), 6);
    assert!(v["data"]["facets"].as_array().unwrap().iter().all(|f| f["rhs"] == 1));
    assert!(check_ok(&v, "reflexive"));
    let r = on_graph("quotient", &graph_to_json(&catalog::parallel(3)), &[]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json()["data"]["dimension"], 0);
}

#[test]
fn order_matches_flow_side() {
    for (g, emb, ext) in [(catalog::d1(), catalog::d1_embedding(), 2), (catalog::d2(), catalog::d2_embedding(), 6)] {
        let r = on_graph("order", &with_embedding(&g, &emb), &[]);
        assert_eq!(r.code, 0, "{}", r.stdout);
        let v = r.json();
        assert_eq!(v["data"]["linear_extensions"], ext);
        assert_eq!(v["data"]["planar_dkk_simplices"], ext);
        assert!(check_ok(&v, "canonical_vs_planar_dkk"));
    }
    assert_eq!(on_graph("order", &graph_to_json(&catalog::d1()), &[]).code, 2);

    let mut emb = catalog::d2_embedding();
    let rot = emb.rotations.values_mut().find(|r| r.len() > 2).unwrap();
    rot.swap(0, 1);
    assert_eq!(on_graph("order", &with_embedding(&catalog::d2(), &emb), &[]).code, 2);
}

#[test]
fn output_is_deterministic() {
    let f = file(&graph_to_json(&catalog::d3()));
    let path = f.path().to_str().unwrap();
    for cmd in ["analyze", "dkk", "equatorial", "quotient"] {
        let a = flowtri(&[cmd, path]);
        let b = flowtri(&[cmd, path]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
    let v = flowtri(&["--timings", "analyze", path]).json();
    assert!(v["timings_ms"].is_object());
}

#[test]
fn text_format() {
    let f = file(&graph_to_json(&catalog::d1()));
    let r = flowtri(&["--format", "text", "equatorial", f.path().to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(serde_json::from_str::<Value>(&r.stdout).is_err());
    assert!(r.stdout.contains("h_equals_hstar"), "{}", r.stdout);
}

#[test]
fn fuzz_sweep_passes() {
    let r = flowtri(&["fuzz", "--seed", "3", "--count", "20"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert_eq!(r.json()["data"]["graphs"], 40);
}
