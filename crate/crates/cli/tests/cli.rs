use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use trace_kit::generate::{generate, Kind};
use trace_kit::InputDocument;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn trace_kit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trace-kit"))
        .args(args)
        .env_remove("TRACE_KIT_BOUND")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("trace-kit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn circle_of_degree_two() {
    let f = fixture("circle-deg2.json");
    let out = trace_kit(&["lefschetz", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "{\"lefschetz\":-1}\n");
    let rt = json(&trace_kit(&["reidemeister", f.to_str().unwrap()]));
    // a single twisted class (coker(2 - 1) = 0) with coefficient -1
    let terms = rt["reidemeister_trace"].as_object().unwrap();
    assert_eq!(terms.len(), 1);
    assert_eq!(terms.values().next().unwrap(), -1);
    assert_eq!(rt["classification"]["kind"], "exact");
    assert_eq!(rt["transfer"], serde_json::json!({ "x": -1 }));
}

#[test]
fn separate_fixed_point_classes() {
    let f = fixture("two-circles.json");
    let rt = json(&trace_kit(&["reidemeister", f.to_str().unwrap()]));
    assert_eq!(rt["reidemeister_trace"], serde_json::json!({ "x:id": 1, "x:a^-1": 1 }));
    assert_eq!(rt["lefschetz"], 2);
    assert_eq!(rt["transfer"], serde_json::json!({ "x": 2 }));
    let w = fixture("wedge-swap.json");
    let rt = json(&trace_kit(&["reidemeister", w.to_str().unwrap()]));
    assert_eq!(rt["reidemeister_trace"], serde_json::json!({ "x:id": 1 }));
}

#[test]
fn matrix_and_group_commands() {
    let fam = fixture("family.json");
    let fam = fam.to_str().unwrap();
    assert_eq!(
        json(&trace_kit(&["matrix", "trace", fam]))["fiberwise_trace"],
        serde_json::json!({ "p": 5, "q": 0, "r": -7 })
    );
    assert_eq!(
        json(&trace_kit(&["matrix", "total", fam]))["total_trace"],
        serde_json::json!({ "p": 5, "r": -7 })
    );
    assert_eq!(
        json(&trace_kit(&["matrix", "transfer", fam]))["set_transfer"],
        serde_json::json!({ "q": 1, "r": 1 })
    );
    assert_eq!(json(&trace_kit(&["matrix", "verify", fam]))["pass"], true);
    let gpd = fixture("c2-groupoid.json");
    assert_eq!(
        json(&trace_kit(&["matrix", "trace", gpd.to_str().unwrap()]))["fiberwise_trace"],
        serde_json::json!({ "e": 6, "t": 2 })
    );
    let hs = json(&trace_kit(&["hattori-stallings", fixture("s3-matrix.json").to_str().unwrap()]));
    assert_eq!(
        hs["hattori_stallings"],
        serde_json::json!([{ "e": 3, "(12)": 3, "(123)": -1 }, null])
    );
    let rep = json(&trace_kit(&["rep-trace", fixture("circle-swap-rep.json").to_str().unwrap()]));
    assert_eq!(rep["lefschetz"], 0);
}

#[test]
fn missing_endo_is_an_input_error() {
    let f = temp_file(
        "noendo.json",
        r#"{"graph": {"objects": ["x"], "generators": [{"name": "a", "src": "x", "tgt": "x"}]}}"#,
    );
    let out = trace_kit(&["lefschetz", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("endo"));
    assert!(out.stdout.is_empty());
}

#[test]
fn input_errors_point_at_the_field() {
    let cases = [
        (
            r#"{"graph": {"objects": ["x"], "generators": [{"name": "a", "src": 3, "tgt": "x"}]}}"#,
            "graph.generators[0].src",
        ),
        (
            r#"{"graph": {"objects": ["x"], "generators": [{"name": "a", "src": "x", "tgt": "x"}]},
                "endo": {"object_map": {"x": "x"}, "generator_map": {"a": [["a", 2]]}}}"#,
            "endo.generator_map.a",
        ),
        (
            r#"{"graph": {"objects": ["x"], "generators": [{"name": "a", "src": "x", "tgt": "x"}]},
                "endo": {"object_map": {"x": "y"}, "generator_map": {"a": []}}}"#,
            "endo.object_map.x",
        ),
        (
            r#"{"graph": {"objects": ["x"], "generators": []}, "bogus": 1}"#,
            "bogus",
        ),
    ];
    for (i, (text, path)) in cases.iter().enumerate() {
        let f = temp_file(&format!("bad{i}.json"), text);
        let out = trace_kit(&["lefschetz", f.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "case {i}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(path), "case {i}: {err}");
    }
    let out = trace_kit(&["lefschetz", "/nonexistent/file.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_reports_are_deterministic() {
    let args = ["verify", "--suite", "all", "--instances", "20", "--seed", "42"];
    let a = trace_kit(&args);
    let b = trace_kit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(trace_kit(&seq).stdout, a.stdout);
    let report: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 12);
}

#[test]
fn bound_comes_from_the_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_trace-kit"))
        .args(["verify", "--suite", "circle"])
        .env("TRACE_KIT_BOUND", "3")
        .output()
        .unwrap();
    assert_eq!(json(&out)["bound"], 3);
    assert_eq!(json(&trace_kit(&["verify", "--suite", "circle"]))["bound"], 8);
}

#[test]
fn witnesses_rerun_a_single_check() {
    let doc = generate(Kind::FreeGroupoidEndo, 7, 0, &Kind::FreeGroupoidEndo.default_size());
    let f = temp_file("witness.json", &doc.to_json());
    for suite in ["lefschetz", "reidemeister", "transfer", "collapse"] {
        let out = json(&trace_kit(&["verify", "--suite", suite, f.to_str().unwrap()]));
        assert_eq!(out["pass"], true, "{suite}");
    }
    // a document for the wrong suite fails the check, not the parse
    let out = trace_kit(&["verify", "--suite", "matrix", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn outputs_round_trip() {
    for name in ["circle-deg2.json", "two-circles.json", "wedge-swap.json"] {
        let out = trace_kit(&["reidemeister", fixture(name).to_str().unwrap()]);
        let text = stdout(&out);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string(&v).unwrap() + "\n", text);
    }
    let report = stdout(&trace_kit(&["verify", "--suite", "chain", "--instances", "3", "--format", "pretty"]));
    let v: Value = serde_json::from_str(&report).unwrap();
    assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", report);
}

#[test]
fn generated_documents_round_trip_and_validate() {
    let kinds = [
        Kind::FreeGroupoidEndo,
        Kind::GpdRep,
        Kind::MatrixFamily,
        Kind::CellPair,
        Kind::FiniteGroupoidRep,
        Kind::GroupRingMatrix,
        Kind::ChainComplex,
        Kind::SetMap,
    ];
    for kind in kinds {
        for seed in 0..25 {
            let doc = generate(kind, seed, 0, &kind.default_size());
            let text = doc.to_json();
            let back = InputDocument::parse(&text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.to_json(), text);
        }
    }
}

#[test]
fn generated_endofunctors_satisfy_invariants() {
    let size = trace_kit::generate::Size {
        objects: 4,
        generators: 6,
        word_length: 5,
        rank: 0,
    };
    for seed in 0..1000 {
        let doc = generate(Kind::FreeGroupoidEndo, seed, 0, &size);
        let g = doc.graph().unwrap();
        let phi = doc.endo(&g).unwrap();
        assert!(g.num_objects() <= 4 && g.num_generators() <= 6);
        for (i, e) in g.generators().iter().enumerate() {
            let w = phi.image_generator(i);
            assert!(w.len() <= 5 && w.is_reduced());
            assert_eq!((w.src(), w.tgt()), (phi.image_object(e.src), phi.image_object(e.tgt)));
        }
    }
}

#[test]
fn zero_size_gives_an_empty_graph() {
    let out = json(&trace_kit(&[
        "generate",
        "--kind",
        "free-groupoid-endo",
        "--max-objects",
        "0",
        "--max-generators",
        "0",
    ]));
    assert_eq!(out["graph"]["objects"], serde_json::json!([]));
    let f = temp_file("empty.json", &out.to_string());
    assert_eq!(json(&trace_kit(&["lefschetz", f.to_str().unwrap()]))["lefschetz"], 0);
}

#[test]
fn several_files_give_an_array() {
    let a = fixture("circle-deg2.json");
    let b = fixture("wedge-swap.json");
    let out = json(&trace_kit(&["lefschetz", a.to_str().unwrap(), b.to_str().unwrap()]));
    assert_eq!(out, serde_json::json!([{ "lefschetz": -1 }, { "lefschetz": 1 }]));
}
