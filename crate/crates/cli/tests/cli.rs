use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use symcut_core::polyhedra::{is_outward_positive, is_simple, is_universal, Ambient, LabeledPolyhedron};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn symcut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcut"))
        .args(args)
        .env_remove("SYMCUT_TOLERANCES")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_matches_library_on_golden_corpus() {
    let mut files: Vec<PathBuf> = std::fs::read_dir(data("golden"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert_eq!(files.len(), 12);
    let mut seen = [[false; 2]; 3];
    for f in &files {
        let p: LabeledPolyhedron = serde_json::from_str(&std::fs::read_to_string(f).unwrap()).unwrap();
        let out = symcut(&["check", path(f)]);
        let v = json(&out);
        let simple = is_simple(&p).holds;
        assert_eq!(v["simple"], simple, "{f:?}");
        seen[0][simple as usize] = true;
        let mut all = simple;
        if p.root_datum.is_some() {
            let op = is_outward_positive(&p);
            assert_eq!(v["outward_positive"], op, "{f:?}");
            seen[1][op as usize] = true;
            all &= op;
        } else {
            assert!(v.get("outward_positive").is_none());
        }
        if p.ambient == Ambient::Chamber {
            let u = is_universal(&p).unwrap().holds;
            assert_eq!(v["universal"], u, "{f:?}");
            seen[2][u as usize] = true;
            all &= u;
        }
        assert_eq!(out.status.code(), Some(if all { 0 } else { 1 }), "{f:?}");
    }
    assert_eq!(seen, [[true; 2]; 3], "corpus must cover every predicate outcome");
}

#[test]
fn interval_check_output() {
    let out = symcut(&["check", path(&data("golden/01_interval_a1.json"))]);
    assert_eq!(stdout(&out), "{\"simple\":true,\"outward_positive\":true,\"universal\":true}\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn lagrangian_verify_passes() {
    let out = symcut(&["verify", "--suite", "lagrangian", "--n", "2", "--trials", "100", "--seed", "1"]);
    let v = json(&out);
    assert_eq!(v["suite"], "lagrangian_n2");
    assert_eq!(v["seed"], 1);
    assert_eq!(v["trials"], 100);
    assert_eq!(v["pass"], true);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_is_deterministic() {
    let args = ["verify", "--suite", "fiber-orbit", "--group", "u2", "--trials", "50", "--seed", "9"];
    let a = symcut(&args);
    let b = symcut(&args);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    let c = symcut(&seq);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn disjoint_cut_is_empty() {
    let out = symcut(&["cut", path(&data("cut_disjoint.json"))]);
    assert_eq!(stdout(&out), "{\"empty\":true}\n");
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn kirwan_cut_has_four_facets_and_reparses() {
    let out = symcut(&["cut", path(&data("cut_kirwan.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let p: LabeledPolyhedron = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(p.facets.len(), 4);
    // emitted JSON round-trips byte for byte
    assert_eq!(serde_json::to_string(&p).unwrap() + "\n", stdout(&out));
}

#[test]
fn malformed_json_reports_position() {
    let out = symcut(&["check", path(&data("malformed.json"))]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("malformed.json:4:56"), "{err}");
}

#[test]
fn unknown_keys_and_flags_are_rejected() {
    let out = symcut(&["check", path(&data("unknown_key.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("colour"));
    assert_eq!(symcut(&["check", "--bogus", "x"]).status.code(), Some(2));
    assert_eq!(symcut(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(symcut(&["check", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn plot_is_deterministic_and_handles_empty() {
    let f = data("golden/04_u3_a2.json");
    let a = symcut(&["plot", path(&f)]);
    let b = symcut(&["plot", path(&f)]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let svg = stdout(&a);
    assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    assert_eq!(svg.matches("class=\"normal\"").count(), 3);
    let empty = stdout(&symcut(&["plot", path(&data("plot_empty.json"))]));
    assert!(empty.contains("class=\"chamber\""));
    assert!(!empty.contains("class=\"polytope\""));
    let bare = stdout(&symcut(&["plot", "--show-normals", "false", path(&f)]));
    assert!(!bare.contains("class=\"normal\""));
}

fn attr(s: &str, name: &str) -> f64 {
    let key = format!("{name}=\"");
    let i = s.find(&key).unwrap() + key.len();
    s[i..i + s[i..].find('"').unwrap()].parse().unwrap()
}

#[test]
fn plot_arrow_lengths_follow_labels() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("labels.json");
    let mut p: Value = serde_json::from_str(&std::fs::read_to_string(data("golden/12_labels_full.json")).unwrap()).unwrap();
    p["root_datum"] = serde_json::json!({"type": "A2", "rank": 2});
    p.as_object_mut().unwrap().remove("dim");
    std::fs::write(&input, p.to_string()).unwrap();
    let out_path = dir.path().join("labels.svg");
    let out = symcut(&["plot", path(&input), "--output", path(&out_path)]);
    assert_eq!(out.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out_path).unwrap();
    let mut lengths = Vec::new();
    for g in svg.split("<g class=\"normal\"").skip(1) {
        let label = attr(g, "data-label");
        let (x1, y1, x2, y2) = (attr(g, "x1"), attr(g, "y1"), attr(g, "x2"), attr(g, "y2"));
        lengths.push(((x2 - x1).hypot(y2 - y1), label));
    }
    assert_eq!(lengths.len(), 3);
    let unit = lengths[1].0 / lengths[1].1;
    let ratios: Vec<f64> = lengths.iter().map(|(l, _)| l / unit).collect();
    for (r, want) in ratios.iter().zip([2.0, 1.0, 3.0]) {
        assert!((r - want).abs() < 1e-2, "{ratios:?}");
    }
}

#[test]
fn plot_rejects_other_ranks() {
    let out = symcut(&["plot", path(&data("golden/01_interval_a1.json"))]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tolerance_file_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let strict = dir.path().join("tol.json");
    std::fs::write(&strict, r#"{"lagrangian": 1e-30}"#).unwrap();
    let args = ["verify", "--suite", "lagrangian", "--trials", "10"];
    let run = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_symcut"))
            .args(args)
            .args(extra)
            .env("SYMCUT_TOLERANCES", &strict)
            .output()
            .unwrap()
    };
    let failing = run(&[]);
    assert_eq!(failing.status.code(), Some(1));
    assert_eq!(json(&failing)["pass"], false);
    assert_eq!(run(&["--tol", "lagrangian=1e-6"]).status.code(), Some(0));
    assert_eq!(run(&["--tol", "nonsense=1"]).status.code(), Some(2));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"lagrangain": 1e-6}"#).unwrap();
    assert_eq!(symcut(&["verify", "--suite", "lagrangian", "--tolerances", path(&bad)]).status.code(), Some(2));
}

#[test]
fn extend_and_fan() {
    let out = symcut(&["extend", path(&data("golden/08_hexagon_seed_a2.json"))]);
    assert_eq!(out.status.code(), Some(0));
    let e: LabeledPolyhedron = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(e.facets.len(), 6);
    let out = symcut(&["extend", path(&data("golden/02_u1_a2.json"))]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["kind"], "negative_normal");
    let fan = json(&symcut(&["fan", path(&data("golden/04_u3_a2.json"))]));
    assert_eq!(fan["rays"].as_array().unwrap().len(), 3);
}

#[test]
fn delzant_and_cones() {
    let v = json(&symcut(&["delzant", path(&data("delzant_cp2.json"))]));
    assert_eq!(v["sequence"]["exact_on_right"], true);
    let k = &v["sequence"]["kernel_basis"][0];
    assert!(k == &serde_json::json!(["1", "1", "1"]) || k == &serde_json::json!(["-1", "-1", "-1"]));
    assert_eq!(v["image"]["facets"].as_array().unwrap().len(), 3);
    let v = json(&symcut(&["vinberg-cone", path(&data("a2.json"))]));
    assert_eq!(v["hilbert_basis"].as_array().unwrap().len(), 4);
    let v = json(&symcut(&["extended-cone", path(&data("extended_a1.json"))]));
    assert!(v["slice"]["facets"].is_array());
    let out = symcut(&["is-delzant", path(&data("golden/04_u3_a2.json"))]);
    assert!(matches!(out.status.code(), Some(0 | 1)));
    let v = json(&symcut(&["strata", path(&data("strata.json"))]));
    assert_eq!(v["strata"].as_array().unwrap().len(), 4);
    assert!(v["classified"].is_number());
}
