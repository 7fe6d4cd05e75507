use std::fs;

use wlab::cli::main_with;
use wlab::report::SCHEMA;

fn wlab(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("wlab").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn query_true_cites_its_source() {
    let (code, out, _) = wlab(&["query", "WBWT_2 <=W bar(C_N)"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("Prop. Weak Bolzano-Weierstraß theorem"), "{out}");
}

#[test]
fn query_false_and_open() {
    let (code, out, _) = wlab(&["query", "C_2N <=W bar(PC_2N)"]);
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("C_2N <=W bar(PC_2N): false"), "{out}");
    // nothing in the base relates these two
    let (code, out, _) = wlab(&["query", "SORT <=SW J"]);
    assert_eq!(code, 2, "{out}");
}

#[test]
fn query_predicates() {
    let (code, out, _) = wlab(&["query", "complete(bar(C_N))"]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = wlab(&["query", "not_complete(C_N)"]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = wlab(&["query", "complete(C_N)"]);
    assert_eq!(code, 1);
}

#[test]
fn errors_exit_3() {
    for args in [
        &["query", "foo <=W C_N"][..],
        &["query", "C_N <=Q C_N"],
        &["query", "C_N <=W (C_N"],
        &["run", "no_such_machine", "--input", ";0"],
        &["run", "identity", "--input", "1,2"],
        &["verify", "no-such-suite"],
        &["frobnicate"],
    ] {
        let (code, _, err) = wlab(args);
        assert_eq!(code, 3, "{args:?}");
        assert!(!err.is_empty(), "{args:?}");
    }
    let (code, _, _) = wlab(&["derive", "--kb", "/nonexistent/kb"]);
    assert_eq!(code, 3);
}

#[test]
fn run_shows_one_mind_change() {
    let (code, out, _) = wlab(&["run", "retraction_Nbar", "--input", "0,0,5;1"]);
    assert_eq!(code, 0);
    assert!(out.contains("commits:   [0, 4]"), "{out}");
    assert!(out.contains("resets:    1"), "{out}");
}

#[test]
fn derive_reports_consistency() {
    let (code, out, _) = wlab(&["derive"]);
    assert_eq!(code, 0);
    assert!(out.contains("no contradiction"), "{out}");
}

#[test]
fn inconsistent_kb_is_refuted() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.kb");
    fs::write(&p, "pos W C_N LPO ; \"x\"\nneg W C_N LPO ; \"y\"\n").unwrap();
    let (code, out, _) = wlab(&["derive", "--kb", p.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.contains("contradiction") && out.contains("[x]") && out.contains("[y]"), "{out}");
}

#[test]
fn facts_filter() {
    let (code, out, _) = wlab(&["facts", "--grep", "Weak Bolzano"]);
    assert_eq!(code, 0);
    assert!(out.lines().count() >= 2 && out.lines().all(|l| l.contains("Weak Bolzano")), "{out}");
}

#[test]
fn hasse_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("fig2.dot");
    let (code, _, _) = wlab(&["hasse", "--nodes", "fig2", "--out", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    let dot = fs::read_to_string(&p).unwrap();
    assert!(dot.starts_with("digraph hasse_W {"));
    assert!(dot.contains("style=dashed"));
    assert!(dot.contains("label=\"CN\"") && dot.contains("->"));
    let (_, inline, _) = wlab(&["hasse", "--nodes", "C_N,bar(C_N)"]);
    assert_eq!(inline.matches("->").count(), 1, "{inline}");
}

#[test]
fn matrix_diff_lists_wbwt_only() {
    let (code, out, _) = wlab(&["matrix", "--orders", "W,TW", "--diff"]);
    assert_eq!(code, 0);
    let diff = out.split("differing cells").nth(1).unwrap();
    for line in diff.lines().skip(1).take_while(|l| l.starts_with("  ")) {
        assert!(line.contains("WBWT2"), "{line}");
    }
    let (code, _, _) = wlab(&["matrix", "--orders", "W,TW,SW", "--diff"]);
    assert_eq!(code, 3);
}

#[test]
fn adversary_exit_codes() {
    let (code, out, _) = wlab(&["adversary", "cn_fmc_solver", "--budget", "3"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("forced resets:  4"), "{out}");
    let (code, out, _) = wlab(&["adversary", "cn_silent", "--budget", "2", "--steps", "500"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("never commits:  true"), "{out}");
}

fn validate(doc: &str) {
    let schema: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
    let v: serde_json::Value = serde_json::from_str(doc).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}");
}

#[test]
fn verify_json_is_valid_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let run = |seed: &str, name: &str| {
        let p = dir.path().join(name);
        let (code, out, _) = wlab(&["verify", "INF <=SW LPO'", "--seed", seed, "--json", p.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        fs::read_to_string(p).unwrap()
    };
    let a = run("5", "a.json");
    let b = run("5", "b.json");
    let c = run("6", "c.json");
    validate(&a);
    assert_eq!(a, b);
    assert_ne!(a, c);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["witnesses"][0]["summary"]["verdict"], "not refuted");
}

#[test]
fn verify_sabotage_refutes() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("h.json");
    let (code, out, _) = wlab(&[
        "verify",
        "wbwt_to_barCN",
        "--sabotage",
        "h",
        "--json",
        p.to_str().unwrap(),
    ]);
    assert_eq!(code, 1, "{out}");
    let doc = fs::read_to_string(p).unwrap();
    validate(&doc);
    assert!(doc.contains("\"verdict\": \"fail\""));
}

#[test]
fn suite_json_validates() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("adv.json");
    let (code, _, _) = wlab(&["verify", "adversary", "--json", p.to_str().unwrap()]);
    assert_eq!(code, 0);
    validate(&fs::read_to_string(p).unwrap());
}
