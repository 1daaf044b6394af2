use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn lpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpa"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let o = lpa(&all);
    (
        serde_json::from_slice(&o.stdout).expect("valid JSON"),
        o.status.code().unwrap(),
    )
}

#[test]
fn info_on_builtins() {
    let o = lpa(&["info", "builtin:E_star"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("Z^0 ; unit=() ; det=-1 ; SPI=yes"));

    let o = lpa(&["info", "builtin:F_star"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).lines().next(),
        Some("Z ; unit=(-1) ; det=n/a (3x2 presentation) ; SPI=no")
    );
}

#[test]
fn info_reads_files_and_rejects_malformed_ones() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("r3.json");
    fs::write(
        &good,
        r#"{"vertices": ["u"], "edges": [["a", "u", "u"], ["b", "u", "u"], ["c", "u", "u"]]}"#,
    )
    .unwrap();
    let o = lpa(&["info", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("Z/2 ; unit=(1) ; det=-2 ; SPI=yes"));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"vertices": ["u"], "edges": [["a", "u"]]}"#).unwrap();
    let o = lpa(&["info", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn json_schema() {
    let (v, code) = json(&["info", "builtin:R3"]);
    assert_eq!(code, 0);
    assert_eq!(v["command"], "info");
    assert_eq!(v["inputs"]["graph"], "builtin:R3");
    assert!(v["checks"].as_array().unwrap().is_empty());
    assert_eq!(v["outputs"]["k0"], "Z/2");
    assert_eq!(v["outputs"]["determinant"], "-2");
}

#[test]
fn spi_k0_det() {
    assert_eq!(stdout(&lpa(&["spi", "builtin:E_star_star"])).trim(), "SPI=yes");
    let k0 = stdout(&lpa(&["k0", "builtin:R3"]));
    assert_eq!(k0.lines().next(), Some("Z/2 ; unit=(1)"));
    assert_eq!(stdout(&lpa(&["det", "builtin:E_star_star"])).trim(), "det=1");
    assert_eq!(
        stdout(&lpa(&["det", "builtin:F_star"])).trim(),
        "det=n/a (3x2 presentation)"
    );
}

#[test]
fn double_splice_writes_the_expected_graph() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("d.json");
    let (v, code) = json(&[
        "move",
        "double-cuntz-splice",
        "builtin:R3",
        "--at",
        "u",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
    let written = lpa_core::parse_graph(&fs::read_to_string(&out).unwrap()).unwrap();
    let expected = lpa_core::moves::double_cuntz_splice(&lpa_core::builtin("R3").unwrap(), "u").unwrap();
    assert_eq!(written, expected);
    assert_eq!(written.vertex_count(), 5);
    assert_eq!(written.edge_count(), 15);
}

#[test]
fn splice_negates_the_determinant() {
    let (v, code) = json(&["move", "cuntz-splice", "builtin:R3", "--at", "u"]);
    assert_eq!(code, 0);
    assert_eq!(v["outputs"]["before"]["determinant"], "-2");
    assert_eq!(v["outputs"]["after"]["determinant"], "2");
}

#[test]
fn cohn_move_and_add_source() {
    let (v, code) = json(&["move", "cohn", "builtin:E_star", "--complete-at", "v2"]);
    assert_eq!(code, 0);
    let g = lpa_core::parse_graph(v["outputs"]["output"].as_str().unwrap()).unwrap();
    assert_eq!(g, lpa_core::builtin("F_star").unwrap());

    let (_, code) = json(&["move", "add-source", "builtin:E_star", "--at", "v1"]);
    assert_eq!(code, 0);
}

#[test]
fn move_errors_exit_2() {
    assert_eq!(
        lpa(&["move", "cuntz-splice", "builtin:R3", "--at", "nowhere"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(lpa(&["move", "cuntz-splice", "builtin:R3"]).status.code(), Some(2));
    assert_eq!(lpa(&["move", "cohn", "builtin:R3"]).status.code(), Some(2));
    assert_eq!(
        lpa(&["move", "cuntz-splice", "builtin:nothing", "--at", "u"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn classify_verdicts() {
    let cases = [
        ("builtin:E_star", "builtin:E_star_star", "AKPInstance"),
        ("builtin:E_star", "builtin:E_star", "Isomorphic"),
        ("builtin:E_star", "builtin:R3", "NotIsomorphicByInvariant"),
        ("builtin:F_star", "builtin:R3", "NotApplicable"),
    ];
    for (a, b, tag) in cases {
        let (v, code) = json(&["classify", a, b]);
        assert_eq!(code, 0, "{a} {b}");
        assert_eq!(v["outputs"]["verdict"], tag, "{a} {b}");
    }
    let text = stdout(&lpa(&["classify", "builtin:E_star", "builtin:E_star_star"]));
    assert!(text.contains("signs (-, +) ; open-question instance"));
}

#[test]
fn algebra_normal_forms() {
    let nf = |expr: &str| stdout(&lpa(&["algebra", "builtin:E_star", expr])).trim().to_string();
    assert_eq!(nf("(e1 + e2)* (e1 + e2)"), "v1 + v2");
    assert_eq!(nf("e1* e2"), "0");
    assert_eq!(nf("e1* e1"), "v1");
    assert_eq!(lpa(&["algebra", "builtin:E_star", "(e1 + e2"]).status.code(), Some(2));
    assert_eq!(lpa(&["algebra", "builtin:E_star", "q1"]).status.code(), Some(2));
}

#[test]
fn algebra_in_a_relative_cohn_algebra() {
    // v2 is not in V = {}, so e3 e3* + e4 e4* stays different from v2.
    let out = lpa(&["algebra", "builtin:E_star", "v2 - e3 e3* - e4 e4*", "--complete-at", ""]);
    assert_eq!(out.status.code(), Some(0));
    assert_ne!(stdout(&out).trim(), "0");
    let out = lpa(&[
        "algebra",
        "builtin:E_star",
        "v2 - e3 e3* - e4 e4*",
        "--complete-at",
        "v2",
    ]);
    assert_eq!(stdout(&out).trim(), "0");
}

#[test]
fn verify_paper_passes_and_catches_a_fault() {
    let o = lpa(&["verify-paper"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(", 0 failed"));

    assert_eq!(lpa(&["verify-paper", "--inject-fault"]).status.code(), Some(1));

    let (v, code) = json(&["verify-paper", "--filter", "lemma44"]);
    assert_eq!(code, 0);
    let blocks = v["outputs"]["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 1);
    assert_eq!(blocks[0]["block"], "lemma44");

    assert_eq!(lpa(&["verify-paper", "--filter", "nope"]).status.code(), Some(2));
}
