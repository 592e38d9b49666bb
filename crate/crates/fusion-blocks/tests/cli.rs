//! End-to-end tests of the command-line surface: file round trips, pinned
//! rank values, exit codes, and the JSON report schema.

use std::io::Write;

use fusion_blocks::cli::run;

fn cli(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["fusion-blocks".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    let mut buf = Vec::new();
    let code = run(argv, &mut buf);
    (code, String::from_utf8(buf).unwrap())
}

#[test]
fn export_then_verify_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["trivial", "ising", "lee_yang", "su2_4", "su2_5", "su2_2*lee_yang"] {
        let path = dir.path().join(format!("{}.json", name.replace('*', "_x_")));
        let path = path.to_str().unwrap();
        let (code, out) = cli(&["catalog", "export", name, "--out", path]);
        assert_eq!(code, 0, "export {}: {}", name, out);
        let (code, out) = cli(&["verify-ring", "--ring", path]);
        assert_eq!(code, 0, "verify {}: {}", name, out);
        assert!(out.contains("ok"));
    }
}

#[test]
fn rank_pinned_values() {
    let dir = tempfile::tempdir().unwrap();
    let ising = dir.path().join("ising.json");
    let ising = ising.to_str().unwrap();
    cli(&["catalog", "export", "ising", "--out", ising]);

    let (code, out) = cli(&["rank", "--ring", ising, "--genus", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "10");

    let (code, out) = cli(&["rank", "--ring", ising, "--genus", "1", "--legs", "1"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "3");

    // a graph file: the theta graph with no legs
    let graph = dir.path().join("theta.json");
    std::fs::write(
        &graph,
        r#"{"vertices":[{"genus":0},{"genus":0}],"edges":[[0,1],[0,1],[0,1]],"legs":[]}"#,
    )
    .unwrap();
    let (code, out) = cli(&["rank", "--ring", ising, "--graph", graph.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "10");
}

#[test]
fn unknown_label_lists_valid_ones() {
    let dir = tempfile::tempdir().unwrap();
    let ising = dir.path().join("ising.json");
    let ising = ising.to_str().unwrap();
    cli(&["catalog", "export", "ising", "--out", ising]);
    let (code, out) = cli(&["rank", "--ring", ising, "--genus", "1", "--legs", "sigmaa"]);
    assert_eq!(code, 2);
    assert!(out.contains("sigma"), "{}", out);
    assert!(out.contains("eps"), "{}", out);
}

#[test]
fn broken_ring_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    // identity axiom broken at (0, 1, 1)
    std::fs::write(
        &path,
        r#"{"labels":["1","x"],"dual":[0,1],"tensor":[[[1,0],[0,0]],[[0,1],[1,0]]]}"#,
    )
    .unwrap();
    let (code, out) = cli(&["verify-ring", "--ring", path.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("identity"), "{}", out);

    // malformed JSON reports line/column
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"labels\": [").unwrap();
    let (code, out) = cli(&["verify-ring", "--ring", bad.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("line"), "{}", out);
}

#[test]
fn decomp_check_passes_for_catalog_rings() {
    let dir = tempfile::tempdir().unwrap();
    let su2 = dir.path().join("su2_3.json");
    let su2 = su2.to_str().unwrap();
    cli(&["catalog", "export", "su2_3", "--out", su2]);
    let (code, out) = cli(&["decomp-check", "--ring", su2, "--genus", "1", "--legs", "0"]);
    assert_eq!(code, 0, "{}", out);
    assert!(out.contains("rank 4"), "{}", out);
}

#[test]
fn series_subcommands() {
    let (code, out) = cli(&["series", "eisenstein", "--k", "2", "--order", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("q^0 z^0 u^4 : 1/720"), "{}", out);

    let (code, out) = cli(&["series", "wp", "--m", "2", "--order", "4", "--window", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("q^0 z^-2 u^0 : 1"), "{}", out);

    let (code, out) = cli(&["series", "p", "--m", "1", "--order", "3", "--window", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("q^0 z^1 u^2 : 1"), "{}", out);

    let (code, out) = cli(&["series", "check-lemma", "--m", "3", "--order", "5"]);
    assert_eq!(code, 0, "{}", out);
}

#[test]
fn zhu_check_small_sweeps() {
    for identity in ["a0", "am", "aminus1", "block", "sumformula"] {
        let (code, out) = cli(&[
            "zhu-check",
            "--identity",
            identity,
            "--deg-max",
            "3",
            "--q-order",
            "4",
            "--m",
            "2",
        ]);
        assert_eq!(code, 0, "{}: {}", identity, out);
        assert!(out.contains("identically zero"), "{}", out);
    }
}

#[test]
fn json_report_schema_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let ising = dir.path().join("ising.json");
    let ising_path = ising.to_str().unwrap();
    cli(&["catalog", "export", "ising", "--out", ising_path]);

    let commands: Vec<Vec<&str>> = vec![
        vec!["--json", "rank", "--ring", ising_path, "--genus", "2"],
        vec!["--json", "verify-ring", "--ring", ising_path],
        vec!["--json", "series", "eisenstein", "--k", "1", "--order", "2"],
        vec![
            "--json",
            "zhu-check",
            "--identity",
            "a0",
            "--deg-max",
            "2",
            "--q-order",
            "3",
        ],
        vec!["--json", "decomp-check", "--ring", ising_path, "--genus", "2"],
    ];
    for args in commands {
        let (code, out) = cli(&args);
        assert_eq!(code, 0, "{:?}: {}", args, out);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        for field in ["command", "inputs", "result", "residuals", "runtime_ms"] {
            assert!(doc.get(field).is_some(), "{:?} missing {}", args, field);
        }
    }

    // rank result is the decimal string of the integer
    let (_, out) = cli(&["--json", "rank", "--ring", ising_path, "--genus", "2"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(doc["result"], serde_json::json!("10"));
}

#[test]
fn stdout_writer_is_used() {
    // run() writes to the provided sink, nothing else
    let mut sink = Vec::new();
    sink.write_all(b"").unwrap();
    let code = run(
        ["fusion-blocks", "series", "eisenstein", "--k", "1"]
            .iter()
            .map(|s| s.to_string()),
        &mut sink,
    );
    assert_eq!(code, 0);
    assert!(!sink.is_empty());
}
