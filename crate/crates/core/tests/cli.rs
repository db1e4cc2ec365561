use std::path::Path;
use std::process::{Command, Output};

use cubic_split::cayley::{build_ball, parse_json};
use cubic_split::group::{build_rewrite_system, Family, FamilySpec, DEFAULT_RULE_CAP};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubic-split")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn build_and_export_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("ball.json");
    let o = run(&["build", "--family", "P3", "--n", "2", "--m", "3", "--radius", "5", "--out", p(&json)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let text = std::fs::read_to_string(&json).unwrap();
    let ball = parse_json(&text).unwrap();
    let rs = build_rewrite_system(&FamilySpec::new(Family::P3, 2, Some(3)).unwrap(), DEFAULT_RULE_CAP).unwrap();
    let direct = build_ball(&rs, 5).unwrap();
    assert_eq!(ball.len(), direct.len());
    assert_eq!(ball.edges.len(), direct.edges.len());

    let again = dir.path().join("again.json");
    assert_eq!(code(&run(&["export", "--in", p(&json), "--format", "json", "--out", p(&again)])), 0);
    assert_eq!(std::fs::read(&json).unwrap(), std::fs::read(&again).unwrap());

    let gml = dir.path().join("ball.graphml");
    assert_eq!(code(&run(&["export", "--in", p(&json), "--format", "graphml", "--out", p(&gml)])), 0);
    let xml = std::fs::read_to_string(&gml).unwrap();
    let doc = roxmltree::Document::parse(&xml).unwrap();
    let nodes = doc.descendants().filter(|n| n.has_tag_name("node")).count();
    let edges: Vec<_> = doc.descendants().filter(|n| n.has_tag_name("edge")).collect();
    assert_eq!(nodes, direct.len());
    assert_eq!(edges.len(), direct.edges.len());
    let ids: std::collections::HashSet<&str> =
        doc.descendants().filter(|n| n.has_tag_name("node")).map(|n| n.attribute("id").unwrap()).collect();
    assert!(ids.contains("e"));
    for e in &edges {
        assert!(ids.contains(e.attribute("source").unwrap()));
        assert!(ids.contains(e.attribute("target").unwrap()));
    }

    let dot = dir.path().join("ball.dot");
    assert_eq!(code(&run(&["export", "--in", p(&json), "--format", "dot", "--out", p(&dot)])), 0);
    let dot = std::fs::read_to_string(&dot).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), direct.edges.len());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["analyze", "--family", "P1", "--n", "3", "--report", p(&out)]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["outcome"], "pass");

    let o = run(&["analyze", "--family", "P4", "--n", "2", "--report", p(&out)]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["outcome"], "claim-discrepancy");
    assert_eq!(report["abelianization"]["match"], false);
    assert_eq!(report["generation"]["verdict"], "fails-to-generate");
    let flagged: Vec<&str> = report["claim_discrepancy"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(flagged.contains(&"abelianization") && flagged.contains(&"generation"));

    assert_eq!(code(&run(&["analyze", "--family", "P7", "--n", "1", "--m", "2"])), 1);
    assert_eq!(code(&run(&["analyze", "--family", "P1", "--n", "1"])), 2);
    assert_eq!(code(&run(&["analyze", "--family", "P9", "--n", "3"])), 2);
    assert_eq!(code(&run(&["analyze", "--family", "P1", "--n", "3", "--radius", "4"])), 2);
    assert_eq!(code(&run(&["build", "--family", "P3", "--n", "4", "--m", "4", "--radius", "60", "--out", p(&out)])), 3);
    let missing = dir.path().join("missing.json");
    assert_eq!(code(&run(&["export", "--in", p(&missing), "--format", "dot", "--out", p(&out)])), 2);
    let o = run(&["build", "--family", "P1", "--n", "3", "--radius", "3", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    assert_eq!(code(&run(&["export", "--in", p(&out), "--format", "svg", "--out", p(&missing)])), 2);
}

#[test]
fn config_file_and_grid() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cell.conf");
    std::fs::write(&cfg, "# P5 grid\nfamily = P5\nall_params = \"n=2..3,m=2\"\nradius = 8\n").unwrap();
    let o = run(&["--config", p(&cfg), "verify"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let stdout = String::from_utf8(o.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 2);
    assert!(stdout.lines().all(|l| l.ends_with(": Pass")), "{stdout}");

    let o = run(&["--config", p(&cfg), "verify", "--all-params", "n=1"]);
    assert_eq!(code(&o), 2);

    std::fs::write(&cfg, "family = P1\ncolour = red\n").unwrap();
    assert_eq!(code(&run(&["--config", p(&cfg), "classify", "--n", "3"])), 2);

    std::fs::write(&cfg, "family = P6\nn = 2\nm = 3\n").unwrap();
    let o = run(&["--config", p(&cfg), "classify"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().contains("D_8 *_Z_2 D_6"));
}

#[test]
fn reports_are_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for out in [&a, &b] {
        let o = run(&["analyze", "--family", "P5", "--n", "2", "--m", "3", "--report", p(out)]);
        assert_eq!(code(&o), 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
