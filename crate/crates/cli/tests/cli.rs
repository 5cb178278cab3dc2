use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use epk::{load_model, render_dot, ModelDocument};
use epk_core::frame::{classify_model, Mode};
use epk_core::{AgentId, StateId};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

fn epk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epk"))
        .args(args)
        .output()
        .expect("epk runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn fixtures_load_validate_and_round_trip() {
    for name in ["figure2", "cube3", "gruffalo"] {
        let path = fixture(name);
        let loaded = load_model(&path).unwrap();
        for (agent, report) in classify_model(&loaded.model, Mode::Local) {
            assert!(report.is_kd45(), "{name}/{agent}: {report}");
        }
        let text = fs::read_to_string(&path).unwrap();
        let canonical = ModelDocument::from_model(&loaded.model, loaded.meta).to_canonical_string();
        assert_eq!(canonical, text, "{name} is not canonical");
    }
}

#[test]
fn figure2_fixture_contents() {
    let m = load_model(fixture("figure2")).unwrap().model;
    let f = AgentId::new("f").unwrap();
    let edges: Vec<(String, String)> = m
        .edges(&f)
        .map(|(s, t)| (s.to_string(), t.to_string()))
        .collect();
    let expected: Vec<(String, String)> = [("1", "3"), ("2", "3"), ("3", "3")]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    assert_eq!(edges, expected);
}

#[test]
fn figure2_dot_has_nine_labelled_edges() {
    let m = load_model(fixture("figure2")).unwrap().model;
    let dot = render_dot(&m, "figure2");
    let nodes = dot
        .lines()
        .filter(|l| l.contains("[label=") && !l.contains("->"))
        .count();
    assert_eq!(nodes, 3);
    let edge_lines: Vec<&str> = dot.lines().filter(|l| l.contains("->")).collect();
    assert_eq!(edge_lines.len(), 9);
    for (agent, count) in [("m", 5), ("f", 3), ("g", 1)] {
        let label = format!("[label=\"{agent}\"]");
        assert_eq!(
            edge_lines.iter().filter(|l| l.contains(&label)).count(),
            count
        );
    }
    assert_eq!(render_dot(&m, "figure2"), dot);
}

#[test]
fn lie_output_dot_groups_replicas() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("lie.json");
    let dot = dir.path().join("lie.dot");
    let gruffalo = fixture("gruffalo");
    let g = gruffalo.to_str().unwrap();
    let o = out.to_str().unwrap();
    let r = epk(&[
        g,
        "update",
        "lie-online",
        "--liar",
        "m",
        "--new",
        "g",
        "--locals",
        "3",
        "-o",
        o,
    ]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    let r = epk(&[o, "export-dot", "-o", dot.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    let text = fs::read_to_string(&dot).unwrap();
    assert!(text.contains("subgraph \"cluster_act\""));
    assert!(text.contains("subgraph \"cluster_shift\""));
    let act_block = text.split("subgraph \"cluster_act\"").nth(1).unwrap();
    let act_block = &act_block[..act_block.find("  }").unwrap()];
    assert!(act_block.contains("\"1@act\""));
    assert!(!act_block.contains("@shift\" ["));
}

#[test]
fn check_exit_statuses() {
    let fig = fixture("figure2");
    let f = fig.to_str().unwrap();
    let r = epk(&[f, "check", "--agent", "m", "~P[m,g]"]);
    assert_eq!((stdout(&r).as_str(), r.status.code()), ("true\n", Some(0)));
    let r = epk(&[f, "check", "--state", "2", "p", "--expect", "true"]);
    assert_eq!((stdout(&r).as_str(), r.status.code()), ("false\n", Some(1)));
    let r = epk(&[f, "check", "--global", "C[f,g]", "--expect", "true"]);
    assert_eq!(r.status.code(), Some(0));
    let r = epk(&[f, "check", "--agent", "m", "p &"]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("position"));
    let r = epk(&[f, "check", "p"]);
    assert_eq!(r.status.code(), Some(2));
    let r = epk(&["/nonexistent/model.json", "show"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn validate_reports_and_requirements() {
    let fig = fixture("figure2");
    let f = fig.to_str().unwrap();
    let r = epk(&[f, "validate", "--mode", "local", "--require-kd45"]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(stdout(&r).matches("kd45=true").count(), 3);
    let r = epk(&[f, "validate", "--mode", "global", "--require-kd45"]);
    assert_eq!(r.status.code(), Some(1));
    assert!(stdout(&r).contains("g: domain {1,2,3} reflexive=false (1)"));
}

#[test]
fn update_writes_only_where_asked() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("cube.json");
    fs::copy(fixture("cube3"), &input).unwrap();
    let before = fs::read(&input).unwrap();
    let i = input.to_str().unwrap();

    let r = epk(&[i, "update", "offline", "v1"]);
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).contains("discarded: 4 (000,001,010,011)"));
    assert_eq!(fs::read(&input).unwrap(), before);

    let out = dir.path().join("after.json");
    let r = epk(&[i, "update", "offline", "v1", "-o", out.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(fs::read(&input).unwrap(), before);
    let after = load_model(&out).unwrap();
    assert_eq!(after.model.states().len(), 4);
    assert_eq!(after.meta["name"], "cube3");

    let r = epk(&[i, "update", "--in-place", "online", "w", "--locals", "110"]);
    assert_eq!(
        r.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&r.stderr)
    );
    let changed = load_model(&input).unwrap().model;
    assert!(changed.has_agent(&AgentId::new("w").unwrap()));
    assert_eq!(
        changed.locals(&AgentId::new("w").unwrap()).unwrap(),
        &["110".parse::<StateId>().unwrap()].into_iter().collect()
    );
}

#[test]
fn update_errors_exit_two() {
    let fig = fixture("figure2");
    let f = fig.to_str().unwrap();
    let r = epk(&[f, "update", "online", "g", "--locals", "1"]);
    assert_eq!(r.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&r.stderr).contains("already"));
    let r = epk(&[f, "update", "lie-offline", "--liar", "f", "--target", "f"]);
    assert_eq!(r.status.code(), Some(2));
}

#[test]
fn show_summary() {
    let fig = fixture("gruffalo");
    let r = epk(&[fig.to_str().unwrap(), "show"]);
    assert_eq!(r.status.code(), Some(0));
    let text = stdout(&r);
    assert!(text.contains("agents (2): f m"));
    assert!(text.contains("f: locals {3}, 3 edges"));
}
