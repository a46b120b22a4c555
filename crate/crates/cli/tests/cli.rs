use std::path::PathBuf;
use std::process::{Command, Output};

use qbag_core::io::parse_chain;
use qbag_core::{ExactChain, Rational};
use qbag_testkit::exact;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn qbag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qbag")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn temp_doc(text: &str) -> tempfile::NamedTempFile {
    let file = tempfile::NamedTempFile::new().unwrap();
    std::fs::write(file.path(), text).unwrap();
    file
}

const CYCLIC_QBAG: &str = r#"{"format_version":"1","kind":"qbag",
  "arguments":[{"id":"x","initial":0.5},{"id":"y","initial":0.5}],
  "attacks":[["x","y"]],"supports":[["y","x"]]}"#;

#[test]
fn validate_classifies_running_chain() {
    let out = qbag(&["validate", &fixture("running_chain.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("expansion: yes, normal: yes, weak: no"), "{text}");
    assert!(text.contains("step 3: arguments=5 attacks=3 supports=1 acyclic=yes"));
}

#[test]
fn validate_reports_cyclic_step() {
    let out = qbag(&["validate", &fixture("cyclic_chain.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("CyclicGraph at step 1"));
}

#[test]
fn missing_and_malformed_files_exit_two() {
    assert_eq!(qbag(&["validate", "/nonexistent/chain.json"]).status.code(), Some(2));
    let bad = temp_doc("{\"format_version\":\"1\",");
    let out = qbag(&["eval", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line"));
    let wrong_kind = temp_doc(&std::fs::read_to_string(fixture("step1.json")).unwrap());
    assert_eq!(qbag(&["validate", wrong_kind.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn eval_prints_final_strengths() {
    let out = qbag(&["eval", &fixture("step3.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "a=0.5\nb=0.56\nc=0.2\nd=0.2\ne=0.8\n");
}

#[test]
fn eval_formats() {
    let csv = stdout(&qbag(&["eval", &fixture("step2.json"), "--format", "csv"]));
    assert_eq!(csv, "argument,final_strength\na,0.1\nb,0\nc,0.2\nd,1\n");
    let json = stdout(&qbag(&["eval", &fixture("step2.json"), "--format", "structured"]));
    let value: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(value["a"].as_f64(), Some(0.1));
}

#[test]
fn eval_edgeless_echoes_initial_strengths() {
    let doc = temp_doc(
        r#"{"format_version":"1","kind":"qbag","arguments":[{"id":"p","initial":0.25},{"id":"q","initial":"1/3"}],"attacks":[],"supports":[]}"#,
    );
    let out = qbag(&["eval", doc.path().to_str().unwrap()]);
    assert_eq!(stdout(&out), "p=0.25\nq=0.333333333333\n");
}

#[test]
fn eval_rejects_cycles_and_unknown_semantics() {
    let doc = temp_doc(CYCLIC_QBAG);
    let out = qbag(&["eval", doc.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("CyclicGraph"));
    let out = qbag(&["eval", &fixture("step1.json"), "--semantics", "euler"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn analyze_running_chain() {
    let out = qbag(&["analyze", &fixture("running_chain.json"), "--topics", "a,b,c", "--threshold", "0.2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    for line in [
        "strongly_safe: false",
        "weakly_safe: true",
        "fluctuations: a=2 b=2 c=0",
        "live: false",
        "ideally_fair: false",
        "lively_fair: true",
        "cautiously_fair: true",
        "gini_score: 0.46212",
        "shannon_score: 0.55449",
    ] {
        assert!(text.lines().any(|l| l == line), "missing {line:?} in\n{text}");
    }
}

#[test]
fn analyze_single_topic_and_check_selection() {
    let out = qbag(&[
        "analyze", &fixture("running_chain.json"), "--topics", "c", "--threshold", "0.1", "--checks", "safety",
    ]);
    let text = stdout(&out);
    assert!(text.contains("strongly_safe: true"));
    assert!(!text.contains("live:"));
    assert!(!text.contains("gini_score"));
}

#[test]
fn analyze_structured_keeps_key_order() {
    let out = qbag(&[
        "analyze", &fixture("running_chain.json"), "--topics", "a,b,c", "--threshold", "0.2", "--format", "structured",
    ]);
    let text = stdout(&out);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["fairness"]["gini_area"], "1");
    assert_eq!(value["fairness"]["p"]["c"], "3/7");
    let order = ["\"safety\"", "\"liveness\"", "\"fairness\"", "\"exceed_counts\"", "\"gini_score\"", "\"shannon_score\""];
    let positions: Vec<usize> = order.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn analyze_csv_lists_topics() {
    let out = qbag(&[
        "analyze", &fixture("running_chain.json"), "--topics", "a,b,c", "--threshold", "0.2", "--format", "csv",
    ]);
    assert_eq!(
        stdout(&out),
        "topic,exceed_count,fluctuations,strongly_safe,weakly_safe,p\n\
         a,2,2,false,true,2/7\nb,2,2,false,true,2/7\nc,3,0,true,true,3/7\n"
    );
}

#[test]
fn analyze_input_errors_exit_two() {
    let chain = fixture("running_chain.json");
    for args in [
        vec!["analyze", &chain, "--topics", "z", "--threshold", "0.2"],
        vec!["analyze", &chain, "--topics", "a,d", "--threshold", "0.2"],
        vec!["analyze", &chain, "--topics", "a", "--threshold", "1.5"],
        vec!["analyze", &chain, "--topics", "a", "--threshold", "high"],
        vec!["analyze", &chain, "--topics", "a"],
        vec!["analyze", &chain, "--topics", "a", "--threshold", "0.2", "--checks", "speed"],
    ] {
        assert_eq!(qbag(&args).status.code(), Some(2), "{args:?}");
    }
    let out = qbag(&["analyze", &chain, "--topics", "z", "--threshold", "0.2"]);
    assert!(stderr(&out).contains("topic z"));
}

#[test]
fn sweep_writes_chain_document() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("sweep.json");
    let out = qbag(&[
        "sweep", &fixture("sweep_graph.json"), "--argument", "f", "--from", "0.1", "--to", "0.9", "--steps", "3",
        "--out", target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let chain: ExactChain = parse_chain(&std::fs::read_to_string(&target).unwrap()).unwrap();
    let taus: Vec<&Rational> = chain.steps().iter().map(|s| s.initial_strength("f").unwrap()).collect();
    assert_eq!(taus, [&exact("0.1"), &exact("0.5"), &exact("0.9")]);
    let validated = stdout(&qbag(&["validate", target.to_str().unwrap()]));
    assert!(validated.contains("expansion: no, normal: no, weak: no"));
}

#[test]
fn sweep_single_step_uses_from() {
    let out = qbag(&["sweep", &fixture("sweep_graph.json"), "--argument", "f", "--from", "0.3", "--to", "0.9", "--steps", "1"]);
    let chain: ExactChain = parse_chain(&stdout(&out)).unwrap();
    assert_eq!(chain.len(), 1);
    assert_eq!(chain.first().initial_strength("f"), Some(&exact("0.3")));
}

#[test]
fn sweep_csv_minimum_at_midpoint() {
    let out = qbag(&[
        "sweep", &fixture("sweep_graph.json"), "--argument", "f", "--from", "0", "--to", "1", "--steps", "101", "--csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<(usize, f64)> = text
        .lines()
        .skip(1)
        .filter_map(|l| {
            let cells: Vec<&str> = l.split(',').collect();
            (cells[1] == "a").then(|| (cells[0].parse().unwrap(), cells[2].parse().unwrap()))
        })
        .collect();
    assert_eq!(rows.len(), 101);
    let (step, min) = rows.iter().copied().fold((0, f64::INFINITY), |best, r| if r.1 < best.1 { r } else { best });
    assert_eq!(step, 51);
    assert_eq!(min, 0.15);
}

#[test]
fn sweep_input_errors_exit_two() {
    let graph = fixture("sweep_graph.json");
    for args in [
        vec!["sweep", &graph, "--argument", "zz", "--from", "0", "--to", "1", "--steps", "3"],
        vec!["sweep", &graph, "--argument", "f", "--from", "-0.1", "--to", "1", "--steps", "3"],
        vec!["sweep", &graph, "--argument", "f", "--from", "0", "--to", "1.01", "--steps", "3"],
        vec!["sweep", &graph, "--argument", "f", "--from", "0", "--to", "1", "--steps", "0"],
        vec!["sweep", &graph, "--argument", "f", "--from", "0", "--to", "1", "--steps", "3", "--csv", "--out", "x.json"],
    ] {
        assert_eq!(qbag(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn curve_breakpoints() {
    let out = qbag(&["curve", &fixture("running_chain.json"), "--topics", "a,b,c", "--threshold", "0.2"]);
    assert_eq!(
        stdout(&out),
        "x,safety_curve_y,fairness_line_y\n0,0,0\n1,2,2.33333333333\n2,4,4.66666666667\n3,7,7\n"
    );
}

#[test]
fn curve_uniform_and_single_topic() {
    let chain = fixture("running_chain.json");
    let out = qbag(&["curve", &chain, "--topics", "a,b", "--threshold", "0.2"]);
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[1], cells[2], "{text}");
    }
    let out = qbag(&["curve", &chain, "--topics", "c", "--threshold", "0.2"]);
    assert_eq!(stdout(&out).lines().count(), 3);
    assert_eq!(qbag(&["curve", &chain, "--topics", "q", "--threshold", "0.2"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qbag(&[]).status.code(), Some(2));
    assert_eq!(qbag(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qbag(&["--help"]).status.code(), Some(0));
}
