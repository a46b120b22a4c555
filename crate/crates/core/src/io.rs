//! Text formats: JSON documents for QBAGs and chains, CSV exports for
//! strength trajectories and fairness curves.
//!
//! QBAG document:
//!
//! ```json
//! {"format_version": "1", "kind": "qbag",
//!  "arguments": [{"id": "a", "initial": 0.5}, {"id": "c", "initial": 0.2}],
//!  "attacks": [],
//!  "supports": [["c", "a"]]}
//! ```
//!
//! A chain document has `"kind": "chain"` and a `"steps"` array of QBAG
//! payloads (`arguments`, `attacks`, `supports`). Pairs are `[source,
//! target]`. Strengths are JSON numbers, read without going through binary
//! floating point, so exact backends see `0.1` as exactly one tenth. Exact
//! values without a finite decimal expansion are written as `"n/d"` strings,
//! which the reader also accepts.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::chain::{Chain, StrengthMatrix};
use crate::error::{Error, Result};
use crate::graph::{ArgumentId, Qbag};
use crate::scalar::{format_significant, Scalar};
use crate::slf::FairnessReport;

pub const FORMAT_VERSION: &str = "1";

/// Significant digits used by the CSV exports.
pub const CSV_DIGITS: usize = 12;

fn schema(path: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Schema { path: path.into(), message: message.into() }
}

fn join(parent: &str, child: &str) -> String {
    if parent.is_empty() {
        child.to_owned()
    } else {
        format!("{parent}.{child}")
    }
}

fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string().split(" at line").next().unwrap_or_default().to_owned(),
    })
}

fn as_object<'v>(value: &'v Value, path: &str) -> Result<&'v Map<String, Value>> {
    value.as_object().ok_or_else(|| schema(path, "expected an object"))
}

fn as_array<'v>(value: &'v Value, path: &str) -> Result<&'v Vec<Value>> {
    value.as_array().ok_or_else(|| schema(path, "expected an array"))
}

fn as_str<'v>(value: &'v Value, path: &str) -> Result<&'v str> {
    value.as_str().ok_or_else(|| schema(path, "expected a string"))
}

fn reject_unknown(object: &Map<String, Value>, allowed: &[&str], path: &str) -> Result<()> {
    match object.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(key) => Err(schema(join(path, key), "unknown field")),
        None => Ok(()),
    }
}

fn check_envelope(object: &Map<String, Value>, expected_kind: &str) -> Result<()> {
    let version = object
        .get("format_version")
        .ok_or_else(|| schema("format_version", "missing"))?;
    let version = as_str(version, "format_version")?;
    if version != FORMAT_VERSION {
        return Err(schema("format_version", format!("unsupported version {version:?}")));
    }
    let kind = as_str(object.get("kind").ok_or_else(|| schema("kind", "missing"))?, "kind")?;
    match kind {
        "qbag" | "chain" if kind == expected_kind => Ok(()),
        "qbag" | "chain" => {
            Err(schema("kind", format!("expected a {expected_kind} document, found {kind}")))
        }
        other => Err(schema("kind", format!("unknown kind {other:?}"))),
    }
}

fn parse_id(value: &Value, path: &str) -> Result<ArgumentId> {
    ArgumentId::new(as_str(value, path)?).map_err(|e| e.at(path))
}

fn parse_strength<S: Scalar>(value: &Value, path: &str) -> Result<S> {
    let text = match value {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => return Err(schema(path, "expected a number")),
    };
    let strength =
        S::from_decimal_str(&text).ok_or_else(|| schema(path, format!("invalid number {text}")))?;
    if !strength.in_unit_interval() {
        return Err(Error::StrengthOutOfRange { what: "initial strength".into(), value: text }.at(path));
    }
    Ok(strength)
}

fn parse_payload<S: Scalar>(
    object: &Map<String, Value>,
    path: &str,
    envelope_keys: &[&str],
) -> Result<Qbag<S>> {
    let allowed: Vec<&str> =
        envelope_keys.iter().copied().chain(["arguments", "attacks", "supports"]).collect();
    reject_unknown(object, &allowed, path)?;

    let args_path = join(path, "arguments");
    let entries = object.get("arguments").ok_or_else(|| schema(&args_path, "missing"))?;
    let mut arguments = Vec::new();
    for (i, entry) in as_array(entries, &args_path)?.iter().enumerate() {
        let entry_path = format!("{args_path}[{i}]");
        let fields = as_object(entry, &entry_path)?;
        reject_unknown(fields, &["id", "initial"], &entry_path)?;
        let id_path = join(&entry_path, "id");
        let initial_path = join(&entry_path, "initial");
        let id = parse_id(fields.get("id").ok_or_else(|| schema(&id_path, "missing"))?, &id_path)?;
        let initial = parse_strength(
            fields.get("initial").ok_or_else(|| schema(&initial_path, "missing"))?,
            &initial_path,
        )?;
        arguments.push((id, initial));
    }
    if let Some(i) = (1..arguments.len()).find(|&i| arguments[..i].iter().any(|(id, _)| *id == arguments[i].0)) {
        return Err(Error::DuplicateArgument(arguments[i].0.clone()).at(format!("{args_path}[{i}].id")));
    }

    let mut relations = Vec::new();
    for name in ["attacks", "supports"] {
        let rel_path = join(path, name);
        let mut pairs = Vec::new();
        if let Some(list) = object.get(name) {
            for (i, pair) in as_array(list, &rel_path)?.iter().enumerate() {
                let pair_path = format!("{rel_path}[{i}]");
                let ends = as_array(pair, &pair_path)?;
                if ends.len() != 2 {
                    return Err(schema(&pair_path, "expected [source, target]"));
                }
                let source = parse_id(&ends[0], &format!("{pair_path}[0]"))?;
                let target = parse_id(&ends[1], &format!("{pair_path}[1]"))?;
                let declared = |x: &ArgumentId| arguments.iter().any(|(id, _)| id == x);
                if !declared(&source) || !declared(&target) {
                    return Err(Error::DanglingEndpoint { from: source, to: target }.at(pair_path));
                }
                pairs.push((source, target));
            }
        }
        relations.push(pairs);
    }
    let supports = relations.pop().expect("two relations");
    let attacks = relations.pop().expect("two relations");
    let at = if path.is_empty() { "document".to_owned() } else { path.to_owned() };
    Qbag::build(arguments, attacks, supports).map_err(|e| e.at(at))
}

pub fn parse_qbag<S: Scalar>(text: &str) -> Result<Qbag<S>> {
    let doc = parse_json(text)?;
    let object = as_object(&doc, "document")?;
    check_envelope(object, "qbag")?;
    parse_payload(object, "", &["format_version", "kind"])
}

pub fn parse_chain<S: Scalar>(text: &str) -> Result<Chain<S>> {
    let doc = parse_json(text)?;
    let object = as_object(&doc, "document")?;
    check_envelope(object, "chain")?;
    reject_unknown(object, &["format_version", "kind", "steps"], "")?;
    let steps = object.get("steps").ok_or_else(|| schema("steps", "missing"))?;
    let steps = as_array(steps, "steps")?
        .iter()
        .enumerate()
        .map(|(i, step)| {
            let path = format!("steps[{i}]");
            parse_payload(as_object(step, &path)?, &path, &[])
        })
        .collect::<Result<Vec<_>>>()?;
    Chain::new(steps)
}

#[derive(Serialize)]
struct ArgumentOut<'a> {
    id: &'a str,
    initial: Value,
}

#[derive(Serialize)]
struct PayloadOut<'a> {
    arguments: Vec<ArgumentOut<'a>>,
    attacks: Vec<[&'a str; 2]>,
    supports: Vec<[&'a str; 2]>,
}

#[derive(Serialize)]
struct QbagDocOut<'a> {
    format_version: &'static str,
    kind: &'static str,
    arguments: Vec<ArgumentOut<'a>>,
    attacks: Vec<[&'a str; 2]>,
    supports: Vec<[&'a str; 2]>,
}

#[derive(Serialize)]
struct ChainDocOut<'a> {
    format_version: &'static str,
    kind: &'static str,
    steps: Vec<PayloadOut<'a>>,
}

fn strength_value<S: Scalar>(value: &S) -> Value {
    match value.to_decimal_string() {
        Some(text) => Value::Number(text.parse().expect("decimal text is a JSON number")),
        None => Value::String(value.to_string()),
    }
}

fn pairs(edges: &std::collections::BTreeSet<crate::graph::Edge>) -> Vec<[&str; 2]> {
    edges.iter().map(|e| [e.source.as_str(), e.target.as_str()]).collect()
}

fn payload<S: Scalar>(graph: &Qbag<S>) -> PayloadOut<'_> {
    PayloadOut {
        arguments: graph
            .initial_strengths()
            .iter()
            .map(|(id, s)| ArgumentOut { id: id.as_str(), initial: strength_value(s) })
            .collect(),
        attacks: pairs(graph.attacks()),
        supports: pairs(graph.supports()),
    }
}

fn to_pretty<T: Serialize>(doc: &T) -> String {
    let mut text = serde_json::to_string_pretty(doc).expect("documents serialize");
    text.push('\n');
    text
}

/// Keys in fixed order, arguments and pairs in ascending id order.
pub fn serialize_qbag<S: Scalar>(graph: &Qbag<S>) -> String {
    let PayloadOut { arguments, attacks, supports } = payload(graph);
    to_pretty(&QbagDocOut { format_version: FORMAT_VERSION, kind: "qbag", arguments, attacks, supports })
}

pub fn serialize_chain<S: Scalar>(chain: &Chain<S>) -> String {
    to_pretty(&ChainDocOut {
        format_version: FORMAT_VERSION,
        kind: "chain",
        steps: chain.steps().iter().map(payload).collect(),
    })
}

/// `step,argument,final_strength`, one row per argument of each step; steps
/// are numbered from 1.
pub fn export_strengths_csv<S: Scalar>(matrix: &StrengthMatrix<S>) -> String {
    let mut out = String::from("step,argument,final_strength\n");
    for (i, row) in matrix.rows().iter().enumerate() {
        for (id, value) in row.iter() {
            let _ = writeln!(out, "{},{},{}", i + 1, id, format_significant(value.to_f64(), CSV_DIGITS));
        }
    }
    out
}

/// `x,safety_curve_y,fairness_line_y` at every integer breakpoint.
pub fn export_curve_csv(report: &FairnessReport) -> String {
    let mut out = String::from("x,safety_curve_y,fairness_line_y\n");
    for (point, line) in report.curve_points.iter().zip(report.line_values()) {
        let _ = writeln!(
            out,
            "{},{},{}",
            point.x,
            point.y,
            format_significant(Scalar::to_f64(&line), CSV_DIGITS)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::semantics::Semantics;
    use crate::slf::{fairness_report, SlfQuery};
    use crate::TopicSet;

    const FIRST_STEP: &str = r#"{"format_version":"1","kind":"qbag",
        "arguments":[{"id":"a","initial":0.5},{"id":"b","initial":0.7},{"id":"c","initial":0.2}],
        "attacks":[],"supports":[["c","a"]]}"#;

    const RUNNING_CHAIN: &str = r#"{"format_version":"1","kind":"chain","steps":[
        {"arguments":[{"id":"a","initial":0.5},{"id":"b","initial":0.7},{"id":"c","initial":0.2}],
         "attacks":[],"supports":[["c","a"]]},
        {"arguments":[{"id":"a","initial":0.5},{"id":"b","initial":0.7},{"id":"c","initial":0.2},{"id":"d","initial":1.0}],
         "attacks":[["d","a"],["d","b"]],"supports":[["c","a"]]},
        {"arguments":[{"id":"a","initial":0.5},{"id":"b","initial":0.7},{"id":"c","initial":0.2},{"id":"d","initial":1.0},{"id":"e","initial":0.8}],
         "attacks":[["d","a"],["d","b"],["e","d"]],"supports":[["c","a"]]}]}"#;

    fn q(text: &str) -> Rational {
        Rational::from_decimal_str(text).unwrap()
    }

    #[test]
    fn parse_first_step() {
        let g: Qbag<Rational> = parse_qbag(FIRST_STEP).unwrap();
        let expected = Qbag::builder()
            .argument("a", q("0.5"))
            .argument("b", q("0.7"))
            .argument("c", q("0.2"))
            .support("c", "a")
            .build()
            .unwrap();
        assert_eq!(g, expected);
        let f: Qbag<f64> = parse_qbag(FIRST_STEP).unwrap();
        assert_eq!(f.initial_strength("b"), Some(&0.7));
    }

    #[test]
    fn out_of_range_strength_reports_path() {
        let text = FIRST_STEP.replace("0.7", "1.5");
        let err = parse_qbag::<Rational>(&text).unwrap_err();
        assert!(matches!(err.root(), Error::StrengthOutOfRange { .. }));
        assert!(err.to_string().starts_with("arguments[1].initial:"), "{err}");
    }

    #[test]
    fn truncated_document_is_syntax_error() {
        let err = parse_qbag::<f64>(&FIRST_STEP[..40]).unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, .. }), "{err:?}");
    }

    #[test]
    fn envelope_checks() {
        let err = parse_qbag::<f64>(&FIRST_STEP.replace(r#""kind":"qbag""#, r#""kind":"graph""#));
        assert!(err.unwrap_err().to_string().contains("unknown kind"));
        let err = parse_qbag::<f64>(&FIRST_STEP.replace(r#""format_version":"1","#, ""));
        assert!(err.unwrap_err().to_string().starts_with("format_version: missing"));
        let err = parse_chain::<f64>(FIRST_STEP).unwrap_err();
        assert!(err.to_string().contains("expected a chain document"));
        let err = parse_qbag::<f64>(&FIRST_STEP.replace(r#""attacks""#, r#""attack""#)).unwrap_err();
        assert_eq!(err.to_string(), "attack: unknown field");
    }

    #[test]
    fn structural_errors_carry_paths() {
        let dangling = FIRST_STEP.replace(r#"[["c","a"]]"#, r#"[["c","z"]]"#);
        let err = parse_qbag::<f64>(&dangling).unwrap_err();
        assert!(matches!(err.root(), Error::DanglingEndpoint { .. }));
        assert!(err.to_string().starts_with("supports[0]:"));

        let dup = FIRST_STEP.replace(r#"{"id":"b""#, r#"{"id":"a""#);
        let err = parse_qbag::<f64>(&dup).unwrap_err();
        assert!(matches!(err.root(), Error::DuplicateArgument(_)));
        assert!(err.to_string().starts_with("arguments[1].id:"));

        let overlap = FIRST_STEP.replace(r#""attacks":[]"#, r#""attacks":[["c","a"]]"#);
        assert!(matches!(parse_qbag::<f64>(&overlap).unwrap_err().root(), Error::RelationOverlap { .. }));

        let bad_id = FIRST_STEP.replace(r#""id":"c""#, r#""id":"c c""#);
        assert!(matches!(parse_qbag::<f64>(&bad_id).unwrap_err().root(), Error::InvalidArgumentId(_)));
    }

    #[test]
    fn parse_running_chain() {
        let c: Chain<Rational> = parse_chain(RUNNING_CHAIN).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.is_normal_expansion_chain());
        let m = c.evaluate(&Semantics::Dfquad).unwrap();
        assert_eq!(m.rows()[2].get("b"), Some(&q("0.56")));
    }

    #[test]
    fn empty_chain_document() {
        let err = parse_chain::<f64>(r#"{"format_version":"1","kind":"chain","steps":[]}"#);
        assert_eq!(err, Err(Error::EmptyChain));
    }

    #[test]
    fn chain_step_errors_carry_step_path() {
        let text = RUNNING_CHAIN.replace(r#"{"id":"e","initial":0.8}"#, r#"{"id":"e","initial":-0.8}"#);
        let err = parse_chain::<Rational>(&text).unwrap_err();
        assert!(err.to_string().starts_with("steps[2].arguments[4].initial:"), "{err}");
    }

    #[test]
    fn round_trip_last_step() {
        let c: Chain<Rational> = parse_chain(RUNNING_CHAIN).unwrap();
        let g = c.last();
        let text = serialize_qbag(g);
        assert_eq!(&parse_qbag::<Rational>(&text).unwrap(), g);
        assert!(text.starts_with("{\n  \"format_version\": \"1\",\n  \"kind\": \"qbag\",\n  \"arguments\""));
        assert!(text.contains("\"initial\": 0.56") || text.contains("\"initial\": 0.7"));
        assert_eq!(parse_chain::<Rational>(&serialize_chain(&c)).unwrap(), c);
    }

    #[test]
    fn non_terminating_strengths_round_trip_as_fractions() {
        let third = Rational::new(1.into(), 3.into());
        let g = Qbag::builder().argument("x", third.clone()).build().unwrap();
        let text = serialize_qbag(&g);
        assert!(text.contains("\"initial\": \"1/3\""));
        assert_eq!(parse_qbag::<Rational>(&text).unwrap(), g);
    }

    #[test]
    fn strengths_csv() {
        let m = parse_chain::<Rational>(RUNNING_CHAIN).unwrap().evaluate(&Semantics::Dfquad).unwrap();
        let csv = export_strengths_csv(&m);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "step,argument,final_strength");
        assert_eq!(lines.len(), 1 + 12);
        assert_eq!(lines[1], "1,a,0.6");
        assert_eq!(lines[4], "2,a,0.1");
        assert_eq!(lines[9], "3,b,0.56");
        assert_eq!(csv, export_strengths_csv(&m));
    }

    #[test]
    fn strengths_csv_edge_cases() {
        let g = Qbag::builder().argument("x", 0.25).argument("y", 1.0).build().unwrap();
        let m = Chain::new(vec![g]).unwrap().evaluate(&Semantics::Dfquad).unwrap();
        assert_eq!(export_strengths_csv(&m), "step,argument,final_strength\n1,x,0.25\n1,y,1\n");
        let empty = Chain::new(vec![Qbag::<f64>::default()]).unwrap();
        let m = empty.evaluate(&Semantics::Dfquad).unwrap();
        assert_eq!(export_strengths_csv(&m), "step,argument,final_strength\n");
    }

    #[test]
    fn curve_csv_running_example() {
        let m = parse_chain::<Rational>(RUNNING_CHAIN).unwrap().evaluate(&Semantics::Dfquad).unwrap();
        let query = SlfQuery::new(TopicSet::parse("a,b,c").unwrap(), q("0.2")).unwrap();
        let report = fairness_report(&m, &query).unwrap();
        assert_eq!(
            export_curve_csv(&report),
            "x,safety_curve_y,fairness_line_y\n0,0,0\n1,2,2.33333333333\n2,4,4.66666666667\n3,7,7\n"
        );
        let single = SlfQuery::new(TopicSet::parse("c").unwrap(), q("0.2")).unwrap();
        let report = fairness_report(&m, &single).unwrap();
        assert_eq!(export_curve_csv(&report), "x,safety_curve_y,fairness_line_y\n0,0,0\n1,3,3\n");
    }
}
