//! `qbag`: validate, evaluate, sweep and analyse QBAG chains.
//!
//! All arithmetic runs on exact rationals; decimal inputs are read exactly.
//! Exit status is 0 on success and 2 on any usage or input error.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qbag_core::io::{
    export_curve_csv, export_strengths_csv, parse_chain, parse_qbag, serialize_chain,
};
use qbag_core::slf::{self, FairnessReport};
use qbag_core::{
    evaluate, format_significant, linspace, sweep_chain, ArgumentId, ExactChain,
    ExactQbag, ExactQuery, ExactStrengthMatrix, Rational, Scalar, Semantics, TopicSet,
};
use serde::Serialize;

const SCORE_DECIMALS: usize = 5;
const STRENGTH_DIGITS: usize = 12;

#[derive(Parser)]
#[command(name = "qbag", version, about = "Safety, liveness and fairness analysis of QBAG chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a chain document and classify it.
    Validate {
        chain: PathBuf,
    },
    /// Print the final strengths of a QBAG document.
    Eval {
        qbag: PathBuf,
        #[arg(long, default_value = "dfquad")]
        semantics: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run safety, liveness and fairness checks on a chain.
    Analyze {
        chain: PathBuf,
        /// Comma-separated topic arguments.
        #[arg(long)]
        topics: String,
        /// Threshold of justification in [0, 1].
        #[arg(long)]
        threshold: String,
        #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
        checks: Vec<Check>,
        #[arg(long, default_value = "dfquad")]
        semantics: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Vary one argument's initial strength over an evenly spaced range.
    Sweep {
        qbag: PathBuf,
        #[arg(long)]
        argument: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        steps: usize,
        /// Write the generated chain document here instead of stdout.
        #[arg(long, conflicts_with = "csv")]
        out: Option<PathBuf>,
        /// Print evaluated strengths as CSV instead of the chain document.
        #[arg(long)]
        csv: bool,
        #[arg(long, default_value = "dfquad")]
        semantics: String,
    },
    /// Print the safety curve and fairness line breakpoints as CSV.
    Curve {
        chain: PathBuf,
        #[arg(long)]
        topics: String,
        #[arg(long)]
        threshold: String,
        #[arg(long, default_value = "dfquad")]
        semantics: String,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Check {
    Safety,
    Liveness,
    Fairness,
    All,
}

#[derive(Debug)]
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CliResult<T> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CliResult<String> {
    match command {
        Command::Validate { chain } => validate(&chain),
        Command::Eval { qbag, semantics, format } => eval(&qbag, &semantics, format),
        Command::Analyze { chain, topics, threshold, checks, semantics, format } => {
            let (matrix, query) = load_analysis(&chain, &topics, &threshold, &semantics)?;
            analyze(&matrix, &query, &semantics, &checks, format)
        }
        Command::Sweep { qbag, argument, from, to, steps, out, csv, semantics } => {
            sweep(&qbag, &argument, &from, &to, steps, out.as_deref(), csv, &semantics)
        }
        Command::Curve { chain, topics, threshold, semantics } => {
            let (matrix, query) = load_analysis(&chain, &topics, &threshold, &semantics)?;
            Ok(export_curve_csv(&slf::fairness_report(&matrix, &query)?))
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure(format!("cannot read {}: {e}", path.display())))
}

fn load_chain(path: &Path) -> CliResult<ExactChain> {
    parse_chain(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_qbag(path: &Path) -> CliResult<ExactQbag> {
    parse_qbag(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn unit_value(text: &str, what: &str) -> CliResult<Rational> {
    let value = Rational::from_decimal_str(text)
        .ok_or_else(|| Failure(format!("{what} {text:?} is not a decimal number")))?;
    if !value.in_unit_interval() {
        return Err(Failure(format!("{what} {text} is outside [0, 1]")));
    }
    Ok(value)
}

fn load_analysis(
    chain: &Path,
    topics: &str,
    threshold: &str,
    semantics: &str,
) -> CliResult<(ExactStrengthMatrix, ExactQuery)> {
    let semantics: Semantics = semantics.parse()?;
    let topics = TopicSet::parse(topics)?;
    let threshold = unit_value(threshold, "threshold")?;
    let matrix = load_chain(chain)?.evaluate(&semantics)?;
    Ok((matrix, ExactQuery::new(topics, threshold)?))
}

fn yes_no(flag: bool) -> &'static str {
    if flag {
        "yes"
    } else {
        "no"
    }
}

fn show(value: &Rational) -> String {
    format_significant(Scalar::to_f64(value), STRENGTH_DIGITS)
}

fn validate(path: &Path) -> CliResult<String> {
    let chain = load_chain(path)?;
    let mut out = format!("steps: {}\n", chain.len());
    let mut first_cycle = None;
    for (i, step) in chain.steps().iter().enumerate() {
        let acyclic = step.is_acyclic();
        if !acyclic && first_cycle.is_none() {
            first_cycle = Some(i + 1);
        }
        let _ = writeln!(
            out,
            "step {}: arguments={} attacks={} supports={} acyclic={}",
            i + 1,
            step.len(),
            step.attacks().len(),
            step.supports().len(),
            yes_no(acyclic)
        );
    }
    if let Some(step) = first_cycle {
        print!("{out}");
        return Err(Failure(format!("{}: CyclicGraph at step {step}", path.display())));
    }
    let _ = writeln!(
        out,
        "expansion: {}, normal: {}, weak: {}",
        yes_no(chain.is_expansion_chain()),
        yes_no(chain.is_normal_expansion_chain()),
        yes_no(chain.is_weak_expansion_chain())
    );
    let common = chain.common_arguments();
    let _ = writeln!(out, "common_arguments: {}", join_ids(common.iter()));
    Ok(out)
}

fn join_ids<'a>(ids: impl Iterator<Item = &'a ArgumentId>) -> String {
    ids.map(ArgumentId::as_str).collect::<Vec<_>>().join(",")
}

fn eval(path: &Path, semantics: &str, format: Format) -> CliResult<String> {
    let semantics: Semantics = semantics.parse()?;
    let graph = load_qbag(path)?;
    let strengths = evaluate(&graph, &semantics)?;
    Ok(match format {
        Format::Text => strengths.iter().map(|(id, v)| format!("{id}={}\n", show(v))).collect(),
        Format::Csv => {
            let mut out = String::from("argument,final_strength\n");
            for (id, v) in strengths.iter() {
                let _ = writeln!(out, "{id},{}", show(v));
            }
            out
        }
        Format::Structured => {
            let map: BTreeMap<&str, serde_json::Value> = strengths
                .iter()
                .map(|(id, v)| (id.as_str(), json_number(&show(v))))
                .collect();
            to_json(&map)
        }
    })
}

fn json_number(text: &str) -> serde_json::Value {
    serde_json::Value::Number(text.parse().expect("decimal text is a JSON number"))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct SafetySection {
    strongly_safe: bool,
    weakly_safe: bool,
}

#[derive(Serialize)]
struct LivenessSection {
    fluctuations: BTreeMap<ArgumentId, usize>,
    live: bool,
}

#[derive(Serialize)]
struct FairnessSection {
    ideally_fair: bool,
    lively_fair: bool,
    cautiously_fair: bool,
    #[serde(flatten)]
    report: FairnessReport,
}

#[derive(Serialize)]
struct AnalysisReport {
    topics: Vec<ArgumentId>,
    threshold: String,
    semantics: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    safety: Option<SafetySection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    liveness: Option<LivenessSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fairness: Option<FairnessSection>,
}

fn analyze(
    matrix: &ExactStrengthMatrix,
    query: &ExactQuery,
    semantics: &str,
    checks: &[Check],
    format: Format,
) -> CliResult<String> {
    let wants = |c: Check| checks.contains(&Check::All) || checks.contains(&c);

    if format == Format::Csv {
        return analysis_csv(matrix, query);
    }

    let report = AnalysisReport {
        topics: query.topics().iter().cloned().collect(),
        threshold: show(query.threshold()),
        semantics: semantics.to_owned(),
        safety: wants(Check::Safety)
            .then(|| -> CliResult<_> {
                Ok(SafetySection {
                    strongly_safe: slf::is_strongly_safe(matrix, query)?,
                    weakly_safe: slf::is_weakly_safe(matrix, query)?,
                })
            })
            .transpose()?,
        liveness: wants(Check::Liveness)
            .then(|| -> CliResult<_> {
                Ok(LivenessSection {
                    fluctuations: slf::fluctuation_counts(matrix, query)?,
                    live: slf::is_live(matrix, query)?,
                })
            })
            .transpose()?,
        fairness: wants(Check::Fairness)
            .then(|| -> CliResult<_> {
                Ok(FairnessSection {
                    ideally_fair: slf::is_ideally_fair(matrix, query)?,
                    lively_fair: slf::is_lively_fair(matrix, query)?,
                    cautiously_fair: slf::is_cautiously_fair(matrix, query)?,
                    report: slf::fairness_report(matrix, query)?,
                })
            })
            .transpose()?,
    };

    Ok(match format {
        Format::Structured => to_json(&report),
        _ => analysis_text(&report),
    })
}

fn pairs<K: std::fmt::Display, V>(map: &BTreeMap<K, V>, show: impl Fn(&V) -> String) -> String {
    map.iter().map(|(k, v)| format!("{k}={}", show(v))).collect::<Vec<_>>().join(" ")
}

fn analysis_text(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let mut line = |key: &str, value: String| {
        let _ = writeln!(out, "{key}: {value}");
    };
    line("topics", join_ids(report.topics.iter()));
    line("threshold", report.threshold.clone());
    line("semantics", report.semantics.clone());
    if let Some(s) = &report.safety {
        line("strongly_safe", s.strongly_safe.to_string());
        line("weakly_safe", s.weakly_safe.to_string());
    }
    if let Some(l) = &report.liveness {
        line("fluctuations", pairs(&l.fluctuations, |k| k.to_string()));
        line("live", l.live.to_string());
    }
    if let Some(f) = &report.fairness {
        line("ideally_fair", f.ideally_fair.to_string());
        line("lively_fair", f.lively_fair.to_string());
        line("cautiously_fair", f.cautiously_fair.to_string());
        let r = &f.report;
        line("exceed_counts", pairs(&r.exceed_counts, |s| s.to_string()));
        line("ordering", join_ids(r.ordering.iter()));
        line("fairness_line", format!("(0,0)-({},{}) slope {}", r.curve_points.len() - 1, r.curve_points.last().map_or(0, |p| p.y), r.line_slope));
        line("gini_area", r.gini_area.to_string());
        line("gini_score", format!("{:.*}", SCORE_DECIMALS, r.gini_score));
        line("p", r.p.as_ref().map_or("undefined".into(), |p| pairs(p, |v| v.to_string())));
        line("shannon_base", r.base_b.map_or("undefined".into(), |b| b.to_string()));
        line("shannon_score", format!("{:.*}", SCORE_DECIMALS, r.shannon_score));
    }
    out
}

fn analysis_csv(matrix: &ExactStrengthMatrix, query: &ExactQuery) -> CliResult<String> {
    let counts = slf::exceed_counts(matrix, query)?;
    let fluctuations = slf::fluctuation_counts(matrix, query)?;
    let p = slf::exceed_distribution(matrix, query)?;
    let mut out = String::from("topic,exceed_count,fluctuations,strongly_safe,weakly_safe,p\n");
    for x in query.topics().iter() {
        let single = query.singleton(x);
        let _ = writeln!(
            out,
            "{x},{},{},{},{},{}",
            counts[x],
            fluctuations[x],
            slf::is_strongly_safe(matrix, &single)?,
            slf::is_weakly_safe(matrix, &single)?,
            p.as_ref().map_or("undefined".into(), |p| p[x].to_string())
        );
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn sweep(
    path: &Path,
    argument: &str,
    from: &str,
    to: &str,
    steps: usize,
    out: Option<&Path>,
    csv: bool,
    semantics: &str,
) -> CliResult<String> {
    let semantics: Semantics = semantics.parse()?;
    if steps == 0 {
        return Err(Failure("--steps must be at least 1".into()));
    }
    let from = unit_value(from, "--from")?;
    let to = unit_value(to, "--to")?;
    let graph = load_qbag(path)?;
    let chain = sweep_chain(&graph, argument, &linspace(&from, &to, steps))?;
    if csv {
        return Ok(export_strengths_csv(&chain.evaluate(&semantics)?));
    }
    let document = serialize_chain(&chain);
    match out {
        Some(target) => {
            std::fs::write(target, document)
                .map_err(|e| Failure(format!("cannot write {}: {e}", target.display())))?;
            Ok(String::new())
        }
        None => Ok(document),
    }
}
