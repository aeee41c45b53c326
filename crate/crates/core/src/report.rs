//! Text and JSON renderings of reports.
//!
//! JSON output is produced with `serde_json` from the report structs, whose
//! field order is the serialized order.

use std::fmt::Write;

use serde::Serialize;

use crate::lattice::PicardClass;
use crate::positivity::{EffectivityCertificate, InequalityFamily, PositivityReport};
use crate::reider::{SweepSummary, SweepViolation};

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

pub fn render_certificate(cert: &EffectivityCertificate) -> String {
    let mut parts: Vec<String> = vec![format!("({})", cert.terminal)];
    for c in &cert.subtracted {
        parts.push(format!("{}*({})", c.multiplicity, c.curve));
    }
    parts.join(" + ")
}

pub fn render_positivity(report: &PositivityReport) -> String {
    let mut out = String::new();
    let v = &report.verdicts;
    let k = report.k;
    let rank = report.subject.rank();
    writeln!(out, "class: {} on S_{} (k = {k})", report.subject, report.r).unwrap();
    writeln!(out, "degree: {}", report.degree).unwrap();
    writeln!(out, "genus: {}", report.genus).unwrap();
    writeln!(out, "effective: {}", v.effective).unwrap();
    writeln!(out, "nef: {}", v.nef).unwrap();
    writeln!(out, "big: {}", v.big).unwrap();
    writeln!(out, "spanned: {}", v.spanned).unwrap();
    writeln!(out, "k_very_ample: {}", v.k_very_ample).unwrap();
    writeln!(
        out,
        "exception_flag: {}",
        report.exception_flag.map_or("none", |f| f.as_str())
    )
    .unwrap();
    if let Some(cert) = &report.certificate {
        writeln!(out, "certificate: {}", render_certificate(cert)).unwrap();
    }
    if report.violations.is_empty() {
        writeln!(out, "violations: none").unwrap();
    } else {
        writeln!(out, "violations:").unwrap();
        for viol in &report.violations {
            let family = InequalityFamily {
                rank,
                source: viol.source.clone(),
            };
            let (text, bound) = if viol.nef {
                (family.render(false), 0)
            } else {
                (family.render(true), k)
            };
            let what = if viol.nef { "nef" } else { "k-very ample" };
            writeln!(
                out,
                "  {text}  [{what}]  C = {}  L.C = {} < {bound}",
                viol.curve, viol.value
            )
            .unwrap();
        }
    }
    out
}

fn class_list(classes: &[PicardClass]) -> String {
    classes
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn render_sweep(summary: &SweepSummary) -> String {
    let mut out = String::new();
    writeln!(out, "r: {}", summary.r).unwrap();
    writeln!(out, "k: {}", summary.k).unwrap();
    writeln!(out, "classes scanned: {}", summary.classes_scanned).unwrap();
    writeln!(out, "applicable: {}", summary.applicable).unwrap();
    writeln!(out, "passing: {}", summary.passing).unwrap();
    writeln!(out, "failing: {}", summary.failing).unwrap();
    writeln!(out, "exceptions: {}", summary.exceptions).unwrap();
    writeln!(out, "witnesses: {}", summary.witnesses).unwrap();
    writeln!(out, "candidate pool: {}", summary.pool_size).unwrap();
    writeln!(out, "nodes visited: {}", summary.nodes_visited).unwrap();
    for viol in &summary.violations {
        let line = match viol {
            SweepViolation::PassingWithWitness { class, witnesses } => {
                format!(
                    "passes but has witnesses: {class}  D = {}",
                    class_list(witnesses)
                )
            }
            SweepViolation::FailingWithoutWitness { class } => {
                format!("fails but has no witness: {class}")
            }
            SweepViolation::MissingCurve { class, curve } => {
                format!("curve not among witnesses: {class}  C = {curve}")
            }
        };
        writeln!(out, "  {line}").unwrap();
    }
    writeln!(out, "violations: {}", summary.violations.len()).unwrap();
    out
}
