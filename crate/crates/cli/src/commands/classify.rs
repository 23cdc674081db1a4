//! Posedness verdicts for the built-in catalog or user-supplied attributes.

use anyhow::{Context as _, Result};
use illposed_core::{catalog, check_consistency, classify, OperatorAttributes};
use serde::Deserialize;

use super::Outcome;
use crate::args::{ClassifyArgs, Format};
use crate::report::{Cell, Report};

#[derive(Deserialize)]
#[serde(untagged)]
enum Record {
    Named { name: String, attributes: OperatorAttributes },
    Bare(OperatorAttributes),
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Records {
    Many(Vec<Record>),
    One(Record),
}

struct Input {
    name: String,
    attributes: OperatorAttributes,
    expected: Option<(String, bool)>,
}

pub fn run(args: &ClassifyArgs) -> Result<Outcome> {
    let inputs: Vec<Input> = match &args.attributes {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let records: Records = serde_json::from_str(&text)
                .with_context(|| format!("parsing attribute records in {}", path.display()))?;
            let list = match records {
                Records::Many(v) => v,
                Records::One(r) => vec![r],
            };
            list.into_iter()
                .enumerate()
                .map(|(i, r)| match r {
                    Record::Named { name, attributes } => Input { name, attributes, expected: None },
                    Record::Bare(attributes) => Input {
                        name: format!("record{}", i + 1),
                        attributes,
                        expected: None,
                    },
                })
                .collect()
        }
        None => catalog()
            .into_iter()
            .map(|e| Input {
                name: e.name,
                attributes: e.attributes,
                expected: Some((e.expected_verdict.to_string(), e.expected_hybrid)),
            })
            .collect(),
    };

    let mut report = Report::new(
        "classify",
        &["name", "verdict", "hybrid", "expected", "matches", "violations", "rationale"],
    );
    let mut flagged = 0;
    for input in &inputs {
        let class = classify(&input.attributes);
        let violations = check_consistency(&input.attributes);
        let matches = input
            .expected
            .as_ref()
            .map(|(v, h)| *v == class.verdict.to_string() && *h == class.hybrid);
        if matches == Some(false) || !violations.is_empty() {
            flagged += 1;
        }
        let expected = input
            .expected
            .as_ref()
            .map(|(v, h)| if *h { format!("{v} (hybrid)") } else { v.clone() });
        let violation_text: Vec<String> = violations
            .iter()
            .map(|v| format!("{}: {} [{}]", v.rule, v.detail, v.citation))
            .collect();
        report.push(vec![
            input.name.clone().into(),
            class.verdict.to_string().into(),
            class.hybrid.into(),
            expected.into(),
            matches.into(),
            if violation_text.is_empty() { Cell::Empty } else { violation_text.join("; ").into() },
            class.rationale.join("; ").into(),
        ]);
    }
    report
        .meta("source", if args.attributes.is_some() { "attributes" } else { "catalog" })
        .meta("operators", inputs.len())
        .meta("flagged", flagged);
    Ok(Outcome {
        report,
        flagged,
        default_format: Format::Table,
        raw_json: None,
    })
}
