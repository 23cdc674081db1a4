//! Truncated operators as JSON records or as nonzero `(row, col, value)` triples.

use anyhow::{ensure, Context as _, Result};
use illposed_core::{DirectionSet, OperatorAttributes};

use super::{build_operator, mazur_prefix, params, Outcome};
use crate::args::{ExportArgs, Format};
use crate::parse::OperatorSpec;
use crate::report::Report;

pub fn run(args: &ExportArgs) -> Result<Outcome> {
    let spec = args.operator.unwrap_or(OperatorSpec::Mazur);
    let (set, n) = match &args.directions {
        Some(path) => {
            ensure!(spec.uses_directions(), "{spec} is not built from directions");
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let all = DirectionSet::from_json(&text)
                .with_context(|| format!("parsing directions in {}", path.display()))?;
            let n = args.n.unwrap_or(all.len());
            ensure!(n >= 1 && n <= all.len(), "--n must lie in 1..={} for this file", all.len());
            let set = DirectionSet::from_directions(all.as_slice()[..n].to_vec())?;
            (Some(set), n)
        }
        None => {
            let n = args.n.unwrap_or(16);
            let set = if spec.uses_directions() {
                Some(mazur_prefix(params(None, args.support, args.entry)?, n)?.0)
            } else {
                None
            };
            (set, n)
        }
    };
    let op = build_operator(spec, n, set.as_ref())?;

    let mut report = Report::new("export-operator", &["row", "col", "value"]);
    report
        .meta("label", op.label().to_string())
        .meta("domain", op.domain().to_string())
        .meta("codomain", op.codomain().to_string())
        .meta("n_rows", op.n_rows())
        .meta("n_cols", op.n_cols());
    for (name, value) in OperatorAttributes::FIELD_NAMES.iter().zip(op.attributes().fields()) {
        report.meta(name, value.to_string());
    }
    let m = op.matrix();
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            if m[(i, j)] != 0.0 {
                report.push(vec![(i + 1).into(), (j + 1).into(), m[(i, j)].into()]);
            }
        }
    }
    Ok(Outcome {
        report,
        flagged: 0,
        default_format: Format::Json,
        raw_json: Some(op.to_json() + "\n"),
    })
}
