use anyhow::{ensure, Result};
use illposed_core::sphere_enum::{directions_to_json, Directions};

use super::{join_ints, params, Outcome};
use crate::args::EnumerateArgs;
use crate::report::{format_float, Report};

pub fn run(args: &EnumerateArgs) -> Result<Outcome> {
    let params = params(args.q, args.support, args.entry)?;
    if let Some(limit) = args.limit {
        ensure!(limit >= 1, "--limit must be at least 1");
    }
    let directions: Vec<_> = Directions::new(params)
        .take(args.limit.unwrap_or(usize::MAX))
        .collect();
    let mut report = Report::new("enumerate", &["index", "support_len", "canon", "realized"]);
    report
        .meta("q", params.q())
        .meta("support", params.max_support())
        .meta("entry", params.max_entry() as usize)
        .meta("count", directions.len());
    for d in &directions {
        let realized: Vec<String> = d.realized().iter().map(|v| format_float(*v)).collect();
        report.push(vec![
            d.index().into(),
            d.support_len().into(),
            join_ints(d.canon()).into(),
            realized.join(" ").into(),
        ]);
    }
    let mut outcome = Outcome::csv(report, 0);
    outcome.raw_json = Some(directions_to_json(&directions) + "\n");
    Ok(outcome)
}
