//! Smallest singular values of square truncations and `‖A_n⁻¹ e^(n)‖₁`.

use anyhow::{ensure, Result};
use illposed_core::diagnostics::{inverse_image_l1, pseudoinverse_growth};

use super::{build_operator, Context, Outcome};
use crate::args::GrowthArgs;
use crate::parse::OperatorSpec;
use crate::report::Report;

pub fn run(args: &GrowthArgs, ctx: &Context) -> Result<Outcome> {
    let spec = args.operator.unwrap_or(OperatorSpec::Diag);
    ensure!(!spec.uses_directions(), "growth needs a square truncation; {spec} is not square");
    let sizes = args.sizes.clone().map_or(vec![8, 64, 512], |l| l.0);
    let rows = ctx.map(&sizes, |&n| {
        let op = build_operator(spec, n, None)?;
        let row = pseudoinverse_growth([&op])?.remove(0);
        let inverse = if row.growth.is_finite() { Some(inverse_image_l1(&op, n)?) } else { None };
        Ok((row, inverse))
    })?;
    let mut report = Report::new(
        "growth",
        &["n", "min_singular_value", "growth", "inverse_image_l1"],
    );
    report.meta("operator", spec.name());
    for (row, inverse) in rows {
        report.push(vec![row.n.into(), row.min_singular_value.into(), row.growth.into(), inverse.into()]);
    }
    Ok(Outcome::csv(report, 0))
}
