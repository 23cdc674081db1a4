//! `‖x_α^δ − x_true‖₁` under shrinking noise with `α = c·δ`.
//!
//! Operators that are not weak*-to-weak continuous run the same sweep without
//! the convergence guarantee; the header records which protocol ran.

use anyhow::{ensure, Result};
use illposed_core::tikhonov::{
    convergence_experiment, delta_sweep, support_drifts, uniform_noise, AlphaRule, ConvergenceRow,
};

use super::{build_operator, mazur_prefix, params, resolve_vector, Context, Outcome};
use crate::args::ConvergenceArgs;
use crate::parse::{EtaSpec, OperatorSpec};
use crate::report::{Meta, Report};

pub fn run(args: &ConvergenceArgs, ctx: &Context) -> Result<Outcome> {
    let spec = args.operator.unwrap_or(OperatorSpec::Diag);
    let deltas = args
        .deltas
        .clone()
        .map_or(vec![1e-1, 1e-2, 1e-3, 1e-4, 1e-5], |l| l.0);
    let c = args.c.unwrap_or(1.0);
    let tol = args.tol.unwrap_or(1e-10);
    let max_iter = args.max_iter.unwrap_or(100_000);
    ensure!(c > 0.0 && c.is_finite(), "c must be positive, got {c}");
    ensure!(deltas.iter().all(|d| *d > 0.0 && d.is_finite()), "noise levels must be positive");

    let (set, n) = if spec.uses_directions() {
        let n = args.n.unwrap_or(2000);
        let p = params(Some(2.0), Some(args.support.unwrap_or(2)), Some(args.entry.unwrap_or(32)))?;
        (Some(mazur_prefix(p, n)?.0), n)
    } else {
        (None, args.n.unwrap_or(64))
    };
    let op = build_operator(spec, n, set.as_ref())?;
    let x_spec = args.x_true.clone().unwrap_or(EtaSpec::Unit(1));
    ensure!(!matches!(x_spec, EtaSpec::Zeta(_)), "x_true lives in the domain; use e:K or values");
    let x_true = resolve_vector(&x_spec, op.n_cols(), None)?;
    let rule = AlphaRule::Proportional(c);
    let continuous = op.attributes().weakstar_to_weak_continuous.is_true();
    let noise = uniform_noise(op.n_rows());

    let rows: Vec<ConvergenceRow> = ctx
        .map(&deltas, |&delta| {
            Ok(if continuous {
                convergence_experiment(&op, &x_true, &[delta], rule, tol, max_iter)?
            } else {
                delta_sweep(&op, &x_true, &noise, &[delta], rule, tol, max_iter)?
            })
        })?
        .into_iter()
        .flatten()
        .collect();

    let mut by_delta: Vec<&ConvergenceRow> = rows.iter().collect();
    by_delta.sort_by(|a, b| b.delta.total_cmp(&a.delta));
    let monotone = by_delta.windows(2).all(|w| w[1].error_l1 <= w[0].error_l1);
    let final_error = by_delta.last().map_or(f64::NAN, |r| r.error_l1);
    let flagged = rows.iter().filter(|r| !r.converged).count();

    let mut report = Report::new(
        "convergence",
        &["delta", "alpha", "error_l1", "support_index", "support_size", "residual", "converged"],
    );
    report
        .meta("operator", op.label().to_string())
        .meta("n_rows", op.n_rows())
        .meta("n_cols", op.n_cols())
        .meta("weakstar_to_weak_continuous", op.attributes().weakstar_to_weak_continuous.to_string())
        .meta("protocol", if continuous { "convergence" } else { "unguaranteed" })
        .meta("x_true", x_spec.to_string())
        .meta("c", c)
        .meta("deltas", Meta::floats(&deltas))
        .meta("errors_monotone", monotone)
        .meta("support_drift", support_drifts(&rows))
        .meta("final_error", final_error)
        .meta("unconverged", flagged);
    for r in &rows {
        report.push(vec![
            r.delta.into(),
            r.alpha.into(),
            r.error_l1.into(),
            r.support_index.into(),
            r.support_size.into(),
            r.residual.into(),
            r.converged.into(),
        ]);
    }
    Ok(Outcome::csv(report, flagged))
}
