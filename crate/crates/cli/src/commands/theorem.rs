//! Solver output against the closed-form minimizers for data `y = λ ζ^(k)`.

use anyhow::{ensure, Result};
use illposed_core::tikhonov::{
    check_closed_form, check_gamma_family, interior_gammas, soft_threshold, ClosedFormCheck,
};

use super::{mazur_prefix, params, Context, Outcome};
use crate::args::VerifyArgs;
use crate::report::{Cell, Report};

pub const DEVIATION_TOL: f64 = 1e-8;
pub const IDENTITY_TOL: f64 = 1e-12;
pub const RESIDUAL_TOL: f64 = 1e-10;

const DEFAULT_LAMBDAS: [f64; 6] = [-3.0, -1.0, -0.2, 0.2, 1.0, 3.0];

struct CaseRow {
    check: ClosedFormCheck,
    identity_rel: f64,
    gamma_spread: Option<f64>,
    gamma_residual: Option<f64>,
}

impl CaseRow {
    fn passes(&self) -> bool {
        self.check.converged
            && self.check.deviation <= DEVIATION_TOL
            && self.check.residual <= RESIDUAL_TOL
            && self.identity_rel <= IDENTITY_TOL
            && self.gamma_spread.is_none_or(|s| s <= IDENTITY_TOL)
            && self.gamma_residual.is_none_or(|r| r <= RESIDUAL_TOL)
    }
}

/// Five indices spread over the truncation: 1, 7, 50, depth/2 + 1, depth − 1.
fn default_indices(depth: usize) -> Vec<usize> {
    let mut out: Vec<usize> = [1, 7, 50, depth / 2 + 1, depth.saturating_sub(1)]
        .into_iter()
        .filter(|&k| k >= 1 && k <= depth)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

pub fn run(args: &VerifyArgs, ctx: &Context) -> Result<Outcome> {
    let params = params(None, args.support, args.entry)?;
    let depth = args.depth.unwrap_or(400);
    let indices = args.indices.clone().map_or_else(|| default_indices(depth), |l| l.0);
    let lambdas = args.lambdas.clone().map_or(DEFAULT_LAMBDAS.to_vec(), |l| l.0);
    let alphas = args.alphas.clone().map_or(vec![0.3], |l| l.0);
    let n_gammas = args.gammas.unwrap_or(5);
    let tol = args.tol.unwrap_or(1e-12);
    let max_iter = args.max_iter.unwrap_or(10_000);
    for &k in &indices {
        ensure!(k >= 1 && k <= depth, "index {k} lies outside the truncation 1..={depth}");
    }
    for &a in &alphas {
        ensure!(a > 0.0 && a.is_finite(), "alpha must be positive, got {a}");
    }
    ensure!(lambdas.iter().all(|l| l.is_finite()), "lambda values must be finite");

    let (set, op) = mazur_prefix(params, depth)?;
    let mut cells = Vec::with_capacity(alphas.len() * indices.len() * lambdas.len());
    for &a in &alphas {
        for &k in &indices {
            cells.extend(lambdas.iter().map(|&l| (a, k, l)));
        }
    }
    let rows = ctx.map(&cells, |&(alpha, k, lambda)| {
        let check = check_closed_form(&op, &set, k, lambda, alpha, tol, max_iter)?;
        let beta = soft_threshold(lambda, alpha);
        let expected = 0.5 * lambda * lambda - 0.5 * beta * beta;
        let identity_rel = if expected != 0.0 {
            check.identity_error / expected.abs()
        } else {
            check.identity_error
        };
        let (gamma_spread, gamma_residual) = match check.antipode {
            Some(_) if lambda.abs() > alpha && n_gammas > 0 => {
                let gammas = interior_gammas(lambda, alpha, n_gammas);
                let family = check_gamma_family(&op, &set, k, lambda, alpha, &gammas)?;
                let spread = (family.objective_max - family.objective_min) / expected.abs();
                (Some(spread), Some(family.max_residual))
            }
            _ => (None, None),
        };
        Ok(CaseRow {
            check,
            identity_rel,
            gamma_spread,
            gamma_residual,
        })
    })?;

    let mut report = Report::new(
        "verify-theorem",
        &[
            "k",
            "lambda",
            "alpha",
            "antipode",
            "gamma",
            "deviation",
            "residual",
            "objective",
            "identity_rel_error",
            "gamma_objective_spread",
            "gamma_max_residual",
            "iterations",
            "converged",
            "pass",
        ],
    );
    let max_of = |f: &dyn Fn(&CaseRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let flagged = rows.iter().filter(|r| !r.passes()).count();
    report
        .meta("support", params.max_support())
        .meta("entry", params.max_entry() as usize)
        .meta("depth", depth)
        .meta("cases", rows.len())
        .meta("max_deviation", max_of(&|r| r.check.deviation))
        .meta("max_residual", max_of(&|r| r.check.residual))
        .meta("max_identity_rel_error", max_of(&|r| r.identity_rel))
        .meta("deviation_tol", DEVIATION_TOL)
        .meta("failed", flagged)
        .meta("status", if flagged == 0 { "pass" } else { "fail" });
    for r in &rows {
        let c = &r.check;
        report.push(vec![
            c.k.into(),
            c.lambda.into(),
            c.alpha.into(),
            c.antipode.into(),
            c.gamma.into(),
            c.deviation.into(),
            c.residual.into(),
            c.objective.into(),
            r.identity_rel.into(),
            r.gamma_spread.into(),
            r.gamma_residual.into(),
            c.iterations.into(),
            c.converged.into(),
            Cell::Bool(r.passes()),
        ]);
    }
    Ok(Outcome::csv(report, flagged))
}
