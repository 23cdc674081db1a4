//! Minimizers for fixed data as the Mazur truncation deepens.

use anyhow::{ensure, Result};
use illposed_core::tikhonov::{collapse_experiment, padded_l1_distance, CollapseRow};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{params, Context, Outcome};
use crate::args::CollapseArgs;
use crate::parse::YSpec;
use crate::report::{Cell, Meta, Report};

/// Unit-norm vector with `n` seeded uniform entries in (-1, 1).
pub fn random_unit(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

pub fn run(args: &CollapseArgs, ctx: &Context) -> Result<Outcome> {
    let params = params(None, args.support, args.entry)?;
    let y = match args.y.clone().unwrap_or(YSpec::Random(3)) {
        YSpec::Random(n) => random_unit(n, ctx.seed),
        YSpec::Values(v) => v,
    };
    let alpha = args.alpha.unwrap_or(0.1);
    let depths = args.depths.clone().map_or(vec![50, 200, 800, 3200], |l| l.0);
    let probe = args.probe.clone().map_or(vec![1, 2, 3, 4, 5], |l| l.0);
    let tol = args.tol.unwrap_or(1e-10);
    let max_iter = args.max_iter.unwrap_or(100_000);
    ensure!(alpha > 0.0 && alpha.is_finite(), "alpha must be positive, got {alpha}");
    ensure!(probe.iter().all(|&j| j >= 1), "probe coordinates are 1-based");

    let rows: Vec<CollapseRow> = ctx
        .map(&depths, |&d| Ok(collapse_experiment(&y, alpha, params, &[d], &probe, tol, max_iter)?))?
        .into_iter()
        .flatten()
        .collect();

    let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    let bound = 0.5 * (y_norm - alpha);
    let distances: Vec<Option<f64>> = std::iter::once(None)
        .chain(rows.windows(2).map(|w| Some(padded_l1_distance(&w[0].x, &w[1].x))))
        .collect();
    let min_distinct = rows
        .windows(2)
        .zip(&distances[1..])
        .filter(|(w, _)| w[0].support_index != w[1].support_index)
        .filter_map(|(_, d)| *d)
        .fold(None, |m: Option<f64>, d| Some(m.map_or(d, |m| m.min(d))));

    let mut columns = vec![
        "depth".to_string(),
        "support_index".into(),
        "support_size".into(),
        "best_index".into(),
        "best_correlation".into(),
        "beta".into(),
        "l1_norm".into(),
    ];
    columns.extend(probe.iter().map(|j| format!("x_{j}")));
    columns.extend(
        ["distance_to_previous", "objective", "residual", "converged"].map(String::from),
    );
    let mut report = Report::new("collapse", &[]);
    report.columns = columns;
    let flagged = rows.iter().filter(|r| !r.converged).count();
    report
        .meta("y", Meta::floats(&y))
        .meta("y_norm", y_norm)
        .meta("alpha", alpha)
        .meta("support", params.max_support())
        .meta("entry", params.max_entry() as usize)
        .meta("max_probe_value", rows.iter().flat_map(|r| &r.probe_values).fold(0.0, |m: f64, v| m.max(v.abs())))
        .meta("min_l1_norm", rows.iter().map(|r| r.l1_norm).fold(f64::INFINITY, f64::min))
        .meta("separation_bound", bound)
        .meta("min_distinct_support_distance", min_distinct)
        .meta("unconverged", flagged);
    for (r, d) in rows.iter().zip(&distances) {
        let mut row: Vec<Cell> = vec![
            r.depth.into(),
            r.support_index.into(),
            r.support_size.into(),
            r.best_index.into(),
            r.best_correlation.into(),
            r.beta.into(),
            r.l1_norm.into(),
        ];
        row.extend(r.probe_values.iter().map(|&v| Cell::Float(v)));
        row.extend([(*d).into(), r.objective.into(), r.residual.into(), r.converged.into()]);
        report.push(row);
    }
    Ok(Outcome::csv(report, flagged))
}
