//! Pairings `⟨η, A e^(k)⟩` for k = 1..n.

use anyhow::{ensure, Result};
use illposed_core::diagnostics::{composition_probe, weak_star_probe, PERSISTENCE_THRESHOLD};
use illposed_core::operators::{diagonal_on, embedding, harmonic_weights, Decay};

use super::{build_operator, mazur_prefix, params, resolve_vector, Outcome};
use crate::args::ProbeArgs;
use crate::parse::{EtaSpec, OperatorSpec};
use crate::report::Report;

pub fn run(args: &ProbeArgs) -> Result<Outcome> {
    let spec = args.operator.unwrap_or(OperatorSpec::Mazur);
    let n = args.n.unwrap_or(2000);
    let threshold = args.threshold.unwrap_or(PERSISTENCE_THRESHOLD);
    ensure!(n >= 1, "--n must be at least 1");
    ensure!(threshold > 0.0 && threshold.is_finite(), "threshold must be positive");

    let set = if spec.uses_directions() {
        Some(mazur_prefix(params(None, args.support, args.entry)?, n)?.0)
    } else {
        None
    };
    let op = build_operator(spec, n, set.as_ref())?;
    let automatic = matches!(spec, OperatorSpec::DiagAfterMazur | OperatorSpec::EmbeddingAfterMazur);
    let (report, eta_label) = match (&args.eta, automatic) {
        (None, true) => {
            let b = build_operator(OperatorSpec::Mazur, n, set.as_ref())?;
            let outer = if spec == OperatorSpec::DiagAfterMazur {
                diagonal_on(2.0, &harmonic_weights(b.n_rows()), Decay::Vanishing)?
            } else {
                embedding(2.0, 4.0, b.n_rows())?
            };
            (composition_probe(&outer, &b, n)?, "C zeta* / |C zeta*|".to_string())
        }
        (eta, _) => {
            let default = if spec == OperatorSpec::Mazur { EtaSpec::Zeta(1) } else { EtaSpec::Unit(1) };
            let eta_spec = eta.clone().unwrap_or(default);
            let eta = resolve_vector(&eta_spec, op.n_rows(), set.as_ref())?;
            (weak_star_probe(&op, &eta, n)?, eta_spec.to_string())
        }
    };
    let report_data = report.with_threshold(threshold);

    let mut out = Report::new("probe", &["n", "pairing"]);
    out.meta("operator", report_data.label.clone())
        .meta("eta", eta_label)
        .meta("n", n)
        .meta("sup_tail", report_data.sup_tail)
        .meta("threshold", report_data.threshold)
        .meta("verdict", report_data.verdict.to_string());
    for (i, p) in report_data.pairings.iter().enumerate() {
        out.push(vec![(i + 1).into(), (*p).into()]);
    }
    Ok(Outcome::csv(out, 0))
}
