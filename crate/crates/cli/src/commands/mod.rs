//! One module per subcommand. Each returns an [`Outcome`]: the report plus
//! the number of rows that failed their numerical checks.

mod classify;
mod collapse;
mod convergence;
mod enumerate;
mod export;
mod growth;
mod probe;
mod theorem;

use anyhow::{bail, ensure, Context as _, Result};
use illposed_core::operators::{
    block_product, compose, diagonal, diagonal_on, embedding, harmonic_weights, identity,
    injective_counterexample, mazur, Decay,
};
use illposed_core::{DirectionSet, EnumerationParams, TruncatedOperator};
use nalgebra::DVector;
use rayon::prelude::*;

use crate::args::{Command, Format};
use crate::parse::{EtaSpec, OperatorSpec};
use crate::report::{Cell, Report};

pub struct Context {
    pub seed: u64,
    pub jobs: usize,
}

impl Context {
    /// Maps `f` over independent grid cells, on `jobs` threads when asked.
    /// Results keep the input order, so output does not depend on `jobs`.
    pub fn map<T, R, F>(&self, items: &[T], f: F) -> Result<Vec<R>>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Result<R> + Sync + Send,
    {
        if self.jobs <= 1 {
            return items.iter().map(f).collect();
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.jobs)
            .build()
            .context("building the worker pool")?;
        pool.install(|| items.par_iter().map(f).collect())
    }
}

pub struct Outcome {
    pub report: Report,
    /// Rows that did not pass their checks; a non-zero count maps to exit 3.
    pub flagged: usize,
    pub default_format: Format,
    /// Replaces the generic JSON rendering when set.
    pub raw_json: Option<String>,
}

impl Outcome {
    fn csv(report: Report, flagged: usize) -> Self {
        Self {
            report,
            flagged,
            default_format: Format::Csv,
            raw_json: None,
        }
    }

    pub fn render(&self, format: Option<Format>) -> String {
        match (format.unwrap_or(self.default_format), &self.raw_json) {
            (Format::Json, Some(raw)) => raw.clone(),
            (format, _) => self.report.render(format),
        }
    }
}

pub fn dispatch(command: &Command, ctx: &Context) -> Result<Outcome> {
    let mut outcome = match command {
        Command::Enumerate(a) => enumerate::run(a)?,
        Command::VerifyTheorem(a) => theorem::run(a, ctx)?,
        Command::Collapse(a) => collapse::run(a, ctx)?,
        Command::Probe(a) => probe::run(a)?,
        Command::Classify(a) => classify::run(a)?,
        Command::Convergence(a) => convergence::run(a, ctx)?,
        Command::Growth(a) => growth::run(a, ctx)?,
        Command::ExportOperator(a) => export::run(a)?,
    };
    outcome.report.meta.insert(0, ("seed".into(), Cell::Int(ctx.seed as i64).into()));
    Ok(outcome)
}

fn params(q: Option<f64>, support: Option<usize>, entry: Option<i64>) -> Result<EnumerationParams> {
    let d = EnumerationParams::default();
    Ok(EnumerationParams::new(
        q.unwrap_or(d.q()),
        support.unwrap_or(d.max_support()),
        entry.unwrap_or(d.max_entry()),
    )?)
}

/// Mazur operator on the first `depth` directions, with just enough rows.
fn mazur_prefix(params: EnumerationParams, depth: usize) -> Result<(DirectionSet, TruncatedOperator)> {
    let set = DirectionSet::prefix(params, depth)?;
    let op = mazur_on(&set)?;
    Ok((set, op))
}

fn mazur_on(set: &DirectionSet) -> Result<TruncatedOperator> {
    ensure!(!set.is_empty(), "empty direction set");
    Ok(mazur(set.as_slice(), set.len(), set.max_support_len(set.len()))?)
}

/// Builds a named operator. Direction-based operators use `set`; the others
/// are `n × n` truncations (per block for products).
fn build_operator(spec: OperatorSpec, n: usize, set: Option<&DirectionSet>) -> Result<TruncatedOperator> {
    ensure!(n >= 1, "truncation size must be at least 1");
    let b = || -> Result<TruncatedOperator> {
        mazur_on(set.context("this operator needs enumerated directions")?)
    };
    let c = |m: usize| diagonal_on(2.0, &harmonic_weights(m), Decay::Vanishing);
    Ok(match spec {
        OperatorSpec::Mazur => b()?,
        OperatorSpec::Diag => diagonal(&harmonic_weights(n), Decay::Vanishing)?,
        OperatorSpec::Injective => injective_counterexample(n)?,
        OperatorSpec::Identity => identity(2.0, n)?,
        OperatorSpec::Embedding => embedding(2.0, 4.0, n)?,
        OperatorSpec::DiagAfterMazur => {
            let b = b()?;
            compose(&c(b.n_rows())?, &b)?
        }
        OperatorSpec::EmbeddingAfterMazur => {
            let b = b()?;
            compose(&embedding(2.0, 4.0, b.n_rows())?, &b)?
        }
        OperatorSpec::MazurBesideIdentity => block_product(&b()?, &identity(2.0, n)?)?,
        OperatorSpec::D1 => block_product(&c(n)?, &identity(2.0, n)?)?,
        OperatorSpec::D2 => block_product(&identity(2.0, n)?, &c(n)?)?,
        OperatorSpec::D2AfterD1 => {
            let d1 = block_product(&c(n)?, &identity(2.0, n)?)?;
            let d2 = block_product(&identity(2.0, n)?, &c(n)?)?;
            compose(&d2, &d1)?
        }
    })
}

/// Vector of length `dim` described by `spec`. `zeta:K` needs the direction set.
fn resolve_vector(spec: &EtaSpec, dim: usize, set: Option<&DirectionSet>) -> Result<DVector<f64>> {
    let mut v = DVector::zeros(dim);
    match spec {
        EtaSpec::Zeta(k) => {
            let set = set.context("zeta:K needs an operator built from enumerated directions")?;
            let dir = set.get(*k)?;
            ensure!(
                dir.support_len() <= dim,
                "direction {k} needs {} coordinates, only {dim} available",
                dir.support_len()
            );
            v.rows_mut(0, dir.support_len()).copy_from_slice(dir.realized());
        }
        EtaSpec::Unit(k) => {
            ensure!(*k <= dim, "e:{k} lies outside the {dim} available coordinates");
            v[k - 1] = 1.0;
        }
        EtaSpec::Ones => v.fill(1.0 / (dim as f64).sqrt()),
        EtaSpec::Values(values) => {
            if values.len() > dim {
                bail!("{} values given for {dim} coordinates", values.len());
            }
            v.rows_mut(0, values.len()).copy_from_slice(values);
        }
    }
    Ok(v)
}

fn join_ints<T: ToString>(values: &[T]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_named_operator_builds() {
        let (set, _) = mazur_prefix(EnumerationParams::default(), 30).unwrap();
        for name in ["B", "diag", "injective", "identity", "embedding", "C∘B", "E∘B", "(B,I)", "D1", "D2", "D2∘D1"] {
            let spec: OperatorSpec = name.parse().unwrap();
            let op = build_operator(spec, 8, Some(&set)).unwrap();
            assert!(op.n_cols() >= 8, "{name}");
        }
        assert!(build_operator(OperatorSpec::Mazur, 8, None).is_err());
    }

    #[test]
    fn vectors_resolve_against_dimensions() {
        let (set, _) = mazur_prefix(EnumerationParams::default(), 30).unwrap();
        let v = resolve_vector(&EtaSpec::Zeta(1), 3, Some(&set)).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-15);
        assert!(resolve_vector(&EtaSpec::Unit(4), 3, None).is_err());
        assert!(resolve_vector(&EtaSpec::Values(vec![1.0; 4]), 3, None).is_err());
        let ones = resolve_vector(&EtaSpec::Ones, 4, None).unwrap();
        assert!((ones.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parallel_map_keeps_order() {
        let ctx = Context { seed: 42, jobs: 3 };
        let items: Vec<usize> = (0..50).collect();
        let out = ctx.map(&items, |&i| Ok(i * i)).unwrap();
        assert_eq!(out, items.iter().map(|i| i * i).collect::<Vec<_>>());
    }
}
