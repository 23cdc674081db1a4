//! Command-line surface. Every option is optional so that values from a JSON
//! config file can fill the gaps; explicit flags always win.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::parse::{EtaSpec, List, OperatorSpec, YSpec};

#[derive(Parser, Debug)]
#[command(name = "illposed", version, about = "Experiments on l1-regularized ill-posed operator equations")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct GlobalArgs {
    /// Output format [default: csv, table for `classify`, json for `export-operator`]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// JSON file with option values; flags given on the command line take precedence
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Seed for generated data [default: 42]
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads for independent grid cells [default: 1]
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the rational unit-sphere directions in enumeration order
    Enumerate(EnumerateArgs),
    /// Compare solver output with the closed-form minimizers over a (k, lambda) grid
    VerifyTheorem(VerifyArgs),
    /// Track minimizers for fixed data as the enumeration deepens
    Collapse(CollapseArgs),
    /// Pair a functional with the images of the unit vectors
    Probe(ProbeArgs),
    /// Classify operators by posedness
    Classify(ClassifyArgs),
    /// Regularized solutions under shrinking noise with alpha proportional to delta
    Convergence(ConvergenceArgs),
    /// Smallest singular values and inverse growth of square truncations
    Growth(GrowthArgs),
    /// Write a truncated operator with its attributes
    ExportOperator(ExportArgs),
}

/// Fills every `None` field of `$dst` from `$src`.
macro_rules! fill_from {
    ($dst:expr, $src:expr; $($field:ident),+ $(,)?) => {
        $( if $dst.$field.is_none() { $dst.$field = $src.$field; } )+
    };
}
pub(crate) use fill_from;

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct EnumerateArgs {
    /// Norm exponent of the target sphere [default: 2]
    #[arg(long)]
    pub q: Option<f64>,
    /// Largest support length s [default: 3]
    #[arg(long)]
    pub support: Option<usize>,
    /// Largest absolute integer entry m [default: 10]
    #[arg(long)]
    pub entry: Option<i64>,
    /// Keep only the first N directions
    #[arg(long)]
    pub limit: Option<usize>,
}

impl EnumerateArgs {
    pub fn fill(&mut self, other: Self) {
        fill_from!(self, other; q, support, entry, limit);
    }
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct VerifyArgs {
    /// Largest support length of the enumeration [default: 3]
    #[arg(long)]
    pub support: Option<usize>,
    /// Largest absolute entry of the enumeration [default: 10]
    #[arg(long)]
    pub entry: Option<i64>,
    /// Number of directions in the truncation [default: 400]
    #[arg(long)]
    pub depth: Option<usize>,
    /// Direction indices k [default: 1,7,50,depth/2+1,depth-1]
    #[arg(long)]
    pub indices: Option<List<usize>>,
    /// Scalings lambda of the data y = lambda zeta^(k) [default: -3,-1,-0.2,0.2,1,3]
    #[arg(long, allow_hyphen_values = true)]
    pub lambdas: Option<List<f64>>,
    /// Regularization parameters [default: 0.3]
    #[arg(long)]
    pub alphas: Option<List<f64>>,
    /// Interior gamma values tested per antipodal row [default: 5]
    #[arg(long)]
    pub gammas: Option<usize>,
    /// Solver tolerance on the optimality residual [default: 1e-12]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Solver sweep limit [default: 10000]
    #[arg(long)]
    pub max_iter: Option<usize>,
}

impl VerifyArgs {
    pub fn fill(&mut self, other: Self) {
        fill_from!(self, other; support, entry, depth, indices, lambdas, alphas, gammas, tol, max_iter);
    }
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct CollapseArgs {
    /// Data vector: comma-separated values or randomN (N seeded uniform entries, unit norm) [default: random3]
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<YSpec>,
    /// Regularization parameter [default: 0.1]
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Enumeration depths [default: 50,200,800,3200]
    #[arg(long)]
    pub depths: Option<List<usize>>,
    /// Fixed coordinates whose values are tracked [default: 1,2,3,4,5]
    #[arg(long)]
    pub probe: Option<List<usize>>,
    /// Largest support length of the enumeration [default: 3]
    #[arg(long)]
    pub support: Option<usize>,
    /// Largest absolute entry of the enumeration [default: 10]
    #[arg(long)]
    pub entry: Option<i64>,
    /// Solver tolerance [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Solver sweep limit [default: 100000]
    #[arg(long)]
    pub max_iter: Option<usize>,
}

impl CollapseArgs {
    pub fn fill(&mut self, other: Self) {
        fill_from!(self, other; y, alpha, depths, probe, support, entry, tol, max_iter);
    }
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ProbeArgs {
    /// Operator: B, diag, injective, identity, embedding, C∘B (CB) or E∘B (EB) [default: B]
    #[arg(long)]
    pub operator: Option<OperatorSpec>,
    /// Functional: zeta:K, e:K, ones or comma-separated values [default: zeta:1 for B, chosen automatically for compositions, e:1 otherwise]
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<EtaSpec>,
    /// Number of unit vectors paired [default: 2000]
    #[arg(long)]
    pub n: Option<usize>,
    /// Persistence threshold on the tail supremum [default: 0.5]
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Largest support length of the enumeration [default: 3]
    #[arg(long)]
    pub support: Option<usize>,
    /// Largest absolute entry of the enumeration [default: 10]
    #[arg(long)]
    pub entry: Option<i64>,
}

impl ProbeArgs {
    pub fn fill(&mut self, other: Self) {
        fill_from!(self, other; operator, eta, n, threshold, support, entry);
    }
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ClassifyArgs {
    /// Classify the built-in catalog of named operators (the default)
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub catalog: Option<bool>,
    /// Classify attribute records from a JSON file (one object or a list)
    #[arg(long, conflicts_with = "catalog")]
    pub attributes: Option<std::path::PathBuf>,
}

impl ClassifyArgs {
    pub fn fill(&mut self, other: Self) {
        fill_from!(self, other; catalog, attributes);
    }
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConvergenceArgs {
    /// Operator: diag, B, injective or embedding [default: diag]
    #[arg(long)]
    pub operator: Option<OperatorSpec>,
    /// Truncation size (directions for B) [default: 64, 2000 for B]
    #[arg(long)]
    pub n: Option<usize>,
    /// Noise levels [default: 1e-1,1e-2,1e-3,1e-4,1e-5]
    #[arg(long)]
    pub deltas: Option<List<f64>>,
    /// Proportionality constant c in alpha = c * delta [default: 1]
    #[arg(long)]
    pub c: Option<f64>,
    /// Exact solution: e:K or comma-separated values [default: e:1]
    #[arg(long, allow_hyphen_values = true)]
    pub x_true: Option<EtaSpec>,
    /// Largest support length of the enumeration for B [default: 2]
    #[arg(long)]
    pub support: Option<usize>,
    /// Largest absolute entry of the enumeration for B [default: 32]
    #[arg(long)]
    pub entry: Option<i64>,
    /// Solver tolerance [default: 1e-10]
    #[arg(long)]
    pub tol: Option<f64>,
    /// Solver sweep limit [default: 100000]
    #[arg(long)]
    pub max_iter: Option<usize>,
}

impl ConvergenceArgs {
    pub fn fill(&mut self, other: Self) {
        fill_from!(self, other; operator, n, deltas, c, x_true, support, entry, tol, max_iter);
    }
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct GrowthArgs {
    /// Operator: diag, identity or injective [default: diag]
    #[arg(long)]
    pub operator: Option<OperatorSpec>,
    /// Truncation sizes [default: 8,64,512]
    #[arg(long)]
    pub sizes: Option<List<usize>>,
}

impl GrowthArgs {
    pub fn fill(&mut self, other: Self) {
        fill_from!(self, other; operator, sizes);
    }
}

#[derive(Args, Debug, Default, Clone, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExportArgs {
    /// Operator: B, diag, injective, identity, embedding, C∘B, E∘B, (B,I), D1, D2 or D2∘D1 [default: B]
    #[arg(long)]
    pub operator: Option<OperatorSpec>,
    /// Truncation size (directions for B) [default: 16]
    #[arg(long)]
    pub n: Option<usize>,
    /// Build B from a direction list written by `enumerate --format json`
    #[arg(long)]
    pub directions: Option<PathBuf>,
    /// Largest support length of the enumeration [default: 3]
    #[arg(long)]
    pub support: Option<usize>,
    /// Largest absolute entry of the enumeration [default: 10]
    #[arg(long)]
    pub entry: Option<i64>,
}

impl ExportArgs {
    pub fn fill(&mut self, other: Self) {
        fill_from!(self, other; operator, n, directions, support, entry);
    }
}
