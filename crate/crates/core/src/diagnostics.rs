//! Finite-section witnesses for continuity and boundedness failures.
//!
//! A weak* probe pairs a fixed functional η with the images `A e^(n)` of the
//! unit vectors, which tend to zero weak* in ℓ¹. Pairings that stay away from
//! zero witness that `A` is not weak*-to-weak continuous. Growth diagnostics
//! track how fast inverses of injective truncations blow up.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{compose, TruncatedOperator};

/// Default cut-off on `sup_tail` separating persistent from decaying pairings.
pub const PERSISTENCE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeVerdict {
    ConvergesToZero,
    Persists,
}

impl std::fmt::Display for ProbeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ProbeVerdict::ConvergesToZero => "converges_to_zero",
            ProbeVerdict::Persists => "persists",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub label: String,
    pub eta: Vec<f64>,
    /// `⟨η, A e^(n)⟩` for n = 1..N.
    pub pairings: Vec<f64>,
    /// Largest `|pairing|` over the last `⌈N/2⌉` entries.
    pub sup_tail: f64,
    pub threshold: f64,
    pub verdict: ProbeVerdict,
}

impl ProbeReport {
    /// Re-derives the verdict from the raw pairings with another threshold.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = threshold;
        self.verdict = verdict_for(self.sup_tail, threshold);
        self
    }
}

fn verdict_for(sup_tail: f64, threshold: f64) -> ProbeVerdict {
    if sup_tail >= threshold {
        ProbeVerdict::Persists
    } else {
        ProbeVerdict::ConvergesToZero
    }
}

/// Largest magnitude over the last `⌈len/2⌉` entries.
pub fn sup_tail(pairings: &[f64]) -> f64 {
    let start = pairings.len() / 2;
    pairings[start..].iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Pairings of `eta` with the first `n` columns of `op`.
pub fn weak_star_probe(op: &TruncatedOperator, eta: &DVector<f64>, n: usize) -> Result<ProbeReport> {
    if eta.len() != op.n_rows() {
        return Err(Error::DimensionMismatch {
            context: "probe functional",
            expected: op.n_rows(),
            actual: eta.len(),
        });
    }
    if n == 0 || n > op.n_cols() {
        return Err(Error::invalid(
            "n",
            format!("probe depth must lie in 1..={}, got {n}", op.n_cols()),
        ));
    }
    if eta.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("probe functional"));
    }
    let pairings: Vec<f64> = op
        .matrix()
        .columns(0, n)
        .column_iter()
        .map(|c| c.dot(eta))
        .collect();
    let tail = sup_tail(&pairings);
    Ok(ProbeReport {
        label: op.label().to_string(),
        eta: eta.iter().copied().collect(),
        pairings,
        sup_tail: tail,
        threshold: PERSISTENCE_THRESHOLD,
        verdict: verdict_for(tail, PERSISTENCE_THRESHOLD),
    })
}

/// Probes `outer ∘ mazur` with `η = C ζ* / ‖C ζ*‖`, where `ζ*` is the
/// direction among the first `n` maximizing `‖C ζ‖` (smallest index on ties).
pub fn composition_probe(
    outer: &TruncatedOperator,
    mazur: &TruncatedOperator,
    n: usize,
) -> Result<ProbeReport> {
    if outer.matrix().iter().all(|v| *v == 0.0) {
        return Err(Error::Precondition {
            label: outer.label().to_string(),
            reason: "outer factor is identically zero".into(),
        });
    }
    let composed = compose(outer, mazur)?;
    if n == 0 || n > composed.n_cols() {
        return Err(Error::invalid(
            "n",
            format!("probe depth must lie in 1..={}, got {n}", composed.n_cols()),
        ));
    }
    let images = composed.matrix().columns(0, n);
    let mut best = (0, 0.0);
    for (j, c) in images.column_iter().enumerate() {
        let norm = c.norm();
        if norm > best.1 {
            best = (j, norm);
        }
    }
    if best.1 == 0.0 {
        return Err(Error::Precondition {
            label: outer.label().to_string(),
            reason: format!("outer factor annihilates the first {n} directions"),
        });
    }
    let eta = images.column(best.0) / best.1;
    weak_star_probe(&composed, &eta, n)
}

/// Smallest singular value of one truncation and the resulting inverse bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: usize,
    pub min_singular_value: f64,
    /// `1 / min_singular_value`; infinite for a numerically singular truncation.
    pub growth: f64,
}

/// Smallest singular values of a family of square truncations.
pub fn pseudoinverse_growth<'a, I>(family: I) -> Result<Vec<GrowthRow>>
where
    I: IntoIterator<Item = &'a TruncatedOperator>,
{
    family
        .into_iter()
        .map(|op| {
            if op.n_rows() != op.n_cols() {
                return Err(Error::DimensionMismatch {
                    context: "pseudoinverse growth (square truncation)",
                    expected: op.n_cols(),
                    actual: op.n_rows(),
                });
            }
            let n = op.n_cols();
            let sigma_min = min_singular_value(op.matrix());
            let sigma_max = op.matrix().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            let singular = sigma_min <= f64::EPSILON * n as f64 * sigma_max;
            Ok(GrowthRow {
                n,
                min_singular_value: sigma_min,
                growth: if singular { f64::INFINITY } else { 1.0 / sigma_min },
            })
        })
        .collect()
}

fn min_singular_value(matrix: &DMatrix<f64>) -> f64 {
    // Diagonal truncations are common and their singular values are exact.
    let n = matrix.nrows();
    let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || matrix[(i, j)] == 0.0));
    if diagonal {
        return (0..n).map(|i| matrix[(i, i)].abs()).fold(f64::INFINITY, f64::min);
    }
    matrix
        .singular_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// `A⁻¹ e^(k)` for a square, invertible truncation (1-based `k`).
///
/// Upper-triangular matrices use back substitution, everything else an LU
/// factorization.
pub fn inverse_image(op: &TruncatedOperator, k: usize) -> Result<DVector<f64>> {
    let n = op.n_cols();
    if op.n_rows() != n {
        return Err(Error::DimensionMismatch {
            context: "inverse image (square truncation)",
            expected: n,
            actual: op.n_rows(),
        });
    }
    if k == 0 || k > n {
        return Err(Error::IndexOutOfRange { index: k, len: n });
    }
    let mut e = DVector::zeros(n);
    e[k - 1] = 1.0;
    let m = op.matrix();
    let upper = (0..n).all(|i| (0..i).all(|j| m[(i, j)] == 0.0));
    let solved = if upper {
        m.solve_upper_triangular(&e)
    } else {
        m.clone().lu().solve(&e)
    };
    solved.ok_or_else(|| Error::Precondition {
        label: op.label().to_string(),
        reason: "truncation is singular".into(),
    })
}

/// `‖A⁻¹ e^(k)‖₁`.
pub fn inverse_image_l1(op: &TruncatedOperator, k: usize) -> Result<f64> {
    Ok(inverse_image(op, k)?.lp_norm(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{
        diagonal, diagonal_on, embedding, harmonic_weights, identity, injective_counterexample,
        mazur, Decay,
    };
    use crate::sphere_enum::{DirectionSet, EnumerationParams};

    fn mazur_b(depth: usize) -> TruncatedOperator {
        let set = DirectionSet::prefix(EnumerationParams::default(), depth).unwrap();
        mazur(set.as_slice(), depth, set.max_support_len(depth)).unwrap()
    }

    #[test]
    fn tail_uses_the_last_half() {
        assert_eq!(sup_tail(&[9.0, 0.1, -0.3]), 0.3);
        assert_eq!(sup_tail(&[9.0, 0.1, -0.3, 0.2]), 0.3);
        assert_eq!(sup_tail(&[0.7]), 0.7);
    }

    #[test]
    fn harmonic_diagonal_decays() {
        let d = diagonal(&harmonic_weights(200), Decay::Vanishing).unwrap();
        let eta = DVector::from_element(200, 1.0);
        let report = weak_star_probe(&d, &eta, 200).unwrap();
        for (n, p) in report.pairings.iter().enumerate() {
            assert_eq!(*p, 1.0 / (n + 1) as f64);
        }
        assert_eq!(report.verdict, ProbeVerdict::ConvergesToZero);
    }

    #[test]
    fn injective_counterexample_persists() {
        let a = injective_counterexample(300).unwrap();
        let mut eta = DVector::zeros(300);
        eta[0] = 1.0;
        let report = weak_star_probe(&a, &eta, 300).unwrap();
        assert!(report.pairings.iter().all(|p| *p == 1.0));
        assert_eq!(report.verdict, ProbeVerdict::Persists);
    }

    #[test]
    fn mazur_probe_persists() {
        let b = mazur_b(400);
        let eta = b.column(1).unwrap();
        let report = weak_star_probe(&b, &eta, 400).unwrap();
        assert_eq!(report.verdict, ProbeVerdict::Persists);
        assert!(report.sup_tail >= 0.9);
        assert_eq!(report.clone().with_threshold(2.0).verdict, ProbeVerdict::ConvergesToZero);
    }

    #[test]
    fn probe_validation() {
        let b = mazur_b(20);
        assert!(weak_star_probe(&b, &DVector::zeros(b.n_rows() + 1), 5).is_err());
        assert!(weak_star_probe(&b, &DVector::zeros(b.n_rows()), 21).is_err());
        assert!(weak_star_probe(&b, &DVector::zeros(b.n_rows()), 0).is_err());
    }

    #[test]
    fn composition_probe_with_identity_is_plain_probe() {
        let b = mazur_b(300);
        let i = identity(2.0, b.n_rows()).unwrap();
        let composed = composition_probe(&i, &b, 300).unwrap();
        let plain = weak_star_probe(&b, &b.column(1).unwrap(), 300).unwrap();
        assert_eq!(composed.pairings, plain.pairings);
        assert_eq!(composed.verdict, ProbeVerdict::Persists);
    }

    #[test]
    fn composition_probe_through_compact_and_embedding() {
        let b = mazur_b(300);
        let rows = b.n_rows();
        let c = diagonal_on(2.0, &harmonic_weights(rows), Decay::Vanishing).unwrap();
        assert_eq!(composition_probe(&c, &b, 300).unwrap().verdict, ProbeVerdict::Persists);

        let e = embedding(2.0, 4.0, rows).unwrap();
        let via_e = composition_probe(&e, &b, 300).unwrap();
        let via_i = composition_probe(&identity(2.0, rows).unwrap(), &b, 300).unwrap();
        assert_eq!(via_e.pairings, via_i.pairings);
    }

    #[test]
    fn zero_outer_factor_is_rejected() {
        let b = mazur_b(10);
        let zero = TruncatedOperator::new(
            "Z",
            DMatrix::zeros(b.n_rows(), b.n_rows()),
            b.codomain().clone(),
            b.codomain().clone(),
            Default::default(),
        )
        .unwrap();
        assert!(composition_probe(&zero, &b, 10).is_err());
    }

    #[test]
    fn growth_of_diagonal_and_identity() {
        let family: Vec<_> = [8, 64, 512]
            .iter()
            .map(|&n| diagonal(&harmonic_weights(n), Decay::Vanishing).unwrap())
            .collect();
        for row in pseudoinverse_growth(&family).unwrap() {
            assert!((row.growth - row.n as f64).abs() <= 1e-10 * row.n as f64);
        }
        let ids: Vec<_> = [4, 16].iter().map(|&n| identity(1.0, n).unwrap()).collect();
        assert!(pseudoinverse_growth(&ids).unwrap().iter().all(|r| r.growth == 1.0));
    }

    #[test]
    fn singular_truncation_reports_infinite_growth() {
        let op = TruncatedOperator::new(
            "S",
            DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 1.0]),
            crate::operators::SpaceTag::ell(1.0, 2),
            crate::operators::SpaceTag::ell(2.0, 2),
            Default::default(),
        )
        .unwrap();
        assert!(pseudoinverse_growth([&op]).unwrap()[0].growth.is_infinite());
        assert!(inverse_image(&op, 1).is_err());
    }

    #[test]
    fn injective_counterexample_inverse_images() {
        let a = injective_counterexample(20).unwrap();
        let x = inverse_image(&a, 7).unwrap();
        assert!((x[0] + 7.0).abs() < 1e-12);
        assert!((x[6] - 7.0).abs() < 1e-12);
        assert!((inverse_image_l1(&a, 7).unwrap() - 14.0).abs() < 1e-12);
        assert_eq!(inverse_image_l1(&a, 1).unwrap(), 1.0);
    }
}
