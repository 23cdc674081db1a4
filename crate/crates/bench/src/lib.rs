//! Fixtures shared by the benchmarks.

use illposed_core::operators::{diagonal, harmonic_weights, mazur, Decay};
use illposed_core::{DirectionSet, EnumerationParams, TruncatedOperator};
use nalgebra::DVector;

/// Mazur truncation over the first `depth` directions of the default enumeration.
pub fn mazur_fixture(depth: usize) -> (DirectionSet, TruncatedOperator) {
    let set = DirectionSet::prefix(EnumerationParams::default(), depth).expect("depth within enumeration");
    let op = mazur(set.as_slice(), depth, set.max_support_len(depth)).expect("rows cover supports");
    (set, op)
}

/// `diag(1/k)` on `n` coordinates.
pub fn diagonal_fixture(n: usize) -> TruncatedOperator {
    diagonal(&harmonic_weights(n), Decay::Vanishing).expect("positive weights")
}

/// Fixed unit-norm data vector, not aligned with any short direction.
pub fn generic_data(n: usize) -> DVector<f64> {
    let v = DVector::from_fn(n, |i, _| ((i as f64 + 1.0) * 0.7).sin() + 0.1);
    let norm = v.norm();
    v / norm
}
