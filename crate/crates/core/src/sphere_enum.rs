//! Deterministic enumeration of rational directions on the unit sphere of ℓ^q.
//!
//! Every direction is stored through its canonical integer representative: the
//! unique integer vector with coprime entries and the same sign pattern. Two
//! directions are the same iff their canonical vectors are identical, so the
//! enumerated sequence is pairwise distinct by construction.
//!
//! The order is by shells. Shell `(s', m')` holds the canonical vectors whose
//! last nonzero coordinate is `s'` and whose largest absolute entry is exactly
//! `m'`; shells are visited with `s'` outermost, then `m'`, and vectors inside a
//! shell are listed lexicographically. Since `v` and `-v` share a shell, the
//! enumeration is closed under antipodes shell by shell.

use std::collections::HashMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of a finite enumeration: norm exponent, support bound and entry bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct EnumerationParams {
    q: f64,
    max_support: usize,
    max_entry: i64,
}

#[derive(Deserialize)]
struct RawParams {
    q: f64,
    max_support: usize,
    max_entry: i64,
}

impl TryFrom<RawParams> for EnumerationParams {
    type Error = Error;

    fn try_from(raw: RawParams) -> Result<Self> {
        EnumerationParams::new(raw.q, raw.max_support, raw.max_entry)
    }
}

impl EnumerationParams {
    pub fn new(q: f64, max_support: usize, max_entry: i64) -> Result<Self> {
        validate_exponent(q)?;
        if max_support == 0 {
            return Err(Error::invalid("max_support", "must be at least 1"));
        }
        if max_entry < 1 {
            return Err(Error::invalid("max_entry", "must be at least 1"));
        }
        Ok(Self {
            q,
            max_support,
            max_entry,
        })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn max_support(&self) -> usize {
        self.max_support
    }

    pub fn max_entry(&self) -> i64 {
        self.max_entry
    }
}

impl Default for EnumerationParams {
    /// `q = 2`, support in the first three coordinates, entries in `{-10, …, 10}`.
    fn default() -> Self {
        Self {
            q: 2.0,
            max_support: 3,
            max_entry: 10,
        }
    }
}

fn validate_exponent(q: f64) -> Result<()> {
    if !(q.is_finite() && q > 1.0) {
        return Err(Error::invalid("q", format!("need 1 < q < inf, got {q}")));
    }
    Ok(())
}

/// A unit-sphere direction `ζ^(k)` with its canonical integer representative.
#[derive(Debug, Clone)]
pub struct RationalDirection {
    index: usize,
    canon: Vec<i64>,
    q: f64,
    realized: Vec<f64>,
}

impl RationalDirection {
    /// Builds a direction from an already canonical integer vector.
    ///
    /// Trailing zeros are dropped. The vector must be nonzero with coprime
    /// entries; non-canonical input is rejected rather than reduced so that an
    /// imported listing cannot silently merge two entries.
    pub fn from_canon(index: usize, canon: Vec<i64>, q: f64) -> Result<Self> {
        validate_exponent(q)?;
        if index == 0 {
            return Err(Error::invalid("index", "direction indices start at 1"));
        }
        let mut canon = canon;
        while canon.last() == Some(&0) {
            canon.pop();
        }
        if canon.is_empty() {
            return Err(Error::ZeroVector("RationalDirection"));
        }
        let g = canon.iter().fold(0i64, |acc, &c| acc.gcd(&c));
        if g != 1 {
            return Err(Error::invalid(
                "canon",
                format!("entries {canon:?} are not coprime (gcd {g})"),
            ));
        }
        let realized = realize(&canon, q);
        Ok(Self {
            index,
            canon,
            q,
            realized,
        })
    }

    /// 1-based position in the enumeration.
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn canon(&self) -> &[i64] {
        &self.canon
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `canon / ‖canon‖_q`, with length equal to the support length.
    pub fn realized(&self) -> &[f64] {
        &self.realized
    }

    /// Number of leading coordinates the direction needs.
    pub fn support_len(&self) -> usize {
        self.canon.len()
    }

    /// Inner product with a vector of arbitrary length (missing coordinates are zero).
    pub fn dot(&self, y: &[f64]) -> f64 {
        self.realized.iter().zip(y).map(|(a, b)| a * b).sum()
    }
}

impl PartialEq for RationalDirection {
    fn eq(&self, other: &Self) -> bool {
        self.canon == other.canon
    }
}

impl Eq for RationalDirection {}

impl std::hash::Hash for RationalDirection {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.canon.hash(state);
    }
}

fn realize(canon: &[i64], q: f64) -> Vec<f64> {
    let norm = if q == 2.0 {
        canon
            .iter()
            .map(|&c| (c as f64) * (c as f64))
            .sum::<f64>()
            .sqrt()
    } else {
        canon
            .iter()
            .map(|&c| (c.unsigned_abs() as f64).powf(q))
            .sum::<f64>()
            .powf(1.0 / q)
    };
    canon.iter().map(|&c| c as f64 / norm).collect()
}

/// Lazy shell-ordered enumeration. Use this instead of [`enumerate_directions`]
/// when the full listing would not fit in memory.
#[derive(Debug, Clone)]
pub struct Directions {
    params: EnumerationParams,
    support: usize,
    entry: i64,
    odometer: Vec<i64>,
    next_index: usize,
    done: bool,
}

impl Directions {
    pub fn new(params: EnumerationParams) -> Self {
        let mut it = Self {
            params,
            support: 1,
            entry: 1,
            odometer: Vec::new(),
            next_index: 1,
            done: false,
        };
        it.reset_shell();
        it
    }

    fn reset_shell(&mut self) {
        self.odometer = vec![-self.entry; self.support];
    }

    /// Moves to the next shell; returns false when the enumeration is exhausted.
    fn next_shell(&mut self) -> bool {
        if self.entry < self.params.max_entry {
            self.entry += 1;
        } else if self.support < self.params.max_support {
            self.support += 1;
            self.entry = 1;
        } else {
            return false;
        }
        self.reset_shell();
        true
    }

    /// Advances the odometer lexicographically inside `[-m', m']^{s'}`.
    fn step(&mut self) -> bool {
        let m = self.entry;
        for slot in self.odometer.iter_mut().rev() {
            if *slot < m {
                *slot += 1;
                return true;
            }
            *slot = -m;
        }
        false
    }

    fn in_shell(&self) -> bool {
        let v = &self.odometer;
        if v[v.len() - 1] == 0 {
            return false;
        }
        if v.iter().map(|c| c.abs()).max() != Some(self.entry) {
            return false;
        }
        v.iter().fold(0i64, |acc, &c| acc.gcd(&c)) == 1
    }
}

impl Iterator for Directions {
    type Item = RationalDirection;

    fn next(&mut self) -> Option<RationalDirection> {
        while !self.done {
            let candidate = self.in_shell().then(|| self.odometer.clone());
            if !self.step() && !self.next_shell() {
                self.done = true;
            }
            if let Some(canon) = candidate {
                let realized = realize(&canon, self.params.q);
                let dir = RationalDirection {
                    index: self.next_index,
                    canon,
                    q: self.params.q,
                    realized,
                };
                self.next_index += 1;
                return Some(dir);
            }
        }
        None
    }
}

/// Every canonical direction with support in the first `s` coordinates and
/// entries bounded by `m`, each exactly once, in shell order.
pub fn enumerate_directions(params: EnumerationParams) -> Vec<RationalDirection> {
    Directions::new(params).collect()
}

/// Result of [`coverage`]: the best aligned direction and its correlation with `y/‖y‖₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Coverage {
    pub index: usize,
    pub correlation: f64,
}

/// `argmax_k ⟨y/‖y‖₂, ζ^(k)⟩`, ties going to the smallest index.
///
/// Accepts borrowed or owned directions, so a lazy [`Directions`] stream can be
/// scanned without materializing it.
pub fn coverage<I>(directions: I, y: &[f64], q: f64) -> Result<Coverage>
where
    I: IntoIterator,
    I::Item: std::borrow::Borrow<RationalDirection>,
{
    if q != 2.0 {
        return Err(Error::invalid("q", "correlation is only defined for q = 2"));
    }
    let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroVector("coverage"));
    }
    let mut best: Option<Coverage> = None;
    for dir in directions {
        let dir = std::borrow::Borrow::<RationalDirection>::borrow(&dir);
        let correlation = dir.dot(y) / norm;
        if best.is_none_or(|b| correlation > b.correlation) {
            best = Some(Coverage {
                index: dir.index,
                correlation,
            });
        }
    }
    best.ok_or_else(|| Error::invalid("directions", "empty direction list"))
}

/// An indexed list of directions with antipode lookup.
#[derive(Debug, Clone)]
pub struct DirectionSet {
    directions: Vec<RationalDirection>,
    by_canon: HashMap<Vec<i64>, usize>,
}

impl DirectionSet {
    /// The full enumeration for `params`.
    pub fn enumerate(params: EnumerationParams) -> Self {
        Self::build(enumerate_directions(params))
    }

    /// The first `depth` directions of the enumeration for `params`.
    pub fn prefix(params: EnumerationParams, depth: usize) -> Result<Self> {
        let directions: Vec<_> = Directions::new(params).take(depth).collect();
        if directions.len() < depth {
            return Err(Error::invalid(
                "depth",
                format!(
                    "enumeration has only {} directions, {depth} requested",
                    directions.len()
                ),
            ));
        }
        Ok(Self::build(directions))
    }

    /// Wraps an explicit list; indices must run 1..=n and canon vectors must be distinct.
    pub fn from_directions(directions: Vec<RationalDirection>) -> Result<Self> {
        if directions.is_empty() {
            return Err(Error::invalid("directions", "empty direction list"));
        }
        let mut seen = HashMap::with_capacity(directions.len());
        for (pos, dir) in directions.iter().enumerate() {
            if dir.index != pos + 1 {
                return Err(Error::Format(format!(
                    "direction at position {} carries index {}",
                    pos + 1,
                    dir.index
                )));
            }
            if seen.insert(dir.canon.clone(), pos).is_some() {
                return Err(Error::Format(format!(
                    "duplicate direction {:?} at index {}",
                    dir.canon, dir.index
                )));
            }
        }
        Ok(Self {
            directions,
            by_canon: seen,
        })
    }

    fn build(directions: Vec<RationalDirection>) -> Self {
        let by_canon = directions
            .iter()
            .enumerate()
            .map(|(pos, d)| (d.canon.clone(), pos))
            .collect();
        Self {
            directions,
            by_canon,
        }
    }

    pub fn len(&self) -> usize {
        self.directions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.directions.is_empty()
    }

    pub fn as_slice(&self) -> &[RationalDirection] {
        &self.directions
    }

    pub fn iter(&self) -> std::slice::Iter<'_, RationalDirection> {
        self.directions.iter()
    }

    /// Direction with 1-based index `k`.
    pub fn get(&self, k: usize) -> Result<&RationalDirection> {
        k.checked_sub(1)
            .and_then(|pos| self.directions.get(pos))
            .ok_or(Error::IndexOutOfRange {
                index: k,
                len: self.directions.len(),
            })
    }

    /// 1-based index of the direction with the given canonical vector.
    pub fn index_of(&self, canon: &[i64]) -> Option<usize> {
        self.by_canon.get(canon).map(|pos| pos + 1)
    }

    /// Index `l` with `ζ^(l) = -ζ^(k)`, if enumerated.
    pub fn antipode_of(&self, k: usize) -> Result<Option<usize>> {
        let negated: Vec<i64> = self.get(k)?.canon.iter().map(|c| -c).collect();
        Ok(self.index_of(&negated))
    }

    /// Largest support length among the first `n` directions.
    pub fn max_support_len(&self, n: usize) -> usize {
        self.directions
            .iter()
            .take(n)
            .map(RationalDirection::support_len)
            .max()
            .unwrap_or(0)
    }

    /// Norm exponent shared by the set (the first direction's).
    pub fn q(&self) -> f64 {
        self.directions.first().map_or(2.0, RationalDirection::q)
    }

    pub fn to_json(&self) -> String {
        directions_to_json(&self.directions)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_directions(directions_from_json(text)?)
    }
}

impl<'a> IntoIterator for &'a DirectionSet {
    type Item = &'a RationalDirection;
    type IntoIter = std::slice::Iter<'a, RationalDirection>;

    fn into_iter(self) -> Self::IntoIter {
        self.directions.iter()
    }
}

#[derive(Serialize, Deserialize)]
struct DirectionRecord {
    index: usize,
    canon: Vec<i64>,
    q: f64,
}

/// JSON array of `{index, canon, q}` records.
pub fn directions_to_json(directions: &[RationalDirection]) -> String {
    let records: Vec<_> = directions
        .iter()
        .map(|d| DirectionRecord {
            index: d.index,
            canon: d.canon.clone(),
            q: d.q,
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("direction records always serialize")
}

/// Inverse of [`directions_to_json`]; realized vectors are recomputed.
pub fn directions_from_json(text: &str) -> Result<Vec<RationalDirection>> {
    let records: Vec<DirectionRecord> = serde_json::from_str(text)?;
    records
        .into_iter()
        .map(|r| RationalDirection::from_canon(r.index, r.canon, r.q))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(s: usize, m: i64) -> EnumerationParams {
        EnumerationParams::new(2.0, s, m).unwrap()
    }

    fn canons(dirs: &[RationalDirection]) -> Vec<Vec<i64>> {
        dirs.iter().map(|d| d.canon().to_vec()).collect()
    }

    #[test]
    fn single_coordinate_shell() {
        let dirs = enumerate_directions(params(1, 1));
        assert_eq!(canons(&dirs), vec![vec![-1], vec![1]]);
        assert_eq!(dirs[0].index(), 1);
        assert_eq!(dirs[1].index(), 2);
        // Larger entry bounds add nothing on one coordinate.
        assert_eq!(enumerate_directions(params(1, 5)).len(), 2);
    }

    #[test]
    fn two_coordinates_unit_entries() {
        // Exhaustive oracle: primitive vectors of {-1,0,1}^2 without zero.
        let mut oracle = Vec::new();
        for a in -1i64..=1 {
            for b in -1i64..=1 {
                if (a, b) != (0, 0) {
                    oracle.push(if b == 0 { vec![a] } else { vec![a, b] });
                }
            }
        }
        let dirs = enumerate_directions(params(2, 1));
        assert_eq!(dirs.len(), 8);
        let mut got = canons(&dirs);
        got.sort();
        oracle.sort();
        assert_eq!(got, oracle);
        // Shell order: the one-coordinate shell comes first, then lexicographic.
        assert_eq!(
            canons(&dirs),
            vec![
                vec![-1],
                vec![1],
                vec![-1, -1],
                vec![-1, 1],
                vec![0, -1],
                vec![0, 1],
                vec![1, -1],
                vec![1, 1],
            ]
        );
    }

    #[test]
    fn non_primitive_vectors_are_never_emitted() {
        let dirs = enumerate_directions(params(2, 4));
        assert!(dirs.iter().all(|d| d.canon() != [2, 2]));
        assert!(dirs.iter().any(|d| d.canon() == [1, 1]));
        assert!(RationalDirection::from_canon(1, vec![2, 2], 2.0).is_err());
    }

    #[test]
    fn realized_vectors_are_unit() {
        for q in [1.5, 2.0, 3.0] {
            let p = EnumerationParams::new(q, 3, 3).unwrap();
            for d in Directions::new(p) {
                let norm: f64 = d
                    .realized()
                    .iter()
                    .map(|v| v.abs().powf(q))
                    .sum::<f64>()
                    .powf(1.0 / q);
                assert!((norm - 1.0).abs() <= 1e-12, "{:?} has norm {norm}", d.canon());
            }
        }
    }

    #[test]
    fn coverage_examples() {
        let one = enumerate_directions(params(1, 1));
        let c = coverage(&one, &[1.0], 2.0).unwrap();
        assert_eq!(c.index, 2);
        assert_eq!(c.correlation, 1.0);

        let two = enumerate_directions(params(2, 1));
        let c = coverage(&two, &[1.0, 1.0, 0.0], 2.0).unwrap();
        assert_eq!(two[c.index - 1].canon(), &[1, 1]);
        assert!((c.correlation - 1.0).abs() < 1e-15);

        // All eight inner products with (3,1)/√10: e^(1) wins with 3/√10,
        // ahead of (1,1)/√2 at 4/√20.
        let c = coverage(&two, &[3.0, 1.0], 2.0).unwrap();
        assert_eq!(two[c.index - 1].canon(), &[1]);
        assert!((c.correlation - 3.0 / 10f64.sqrt()).abs() < 1e-15);
        let diag = two.iter().find(|d| d.canon() == [1, 1]).unwrap();
        let runner_up = diag.dot(&[3.0 / 10f64.sqrt(), 1.0 / 10f64.sqrt()]);
        assert!((runner_up - 4.0 / (2f64.sqrt() * 10f64.sqrt())).abs() < 1e-15);
        assert!(runner_up < c.correlation);
    }

    #[test]
    fn coverage_rejects_zero_and_other_exponents() {
        let dirs = enumerate_directions(params(1, 1));
        assert_eq!(
            coverage(&dirs, &[0.0, 0.0], 2.0),
            Err(Error::ZeroVector("coverage"))
        );
        assert!(coverage(&dirs, &[1.0], 3.0).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(EnumerationParams::new(2.0, 0, 1).is_err());
        assert!(EnumerationParams::new(2.0, 1, 0).is_err());
        assert!(EnumerationParams::new(1.0, 1, 1).is_err());
        assert!(EnumerationParams::new(f64::INFINITY, 1, 1).is_err());
    }

    #[test]
    fn antipode_lookup_and_prefix() {
        let set = DirectionSet::enumerate(params(2, 2));
        for k in 1..=set.len() {
            let l = set.antipode_of(k).unwrap().expect("antipodes are enumerated");
            let neg: Vec<i64> = set.get(k).unwrap().canon().iter().map(|c| -c).collect();
            assert_eq!(set.get(l).unwrap().canon(), neg.as_slice());
        }
        assert!(DirectionSet::prefix(params(1, 1), 3).is_err());
        assert_eq!(DirectionSet::prefix(params(2, 2), 5).unwrap().len(), 5);
        assert!(set.get(0).is_err());
        assert!(set.get(set.len() + 1).is_err());
    }

    #[test]
    fn json_round_trip() {
        let set = DirectionSet::enumerate(params(3, 2));
        let back = DirectionSet::from_json(&set.to_json()).unwrap();
        assert_eq!(back.as_slice(), set.as_slice());
        for (a, b) in back.iter().zip(set.iter()) {
            assert_eq!(a.realized(), b.realized());
        }
        let dup = r#"[{"index":1,"canon":[1],"q":2.0},{"index":2,"canon":[1,0],"q":2.0}]"#;
        assert!(DirectionSet::from_json(dup).is_err());
    }
}
