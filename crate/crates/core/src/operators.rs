//! Finite truncations of the sequence-space operators and their declared
//! structural attributes.
//!
//! A [`TruncatedOperator`] is a dense `n_rows × n_cols` matrix together with
//! the spaces it acts between and the attributes of the infinite-dimensional
//! operator it stands for. Attributes are declared by the constructors and
//! propagated through [`compose`] and [`block_product`]; they are never read
//! off the matrix.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sphere_enum::RationalDirection;

/// Three-valued truth for declared operator facts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    #[default]
    Unknown,
}

impl Tri {
    pub const ALL: [Tri; 3] = [Tri::True, Tri::False, Tri::Unknown];

    pub fn is_true(self) -> bool {
        self == Tri::True
    }

    pub fn is_false(self) -> bool {
        self == Tri::False
    }

    pub fn is_known(self) -> bool {
        self != Tri::Unknown
    }

    /// Kleene conjunction.
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Unknown,
        }
    }

    /// Kleene disjunction.
    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::True, _) | (_, Tri::True) => Tri::True,
            (Tri::False, Tri::False) => Tri::False,
            _ => Tri::Unknown,
        }
    }

    pub fn not(self) -> Tri {
        match self {
            Tri::True => Tri::False,
            Tri::False => Tri::True,
            Tri::Unknown => Tri::Unknown,
        }
    }

    /// Keeps `self` if known, otherwise takes `other`.
    pub fn or_else(self, other: Tri) -> Tri {
        if self.is_known() {
            self
        } else {
            other
        }
    }
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Unknown => "unknown",
        })
    }
}

/// Structural facts about the underlying infinite-dimensional operator.
///
/// `weakstar_to_weak_continuous` is only meaningful for operators defined on
/// ℓ¹ (or products whose relevant factor is ℓ¹); on reflexive domains it is
/// left unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OperatorAttributes {
    pub range_closed: Tri,
    pub range_has_closed_infdim_subspace: Tri,
    pub nullspace_complemented: Tri,
    pub strictly_singular: Tri,
    pub compact: Tri,
    pub injective: Tri,
    pub surjective: Tri,
    pub weakstar_to_weak_continuous: Tri,
    pub finite_dimensional_range: Tri,
}

impl OperatorAttributes {
    pub const FIELD_NAMES: [&'static str; 9] = [
        "range_closed",
        "range_has_closed_infdim_subspace",
        "nullspace_complemented",
        "strictly_singular",
        "compact",
        "injective",
        "surjective",
        "weakstar_to_weak_continuous",
        "finite_dimensional_range",
    ];

    pub fn fields(&self) -> [Tri; 9] {
        [
            self.range_closed,
            self.range_has_closed_infdim_subspace,
            self.nullspace_complemented,
            self.strictly_singular,
            self.compact,
            self.injective,
            self.surjective,
            self.weakstar_to_weak_continuous,
            self.finite_dimensional_range,
        ]
    }

    pub fn from_fields(f: [Tri; 9]) -> Self {
        Self {
            range_closed: f[0],
            range_has_closed_infdim_subspace: f[1],
            nullspace_complemented: f[2],
            strictly_singular: f[3],
            compact: f[4],
            injective: f[5],
            surjective: f[6],
            weakstar_to_weak_continuous: f[7],
            finite_dimensional_range: f[8],
        }
    }

    /// Injective with closed range: an isomorphism onto its (closed) range.
    fn isomorphism_onto_range(&self) -> bool {
        self.injective.is_true() && self.range_closed.is_true()
    }

    fn invertible(&self) -> bool {
        self.injective.is_true() && self.surjective.is_true()
    }

    /// Mazur-type surjection of ℓ¹ onto an infinite-dimensional ℓ^q.
    pub fn mazur() -> Self {
        Self {
            range_closed: Tri::True,
            range_has_closed_infdim_subspace: Tri::True,
            nullspace_complemented: Tri::False,
            strictly_singular: Tri::True,
            compact: Tri::False,
            injective: Tri::False,
            surjective: Tri::True,
            weakstar_to_weak_continuous: Tri::False,
            finite_dimensional_range: Tri::False,
        }
    }

    /// Identity on ℓ^p.
    pub fn identity(p: f64) -> Self {
        Self {
            range_closed: Tri::True,
            range_has_closed_infdim_subspace: Tri::True,
            nullspace_complemented: Tri::True,
            strictly_singular: Tri::False,
            compact: Tri::False,
            injective: Tri::True,
            surjective: Tri::True,
            // e^(n) is weak*-null in ℓ¹ but not weakly null.
            weakstar_to_weak_continuous: if p == 1.0 { Tri::False } else { Tri::Unknown },
            finite_dimensional_range: Tri::False,
        }
    }

    /// Embedding ℓ^p → ℓ^q, p < q.
    pub fn embedding(p: f64) -> Self {
        Self {
            range_closed: Tri::False,
            range_has_closed_infdim_subspace: Tri::False,
            nullspace_complemented: Tri::True,
            strictly_singular: Tri::True,
            compact: Tri::False,
            injective: Tri::True,
            surjective: Tri::False,
            weakstar_to_weak_continuous: if p == 1.0 { Tri::True } else { Tri::Unknown },
            finite_dimensional_range: Tri::False,
        }
    }

    /// Diagonal operator ℓ^p → ℓ² with positive nonincreasing weights, p ∈ {1, 2}.
    pub fn diagonal(p: f64, decay: Decay) -> Self {
        let vanishing = decay == Decay::Vanishing;
        let on_l1 = p == 1.0;
        // On ℓ² a diagonal bounded below is an isomorphism; from ℓ¹ into ℓ²
        // the range is never closed.
        let iso = !vanishing && !on_l1;
        Self {
            range_closed: iso.into(),
            range_has_closed_infdim_subspace: iso.into(),
            nullspace_complemented: Tri::True,
            strictly_singular: (!iso).into(),
            compact: vanishing.into(),
            injective: Tri::True,
            surjective: iso.into(),
            weakstar_to_weak_continuous: if on_l1 { Tri::True } else { Tri::Unknown },
            finite_dimensional_range: Tri::False,
        }
    }

    /// `x ↦ (Σ x_l, x_2/2, x_3/3, …)` on ℓ¹: rank one plus compact diagonal.
    pub fn injective_counterexample() -> Self {
        Self {
            range_closed: Tri::False,
            range_has_closed_infdim_subspace: Tri::False,
            nullspace_complemented: Tri::True,
            strictly_singular: Tri::True,
            compact: Tri::True,
            injective: Tri::True,
            surjective: Tri::False,
            weakstar_to_weak_continuous: Tri::False,
            finite_dimensional_range: Tri::False,
        }
    }
}

/// Attributes of `outer ∘ inner`.
///
/// Only implications that hold for every pair of bounded operators with the
/// given facts are applied; everything else stays unknown.
/// `inner_codomain_reflexive` enables the rule that an injective outer factor
/// preserves the failure of weak*-to-weak continuity.
pub fn compose_attributes(
    outer: &OperatorAttributes,
    inner: &OperatorAttributes,
    inner_codomain_reflexive: bool,
) -> OperatorAttributes {
    let mut out = OperatorAttributes::default();

    // Compact operators form an ideal; a surjective inner factor maps the ball
    // onto a neighbourhood of zero, so it preserves non-compactness of `outer`.
    if outer.compact.is_true() || inner.compact.is_true() {
        out.compact = Tri::True;
    } else if (inner.surjective.is_true() && outer.compact.is_false())
        || (outer.isomorphism_onto_range() && inner.compact.is_false())
    {
        out.compact = Tri::False;
    }

    // Strictly singular operators form an ideal as well.
    if outer.strictly_singular.is_true() || inner.strictly_singular.is_true() {
        out.strictly_singular = Tri::True;
    } else if (outer.isomorphism_onto_range() && inner.strictly_singular.is_false())
        || (inner.invertible() && outer.strictly_singular.is_false())
    {
        out.strictly_singular = Tri::False;
    }

    if outer.injective.is_true() && inner.injective.is_true() {
        out.injective = Tri::True;
    } else if inner.injective.is_false()
        || (inner.surjective.is_true() && outer.injective.is_false())
    {
        out.injective = Tri::False;
    }

    // N(C∘B) = N(B) whenever C is injective.
    if outer.injective.is_true() {
        out.nullspace_complemented = inner.nullspace_complemented;
    }

    if inner.surjective.is_true() {
        out.range_closed = outer.range_closed;
        out.range_has_closed_infdim_subspace = outer.range_has_closed_infdim_subspace;
        out.finite_dimensional_range = outer.finite_dimensional_range;
        out.surjective = outer.surjective;
    } else if outer.isomorphism_onto_range() {
        out.range_closed = inner.range_closed;
        out.range_has_closed_infdim_subspace = inner.range_has_closed_infdim_subspace;
        out.finite_dimensional_range = inner.finite_dimensional_range;
        out.surjective = outer.surjective.and(inner.surjective);
    }
    // R(C∘B) ⊆ R(C).
    if outer.range_has_closed_infdim_subspace.is_false() {
        out.range_has_closed_infdim_subspace = Tri::False;
    }
    if outer.finite_dimensional_range.is_true() || inner.finite_dimensional_range.is_true() {
        out.finite_dimensional_range = Tri::True;
    }
    if outer.surjective.is_false() {
        out.surjective = Tri::False;
    }

    // Bounded operators are weak-to-weak continuous. In the other direction a
    // weak*-null sequence whose images do not tend weakly to zero has, in a
    // reflexive space, a subsequence with a nonzero weak limit, which an
    // injective outer factor keeps nonzero.
    out.weakstar_to_weak_continuous = if inner.weakstar_to_weak_continuous.is_true() {
        Tri::True
    } else if inner.weakstar_to_weak_continuous.is_false()
        && outer.injective.is_true()
        && inner_codomain_reflexive
    {
        Tri::False
    } else {
        Tri::Unknown
    };

    out
}

/// Attributes of the block-diagonal operator `(a, b)` on the product space.
pub fn product_attributes(a: &OperatorAttributes, b: &OperatorAttributes) -> OperatorAttributes {
    OperatorAttributes {
        range_closed: a.range_closed.and(b.range_closed),
        range_has_closed_infdim_subspace: a
            .range_has_closed_infdim_subspace
            .or(b.range_has_closed_infdim_subspace),
        nullspace_complemented: a.nullspace_complemented.and(b.nullspace_complemented),
        strictly_singular: a.strictly_singular.and(b.strictly_singular),
        compact: a.compact.and(b.compact),
        injective: a.injective.and(b.injective),
        surjective: a.surjective.and(b.surjective),
        weakstar_to_weak_continuous: a
            .weakstar_to_weak_continuous
            .and(b.weakstar_to_weak_continuous),
        finite_dimensional_range: a.finite_dimensional_range.and(b.finite_dimensional_range),
    }
}

/// Declared behaviour of a diagonal weight sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decay {
    /// `σ_k → 0`.
    Vanishing,
    /// `σ_k ≥ c > 0` for all k.
    BoundedBelow,
}

/// Truncated ℓ^p space or a finite product of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum SpaceTag {
    Ell { p: f64, dim: usize },
    Product { factors: Vec<SpaceTag> },
}

impl SpaceTag {
    pub fn ell(p: f64, dim: usize) -> Self {
        SpaceTag::Ell { p, dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            SpaceTag::Ell { dim, .. } => *dim,
            SpaceTag::Product { factors } => factors.iter().map(SpaceTag::dim).sum(),
        }
    }

    /// Norm exponent of a plain sequence space.
    pub fn exponent(&self) -> Option<f64> {
        match self {
            SpaceTag::Ell { p, .. } => Some(*p),
            SpaceTag::Product { .. } => None,
        }
    }

    pub fn is_reflexive(&self) -> bool {
        match self {
            SpaceTag::Ell { p, .. } => *p > 1.0 && p.is_finite(),
            SpaceTag::Product { factors } => factors.iter().all(SpaceTag::is_reflexive),
        }
    }
}

impl fmt::Display for SpaceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceTag::Ell { p, dim } => write!(f, "l^{p}({dim})"),
            SpaceTag::Product { factors } => {
                for (i, factor) in factors.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    write!(f, "{factor}")?;
                }
                Ok(())
            }
        }
    }
}

/// Dense truncation of a bounded operator between sequence spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    label: String,
    matrix: DMatrix<f64>,
    domain: SpaceTag,
    codomain: SpaceTag,
    attributes: OperatorAttributes,
    blocks: Vec<TruncatedOperator>,
}

impl TruncatedOperator {
    /// Wraps an explicit matrix. Entries must be finite and the tags must
    /// match the matrix shape.
    pub fn new(
        label: impl Into<String>,
        matrix: DMatrix<f64>,
        domain: SpaceTag,
        codomain: SpaceTag,
        attributes: OperatorAttributes,
    ) -> Result<Self> {
        let op = Self {
            label: label.into(),
            matrix,
            domain,
            codomain,
            attributes,
            blocks: Vec::new(),
        };
        op.validate()?;
        Ok(op)
    }

    fn validate(&self) -> Result<()> {
        if self.matrix.nrows() == 0 || self.matrix.ncols() == 0 {
            return Err(Error::invalid("matrix", "operator needs at least one row and column"));
        }
        if self.matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("operator entries"));
        }
        if self.domain.dim() != self.matrix.ncols() {
            return Err(Error::DimensionMismatch {
                context: "domain tag",
                expected: self.matrix.ncols(),
                actual: self.domain.dim(),
            });
        }
        if self.codomain.dim() != self.matrix.nrows() {
            return Err(Error::DimensionMismatch {
                context: "codomain tag",
                expected: self.matrix.nrows(),
                actual: self.codomain.dim(),
            });
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn n_rows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn domain(&self) -> &SpaceTag {
        &self.domain
    }

    pub fn codomain(&self) -> &SpaceTag {
        &self.codomain
    }

    pub fn attributes(&self) -> &OperatorAttributes {
        &self.attributes
    }

    /// Diagonal blocks of a block product, empty otherwise.
    pub fn blocks(&self) -> &[TruncatedOperator] {
        &self.blocks
    }

    /// `A e^(k)` for a 1-based column index.
    pub fn column(&self, k: usize) -> Result<DVector<f64>> {
        if k == 0 || k > self.n_cols() {
            return Err(Error::IndexOutOfRange {
                index: k,
                len: self.n_cols(),
            });
        }
        Ok(self.matrix.column(k - 1).into_owned())
    }

    pub fn apply(&self, x: &DVector<f64>) -> Result<DVector<f64>> {
        if x.len() != self.n_cols() {
            return Err(Error::DimensionMismatch {
                context: "apply",
                expected: self.n_cols(),
                actual: x.len(),
            });
        }
        Ok(&self.matrix * x)
    }

    /// `A*η`; component k is `⟨η, A e^(k)⟩`.
    pub fn adjoint_apply(&self, eta: &DVector<f64>) -> Result<DVector<f64>> {
        if eta.len() != self.n_rows() {
            return Err(Error::DimensionMismatch {
                context: "adjoint_apply",
                expected: self.n_rows(),
                actual: eta.len(),
            });
        }
        Ok(self.matrix.tr_mul(eta))
    }

    /// Power-iteration estimate of the largest singular value.
    ///
    /// Starts from the deterministic vector `1 + frac(j φ)`, normalized; the
    /// all-ones vector is avoided because for Mazur truncations with antipodal
    /// columns the top right singular vector can be orthogonal to it. If the start lies in the null-space (the iterate vanishes), it restarts once from the unit
    /// vector of the column with the largest norm. Stops when the relative
    /// change of the estimate drops below `tol` or after `iters` rounds.
    pub fn spectral_norm_estimate(&self, iters: usize, tol: f64) -> f64 {
        let n = self.n_cols();
        const PHI: f64 = 1.618_033_988_749_895;
        let mut v = DVector::from_fn(n, |j, _| 1.0 + ((j + 1) as f64 * PHI).fract());
        v /= v.norm();
        let mut restarted = false;
        let mut sigma = 0.0;
        for _ in 0..iters.max(1) {
            let av = &self.matrix * &v;
            let est = av.norm();
            if est == 0.0 {
                if restarted {
                    return 0.0;
                }
                restarted = true;
                let (best, _) = self
                    .matrix
                    .column_iter()
                    .enumerate()
                    .map(|(j, c)| (j, c.norm_squared()))
                    .fold((0, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
                v = DVector::zeros(n);
                v[best] = 1.0;
                continue;
            }
            let converged = (est - sigma).abs() <= tol * est;
            sigma = est;
            if converged {
                break;
            }
            let w = self.matrix.tr_mul(&av);
            let wn = w.norm();
            if wn == 0.0 {
                break;
            }
            v = w / wn;
        }
        sigma
    }

    pub fn to_record(&self) -> OperatorRecord {
        OperatorRecord {
            label: self.label.clone(),
            n_rows: self.n_rows(),
            n_cols: self.n_cols(),
            domain_tag: self.domain.clone(),
            codomain_tag: self.codomain.clone(),
            attributes: self.attributes,
            entries: self.matrix.transpose().as_slice().to_vec(),
            blocks: self.blocks.iter().map(TruncatedOperator::to_record).collect(),
        }
    }

    pub fn from_record(record: OperatorRecord) -> Result<Self> {
        if record.entries.len() != record.n_rows * record.n_cols {
            return Err(Error::DimensionMismatch {
                context: "operator record entries",
                expected: record.n_rows * record.n_cols,
                actual: record.entries.len(),
            });
        }
        let matrix = DMatrix::from_row_slice(record.n_rows, record.n_cols, &record.entries);
        let blocks = record
            .blocks
            .into_iter()
            .map(TruncatedOperator::from_record)
            .collect::<Result<Vec<_>>>()?;
        let mut op = TruncatedOperator::new(
            record.label,
            matrix,
            record.domain_tag,
            record.codomain_tag,
            record.attributes,
        )?;
        op.blocks = blocks;
        Ok(op)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_record()).expect("operator records always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_record(serde_json::from_str(text)?)
    }
}

/// Serialized form of a [`TruncatedOperator`]; `entries` are row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorRecord {
    pub label: String,
    pub n_rows: usize,
    pub n_cols: usize,
    pub domain_tag: SpaceTag,
    pub codomain_tag: SpaceTag,
    pub attributes: OperatorAttributes,
    pub entries: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub blocks: Vec<OperatorRecord>,
}

/// Mazur-type operator `x ↦ Σ x_k ζ^(k)` truncated to `n_cols` directions and
/// `n_rows` codomain coordinates.
///
/// A direction that needs a coordinate beyond `n_rows` is rejected; columns
/// are never cut, so they stay exactly unit-norm.
pub fn mazur(
    directions: &[RationalDirection],
    n_cols: usize,
    n_rows: usize,
) -> Result<TruncatedOperator> {
    if n_cols == 0 || n_rows == 0 {
        return Err(Error::invalid("n_cols/n_rows", "must be at least 1"));
    }
    if n_cols > directions.len() {
        return Err(Error::invalid(
            "n_cols",
            format!("{n_cols} columns requested from {} directions", directions.len()),
        ));
    }
    let q = directions[0].q();
    let mut matrix = DMatrix::zeros(n_rows, n_cols);
    for (j, dir) in directions.iter().take(n_cols).enumerate() {
        if dir.support_len() > n_rows {
            return Err(Error::SupportOverflow {
                index: dir.index(),
                needed: dir.support_len(),
                rows: n_rows,
            });
        }
        if dir.q() != q {
            return Err(Error::invalid("directions", "mixed norm exponents"));
        }
        for (i, v) in dir.realized().iter().enumerate() {
            matrix[(i, j)] = *v;
        }
    }
    let label = if q == 2.0 { "B".to_string() } else { format!("A_Maz(q={q})") };
    TruncatedOperator::new(
        label,
        matrix,
        SpaceTag::ell(1.0, n_cols),
        SpaceTag::ell(q, n_rows),
        OperatorAttributes::mazur(),
    )
}

/// Identity on ℓ^p truncated to n coordinates.
pub fn identity(p: f64, n: usize) -> Result<TruncatedOperator> {
    check_exponent("p", p)?;
    TruncatedOperator::new(
        "I",
        DMatrix::identity(n, n),
        SpaceTag::ell(p, n),
        SpaceTag::ell(p, n),
        OperatorAttributes::identity(p),
    )
}

/// Embedding ℓ^p → ℓ^q (1 ≤ p < q < ∞) truncated to n coordinates.
pub fn embedding(p: f64, q: f64, n: usize) -> Result<TruncatedOperator> {
    check_exponent("p", p)?;
    check_exponent("q", q)?;
    if p >= q {
        return Err(Error::invalid("p", format!("embedding needs p < q, got p={p}, q={q}")));
    }
    TruncatedOperator::new(
        format!("E_{p}^{q}"),
        DMatrix::identity(n, n),
        SpaceTag::ell(p, n),
        SpaceTag::ell(q, n),
        OperatorAttributes::embedding(p),
    )
}

/// Diagonal operator ℓ¹ → ℓ² with weights `sigma`.
pub fn diagonal(sigma: &[f64], decay: Decay) -> Result<TruncatedOperator> {
    diagonal_on(1.0, sigma, decay)
}

/// Diagonal operator ℓ^p → ℓ², p ∈ {1, 2}.
pub fn diagonal_on(p: f64, sigma: &[f64], decay: Decay) -> Result<TruncatedOperator> {
    if p != 1.0 && p != 2.0 {
        return Err(Error::invalid("p", "diagonal operators are provided on l^1 and l^2"));
    }
    if sigma.is_empty() {
        return Err(Error::invalid("sigma", "empty weight sequence"));
    }
    if let Some(bad) = sigma.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::invalid("sigma", format!("weights must be positive, got {bad}")));
    }
    if sigma.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::invalid("sigma", "weights must be nonincreasing"));
    }
    let n = sigma.len();
    TruncatedOperator::new(
        "D_sigma",
        DMatrix::from_diagonal(&DVector::from_column_slice(sigma)),
        SpaceTag::ell(p, n),
        SpaceTag::ell(2.0, n),
        OperatorAttributes::diagonal(p, decay),
    )
}

/// `σ_k = 1/k`, k = 1..=n.
pub fn harmonic_weights(n: usize) -> Vec<f64> {
    (1..=n).map(|k| 1.0 / k as f64).collect()
}

/// `x ↦ (Σ x_l, x_2/2, …, x_n/n)` on ℓ¹ into ℓ²; n ≥ 2.
pub fn injective_counterexample(n: usize) -> Result<TruncatedOperator> {
    if n < 2 {
        return Err(Error::invalid("n", "needs at least two coordinates"));
    }
    let mut matrix = DMatrix::zeros(n, n);
    matrix.row_mut(0).fill(1.0);
    for k in 2..=n {
        matrix[(k - 1, k - 1)] = 1.0 / k as f64;
    }
    TruncatedOperator::new(
        "A_inj",
        matrix,
        SpaceTag::ell(1.0, n),
        SpaceTag::ell(2.0, n),
        OperatorAttributes::injective_counterexample(),
    )
}

/// `outer ∘ inner`.
///
/// Block products with matching block structure compose blockwise, so
/// `(I, C) ∘ (C, I)` yields the block product `(C, C)` with its attributes.
pub fn compose(outer: &TruncatedOperator, inner: &TruncatedOperator) -> Result<TruncatedOperator> {
    if outer.domain != inner.codomain {
        return Err(Error::SpaceMismatch {
            context: "compose",
            left: outer.domain.to_string(),
            right: inner.codomain.to_string(),
        });
    }
    let blockwise = !outer.blocks.is_empty()
        && outer.blocks.len() == inner.blocks.len()
        && outer
            .blocks
            .iter()
            .zip(&inner.blocks)
            .all(|(o, i)| o.domain == i.codomain);
    if blockwise {
        let parts = outer
            .blocks
            .iter()
            .zip(&inner.blocks)
            .map(|(o, i)| compose(o, i))
            .collect::<Result<Vec<_>>>()?;
        let mut iter = parts.into_iter();
        let first = iter.next().expect("at least one block");
        let product = iter.try_fold(first, |acc, next| block_product(&acc, &next))?;
        return Ok(product.with_label(format!("{}∘{}", outer.label, inner.label)));
    }
    let attributes = compose_attributes(
        &outer.attributes,
        &inner.attributes,
        inner.codomain.is_reflexive(),
    );
    TruncatedOperator::new(
        format!("{}∘{}", outer.label, inner.label),
        &outer.matrix * &inner.matrix,
        inner.domain.clone(),
        outer.codomain.clone(),
        attributes,
    )
}

/// Block-diagonal operator `(a, b)` from `dom(a) × dom(b)` to `cod(a) × cod(b)`.
pub fn block_product(a: &TruncatedOperator, b: &TruncatedOperator) -> Result<TruncatedOperator> {
    let (ra, ca) = a.matrix.shape();
    let (rb, cb) = b.matrix.shape();
    let mut matrix = DMatrix::zeros(ra + rb, ca + cb);
    matrix.view_mut((0, 0), (ra, ca)).copy_from(&a.matrix);
    matrix.view_mut((ra, ca), (rb, cb)).copy_from(&b.matrix);
    let mut op = TruncatedOperator::new(
        format!("({}, {})", a.label, b.label),
        matrix,
        SpaceTag::Product {
            factors: vec![a.domain.clone(), b.domain.clone()],
        },
        SpaceTag::Product {
            factors: vec![a.codomain.clone(), b.codomain.clone()],
        },
        product_attributes(&a.attributes, &b.attributes),
    )?;
    op.blocks = vec![a.clone(), b.clone()];
    Ok(op)
}

fn check_exponent(name: &'static str, p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return Err(Error::invalid(name, format!("need 1 <= p < inf, got {p}")));
    }
    Ok(())
}
