//! ℓ¹-penalized least squares on truncated operators.
//!
//! The functional is `½‖Ax − y‖₂² + α‖x‖₁`. For Mazur-type operators its
//! minimizers are known in closed form when `y = λ ζ^(k)`; this module
//! computes them, solves the truncated problem by cyclic coordinate descent
//! and certifies any candidate through the subdifferential condition
//! `−(1/α) A*(Ax − y) ∈ ∂‖·‖₁(x)`.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::operators::{mazur, TruncatedOperator};
use crate::sphere_enum::{coverage, DirectionSet, EnumerationParams};

/// Entries with magnitude above this count as support.
pub const SUPPORT_THRESHOLD: f64 = 1e-12;

/// Largest pool of candidate coordinates searched by the support refinement.
const WORKING_SET_CAP: usize = 16;

/// Largest support size tried from the working set.
const MAX_REFINED_SUPPORT: usize = 3;

/// `sign(v) · max(|v| − t, 0)`.
pub fn soft_threshold(v: f64, t: f64) -> f64 {
    debug_assert!(t >= 0.0, "threshold must be nonnegative");
    if v > t {
        v - t
    } else if v < -t {
        v + t
    } else {
        0.0
    }
}

#[derive(Debug, Clone)]
pub struct TikhonovProblem<'a> {
    operator: &'a TruncatedOperator,
    data: DVector<f64>,
    alpha: f64,
}

impl<'a> TikhonovProblem<'a> {
    /// The operator must map ℓ¹ into ℓ², `data` must live in its codomain
    /// and `alpha` must be positive.
    pub fn new(operator: &'a TruncatedOperator, data: DVector<f64>, alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0) {
            return Err(Error::invalid("alpha", format!("must be positive, got {alpha}")));
        }
        if operator.domain().exponent() != Some(1.0) {
            return Err(Error::Precondition {
                label: operator.label().to_string(),
                reason: format!("domain must be l^1, got {}", operator.domain()),
            });
        }
        if operator.codomain().exponent() != Some(2.0) {
            return Err(Error::Precondition {
                label: operator.label().to_string(),
                reason: format!("codomain must be l^2, got {}", operator.codomain()),
            });
        }
        if data.len() != operator.n_rows() {
            return Err(Error::DimensionMismatch {
                context: "Tikhonov data",
                expected: operator.n_rows(),
                actual: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("Tikhonov data"));
        }
        Ok(Self {
            operator,
            data,
            alpha,
        })
    }

    pub fn operator(&self) -> &TruncatedOperator {
        self.operator
    }

    pub fn data(&self) -> &DVector<f64> {
        &self.data
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn check_len(&self, x: &DVector<f64>) -> Result<()> {
        if x.len() != self.operator.n_cols() {
            return Err(Error::DimensionMismatch {
                context: "Tikhonov iterate",
                expected: self.operator.n_cols(),
                actual: x.len(),
            });
        }
        Ok(())
    }

    /// `½‖Ax − y‖₂² + α‖x‖₁`.
    pub fn objective(&self, x: &DVector<f64>) -> Result<f64> {
        self.check_len(x)?;
        let misfit = self.operator.apply(x)? - &self.data;
        Ok(0.5 * misfit.norm_squared() + self.alpha * x.lp_norm(1))
    }

    /// Largest violation of the subdifferential inclusion at `x`.
    ///
    /// With `g = −(1/α) A*(Ax − y)`, a coordinate with `x_k ≠ 0` contributes
    /// `|g_k − sign(x_k)|` and one with `x_k = 0` contributes `max(|g_k| − 1, 0)`.
    pub fn optimality_residual(&self, x: &DVector<f64>) -> Result<f64> {
        self.check_len(x)?;
        let misfit = self.operator.apply(x)? - &self.data;
        let g = self.operator.adjoint_apply(&misfit)? * (-1.0 / self.alpha);
        Ok(x.iter()
            .zip(g.iter())
            .map(|(&xk, &gk)| {
                if xk != 0.0 {
                    (gk - xk.signum()).abs()
                } else {
                    (gk.abs() - 1.0).max(0.0)
                }
            })
            .fold(0.0, f64::max))
    }

    /// Cyclic coordinate descent from `x = 0`, coordinates visited in order
    /// 1..n, each updated by its exact soft-threshold minimizer.
    ///
    /// Stops once the optimality residual is at most `tol` (checked after
    /// every sweep) or after `max_iter` sweeps. Hitting the sweep limit is
    /// reported through [`MinimizerCertificate::converged`], not as an error.
    ///
    /// Nearly parallel columns make plain coordinate descent crawl, so after
    /// sweeps 1, 2, 4, 8, ... small candidate supports are solved directly
    /// (see `refine_on_support`); a refined point replaces the iterate only
    /// if it passes the full certificate.
    pub fn solve(&self, tol: f64, max_iter: usize) -> Result<MinimizerCertificate> {
        if !(tol > 0.0) {
            return Err(Error::invalid("tol", "must be positive"));
        }
        let a = self.operator.matrix();
        let n = a.ncols();
        let col_sq: Vec<f64> = a.column_iter().map(|c| c.norm_squared()).collect();
        let mut x = DVector::zeros(n);
        let mut r = self.data.clone();
        let mut residual = self.optimality_residual(&x)?;
        let mut sweeps = 0;
        while residual > tol && sweeps < max_iter {
            for j in 0..n {
                let cj = col_sq[j];
                if cj == 0.0 {
                    continue;
                }
                let col = a.column(j);
                let z = col.dot(&r) + cj * x[j];
                let updated = soft_threshold(z, self.alpha) / cj;
                let step = updated - x[j];
                if step != 0.0 {
                    r.axpy(-step, &col, 1.0);
                    x[j] = updated;
                }
            }
            sweeps += 1;
            // Refresh the residual to keep rounding from accumulating.
            r = &self.data - a * &x;
            residual = self.optimality_residual(&x)?;
            if residual > tol && sweeps.is_power_of_two() {
                if let Some((refined, refined_residual)) = self.refine_on_support(&x, tol)? {
                    x = refined;
                    residual = refined_residual;
                }
            }
        }
        MinimizerCertificate::new(self, x, sweeps, residual <= tol)
    }

    /// Looks for an exact minimizer supported on few coordinates.
    ///
    /// First the support and sign pattern of `x` are tried; then supports of
    /// size up to `min(n_rows, 3)` drawn from the columns best correlated
    /// with the data or with the current residual, with every sign pattern.
    /// A candidate is `z` solving `A_S*A_S z = A_S*y − α s` with
    /// `sign(z) = s`; it is returned only when its optimality residual over
    /// all coordinates is at most `tol`.
    fn refine_on_support(&self, x: &DVector<f64>, tol: f64) -> Result<Option<(DVector<f64>, f64)>> {
        let support: Vec<usize> = (0..x.len()).filter(|&j| x[j] != 0.0).collect();
        if !support.is_empty() && support.len() <= 2 * self.operator.n_rows() {
            let signs: Vec<f64> = support.iter().map(|&j| x[j].signum()).collect();
            if let Some(found) = self.reduced_candidate(&support, &signs, tol)? {
                return Ok(Some(found));
            }
        }

        // Candidates: columns most correlated with the data and with the
        // current residual. Antipodal columns are redundant since both sign
        // patterns are tried.
        let a = self.operator.matrix();
        let rows = self.operator.n_rows();
        let per_source = (2 * rows + 2).min(WORKING_SET_CAP / 2);
        let residual = &self.data - a * x;
        let mut order = Vec::with_capacity(2 * per_source);
        for target in [&self.data, &residual] {
            let scores = a.tr_mul(target);
            let mut ranked: Vec<usize> = (0..x.len()).collect();
            ranked.sort_by(|&i, &j| scores[j].abs().total_cmp(&scores[i].abs()).then(i.cmp(&j)));
            let mut taken = 0;
            for j in ranked {
                if taken == per_source {
                    break;
                }
                let col = a.column(j);
                if order.iter().any(|&i: &usize| {
                    let other = a.column(i);
                    other == col || other == -col
                }) {
                    continue;
                }
                order.push(j);
                taken += 1;
            }
        }
        let max_size = rows.min(MAX_REFINED_SUPPORT).min(order.len());
        let mut subset = Vec::with_capacity(max_size);
        for size in 1..=max_size {
            if let Some(found) = self.search_subsets(&order, size, 0, &mut subset, tol)? {
                return Ok(Some(found));
            }
        }
        Ok(None)
    }

    fn search_subsets(
        &self,
        pool: &[usize],
        size: usize,
        from: usize,
        subset: &mut Vec<usize>,
        tol: f64,
    ) -> Result<Option<(DVector<f64>, f64)>> {
        if subset.len() == size {
            let mut sorted = subset.clone();
            sorted.sort_unstable();
            for pattern in 0..(1u32 << size) {
                let signs: Vec<f64> = (0..size)
                    .map(|i| if pattern >> i & 1 == 0 { 1.0 } else { -1.0 })
                    .collect();
                if let Some(found) = self.reduced_candidate(&sorted, &signs, tol)? {
                    return Ok(Some(found));
                }
            }
            return Ok(None);
        }
        for i in from..pool.len() {
            subset.push(pool[i]);
            let found = self.search_subsets(pool, size, i + 1, subset, tol)?;
            subset.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }

    fn reduced_candidate(
        &self,
        support: &[usize],
        signs: &[f64],
        tol: f64,
    ) -> Result<Option<(DVector<f64>, f64)>> {
        let a_s = self.operator.matrix().select_columns(support);
        let gram = a_s.tr_mul(&a_s);
        let signs = DVector::from_column_slice(signs);
        let rhs = a_s.tr_mul(&self.data) - &signs * self.alpha;
        let svd = gram.svd(true, true);
        let cutoff = 1e-12 * svd.singular_values.max();
        let Ok(mut z) = svd.solve(&rhs, cutoff) else {
            return Ok(None);
        };
        // The reduced Gram matrix of nearly parallel columns is badly
        // conditioned and 1/α amplifies what is left; two refinement steps on
        // the defect `A_S*(y − A_S z) − α s` recover full accuracy.
        for _ in 0..2 {
            let defect = a_s.tr_mul(&(&self.data - &a_s * &z)) - &signs * self.alpha;
            match svd.solve(&defect, cutoff) {
                Ok(step) => z += step,
                Err(_) => break,
            }
        }
        if z.iter().zip(signs.iter()).any(|(zj, sj)| *zj == 0.0 || zj.signum() != *sj) {
            return Ok(None);
        }
        let mut refined = DVector::zeros(self.operator.n_cols());
        for (zj, &j) in z.iter().zip(support) {
            refined[j] = *zj;
        }
        let residual = self.optimality_residual(&refined)?;
        Ok((residual <= tol).then_some((refined, residual)))
    }

    /// Certificate for an arbitrary candidate.
    pub fn certify(&self, x: DVector<f64>) -> Result<MinimizerCertificate> {
        let residual = self.optimality_residual(&x)?;
        let mut cert = MinimizerCertificate::new(self, x, 0, true)?;
        cert.residual = residual;
        Ok(cert)
    }
}

/// A candidate minimizer with its optimality evidence.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizerCertificate {
    pub x: DVector<f64>,
    pub objective: f64,
    pub residual: f64,
    pub iterations: usize,
    /// 1-based indices with `|x_k| > 1e-12`.
    pub support: Vec<usize>,
    pub converged: bool,
}

impl MinimizerCertificate {
    fn new(
        problem: &TikhonovProblem<'_>,
        x: DVector<f64>,
        iterations: usize,
        converged: bool,
    ) -> Result<Self> {
        let objective = problem.objective(&x)?;
        let residual = problem.optimality_residual(&x)?;
        let support = support_of(&x);
        Ok(Self {
            x,
            objective,
            residual,
            iterations,
            support,
            converged,
        })
    }

    /// 1-based index of the largest-magnitude entry (smallest index on ties).
    pub fn dominant_index(&self) -> Option<usize> {
        dominant_index(&self.x)
    }

    pub fn l1_norm(&self) -> f64 {
        self.x.lp_norm(1)
    }
}

fn support_of(x: &DVector<f64>) -> Vec<usize> {
    x.iter()
        .enumerate()
        .filter(|(_, v)| v.abs() > SUPPORT_THRESHOLD)
        .map(|(i, _)| i + 1)
        .collect()
}

fn dominant_index(x: &DVector<f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in x.iter().enumerate() {
        if v.abs() > SUPPORT_THRESHOLD && best.is_none_or(|(_, b)| v.abs() > b) {
            best = Some((i, v.abs()));
        }
    }
    best.map(|(i, _)| i + 1)
}

/// Open interval of admissible `γ` for the two-component minimizers, if any.
pub fn gamma_interval(lambda: f64, alpha: f64) -> Option<(f64, f64)> {
    if lambda > alpha {
        Some((alpha - lambda, 0.0))
    } else if lambda < -alpha {
        Some((0.0, -alpha - lambda))
    } else {
        None
    }
}

/// Closed-form minimizer for data `y = λ ζ^(k)` over the directions in `set`.
///
/// Without `gamma` this is the one-component minimizer
/// `soft_threshold(λ, α) e^(k)`. With `gamma` it is the two-component
/// minimizer `(γ + λ ∓ α) e^(k) + γ e^(l)` where `ζ^(l) = −ζ^(k)`.
pub fn closed_form_minimizer(
    set: &DirectionSet,
    k: usize,
    lambda: f64,
    alpha: f64,
    gamma: Option<f64>,
) -> Result<DVector<f64>> {
    if !(alpha >= 0.0) {
        return Err(Error::invalid("alpha", "must be nonnegative"));
    }
    set.get(k)?;
    let mut x = DVector::zeros(set.len());
    let beta = soft_threshold(lambda, alpha);
    match gamma {
        None => x[k - 1] = beta,
        Some(gamma) => {
            let l = set.antipode_of(k)?.ok_or(Error::MissingAntipode { index: k })?;
            let (low, high) = gamma_interval(lambda, alpha).ok_or(Error::GammaOutOfRange {
                gamma,
                low: 0.0,
                high: 0.0,
            })?;
            if !(gamma > low && gamma < high) {
                return Err(Error::GammaOutOfRange { gamma, low, high });
            }
            x = segment_member(set.len(), k, l, lambda, alpha, gamma);
        }
    }
    Ok(x)
}

fn segment_member(n: usize, k: usize, l: usize, lambda: f64, alpha: f64, gamma: f64) -> DVector<f64> {
    let mut x = DVector::zeros(n);
    x[k - 1] = gamma + soft_threshold(lambda, alpha);
    x[l - 1] = gamma;
    x
}

/// Zero-padded copy of `λ ζ^(k)` in a codomain with `n_rows` coordinates.
pub fn scaled_direction(set: &DirectionSet, k: usize, lambda: f64, n_rows: usize) -> Result<DVector<f64>> {
    let dir = set.get(k)?;
    if dir.support_len() > n_rows {
        return Err(Error::SupportOverflow {
            index: k,
            needed: dir.support_len(),
            rows: n_rows,
        });
    }
    let mut y = DVector::zeros(n_rows);
    for (i, v) in dir.realized().iter().enumerate() {
        y[i] = lambda * v;
    }
    Ok(y)
}

/// Outcome of comparing the solver with the closed form for one `(k, λ, α)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedFormCheck {
    pub k: usize,
    pub lambda: f64,
    pub alpha: f64,
    pub antipode: Option<usize>,
    /// Two-component parameter read off the solver output, if it landed on
    /// that branch of the minimizer family.
    pub gamma: Option<f64>,
    /// `‖x_solver − x_closed‖₁`.
    pub deviation: f64,
    pub residual: f64,
    pub objective: f64,
    /// `|T(x) − (−½β² + ½‖y‖²)|` for the closed-form minimizer.
    pub identity_error: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Solves `y = λ ζ^(k)` on the Mazur operator over `set` and compares with
/// the closed form.
///
/// Whenever the antipode `l` is enumerated the minimizer is not unique; the
/// solver output is compared with the family member whose `e^(l)` coefficient
/// matches it.
pub fn check_closed_form(
    operator: &TruncatedOperator,
    set: &DirectionSet,
    k: usize,
    lambda: f64,
    alpha: f64,
    tol: f64,
    max_iter: usize,
) -> Result<ClosedFormCheck> {
    if operator.n_cols() != set.len() {
        return Err(Error::DimensionMismatch {
            context: "closed-form check",
            expected: set.len(),
            actual: operator.n_cols(),
        });
    }
    let y = scaled_direction(set, k, lambda, operator.n_rows())?;
    let problem = TikhonovProblem::new(operator, y, alpha)?;
    let cert = problem.solve(tol, max_iter)?;
    let antipode = set.antipode_of(k)?;
    // The minimizers form the closed segment between the spike at k and the
    // spike at its antipode; the open-interval family fills the inside.
    let gamma = antipode.and_then(|l| {
        let g = cert.x[l - 1];
        let (low, high) = gamma_interval(lambda, alpha)?;
        let slack = 1e-9 * (high - low);
        (g != 0.0 && g >= low - slack && g <= high + slack).then_some(g)
    });
    let closed = match (gamma, antipode) {
        (Some(g), Some(l)) => segment_member(set.len(), k, l, lambda, alpha, g),
        _ => closed_form_minimizer(set, k, lambda, alpha, None)?,
    };
    let deviation = (&cert.x - &closed).lp_norm(1);
    let beta = soft_threshold(lambda, alpha);
    let expected = -0.5 * beta * beta + 0.5 * problem.data().norm_squared();
    let identity_error = (problem.objective(&closed)? - expected).abs();
    Ok(ClosedFormCheck {
        k,
        lambda,
        alpha,
        antipode,
        gamma,
        deviation,
        residual: cert.residual,
        objective: cert.objective,
        identity_error,
        iterations: cert.iterations,
        converged: cert.converged,
    })
}

/// Objective spread and worst optimality residual over two-component
/// minimizers for the given `γ` values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaFamilyCheck {
    pub objective_min: f64,
    pub objective_max: f64,
    pub max_residual: f64,
}

pub fn check_gamma_family(
    operator: &TruncatedOperator,
    set: &DirectionSet,
    k: usize,
    lambda: f64,
    alpha: f64,
    gammas: &[f64],
) -> Result<GammaFamilyCheck> {
    let y = scaled_direction(set, k, lambda, operator.n_rows())?;
    let problem = TikhonovProblem::new(operator, y, alpha)?;
    let mut out = GammaFamilyCheck {
        objective_min: f64::INFINITY,
        objective_max: f64::NEG_INFINITY,
        max_residual: 0.0,
    };
    for &gamma in gammas {
        let x = closed_form_minimizer(set, k, lambda, alpha, Some(gamma))?;
        let value = problem.objective(&x)?;
        out.objective_min = out.objective_min.min(value);
        out.objective_max = out.objective_max.max(value);
        out.max_residual = out.max_residual.max(problem.optimality_residual(&x)?);
    }
    Ok(out)
}

/// `n` equally spaced interior points of the admissible `γ` interval.
pub fn interior_gammas(lambda: f64, alpha: f64, n: usize) -> Vec<f64> {
    match gamma_interval(lambda, alpha) {
        Some((low, high)) => (1..=n)
            .map(|i| low + (high - low) * i as f64 / (n + 1) as f64)
            .collect(),
        None => Vec::new(),
    }
}

/// One enumeration depth of the collapse experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseRow {
    pub depth: usize,
    /// Largest-magnitude coordinate of the minimizer.
    pub support_index: usize,
    pub support_size: usize,
    pub best_index: usize,
    pub best_correlation: f64,
    pub beta: f64,
    pub l1_norm: f64,
    pub probe_values: Vec<f64>,
    pub objective: f64,
    pub residual: f64,
    pub converged: bool,
    #[serde(skip)]
    pub x: DVector<f64>,
}

/// Solves the Mazur truncation at each depth for data `y` that is not a
/// multiple of any enumerated direction and records how the minimizer moves.
///
/// `probe` holds fixed 1-based coordinates whose values are tracked.
pub fn collapse_experiment(
    y: &[f64],
    alpha: f64,
    params: EnumerationParams,
    depths: &[usize],
    probe: &[usize],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<CollapseRow>> {
    if params.q() != 2.0 {
        return Err(Error::invalid("q", "the collapse experiment runs in l^2"));
    }
    let y_norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(y_norm > alpha) {
        return Err(Error::invalid("y", format!("need ||y|| > alpha, got {y_norm} <= {alpha}")));
    }
    let deepest = depths.iter().copied().max().ok_or(Error::invalid("depths", "empty schedule"))?;
    let all = DirectionSet::prefix(params, deepest)?;
    let mut rows = Vec::with_capacity(depths.len());
    for &depth in depths {
        if depth == 0 {
            return Err(Error::invalid("depths", "depth must be positive"));
        }
        let set = DirectionSet::from_directions(all.as_slice()[..depth].to_vec())?;
        let cover = coverage(&set, y, 2.0)?;
        if cover.correlation >= 1.0 - 1e-12 {
            return Err(Error::invalid(
                "y",
                format!("y is a multiple of direction {} at depth {depth}", cover.index),
            ));
        }
        let n_rows = set.max_support_len(depth).max(y.len());
        let op = mazur(set.as_slice(), depth, n_rows)?;
        let mut data = DVector::zeros(n_rows);
        data.rows_mut(0, y.len()).copy_from_slice(y);
        let problem = TikhonovProblem::new(&op, data, alpha)?;
        let cert = problem.solve(tol, max_iter)?;
        let dominant = cert.dominant_index().unwrap_or(0);
        let beta = if dominant > 0 { cert.x[dominant - 1] } else { 0.0 };
        let probe_values = probe
            .iter()
            .map(|&j| if j >= 1 && j <= depth { cert.x[j - 1] } else { 0.0 })
            .collect();
        rows.push(CollapseRow {
            depth,
            support_index: dominant,
            support_size: cert.support.len(),
            best_index: cover.index,
            best_correlation: cover.correlation,
            beta,
            l1_norm: cert.l1_norm(),
            probe_values,
            objective: cert.objective,
            residual: cert.residual,
            converged: cert.converged,
            x: cert.x,
        });
    }
    Ok(rows)
}

/// `ℓ¹` distance between two minimizers of possibly different truncation depth.
pub fn padded_l1_distance(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .sum()
}

/// Parameter choice `α(δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AlphaRule {
    /// `α = c · δ`.
    Proportional(f64),
}

impl AlphaRule {
    pub fn alpha(&self, delta: f64) -> f64 {
        match self {
            AlphaRule::Proportional(c) => c * delta,
        }
    }
}

impl Default for AlphaRule {
    fn default() -> Self {
        AlphaRule::Proportional(1.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub delta: f64,
    pub alpha: f64,
    pub error_l1: f64,
    pub support_index: usize,
    pub support_size: usize,
    pub residual: f64,
    pub converged: bool,
}

/// Normalized all-ones vector: the fixed noise direction.
pub fn uniform_noise(n: usize) -> DVector<f64> {
    DVector::from_element(n, 1.0 / (n as f64).sqrt())
}

/// Solves `A x = A x_true + δ w` with `α = rule(δ)` for each δ and records
/// `‖x_α^δ − x_true‖₁`. No continuity assumption is checked here, so this
/// also runs the failing protocol on Mazur-type operators.
pub fn delta_sweep(
    operator: &TruncatedOperator,
    x_true: &DVector<f64>,
    noise: &DVector<f64>,
    deltas: &[f64],
    rule: AlphaRule,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<ConvergenceRow>> {
    if noise.len() != operator.n_rows() {
        return Err(Error::DimensionMismatch {
            context: "noise direction",
            expected: operator.n_rows(),
            actual: noise.len(),
        });
    }
    let exact = operator.apply(x_true)?;
    let noise_norm = noise.norm();
    if noise_norm == 0.0 {
        return Err(Error::ZeroVector("noise direction"));
    }
    deltas
        .iter()
        .map(|&delta| {
            if !(delta > 0.0) {
                return Err(Error::invalid("delta", format!("must be positive, got {delta}")));
            }
            let alpha = rule.alpha(delta);
            let data = &exact + noise * (delta / noise_norm);
            let problem = TikhonovProblem::new(operator, data, alpha)?;
            let cert = problem.solve(tol, max_iter)?;
            Ok(ConvergenceRow {
                delta,
                alpha,
                error_l1: (&cert.x - x_true).lp_norm(1),
                support_index: cert.dominant_index().unwrap_or(0),
                support_size: cert.support.len(),
                residual: cert.residual,
                converged: cert.converged,
            })
        })
        .collect()
}

/// [`delta_sweep`] restricted to operators declared weak*-to-weak continuous,
/// where regularized solutions converge to the norm-minimizing solution.
pub fn convergence_experiment(
    operator: &TruncatedOperator,
    x_true: &DVector<f64>,
    deltas: &[f64],
    rule: AlphaRule,
    tol: f64,
    max_iter: usize,
) -> Result<Vec<ConvergenceRow>> {
    if !operator.attributes().weakstar_to_weak_continuous.is_true() {
        return Err(Error::Precondition {
            label: operator.label().to_string(),
            reason: "convergence needs a weak*-to-weak continuous operator".into(),
        });
    }
    let noise = uniform_noise(operator.n_rows());
    delta_sweep(operator, x_true, &noise, deltas, rule, tol, max_iter)
}

/// True when the dominant support index is not the same at every δ level.
pub fn support_drifts(rows: &[ConvergenceRow]) -> bool {
    rows.windows(2).any(|w| w[0].support_index != w[1].support_index)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{diagonal, harmonic_weights, Decay};

    fn unit_set(depth: usize) -> (DirectionSet, TruncatedOperator) {
        let set = DirectionSet::prefix(EnumerationParams::default(), depth).unwrap();
        let op = mazur(set.as_slice(), depth, set.max_support_len(depth)).unwrap();
        (set, op)
    }

    #[test]
    fn soft_threshold_cases() {
        assert!((soft_threshold(1.0, 0.3) - 0.7).abs() < 1e-15);
        assert_eq!(soft_threshold(0.2, 0.3), 0.0);
        assert!((soft_threshold(-1.0, 0.3) + 0.7).abs() < 1e-15);
        assert_eq!(soft_threshold(0.3, 0.3), 0.0);
        assert_eq!(soft_threshold(-0.3, 0.3), 0.0);
        assert_eq!(soft_threshold(5.0, 0.0), 5.0);
    }

    #[test]
    fn objective_at_zero_and_single_spike() {
        let (set, op) = unit_set(40);
        let k = 17;
        let y = scaled_direction(&set, k, 1.0, op.n_rows()).unwrap();
        let problem = TikhonovProblem::new(&op, y.clone(), 0.3).unwrap();
        let zero = DVector::zeros(40);
        assert_eq!(problem.objective(&zero).unwrap(), 0.5 * y.norm_squared());

        let x = closed_form_minimizer(&set, k, 1.0, 0.3, None).unwrap();
        let value = problem.objective(&x).unwrap();
        assert!((value - 0.255).abs() < 1e-12);
        let beta: f64 = 0.7;
        assert!((value - (-0.5 * beta * beta + 0.5 * y.norm_squared())).abs() < 1e-12);
    }

    #[test]
    fn residual_examples() {
        let (set, op) = unit_set(30);
        let rows = op.n_rows();
        let problem = TikhonovProblem::new(&op, DVector::zeros(rows), 1.0).unwrap();
        assert_eq!(problem.optimality_residual(&DVector::zeros(30)).unwrap(), 0.0);

        let mut e = DVector::zeros(30);
        e[4] = 1.0;
        let r = problem.optimality_residual(&e).unwrap();
        assert!((r - 2.0).abs() < 1e-14);

        let y = scaled_direction(&set, 9, 1.0, rows).unwrap();
        let problem = TikhonovProblem::new(&op, y, 0.3).unwrap();
        let x = closed_form_minimizer(&set, 9, 1.0, 0.3, None).unwrap();
        assert!(problem.optimality_residual(&x).unwrap() <= 1e-10);
    }

    #[test]
    fn solver_matches_closed_form_on_mazur() {
        let (set, op) = unit_set(120);
        for k in [3, 11, 47, 100] {
            let check = check_closed_form(&op, &set, k, 1.0, 0.3, 1e-12, 10_000).unwrap();
            assert!(check.converged);
            assert!(check.deviation <= 1e-8, "k={k}: {check:?}");
            assert!(check.residual <= 1e-10);
        }
    }

    #[test]
    fn zero_data_gives_zero() {
        let (_, op) = unit_set(25);
        let problem = TikhonovProblem::new(&op, DVector::zeros(op.n_rows()), 0.5).unwrap();
        let cert = problem.solve(1e-12, 10).unwrap();
        assert!(cert.converged);
        assert_eq!(cert.iterations, 0);
        assert!(cert.x.iter().all(|v| *v == 0.0));
        assert!(cert.support.is_empty());
    }

    #[test]
    fn diagonal_solution_matches_grid_search() {
        let d = diagonal(&[1.0, 0.5], Decay::BoundedBelow).unwrap();
        let y = DVector::from_vec(vec![1.0, 1.0]);
        let problem = TikhonovProblem::new(&d, y, 0.1).unwrap();
        let cert = problem.solve(1e-13, 1000).unwrap();
        assert!((cert.x[0] - 0.9).abs() < 1e-12);
        assert!((cert.x[1] - 1.6).abs() < 1e-12);

        // Independent oracle: brute-force grid with step 1e-3.
        let mut best = (f64::INFINITY, 0.0, 0.0);
        for i in 0..=2000 {
            for j in 0..=2000 {
                let x = DVector::from_vec(vec![i as f64 * 1e-3, j as f64 * 1e-3]);
                let v = problem.objective(&x).unwrap();
                if v < best.0 {
                    best = (v, x[0], x[1]);
                }
            }
        }
        assert!((best.1 - 0.9).abs() < 1e-9 && (best.2 - 1.6).abs() < 1e-9);
    }

    #[test]
    fn closed_form_cases() {
        let (set, _) = unit_set(60);
        let k = 20;
        let l = set.antipode_of(k).unwrap().unwrap();
        let x = closed_form_minimizer(&set, k, 1.0, 0.3, None).unwrap();
        assert!((x[k - 1] - 0.7).abs() < 1e-15);
        assert_eq!(x.iter().filter(|v| **v != 0.0).count(), 1);

        let x = closed_form_minimizer(&set, k, 0.2, 0.3, None).unwrap();
        assert!(x.iter().all(|v| *v == 0.0));

        let x = closed_form_minimizer(&set, k, 1.0, 0.3, Some(-0.5)).unwrap();
        assert!((x[k - 1] - 0.2).abs() < 1e-15);
        assert_eq!(x[l - 1], -0.5);

        let x = closed_form_minimizer(&set, k, -1.0, 0.3, Some(0.4)).unwrap();
        assert!((x[k - 1] - (0.4 - 1.0 + 0.3)).abs() < 1e-15);
        assert_eq!(x[l - 1], 0.4);

        assert!(matches!(
            closed_form_minimizer(&set, k, 1.0, 0.3, Some(-0.8)),
            Err(Error::GammaOutOfRange { .. })
        ));
        assert!(matches!(
            closed_form_minimizer(&set, k, 1.0, 0.3, Some(0.1)),
            Err(Error::GammaOutOfRange { .. })
        ));
        assert!(closed_form_minimizer(&set, k, 0.2, 0.3, Some(-0.1)).is_err());
        assert!(closed_form_minimizer(&set, 61, 1.0, 0.3, None).is_err());
    }

    #[test]
    fn antipodal_endpoint_is_accepted() {
        // At this case the solver lands on the spike at the antipode, whose
        // coefficient sits on the rounded end of the gamma interval.
        let (set, op) = unit_set(400);
        for lambda in [-3.0, 3.0] {
            let check = check_closed_form(&op, &set, 201, lambda, 0.1, 1e-12, 10_000).unwrap();
            assert!(check.deviation <= 1e-8, "{check:?}");
            assert!(check.gamma.is_some());
        }
    }

    #[test]
    fn missing_antipode_is_reported() {
        // Depth 3 of the default enumeration: (-1), (1), (-1,-1); the last has no partner yet.
        let (set, _) = unit_set(3);
        assert_eq!(
            closed_form_minimizer(&set, 3, 1.0, 0.3, Some(-0.2)),
            Err(Error::MissingAntipode { index: 3 })
        );
    }

    #[test]
    fn gamma_family_objective_is_flat() {
        let (set, op) = unit_set(80);
        let gammas = interior_gammas(2.0, 0.3, 7);
        let check = check_gamma_family(&op, &set, 30, 2.0, 0.3, &gammas).unwrap();
        assert!(check.objective_max - check.objective_min <= 1e-12);
        assert!(check.max_residual <= 1e-10);
    }

    #[test]
    fn problem_validation() {
        let (_, op) = unit_set(10);
        let rows = op.n_rows();
        assert!(TikhonovProblem::new(&op, DVector::zeros(rows), 0.0).is_err());
        assert!(TikhonovProblem::new(&op, DVector::zeros(rows + 1), 0.1).is_err());
        let d2 = crate::operators::diagonal_on(2.0, &[1.0], Decay::BoundedBelow).unwrap();
        assert!(TikhonovProblem::new(&d2, DVector::zeros(1), 0.1).is_err());
        let problem = TikhonovProblem::new(&op, DVector::zeros(rows), 0.1).unwrap();
        assert!(problem.objective(&DVector::zeros(9)).is_err());
        assert!(problem.solve(0.0, 10).is_err());
    }

    #[test]
    fn diagonal_convergence_small() {
        let d = diagonal(&harmonic_weights(16), Decay::Vanishing).unwrap();
        let mut x_true = DVector::zeros(16);
        x_true[0] = 1.0;
        let rows = convergence_experiment(
            &d,
            &x_true,
            &[1e-1, 1e-2, 1e-3],
            AlphaRule::default(),
            1e-12,
            10_000,
        )
        .unwrap();
        assert!(rows.windows(2).all(|w| w[1].error_l1 <= w[0].error_l1));
        assert!(rows[2].error_l1 <= 1e-2);
        assert!(!support_drifts(&rows));
    }

    #[test]
    fn convergence_requires_continuity() {
        let (_, op) = unit_set(10);
        let x_true = DVector::zeros(10);
        let err = convergence_experiment(&op, &x_true, &[0.1], AlphaRule::default(), 1e-10, 10);
        assert!(matches!(err, Err(Error::Precondition { .. })));
    }
}
