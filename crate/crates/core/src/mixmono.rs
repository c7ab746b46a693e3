//! Remainder-form mixed-monotone decomposition.
//!
//! For a map `f̃` on a box with Jacobian bounds `J̲ ≤ ∇f̃ ≤ J̄`, every matrix
//! `H` with entries `H_ij ∈ {min(J̲_ij, 0), max(J̄_ij, 0)}` makes the
//! remainder `g = f̃ − H ξ` Jacobian sign-stable: entries picked from the
//! lower bound leave `∂g_i/∂ξ_j ≥ 0`, entries picked from the upper bound
//! leave `∂g_i/∂ξ_j ≤ 0`. The extrema of each `g_i` are then attained at
//! box corners chosen by that sign pattern.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::interval::{Interval, IntervalMatrix, IntervalVector};
use crate::model::{Expr, ExprGrid, ModelError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MixMonoError {
    #[error("exhaustive family over {entries} entries is too large (limit 16)")]
    ExhaustiveTooLarge { entries: usize },
    #[error("Jacobian lower bound exceeds upper bound at ({row}, {col})")]
    InvalidBounds { row: usize, col: usize },
    #[error("unknown family strategy '{0}'")]
    UnknownStrategy(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Vector-valued function evaluated one output at a time.
pub trait ScalarRows: Sync {
    fn rows(&self) -> usize;
    fn dim(&self) -> usize;
    fn eval_row(&self, i: usize, xi: &[f64]) -> Result<f64, ModelError>;
}

/// Expressions evaluated directly at `ξ`.
pub struct ExprRows<'a> {
    exprs: &'a [Expr],
    dim: usize,
}

impl<'a> ExprRows<'a> {
    pub fn new(exprs: &'a [Expr], dim: usize) -> Self {
        Self { exprs, dim }
    }
}

impl ScalarRows for ExprRows<'_> {
    fn rows(&self) -> usize {
        self.exprs.len()
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn eval_row(&self, i: usize, xi: &[f64]) -> Result<f64, ModelError> {
        self.exprs[i].eval(xi)
    }
}

/// `ξ ↦ e(c + G ξ)`.
pub struct AffineLift<'a> {
    exprs: &'a [Expr],
    g: DMatrix<f64>,
    c: DVector<f64>,
}

impl<'a> AffineLift<'a> {
    pub fn new(exprs: &'a [Expr], g: DMatrix<f64>, c: DVector<f64>) -> Self {
        Self { exprs, g, c }
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }

    pub fn point(&self, xi: &[f64]) -> DVector<f64> {
        &self.g * DVector::from_column_slice(xi) + &self.c
    }

    /// Box enclosing `c + G ξ` for `ξ ∈ bx`.
    pub fn image_box(&self, bx: &IntervalVector) -> IntervalVector {
        (0..self.c.len())
            .map(|r| {
                (0..self.g.ncols()).fold(Interval::point(self.c[r]), |acc, k| {
                    let v = self.g[(r, k)];
                    if v == 0.0 {
                        acc
                    } else {
                        acc + bx[k].scale(v)
                    }
                })
            })
            .collect()
    }

    /// Bounds on `∂/∂ξ e(c + G ξ)` over `bx` by the chain rule: the
    /// Jacobian of `e` over the image box times `G`.
    pub fn jacobian_bounds(
        &self,
        jac: &ExprGrid,
        bx: &IntervalVector,
    ) -> Result<IntervalMatrix, ModelError> {
        let outer = jac.bounds_over_box(&self.image_box(bx))?;
        outer
            .mul_real(&self.g)
            .map_err(|e| ModelError::IntervalDomainError(e.to_string()))
    }
}

impl ScalarRows for AffineLift<'_> {
    fn rows(&self) -> usize {
        self.exprs.len()
    }

    fn dim(&self) -> usize {
        self.g.ncols()
    }

    fn eval_row(&self, i: usize, xi: &[f64]) -> Result<f64, ModelError> {
        self.exprs[i].eval(self.point(xi).as_slice())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `H_ij = min(J̲_ij, 0)`, so `∂g_i/∂ξ_j ≥ 0`.
    NonNegative,
    /// `H_ij = max(J̄_ij, 0)`, so `∂g_i/∂ξ_j ≤ 0`.
    NonPositive,
}

/// One linear remainder `H` together with the sign pattern it induces.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionSelection {
    pub h: DMatrix<f64>,
    pattern: Vec<Sign>,
}

impl DecompositionSelection {
    fn from_choice(
        jlo: &DMatrix<f64>,
        jhi: &DMatrix<f64>,
        mut choose: impl FnMut(usize, usize) -> Sign,
    ) -> Self {
        let (r, c) = jlo.shape();
        let mut pattern = Vec::with_capacity(r * c);
        let mut h = DMatrix::zeros(r, c);
        for i in 0..r {
            for j in 0..c {
                let s = choose(i, j);
                h[(i, j)] = match s {
                    Sign::NonNegative => jlo[(i, j)].min(0.0),
                    Sign::NonPositive => jhi[(i, j)].max(0.0),
                };
                pattern.push(s);
            }
        }
        Self { h, pattern }
    }

    pub fn sign(&self, i: usize, j: usize) -> Sign {
        self.pattern[i * self.h.ncols() + j]
    }

    pub fn rows(&self) -> usize {
        self.h.nrows()
    }

    pub fn cols(&self) -> usize {
        self.h.ncols()
    }
}

/// Which remainder matrices to intersect over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FamilyStrategy {
    /// All-lower and all-upper selections.
    Canonical,
    /// The canonical pair plus `k` random valid selections.
    CanonicalPlusRandom { k: usize, seed: u64 },
    /// Every selection; only for at most 16 entries.
    Exhaustive,
    /// The canonical pair plus one selection that follows the dominant sign
    /// of each Jacobian entry (exact for linear maps).
    #[default]
    Adaptive,
}

impl fmt::Display for FamilyStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyStrategy::Canonical => write!(f, "canonical"),
            FamilyStrategy::CanonicalPlusRandom { k, .. } => write!(f, "canonical+{k}"),
            FamilyStrategy::Exhaustive => write!(f, "exhaustive"),
            FamilyStrategy::Adaptive => write!(f, "adaptive"),
        }
    }
}

impl FromStr for FamilyStrategy {
    type Err = MixMonoError;

    /// `canonical`, `canonical+K`, `exhaustive` or `adaptive`. Random
    /// selections are seeded with 0; use [`FamilyStrategy::with_seed`] to
    /// change that.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "canonical" => Ok(FamilyStrategy::Canonical),
            "exhaustive" => Ok(FamilyStrategy::Exhaustive),
            "adaptive" => Ok(FamilyStrategy::Adaptive),
            _ => s
                .strip_prefix("canonical+")
                .and_then(|k| k.parse().ok())
                .map(|k| FamilyStrategy::CanonicalPlusRandom { k, seed: 0 })
                .ok_or_else(|| MixMonoError::UnknownStrategy(s.to_string())),
        }
    }
}

impl FamilyStrategy {
    pub fn with_seed(self, seed: u64) -> Self {
        match self {
            FamilyStrategy::CanonicalPlusRandom { k, .. } => {
                FamilyStrategy::CanonicalPlusRandom { k, seed }
            }
            other => other,
        }
    }
}

impl Serialize for FamilyStrategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for FamilyStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Remainder matrices for Jacobian bounds `[jlo, jhi]`.
pub fn build_h_family(
    jlo: &DMatrix<f64>,
    jhi: &DMatrix<f64>,
    strategy: FamilyStrategy,
) -> Result<Vec<DecompositionSelection>, MixMonoError> {
    for i in 0..jlo.nrows() {
        for j in 0..jlo.ncols() {
            if !matches!(
                jlo[(i, j)].partial_cmp(&jhi[(i, j)]),
                Some(Ordering::Less | Ordering::Equal)
            ) {
                return Err(MixMonoError::InvalidBounds { row: i, col: j });
            }
        }
    }
    let lower = DecompositionSelection::from_choice(jlo, jhi, |_, _| Sign::NonNegative);
    let upper = DecompositionSelection::from_choice(jlo, jhi, |_, _| Sign::NonPositive);
    let mut family = vec![lower, upper];
    match strategy {
        FamilyStrategy::Canonical => {}
        FamilyStrategy::CanonicalPlusRandom { k, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..k {
                family.push(DecompositionSelection::from_choice(jlo, jhi, |_, _| {
                    if rng.random_bool(0.5) {
                        Sign::NonNegative
                    } else {
                        Sign::NonPositive
                    }
                }));
            }
        }
        FamilyStrategy::Exhaustive => {
            let entries = jlo.len();
            if entries > 16 {
                return Err(MixMonoError::ExhaustiveTooLarge { entries });
            }
            let cols = jlo.ncols();
            family = (0..1u32 << entries)
                .map(|mask| {
                    DecompositionSelection::from_choice(jlo, jhi, |i, j| {
                        if mask >> (i * cols + j) & 1 == 1 {
                            Sign::NonPositive
                        } else {
                            Sign::NonNegative
                        }
                    })
                })
                .collect();
        }
        FamilyStrategy::Adaptive => {
            family.push(DecompositionSelection::from_choice(jlo, jhi, |i, j| {
                if jlo[(i, j)] + jhi[(i, j)] >= 0.0 {
                    Sign::NonPositive
                } else {
                    Sign::NonNegative
                }
            }));
        }
    }
    let mut unique: Vec<DecompositionSelection> = Vec::with_capacity(family.len());
    for s in family {
        if !unique.iter().any(|u| u.h == s.h) {
            unique.push(s);
        }
    }
    Ok(unique)
}

/// Corner selecting `ẑ_j` where row `row` is non-positive and `z_j` where it
/// is non-negative.
pub fn corner_point(
    sel: &DecompositionSelection,
    row: usize,
    z: &DVector<f64>,
    zhat: &DVector<f64>,
) -> DVector<f64> {
    DVector::from_fn(z.len(), |j, _| match sel.sign(row, j) {
        Sign::NonPositive => zhat[j],
        Sign::NonNegative => z[j],
    })
}

fn remainder(
    f: &dyn ScalarRows,
    sel: &DecompositionSelection,
    i: usize,
    xi: &DVector<f64>,
) -> Result<f64, ModelError> {
    Ok(f.eval_row(i, xi.as_slice())? - sel.h.row(i).transpose().dot(xi))
}

/// Tight bounds `(g̲, ḡ)` of `g = f − H ξ` over `bx`, attained at corners.
pub fn jss_remainder_bounds(
    f: &dyn ScalarRows,
    sel: &DecompositionSelection,
    bx: &IntervalVector,
) -> Result<(DVector<f64>, DVector<f64>), ModelError> {
    if bx.len() != f.dim() || sel.cols() != f.dim() || sel.rows() != f.rows() {
        return Err(ModelError::DimensionMismatch {
            expected: f.dim(),
            found: bx.len(),
        });
    }
    let (lb, ub) = (bx.lo(), bx.hi());
    let mut lo = DVector::zeros(f.rows());
    let mut hi = DVector::zeros(f.rows());
    for i in 0..f.rows() {
        hi[i] = remainder(f, sel, i, &corner_point(sel, i, &ub, &lb))?;
        lo[i] = remainder(f, sel, i, &corner_point(sel, i, &lb, &ub))?;
    }
    Ok((lo, hi))
}

/// The decomposition function `f_d(z, ẑ) = g(ζ(z, ẑ)) + H⁺ z + H⁻ ẑ` of row
/// `row`, where `H⁺`/`H⁻` are the positive/negative parts of `H`.
pub fn decomposition_function(
    f: &dyn ScalarRows,
    sel: &DecompositionSelection,
    row: usize,
    z: &DVector<f64>,
    zhat: &DVector<f64>,
) -> Result<f64, ModelError> {
    let corner = corner_point(sel, row, z, zhat);
    let linear: f64 = (0..z.len())
        .map(|j| {
            let h = sel.h[(row, j)];
            if h >= 0.0 {
                h * z[j]
            } else {
                h * zhat[j]
            }
        })
        .sum();
    Ok(remainder(f, sel, row, &corner)? + linear)
}

/// `f(ξ) ∈ [g̲ + min H ξ, ḡ + max H ξ]` over `bx` for one selection.
pub fn decomposition_box(
    f: &dyn ScalarRows,
    sel: &DecompositionSelection,
    bx: &IntervalVector,
) -> Result<IntervalVector, ModelError> {
    let (glo, ghi) = jss_remainder_bounds(f, sel, bx)?;
    Ok((0..f.rows())
        .map(|i| {
            let lin = (0..f.dim()).fold(Interval::point(0.0), |acc, j| {
                acc + bx[j].scale(sel.h[(i, j)])
            });
            Interval::new(
                glo[i] + lin.lo(),
                (ghi[i] + lin.hi()).max(glo[i] + lin.lo()),
            )
        })
        .collect())
}

/// Intersection of [`decomposition_box`] over the whole family built from
/// `jac` (bounds of `∇f` over `bx`).
pub fn function_bounds(
    f: &dyn ScalarRows,
    jac: &IntervalMatrix,
    bx: &IntervalVector,
    strategy: FamilyStrategy,
) -> Result<IntervalVector, MixMonoError> {
    let family = build_h_family(&jac.lo(), &jac.hi(), strategy)?;
    let mut acc: Option<IntervalVector> = None;
    for sel in &family {
        let b = decomposition_box(f, sel, bx)?;
        acc = Some(match acc {
            None => b,
            Some(a) => meet(&a, &b),
        });
    }
    Ok(acc.expect("family is never empty"))
}

/// Element-wise intersection; entries that cross by round-off collapse to
/// their midpoint.
fn meet(a: &IntervalVector, b: &IntervalVector) -> IntervalVector {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| {
            x.intersect(y).unwrap_or_else(|| {
                let m = 0.5 * (x.lo().max(y.lo()) + x.hi().min(y.hi()));
                Interval::point(m)
            })
        })
        .collect()
}

/// Bounds on each Jacobian entry obtained by decomposing the entry itself
/// (using interval bounds of its gradient, i.e. the Hessian row), then
/// intersected with the natural interval extension.
pub fn bound_jacobian_via_decomposition(
    jac: &ExprGrid,
    hess: &[ExprGrid],
    bx: &IntervalVector,
    strategy: FamilyStrategy,
) -> Result<IntervalMatrix, MixMonoError> {
    let natural = jac.bounds_over_box(bx)?;
    let mut out = natural.clone();
    for (i, h) in hess.iter().enumerate().take(jac.nrows()) {
        let hb = h.bounds_over_box(bx)?;
        for j in 0..jac.ncols() {
            let entry = std::slice::from_ref(jac.get(i, j));
            if entry[0].as_const().is_some() {
                continue;
            }
            let grad = hb.row(j);
            let f = ExprRows::new(entry, bx.len());
            let b = function_bounds(&f, &grad, bx, strategy)?;
            let nat = natural.get(i, j);
            out.set(i, j, b[0].intersect(&nat).unwrap_or(nat));
        }
    }
    Ok(out)
}
