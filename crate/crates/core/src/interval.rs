//! Closed real intervals, interval vectors and interval matrices.
//!
//! Arithmetic is plain `f64` arithmetic without directed rounding. Callers
//! that want a safety margin can inflate results with [`Interval::inflate`];
//! the default margin everywhere in this crate is zero.
//!
//! An [`Interval`] is never empty. Operations whose result may be empty
//! (intersection, division by an interval straddling zero) return `Option`
//! or `Result` instead of producing an inverted interval.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("empty interval: lower bound {lo} exceeds upper bound {hi}")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error("interval bound is NaN")]
    NotANumber,
    #[error("division by an interval containing zero: {0}")]
    DivisionByIntervalContainingZero(Interval),
    #[error("square root of an interval with negative part: {0}")]
    NegativeSqrt(Interval),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// The four basic arithmetic operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// A non-empty closed interval `[lo, hi]`. Infinite endpoints are allowed
/// (used for LP variable bounds); NaN is not.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Panics when `lo > hi` or either bound is NaN. See [`Interval::try_new`].
    pub fn new(lo: f64, hi: f64) -> Self {
        match Self::try_new(lo, hi) {
            Ok(i) => i,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn try_new(lo: f64, hi: f64) -> Result<Self, IntervalError> {
        if lo.is_nan() || hi.is_nan() {
            return Err(IntervalError::NotANumber);
        }
        if lo > hi {
            return Err(IntervalError::EmptyInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: f64) -> Self {
        Self::new(x, x)
    }

    /// `[-r, r]` for `r >= 0`.
    pub fn symmetric(r: f64) -> Self {
        Self::new(-r.abs(), r.abs())
    }

    pub fn unit() -> Self {
        Self { lo: -1.0, hi: 1.0 }
    }

    pub fn entire() -> Self {
        Self {
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
    }

    pub fn from_center_radius(center: f64, radius: f64) -> Self {
        Self::new(center - radius.abs(), center + radius.abs())
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn diam(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn rad(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    /// Largest absolute value attained.
    #[inline]
    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(0.0)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite()
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }

    /// Widens both endpoints by `eps >= 0`.
    pub fn inflate(&self, eps: f64) -> Interval {
        Interval {
            lo: self.lo - eps,
            hi: self.hi + eps,
        }
    }

    pub fn scale(&self, k: f64) -> Interval {
        if k >= 0.0 {
            Interval {
                lo: self.lo * k,
                hi: self.hi * k,
            }
        } else {
            Interval {
                lo: self.hi * k,
                hi: self.lo * k,
            }
        }
    }

    pub fn arith(&self, other: &Interval, op: ArithOp) -> Result<Interval, IntervalError> {
        match op {
            ArithOp::Add => Ok(*self + *other),
            ArithOp::Sub => Ok(*self - *other),
            ArithOp::Mul => Ok(*self * *other),
            ArithOp::Div => self.checked_div(other),
        }
    }

    pub fn checked_div(&self, other: &Interval) -> Result<Interval, IntervalError> {
        if other.contains_zero() {
            return Err(IntervalError::DivisionByIntervalContainingZero(*other));
        }
        let inv = Interval {
            lo: 1.0 / other.hi,
            hi: 1.0 / other.lo,
        };
        Ok(*self * inv)
    }

    /// Integer power with the exact range for even exponents.
    pub fn powi(&self, n: i32) -> Result<Interval, IntervalError> {
        if n == 0 {
            return Ok(Interval::point(1.0));
        }
        if n < 0 {
            let p = self.powi(-n)?;
            return Interval::point(1.0).checked_div(&p);
        }
        let a = self.lo.powi(n);
        let b = self.hi.powi(n);
        if n % 2 == 1 {
            return Ok(Interval { lo: a, hi: b });
        }
        if self.lo >= 0.0 {
            Ok(Interval { lo: a, hi: b })
        } else if self.hi <= 0.0 {
            Ok(Interval { lo: b, hi: a })
        } else {
            Ok(Interval {
                lo: 0.0,
                hi: a.max(b),
            })
        }
    }

    pub fn sqrt(&self) -> Result<Interval, IntervalError> {
        if self.lo < 0.0 {
            return Err(IntervalError::NegativeSqrt(*self));
        }
        Ok(Interval {
            lo: self.lo.sqrt(),
            hi: self.hi.sqrt(),
        })
    }

    pub fn sin(&self) -> Interval {
        if !self.is_bounded() || self.diam() >= TAU {
            return Interval::unit();
        }
        let (a, b) = (self.lo.sin(), self.hi.sin());
        let mut lo = a.min(b);
        let mut hi = a.max(b);
        // Maxima of sin sit at pi/2 + 2k pi, minima at -pi/2 + 2k pi.
        if contains_periodic_point(self.lo, self.hi, FRAC_PI_2) {
            hi = 1.0;
        }
        if contains_periodic_point(self.lo, self.hi, -FRAC_PI_2) {
            lo = -1.0;
        }
        Interval { lo, hi }
    }

    pub fn cos(&self) -> Interval {
        if !self.is_bounded() || self.diam() >= TAU {
            return Interval::unit();
        }
        let (a, b) = (self.lo.cos(), self.hi.cos());
        let mut lo = a.min(b);
        let mut hi = a.max(b);
        if contains_periodic_point(self.lo, self.hi, 0.0) {
            hi = 1.0;
        }
        if contains_periodic_point(self.lo, self.hi, PI) {
            lo = -1.0;
        }
        Interval { lo, hi }
    }

    pub fn atan(&self) -> Interval {
        Interval {
            lo: self.lo.atan(),
            hi: self.hi.atan(),
        }
    }
}

/// Whether `[lo, hi]` contains `phase + 2 k pi` for some integer `k`.
fn contains_periodic_point(lo: f64, hi: f64, phase: f64) -> bool {
    let k = ((lo - phase) / TAU).ceil();
    phase + k * TAU <= hi
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo + rhs.lo,
            hi: self.hi + rhs.hi,
        }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, rhs: Interval) -> Interval {
        Interval {
            lo: self.lo - rhs.hi,
            hi: self.hi - rhs.lo,
        }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, rhs: Interval) -> Interval {
        if self.is_point() {
            return rhs.scale(self.lo);
        }
        if rhs.is_point() {
            return self.scale(rhs.lo);
        }
        let p = [
            self.lo * rhs.lo,
            self.lo * rhs.hi,
            self.hi * rhs.lo,
            self.hi * rhs.hi,
        ];
        let lo = p.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = p.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo, hi }
    }
}

impl Mul<f64> for Interval {
    type Output = Interval;
    fn mul(self, rhs: f64) -> Interval {
        self.scale(rhs)
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -self.hi,
            hi: -self.lo,
        }
    }
}

/// An axis-aligned box `[lo, hi]` in `R^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalVector(Vec<Interval>);

impl IntervalVector {
    pub fn new(entries: Vec<Interval>) -> Self {
        Self(entries)
    }

    pub fn from_bounds(lo: &[f64], hi: &[f64]) -> Result<Self, IntervalError> {
        if lo.len() != hi.len() {
            return Err(IntervalError::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        lo.iter()
            .zip(hi)
            .map(|(&l, &h)| Interval::try_new(l, h))
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }

    /// `center ⊕ diag(halfwidths) B∞`.
    pub fn from_center_halfwidths(
        center: &[f64],
        halfwidths: &[f64],
    ) -> Result<Self, IntervalError> {
        if center.len() != halfwidths.len() {
            return Err(IntervalError::DimensionMismatch {
                expected: center.len(),
                found: halfwidths.len(),
            });
        }
        Ok(Self(
            center
                .iter()
                .zip(halfwidths)
                .map(|(&c, &r)| Interval::from_center_radius(c, r))
                .collect(),
        ))
    }

    pub fn unit(n: usize) -> Self {
        Self(vec![Interval::unit(); n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Interval] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &Interval> {
        self.0.iter()
    }

    pub fn lo(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.0.iter().map(Interval::lo))
    }

    pub fn hi(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.0.iter().map(Interval::hi))
    }

    pub fn mid(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.0.iter().map(Interval::mid))
    }

    pub fn rad(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.0.iter().map(Interval::rad))
    }

    pub fn diam(&self) -> DVector<f64> {
        DVector::from_iterator(self.len(), self.0.iter().map(Interval::diam))
    }

    /// Center and half-widths: `z ∈ self ⇔ |z - center| <= halfwidths`.
    pub fn centered_form(&self) -> Result<(DVector<f64>, DVector<f64>), IntervalError> {
        if self.is_empty() {
            return Err(IntervalError::EmptyInterval {
                lo: f64::NAN,
                hi: f64::NAN,
            });
        }
        Ok((self.mid(), self.rad()))
    }

    pub fn contains(&self, z: &[f64]) -> bool {
        z.len() == self.len() && self.0.iter().zip(z).all(|(i, &x)| i.contains(x))
    }

    pub fn is_subset_of(&self, other: &IntervalVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.is_subset_of(b))
    }

    /// Product of the side lengths.
    pub fn volume(&self) -> f64 {
        self.0.iter().map(Interval::diam).product()
    }

    pub fn intersect(&self, other: &IntervalVector) -> Option<IntervalVector> {
        if self.len() != other.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.intersect(b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub fn concat(&self, other: &IntervalVector) -> IntervalVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }
}

impl std::ops::Index<usize> for IntervalVector {
    type Output = Interval;
    fn index(&self, i: usize) -> &Interval {
        &self.0[i]
    }
}

impl FromIterator<Interval> for IntervalVector {
    fn from_iter<T: IntoIterator<Item = Interval>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Row-major grid of intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Interval>,
}

impl IntervalMatrix {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Interval) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_bounds(lo: &DMatrix<f64>, hi: &DMatrix<f64>) -> Result<Self, IntervalError> {
        if lo.shape() != hi.shape() {
            return Err(IntervalError::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        let mut data = Vec::with_capacity(lo.len());
        for i in 0..lo.nrows() {
            for j in 0..lo.ncols() {
                data.push(Interval::try_new(lo[(i, j)], hi[(i, j)])?);
            }
        }
        Ok(Self {
            rows: lo.nrows(),
            cols: lo.ncols(),
            data,
        })
    }

    pub fn from_point(m: &DMatrix<f64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| Interval::point(m[(i, j)]))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Interval {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Interval) {
        self.data[i * self.cols + j] = v;
    }

    pub fn lo(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).lo())
    }

    pub fn hi(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).hi())
    }

    pub fn mid(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).mid())
    }

    pub fn rad(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).rad())
    }

    pub fn diam(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).diam())
    }

    /// Splits `J` into `mid(J) ⊕ J_Δ` with `[J_Δ]_ij = ½[-diam(J)_ij, diam(J)_ij]`.
    pub fn split(&self) -> Result<(DMatrix<f64>, IntervalMatrix), IntervalError> {
        if self.data.is_empty() {
            return Err(IntervalError::EmptyInterval {
                lo: f64::NAN,
                hi: f64::NAN,
            });
        }
        let delta = Self::from_fn(self.rows, self.cols, |i, j| {
            Interval::symmetric(self.get(i, j).rad())
        });
        Ok((self.mid(), delta))
    }

    pub fn contains(&self, m: &DMatrix<f64>) -> bool {
        m.shape() == (self.rows, self.cols)
            && (0..self.rows).all(|i| (0..self.cols).all(|j| self.get(i, j).contains(m[(i, j)])))
    }

    pub fn is_subset_of(&self, other: &IntervalMatrix) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(a, b)| a.is_subset_of(b))
    }

    /// Interval matrix times real matrix.
    pub fn mul_real(&self, m: &DMatrix<f64>) -> Result<IntervalMatrix, IntervalError> {
        if self.cols != m.nrows() {
            return Err(IntervalError::DimensionMismatch {
                expected: self.cols,
                found: m.nrows(),
            });
        }
        Ok(Self::from_fn(self.rows, m.ncols(), |i, j| {
            let mut acc = Interval::point(0.0);
            for k in 0..self.cols {
                let g = m[(k, j)];
                if g != 0.0 {
                    acc = acc + self.get(i, k).scale(g);
                }
            }
            acc
        }))
    }

    /// Interval matrix times interval vector.
    pub fn mul_vector(&self, v: &IntervalVector) -> Result<IntervalVector, IntervalError> {
        if self.cols != v.len() {
            return Err(IntervalError::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Interval::point(0.0), |acc, k| acc + self.get(i, k) * v[k])
            })
            .collect())
    }

    /// Element-wise intersection; falls back to `self` entries where the
    /// intersection is empty.
    pub fn intersect(&self, other: &IntervalMatrix) -> IntervalMatrix {
        Self::from_fn(self.rows, self.cols, |i, j| {
            let a = self.get(i, j);
            a.intersect(&other.get(i, j)).unwrap_or(a)
        })
    }

    /// Row `i` as a `1 × n` interval matrix.
    pub fn row(&self, i: usize) -> IntervalMatrix {
        Self::from_fn(1, self.cols, |_, j| self.get(i, j))
    }

    pub fn select_columns(&self, cols: std::ops::Range<usize>) -> IntervalMatrix {
        Self::from_fn(self.rows, cols.len(), |i, j| self.get(i, cols.start + j))
    }
}

/// `A ∘ B` for the four basic operations.
pub fn interval_arith(a: Interval, b: Interval, op: ArithOp) -> Result<Interval, IntervalError> {
    a.arith(&b, op)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn iv(lo: f64, hi: f64) -> Interval {
        Interval::new(lo, hi)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(iv(1.0, 3.0) + iv(-1.0, 1.0), iv(0.0, 4.0));
        // endpoint products {-3, -4, 6, 8}
        assert_eq!(iv(-1.0, 2.0) * iv(3.0, 4.0), iv(-4.0, 8.0));
        assert_eq!(iv(2.0, 2.0) * iv(5.0, 5.0), iv(10.0, 10.0));
        assert_eq!(
            interval_arith(iv(1.0, 2.0), iv(2.0, 4.0), ArithOp::Div).unwrap(),
            iv(0.25, 1.0)
        );
        assert_eq!(
            interval_arith(iv(1.0, 2.0), iv(2.0, 4.0), ArithOp::Sub).unwrap(),
            iv(-3.0, 0.0)
        );
    }

    #[test]
    fn division_by_zero_interval_is_an_error() {
        let err = iv(1.0, 2.0).checked_div(&iv(-1.0, 1.0)).unwrap_err();
        assert!(matches!(
            err,
            IntervalError::DivisionByIntervalContainingZero(_)
        ));
        assert!(iv(1.0, 2.0).checked_div(&iv(0.0, 1.0)).is_err());
    }

    #[test]
    fn empty_interval_is_rejected() {
        assert!(matches!(
            Interval::try_new(2.0, 1.0),
            Err(IntervalError::EmptyInterval { .. })
        ));
        assert!(Interval::try_new(f64::NAN, 1.0).is_err());
        assert!(iv(0.0, 1.0).intersect(&iv(2.0, 3.0)).is_none());
    }

    #[test]
    fn centered_form_examples() {
        let v = IntervalVector::new(vec![iv(-1.0, 3.0)]);
        let (c, r) = v.centered_form().unwrap();
        assert_eq!((c[0], r[0]), (1.0, 2.0));

        let v = IntervalVector::new(vec![iv(0.0, 0.0); 3]);
        let (c, r) = v.centered_form().unwrap();
        assert!(c.iter().chain(r.iter()).all(|&x| x == 0.0));

        // process and measurement noise boxes of the first benchmark system
        let v = IntervalVector::new(vec![iv(-0.1, 0.1), iv(-0.4, 0.4)]);
        let (c, r) = v.centered_form().unwrap();
        assert_eq!(c.as_slice(), &[0.0, 0.0]);
        assert_eq!(r.as_slice(), &[0.1, 0.4]);

        assert!(IntervalVector::new(vec![]).centered_form().is_err());
    }

    #[test]
    fn split_matrix_examples() {
        let j = IntervalMatrix::from_fn(1, 1, |_, _| iv(1.0, 3.0));
        let (mid, delta) = j.split().unwrap();
        assert_eq!(mid[(0, 0)], 2.0);
        assert_eq!(delta.get(0, 0), iv(-1.0, 1.0));

        let m = DMatrix::from_row_slice(2, 2, &[1.0, -2.0, 0.5, 4.0]);
        let (mid, delta) = IntervalMatrix::from_point(&m).split().unwrap();
        assert_eq!(mid, m);
        assert!(delta
            .lo()
            .iter()
            .chain(delta.hi().iter())
            .all(|&x| x == 0.0));

        let j = IntervalMatrix::from_fn(
            1,
            2,
            |_, k| if k == 0 { iv(-2.0, 2.0) } else { iv(0.0, 4.0) },
        );
        let (mid, delta) = j.split().unwrap();
        assert_eq!(mid.as_slice(), &[0.0, 2.0]);
        assert_eq!(delta.get(0, 0), iv(-2.0, 2.0));
        assert_eq!(delta.get(0, 1), iv(-2.0, 2.0));
    }

    #[test]
    fn elementary_function_ranges() {
        assert_eq!(iv(-1.0, 1.0).powi(2).unwrap(), iv(0.0, 1.0));
        assert_eq!(iv(-3.0, -1.0).powi(2).unwrap(), iv(1.0, 9.0));
        assert_eq!(iv(-1.0, 2.0).powi(3).unwrap(), iv(-1.0, 8.0));
        assert_eq!(iv(0.0, FRAC_PI_2).sin(), iv(0.0, 1.0));
        assert_eq!(iv(0.0, PI).sin().hi(), 1.0);
        assert_eq!(iv(-0.5, 0.5).cos().hi(), 1.0);
        assert_eq!(iv(3.0, 3.5).cos().lo(), -1.0);
        assert_eq!(iv(0.0, 10.0).sin(), Interval::unit());
        assert!(iv(-1.0, 4.0).sqrt().is_err());
        assert_eq!(iv(4.0, 9.0).sqrt().unwrap(), iv(2.0, 3.0));
    }

    #[test]
    fn sampled_soundness_of_all_operations() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let a = iv(-1.5, 2.0);
        let b = iv(0.5, 3.0);
        for _ in 0..10_000 {
            let x = rng.random_range(a.lo()..=a.hi());
            let y = rng.random_range(b.lo()..=b.hi());
            assert!((a + b).contains(x + y));
            assert!((a - b).contains(x - y));
            assert!((a * b).contains(x * y));
            assert!(a.checked_div(&b).unwrap().contains(x / y));
            assert!(a.sin().contains(x.sin()));
            assert!(a.cos().contains(x.cos()));
            assert!(a.atan().contains(x.atan()));
            assert!(a.powi(2).unwrap().contains(x * x));
            assert!(a.powi(-2).is_err());
            assert!(b.powi(-3).unwrap().contains(y.powi(-3)));
        }
    }

    fn arb_interval() -> impl Strategy<Value = Interval> {
        (-50.0f64..50.0, 0.0f64..20.0).prop_map(|(lo, w)| Interval::new(lo, lo + w))
    }

    // Dyadic endpoints make mid/rad arithmetic exact.
    fn dyadic() -> impl Strategy<Value = f64> {
        (-4096i32..4096).prop_map(|k| f64::from(k) / 64.0)
    }

    proptest! {
        #[test]
        fn inclusion_monotone(a in arb_interval(), b in arb_interval(), ea in 0.0f64..3.0, eb in 0.0f64..3.0) {
            let (a2, b2) = (a.inflate(ea), b.inflate(eb));
            prop_assert!((a + b).is_subset_of(&(a2 + b2)));
            prop_assert!((a - b).is_subset_of(&(a2 - b2)));
            prop_assert!((a * b).is_subset_of(&(a2 * b2)));
            if !b2.contains_zero() {
                prop_assert!(a.checked_div(&b).unwrap().is_subset_of(&a2.checked_div(&b2).unwrap()));
            }
            prop_assert!(a.sin().is_subset_of(&a2.sin()));
            prop_assert!(a.cos().is_subset_of(&a2.cos()));
        }

        #[test]
        fn centered_form_round_trip(pairs in proptest::collection::vec((dyadic(), dyadic()), 1..6)) {
            let v: IntervalVector = pairs.iter().map(|&(p, q)| Interval::new(p.min(q), p.max(q))).collect();
            let (c, r) = v.centered_form().unwrap();
            let back = IntervalVector::from_center_halfwidths(c.as_slice(), r.as_slice()).unwrap();
            prop_assert_eq!(back, v);
        }

        #[test]
        fn mid_rad_consistent(a in arb_interval()) {
            prop_assert!((a.mid() - a.rad() - a.lo()).abs() <= 1e-12 * (1.0 + a.mag()));
            prop_assert!((a.mid() + a.rad() - a.hi()).abs() <= 1e-12 * (1.0 + a.mag()));
        }
    }
}
