use nalgebra::DMatrix;

use super::{Expr, ModelError};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};

/// A rectangular grid of expressions, e.g. a symbolic Jacobian.
#[derive(Debug, Clone, PartialEq)]
pub struct ExprGrid {
    rows: usize,
    cols: usize,
    entries: Vec<Expr>,
}

impl ExprGrid {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Expr) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Symbolic Jacobian of `exprs` with respect to variables `0..nvars`.
    pub fn jacobian(exprs: &[Expr], nvars: usize) -> Self {
        Self::from_fn(exprs.len(), nvars, |i, j| exprs[i].diff(j))
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Expr {
        &self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[Expr] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn eval(&self, p: &[f64]) -> Result<DMatrix<f64>, ModelError> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(i, j)] = self.get(i, j).eval(p)?;
            }
        }
        Ok(m)
    }

    /// Natural interval extension of every entry over `bx`.
    pub fn bounds_over_box(&self, bx: &IntervalVector) -> Result<IntervalMatrix, ModelError> {
        let b = bx.entries();
        let mut out = IntervalMatrix::from_fn(self.rows, self.cols, |_, _| Interval::point(0.0));
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).eval_interval(b)?);
            }
        }
        Ok(out)
    }

    /// `Some(M)` when every entry is a constant.
    pub fn as_constant(&self) -> Option<DMatrix<f64>> {
        let vals: Option<Vec<f64>> = self.entries.iter().map(Expr::as_const).collect();
        vals.map(|v| DMatrix::from_row_slice(self.rows, self.cols, &v))
    }
}

/// Jacobian bounds of the expressions behind `jac` over `bx`.
pub fn jacobian_bounds_over_box(
    jac: &ExprGrid,
    bx: &IntervalVector,
) -> Result<IntervalMatrix, ModelError> {
    jac.bounds_over_box(bx)
}
