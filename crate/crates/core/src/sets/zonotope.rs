use nalgebra::{DMatrix, DVector};

use super::{check_dim, ConstrainedZonotope, SetError};
use crate::interval::{Interval, IntervalVector};
use crate::linalg::hcat;

/// `{G ξ + c : ‖ξ‖∞ ≤ 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Zonotope {
    pub g: DMatrix<f64>,
    pub c: DVector<f64>,
}

impl Zonotope {
    pub fn new(g: DMatrix<f64>, c: DVector<f64>) -> Result<Self, SetError> {
        check_dim(c.len(), g.nrows())?;
        Ok(Self { g, c })
    }

    pub fn point(c: DVector<f64>) -> Self {
        Self {
            g: DMatrix::zeros(c.len(), 0),
            c,
        }
    }

    /// Axis-aligned box `[lo, hi]` with one generator per axis.
    pub fn from_box(b: &IntervalVector) -> Self {
        Self {
            g: DMatrix::from_diagonal(&b.rad()),
            c: b.mid(),
        }
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn ngen(&self) -> usize {
        self.g.ncols()
    }

    pub fn to_cz(&self) -> ConstrainedZonotope {
        ConstrainedZonotope::from(self.clone())
    }

    /// `⟨d, c⟩ + Σ_j |⟨d, G_j⟩|`.
    pub fn support(&self, d: &DVector<f64>) -> f64 {
        d.dot(&self.c)
            + (d.transpose() * &self.g)
                .iter()
                .map(|v| v.abs())
                .sum::<f64>()
    }

    pub fn interval_hull(&self) -> IntervalVector {
        (0..self.dim())
            .map(|i| {
                let r: f64 = self.g.row(i).iter().map(|v| v.abs()).sum();
                Interval::new(self.c[i] - r, self.c[i] + r)
            })
            .collect()
    }

    pub fn linear_map(&self, r: &DMatrix<f64>) -> Result<Zonotope, SetError> {
        check_dim(self.dim(), r.ncols())?;
        Ok(Zonotope {
            g: r * &self.g,
            c: r * &self.c,
        })
    }

    pub fn minkowski_sum(&self, other: &Zonotope) -> Result<Zonotope, SetError> {
        check_dim(self.dim(), other.dim())?;
        Ok(Zonotope {
            g: hcat(&self.g, &other.g),
            c: &self.c + &other.c,
        })
    }

    pub fn contains(&self, z: &DVector<f64>) -> Result<bool, SetError> {
        self.to_cz().contains(z)
    }

    /// Exact area of a 2-D zonotope: `4 Σ_{i<j} |det [g_i g_j]|`.
    pub fn area_2d(&self) -> Option<f64> {
        if self.dim() != 2 {
            return None;
        }
        let mut total = 0.0;
        for i in 0..self.ngen() {
            for j in i + 1..self.ngen() {
                total += (self.g[(0, i)] * self.g[(1, j)] - self.g[(1, i)] * self.g[(0, j)]).abs();
            }
        }
        Some(4.0 * total)
    }
}
