use nalgebra::{DMatrix, DVector};

use super::{eval_point, Expr, ExprGrid, ModelError};

/// `x⁺ = f(x, w)`, `y = μ(x) + v`, with symbolic first and second
/// derivatives. `f` is written over `z = [x; w]`, `μ` over `x`.
#[derive(Debug, Clone)]
pub struct SystemModel {
    name: String,
    nx: usize,
    nw: usize,
    f: Vec<Expr>,
    mu: Vec<Expr>,
    jac_f: ExprGrid,
    jac_mu: ExprGrid,
    hess_f: Vec<ExprGrid>,
    hess_mu: Vec<ExprGrid>,
}

impl SystemModel {
    pub fn new(
        name: impl Into<String>,
        nx: usize,
        nw: usize,
        f: Vec<Expr>,
        mu: Vec<Expr>,
    ) -> Result<Self, ModelError> {
        if f.len() != nx {
            return Err(ModelError::DimensionMismatch {
                expected: nx,
                found: f.len(),
            });
        }
        let nz = nx + nw;
        if let Some(e) = f.iter().find(|e| e.arity() > nz) {
            return Err(ModelError::ArityViolation {
                index: e.arity() - 1,
                arity: nz,
            });
        }
        if let Some(e) = mu.iter().find(|e| e.arity() > nx) {
            return Err(ModelError::ArityViolation {
                index: e.arity() - 1,
                arity: nx,
            });
        }
        let jac_f = ExprGrid::jacobian(&f, nz);
        let jac_mu = ExprGrid::jacobian(&mu, nx);
        let hess_f = (0..nx)
            .map(|i| ExprGrid::jacobian(jac_f.row(i), nz))
            .collect();
        let hess_mu = (0..mu.len())
            .map(|i| ExprGrid::jacobian(jac_mu.row(i), nx))
            .collect();
        Ok(Self {
            name: name.into(),
            nx,
            nw,
            f,
            mu,
            jac_f,
            jac_mu,
            hess_f,
            hess_mu,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn nw(&self) -> usize {
        self.nw
    }

    pub fn nz(&self) -> usize {
        self.nx + self.nw
    }

    pub fn nmu(&self) -> usize {
        self.mu.len()
    }

    pub fn f(&self) -> &[Expr] {
        &self.f
    }

    pub fn mu(&self) -> &[Expr] {
        &self.mu
    }

    /// `∂f_i/∂z_j`, `nx × (nx + nw)`.
    pub fn jac_f(&self) -> &ExprGrid {
        &self.jac_f
    }

    /// `∂μ_i/∂x_j`, `nmu × nx`.
    pub fn jac_mu(&self) -> &ExprGrid {
        &self.jac_mu
    }

    /// `hess_f()[i]` holds `∂²f_i/∂z_j∂z_k`; row `j` is the gradient of `∂f_i/∂z_j`.
    pub fn hess_f(&self) -> &[ExprGrid] {
        &self.hess_f
    }

    pub fn hess_mu(&self) -> &[ExprGrid] {
        &self.hess_mu
    }

    pub fn step(&self, x: &DVector<f64>, w: &DVector<f64>) -> Result<DVector<f64>, ModelError> {
        let z: Vec<f64> = x.iter().chain(w.iter()).copied().collect();
        eval_point(&self.f, &z)
    }

    pub fn observe(&self, x: &DVector<f64>) -> Result<DVector<f64>, ModelError> {
        eval_point(&self.mu, x.as_slice())
    }

    /// `Some((C, d))` when `μ(x) = C x + d`.
    pub fn linear_observation(&self) -> Option<(DMatrix<f64>, DVector<f64>)> {
        let c = self.jac_mu.as_constant()?;
        let d = eval_point(&self.mu, &vec![0.0; self.nx]).ok()?;
        Some((c, d))
    }
}
