//! Dense two-phase bounded-variable simplex.
//!
//! Problems are small (tens to a few hundred variables), so the solver keeps
//! a full tableau. Variables carry their own bounds; nonbasic variables sit
//! at zero in a shifted/mirrored coordinate system, and a variable resting at
//! its upper bound is "flipped" (`x = u - x'`) so that every nonbasic value is
//! zero. Pricing is Dantzig's rule, switching to Bland's rule after a run of
//! degenerate pivots.

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::interval::Interval;

/// Absolute feasibility tolerance used by every LP in the crate.
pub const FEASIBILITY_TOL: f64 = 1e-8;

const PIVOT_TOL: f64 = 1e-9;
const DEGENERATE_RUN_BEFORE_BLAND: usize = 50;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LpError {
    #[error("simplex failed to converge within {0} iterations")]
    NumericalFailure(usize),
    #[error("linear program is infeasible")]
    InfeasibleProgram,
    #[error("linear program is unbounded")]
    UnboundedProgram,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum FeasibilityResult {
    Feasible(DVector<f64>),
    Infeasible,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub argmax: DVector<f64>,
}

/// `maximize objective·x  s.t.  ineq_a x <= ineq_b,  eq_a x = eq_b,  x ∈ bounds`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub objective: DVector<f64>,
    pub ineq_a: DMatrix<f64>,
    pub ineq_b: DVector<f64>,
    pub eq_a: DMatrix<f64>,
    pub eq_b: DVector<f64>,
    pub bounds: Vec<Interval>,
}

impl LinearProgram {
    /// `n` free variables, zero objective, no constraints.
    pub fn new(n: usize) -> Self {
        Self {
            objective: DVector::zeros(n),
            ineq_a: DMatrix::zeros(0, n),
            ineq_b: DVector::zeros(0),
            eq_a: DMatrix::zeros(0, n),
            eq_b: DVector::zeros(0),
            bounds: vec![Interval::entire(); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn with_objective(mut self, objective: DVector<f64>) -> Self {
        self.objective = objective;
        self
    }

    pub fn with_bounds(mut self, bounds: Vec<Interval>) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn with_equalities(mut self, a: DMatrix<f64>, b: DVector<f64>) -> Self {
        self.eq_a = a;
        self.eq_b = b;
        self
    }

    pub fn with_inequalities(mut self, a: DMatrix<f64>, b: DVector<f64>) -> Self {
        self.ineq_a = a;
        self.ineq_b = b;
        self
    }

    fn check_dims(&self) -> Result<(), LpError> {
        let n = self.num_vars();
        let mismatch = |expected, found| Err(LpError::DimensionMismatch { expected, found });
        if self.bounds.len() != n {
            return mismatch(n, self.bounds.len());
        }
        if self.ineq_a.ncols() != n {
            return mismatch(n, self.ineq_a.ncols());
        }
        if self.eq_a.ncols() != n {
            return mismatch(n, self.eq_a.ncols());
        }
        if self.ineq_a.nrows() != self.ineq_b.len() {
            return mismatch(self.ineq_a.nrows(), self.ineq_b.len());
        }
        if self.eq_a.nrows() != self.eq_b.len() {
            return mismatch(self.eq_a.nrows(), self.eq_b.len());
        }
        Ok(())
    }

    pub fn feasible(&self) -> Result<FeasibilityResult, LpError> {
        self.check_dims()?;
        let mut solver = Simplex::build(self);
        if !solver.phase_one()? {
            return Ok(FeasibilityResult::Infeasible);
        }
        Ok(FeasibilityResult::Feasible(solver.extract()))
    }

    pub fn maximize(&self) -> Result<LpSolution, LpError> {
        self.check_dims()?;
        let mut solver = Simplex::build(self);
        if !solver.phase_one()? {
            return Err(LpError::InfeasibleProgram);
        }
        solver.phase_two(&self.objective)?;
        let argmax = solver.extract();
        let value = self.objective.dot(&argmax);
        Ok(LpSolution { value, argmax })
    }

    /// Largest violation of any constraint or bound at `x`.
    pub fn max_violation(&self, x: &DVector<f64>) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, b) in self.bounds.iter().enumerate() {
            worst = worst.max(b.lo() - x[i]).max(x[i] - b.hi());
        }
        let r = &self.eq_a * x - &self.eq_b;
        worst = r.iter().fold(worst, |w, v| w.max(v.abs()));
        let r = &self.ineq_a * x - &self.ineq_b;
        r.iter().fold(worst, |w, v| w.max(*v))
    }
}

/// How an original variable maps to tableau columns.
#[derive(Debug, Clone, Copy)]
enum VarMap {
    /// `x = lo + col`
    Shift { col: usize, lo: f64 },
    /// `x = hi - col`
    Mirror { col: usize, hi: f64 },
    /// `x = pos - neg`
    Split { pos: usize, neg: usize },
}

struct Simplex {
    m: usize,
    n: usize,
    t: Vec<f64>,
    rhs: Vec<f64>,
    upper: Vec<f64>,
    flipped: Vec<bool>,
    basis: Vec<usize>,
    artificial_start: usize,
    map: Vec<VarMap>,
    d: Vec<f64>,
    iterations: usize,
}

enum StepOutcome {
    Optimal,
    Progress,
}

impl Simplex {
    fn build(p: &LinearProgram) -> Self {
        let nv = p.num_vars();
        let mut map = Vec::with_capacity(nv);
        let mut upper = Vec::new();
        for b in &p.bounds {
            if b.lo().is_finite() {
                map.push(VarMap::Shift {
                    col: upper.len(),
                    lo: b.lo(),
                });
                upper.push(b.hi() - b.lo());
            } else if b.hi().is_finite() {
                map.push(VarMap::Mirror {
                    col: upper.len(),
                    hi: b.hi(),
                });
                upper.push(f64::INFINITY);
            } else {
                let pos = upper.len();
                map.push(VarMap::Split { pos, neg: pos + 1 });
                upper.push(f64::INFINITY);
                upper.push(f64::INFINITY);
            }
        }
        let n_struct = upper.len();

        // Rows of the transformed system: coefficients over structural
        // columns plus the right-hand side after substituting the offsets.
        let mut rows: Vec<(Vec<f64>, f64, Option<f64>)> = Vec::new();
        let mut push_row =
            |coeffs: Vec<f64>, rhs: f64, slack: Option<f64>| rows.push((coeffs, rhs, slack));
        let transform = |a: &DMatrix<f64>, i: usize, mut rhs: f64| {
            let mut coeffs = vec![0.0; n_struct];
            for (j, vm) in map.iter().enumerate() {
                let v = a[(i, j)];
                if v == 0.0 {
                    continue;
                }
                match *vm {
                    VarMap::Shift { col, lo } => {
                        coeffs[col] += v;
                        rhs -= v * lo;
                    }
                    VarMap::Mirror { col, hi } => {
                        coeffs[col] -= v;
                        rhs -= v * hi;
                    }
                    VarMap::Split { pos, neg } => {
                        coeffs[pos] += v;
                        coeffs[neg] -= v;
                    }
                }
            }
            (coeffs, rhs)
        };
        for i in 0..p.eq_a.nrows() {
            let (c, r) = transform(&p.eq_a, i, p.eq_b[i]);
            push_row(c, r, None);
        }
        for i in 0..p.ineq_a.nrows() {
            let (c, r) = transform(&p.ineq_a, i, p.ineq_b[i]);
            push_row(c, r, Some(1.0));
        }

        let n_slack = rows.iter().filter(|r| r.2.is_some()).count();
        // Rows that need an artificial: equalities, and inequalities whose
        // slack cannot start basic because the right-hand side is negative.
        let n_art = rows.iter().filter(|r| r.2.is_none() || r.1 < 0.0).count();
        let m = rows.len();
        let n = n_struct + n_slack + n_art;
        let artificial_start = n_struct + n_slack;
        let mut t = vec![0.0; m * n];
        let mut rhs = vec![0.0; m];
        let mut basis = vec![0; m];
        upper.resize(n, f64::INFINITY);
        let mut slack_col = n_struct;
        let mut art_col = artificial_start;
        for (i, (coeffs, r, slack)) in rows.into_iter().enumerate() {
            let row = &mut t[i * n..(i + 1) * n];
            row[..n_struct].copy_from_slice(&coeffs);
            let mut r = r;
            let mut own_slack = None;
            if slack.is_some() {
                row[slack_col] = 1.0;
                own_slack = Some(slack_col);
                slack_col += 1;
            }
            if r < 0.0 {
                for v in row.iter_mut() {
                    *v = -*v;
                }
                r = -r;
            }
            rhs[i] = r;
            match own_slack {
                Some(s) if row[s] > 0.0 => basis[i] = s,
                _ => {
                    row[art_col] = 1.0;
                    basis[i] = art_col;
                    art_col += 1;
                }
            }
        }
        Simplex {
            m,
            n,
            t,
            rhs,
            upper,
            flipped: vec![false; n],
            basis,
            artificial_start,
            map,
            d: vec![0.0; n],
            iterations: 0,
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.n + j]
    }

    fn iteration_cap(&self) -> usize {
        50 * (self.m + self.n) + 1000
    }

    /// Reduced costs for maximizing `cost·x` over the current basis.
    fn price(&mut self, cost: &[f64]) {
        let n = self.n;
        let mut d: Vec<f64> = (0..n)
            .map(|j| if self.flipped[j] { -cost[j] } else { cost[j] })
            .collect();
        for i in 0..self.m {
            let b = self.basis[i];
            let cb = if self.flipped[b] { -cost[b] } else { cost[b] };
            if cb != 0.0 {
                let row = &self.t[i * n..(i + 1) * n];
                for j in 0..n {
                    d[j] -= cb * row[j];
                }
            }
        }
        for &b in &self.basis {
            d[b] = 0.0;
        }
        self.d = d;
    }

    fn phase_one(&mut self) -> Result<bool, LpError> {
        if self.artificial_start == self.n {
            return Ok(true);
        }
        let cost: Vec<f64> = (0..self.n)
            .map(|j| {
                if j >= self.artificial_start {
                    -1.0
                } else {
                    0.0
                }
            })
            .collect();
        self.price(&cost);
        self.optimize(self.n)?;
        let infeasibility: f64 = (0..self.m)
            .filter(|&i| self.basis[i] >= self.artificial_start)
            .map(|i| self.rhs[i])
            .sum();
        if infeasibility > FEASIBILITY_TOL {
            return Ok(false);
        }
        self.drive_out_artificials();
        Ok(true)
    }

    fn drive_out_artificials(&mut self) {
        for i in 0..self.m {
            if self.basis[i] < self.artificial_start {
                continue;
            }
            let pick = (0..self.artificial_start)
                .filter(|&j| !self.basis.contains(&j))
                .map(|j| (j, self.at(i, j).abs()))
                .filter(|&(_, v)| v > PIVOT_TOL)
                .max_by(|a, b| a.1.total_cmp(&b.1));
            if let Some((j, _)) = pick {
                self.pivot(i, j);
            }
            // Otherwise the row is redundant; its artificial stays basic at
            // zero and no eligible column can ever disturb it.
        }
    }

    fn phase_two(&mut self, objective: &DVector<f64>) -> Result<(), LpError> {
        let mut cost = vec![0.0; self.n];
        for (j, vm) in self.map.iter().enumerate() {
            let c = objective[j];
            match *vm {
                VarMap::Shift { col, .. } => cost[col] += c,
                VarMap::Mirror { col, .. } => cost[col] -= c,
                VarMap::Split { pos, neg } => {
                    cost[pos] += c;
                    cost[neg] -= c;
                }
            }
        }
        self.price(&cost);
        self.optimize(self.artificial_start)
    }

    /// Runs simplex iterations; only columns `< eligible` may enter.
    fn optimize(&mut self, eligible: usize) -> Result<(), LpError> {
        let mut degenerate_run = 0;
        loop {
            self.iterations += 1;
            if self.iterations > self.iteration_cap() {
                return Err(LpError::NumericalFailure(self.iterations));
            }
            let bland = degenerate_run >= DEGENERATE_RUN_BEFORE_BLAND;
            match self.step(eligible, bland)? {
                (StepOutcome::Optimal, _) => return Ok(()),
                (StepOutcome::Progress, degenerate) => {
                    if degenerate {
                        degenerate_run += 1;
                    } else {
                        degenerate_run = 0;
                    }
                }
            }
        }
    }

    fn step(&mut self, eligible: usize, bland: bool) -> Result<(StepOutcome, bool), LpError> {
        let tol = FEASIBILITY_TOL * 1e-2;
        let mut entering = None;
        let mut best = tol;
        for j in 0..eligible {
            if self.d[j] > tol && !self.is_basic(j) {
                if bland {
                    entering = Some(j);
                    break;
                }
                if self.d[j] > best {
                    best = self.d[j];
                    entering = Some(j);
                }
            }
        }
        let Some(q) = entering else {
            return Ok((StepOutcome::Optimal, false));
        };

        // Ratio test. `leave_at_upper` marks a basic variable that rises to
        // its own upper bound.
        let mut limit = self.upper[q];
        let mut leave: Option<(usize, bool)> = None;
        let mut leave_pivot = 0.0;
        for i in 0..self.m {
            let a = self.at(i, q);
            if a.abs() <= PIVOT_TOL {
                continue;
            }
            let b = self.basis[i];
            let (ratio, at_upper) = if a > 0.0 {
                (self.rhs[i].max(0.0) / a, false)
            } else {
                let u = self.upper[b];
                if !u.is_finite() {
                    continue;
                }
                ((u - self.rhs[i]).max(0.0) / -a, true)
            };
            let better = match leave {
                None => ratio < limit,
                Some((r, _)) => {
                    ratio < limit - 1e-12
                        || (ratio <= limit + 1e-12
                            && if bland {
                                b < self.basis[r]
                            } else {
                                a.abs() > leave_pivot
                            })
                }
            };
            if better {
                limit = ratio;
                leave = Some((i, at_upper));
                leave_pivot = a.abs();
            }
        }
        if !limit.is_finite() {
            return Err(LpError::UnboundedProgram);
        }
        let degenerate = limit <= 1e-12;
        match leave {
            None => self.flip_nonbasic(q),
            Some((r, at_upper)) => {
                if at_upper {
                    self.flip_basic(r);
                }
                self.pivot(r, q);
            }
        }
        Ok((StepOutcome::Progress, degenerate))
    }

    fn is_basic(&self, j: usize) -> bool {
        // Basic columns have zero reduced cost and are never priced in; the
        // explicit check only matters for numerically tiny leftovers.
        self.d[j] == 0.0 && self.basis.contains(&j)
    }

    /// Moves nonbasic column `q` from zero to its upper bound.
    fn flip_nonbasic(&mut self, q: usize) {
        let u = self.upper[q];
        let n = self.n;
        for i in 0..self.m {
            let a = self.t[i * n + q];
            if a != 0.0 {
                self.rhs[i] -= u * a;
                self.t[i * n + q] = -a;
            }
        }
        self.d[q] = -self.d[q];
        self.flipped[q] = !self.flipped[q];
    }

    /// Re-expresses the basic variable of row `r` as `u - x'`.
    fn flip_basic(&mut self, r: usize) {
        let b = self.basis[r];
        let u = self.upper[b];
        let n = self.n;
        for j in 0..n {
            if j != b {
                self.t[r * n + j] = -self.t[r * n + j];
            }
        }
        self.rhs[r] = u - self.rhs[r];
        self.flipped[b] = !self.flipped[b];
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let n = self.n;
        let p = self.t[r * n + q];
        {
            let row = &mut self.t[r * n..(r + 1) * n];
            for v in row.iter_mut() {
                *v /= p;
            }
        }
        self.rhs[r] /= p;
        let pivot_row: Vec<f64> = self.t[r * n..(r + 1) * n].to_vec();
        let pivot_rhs = self.rhs[r];
        for i in 0..self.m {
            if i == r {
                continue;
            }
            let f = self.t[i * n + q];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.t[i * n..(i + 1) * n];
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            row[q] = 0.0;
            self.rhs[i] -= f * pivot_rhs;
        }
        let f = self.d[q];
        if f != 0.0 {
            for (v, pv) in self.d.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
        }
        self.d[q] = 0.0;
        self.basis[r] = q;
    }

    fn column_values(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.n];
        for (i, &b) in self.basis.iter().enumerate() {
            v[b] = self.rhs[i];
        }
        for ((x, &flipped), &upper) in v.iter_mut().zip(&self.flipped).zip(&self.upper) {
            if flipped {
                *x = upper - *x;
            }
        }
        v
    }

    fn extract(&self) -> DVector<f64> {
        let v = self.column_values();
        DVector::from_iterator(
            self.map.len(),
            self.map.iter().map(|vm| match *vm {
                VarMap::Shift { col, lo } => lo + v[col],
                VarMap::Mirror { col, hi } => hi - v[col],
                VarMap::Split { pos, neg } => v[pos] - v[neg],
            }),
        )
    }
}
