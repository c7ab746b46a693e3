//! Expression trees with point evaluation, symbolic differentiation and
//! natural interval extension.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};

use super::ModelError;
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Sqrt(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Atan(Box<Expr>),
}

impl Expr {
    pub fn constant(v: f64) -> Self {
        Expr::Const(v)
    }

    pub fn var(i: usize) -> Self {
        Expr::Var(i)
    }

    pub fn powi(self, n: i32) -> Self {
        match (self, n) {
            (_, 0) => Expr::Const(1.0),
            (e, 1) => e,
            (Expr::Const(c), n) => Expr::Const(c.powi(n)),
            (e, n) => Expr::Pow(Box::new(e), n),
        }
    }

    pub fn sqrt(self) -> Self {
        match self {
            Expr::Const(c) if c >= 0.0 => Expr::Const(c.sqrt()),
            e => Expr::Sqrt(Box::new(e)),
        }
    }

    pub fn sin(self) -> Self {
        match self {
            Expr::Const(c) => Expr::Const(c.sin()),
            e => Expr::Sin(Box::new(e)),
        }
    }

    pub fn cos(self) -> Self {
        match self {
            Expr::Const(c) => Expr::Const(c.cos()),
            e => Expr::Cos(Box::new(e)),
        }
    }

    pub fn atan(self) -> Self {
        match self {
            Expr::Const(c) => Expr::Const(c.atan()),
            e => Expr::Atan(Box::new(e)),
        }
    }

    pub fn as_const(&self) -> Option<f64> {
        match self {
            Expr::Const(c) => Some(*c),
            _ => None,
        }
    }

    fn is_zero(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    fn is_one(&self) -> bool {
        self.as_const() == Some(1.0)
    }

    /// One more than the largest variable index, or 0 for constants.
    pub fn arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::Var(i) => i + 1,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.arity().max(b.arity())
            }
            Expr::Pow(a, _) | Expr::Sqrt(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Atan(a) => {
                a.arity()
            }
        }
    }

    pub fn eval(&self, p: &[f64]) -> Result<f64, ModelError> {
        Ok(match self {
            Expr::Const(c) => *c,
            Expr::Var(i) => *p.get(*i).ok_or(ModelError::ArityViolation {
                index: *i,
                arity: p.len(),
            })?,
            Expr::Add(a, b) => a.eval(p)? + b.eval(p)?,
            Expr::Sub(a, b) => a.eval(p)? - b.eval(p)?,
            Expr::Mul(a, b) => a.eval(p)? * b.eval(p)?,
            Expr::Div(a, b) => {
                let d = b.eval(p)?;
                if d == 0.0 {
                    return Err(ModelError::DomainError(format!(
                        "division by zero in {self}"
                    )));
                }
                a.eval(p)? / d
            }
            Expr::Pow(a, n) => {
                let v = a.eval(p)?;
                if *n < 0 && v == 0.0 {
                    return Err(ModelError::DomainError(format!(
                        "negative power of zero in {self}"
                    )));
                }
                v.powi(*n)
            }
            Expr::Sqrt(a) => {
                let v = a.eval(p)?;
                if v < 0.0 {
                    return Err(ModelError::DomainError(format!(
                        "square root of {v} in {self}"
                    )));
                }
                v.sqrt()
            }
            Expr::Sin(a) => a.eval(p)?.sin(),
            Expr::Cos(a) => a.eval(p)?.cos(),
            Expr::Atan(a) => a.eval(p)?.atan(),
        })
    }

    /// Natural interval extension over the box `b`.
    pub fn eval_interval(&self, b: &[Interval]) -> Result<Interval, ModelError> {
        let domain = |e: crate::interval::IntervalError| {
            ModelError::IntervalDomainError(format!("{e} in {self}"))
        };
        Ok(match self {
            Expr::Const(c) => Interval::point(*c),
            Expr::Var(i) => *b.get(*i).ok_or(ModelError::ArityViolation {
                index: *i,
                arity: b.len(),
            })?,
            Expr::Add(x, y) => x.eval_interval(b)? + y.eval_interval(b)?,
            Expr::Sub(x, y) => x.eval_interval(b)? - y.eval_interval(b)?,
            Expr::Mul(x, y) => {
                if x == y {
                    x.eval_interval(b)?.powi(2).map_err(domain)?
                } else {
                    x.eval_interval(b)? * y.eval_interval(b)?
                }
            }
            Expr::Div(x, y) => x
                .eval_interval(b)?
                .checked_div(&y.eval_interval(b)?)
                .map_err(domain)?,
            Expr::Pow(x, n) => x.eval_interval(b)?.powi(*n).map_err(domain)?,
            Expr::Sqrt(x) => x.eval_interval(b)?.sqrt().map_err(domain)?,
            Expr::Sin(x) => x.eval_interval(b)?.sin(),
            Expr::Cos(x) => x.eval_interval(b)?.cos(),
            Expr::Atan(x) => x.eval_interval(b)?.atan(),
        })
    }

    /// Symbolic partial derivative with respect to variable `j`.
    pub fn diff(&self, j: usize) -> Expr {
        match self {
            Expr::Const(_) => Expr::Const(0.0),
            Expr::Var(i) => Expr::Const(if *i == j { 1.0 } else { 0.0 }),
            Expr::Add(a, b) => a.diff(j) + b.diff(j),
            Expr::Sub(a, b) => a.diff(j) - b.diff(j),
            Expr::Mul(a, b) => a.diff(j) * (**b).clone() + (**a).clone() * b.diff(j),
            Expr::Div(a, b) => {
                let da = a.diff(j);
                let db = b.diff(j);
                if db.is_zero() {
                    da / (**b).clone()
                } else {
                    da / (**b).clone() - (**a).clone() * db / (**b).clone().powi(2)
                }
            }
            Expr::Pow(a, n) => Expr::Const(f64::from(*n)) * (**a).clone().powi(n - 1) * a.diff(j),
            Expr::Sqrt(a) => a.diff(j) / (Expr::Const(2.0) * self.clone()),
            Expr::Sin(a) => (**a).clone().cos() * a.diff(j),
            Expr::Cos(a) => -((**a).clone().sin() * a.diff(j)),
            Expr::Atan(a) => a.diff(j) / (Expr::Const(1.0) + (**a).clone().powi(2)),
        }
    }

    /// Replaces every `Var(i)` with `subs[i]`.
    pub fn substitute(&self, subs: &[Expr]) -> Expr {
        match self {
            Expr::Const(c) => Expr::Const(*c),
            Expr::Var(i) => subs[*i].clone(),
            Expr::Add(a, b) => a.substitute(subs) + b.substitute(subs),
            Expr::Sub(a, b) => a.substitute(subs) - b.substitute(subs),
            Expr::Mul(a, b) => a.substitute(subs) * b.substitute(subs),
            Expr::Div(a, b) => a.substitute(subs) / b.substitute(subs),
            Expr::Pow(a, n) => a.substitute(subs).powi(*n),
            Expr::Sqrt(a) => a.substitute(subs).sqrt(),
            Expr::Sin(a) => a.substitute(subs).sin(),
            Expr::Cos(a) => a.substitute(subs).cos(),
            Expr::Atan(a) => a.substitute(subs).atan(),
        }
    }
}

impl Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a + b),
            (a, b) if a.is_zero() => b,
            (a, b) if b.is_zero() => a,
            (a, b) => Expr::Add(Box::new(a), Box::new(b)),
        }
    }
}

impl Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a - b),
            (a, b) if b.is_zero() => a,
            (a, b) if a.is_zero() => -b,
            (a, b) => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }
}

impl Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) => Expr::Const(a * b),
            (a, b) if a.is_zero() || b.is_zero() => Expr::Const(0.0),
            (a, b) if a.is_one() => b,
            (a, b) if b.is_one() => a,
            // keep constants on the left so folding can see them
            (a, Expr::Const(c)) => Expr::Mul(Box::new(Expr::Const(c)), Box::new(a)),
            (a, b) => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }
}

impl Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        match (self, rhs) {
            (Expr::Const(a), Expr::Const(b)) if b != 0.0 => Expr::Const(a / b),
            (a, _) if a.is_zero() => Expr::Const(0.0),
            (a, b) if b.is_one() => a,
            (a, b) => Expr::Div(Box::new(a), Box::new(b)),
        }
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Const(-1.0) * self
    }
}

impl Add<f64> for Expr {
    type Output = Expr;
    fn add(self, rhs: f64) -> Expr {
        self + Expr::Const(rhs)
    }
}

impl Mul<Expr> for f64 {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Const(self) * rhs
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => write!(f, "{c}"),
            Expr::Var(i) => write!(f, "z{i}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Pow(a, n) => write!(f, "{a}^{n}"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Atan(a) => write!(f, "atan({a})"),
        }
    }
}

/// Evaluates each expression at `p`.
pub fn eval_point(exprs: &[Expr], p: &[f64]) -> Result<DVector<f64>, ModelError> {
    let vals = exprs
        .iter()
        .map(|e| e.eval(p))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DVector::from_vec(vals))
}

/// Substitutes `z_j = c_j + Σ_k G_jk ξ_k`, giving expressions over `ξ`.
pub fn compose_affine(
    exprs: &[Expr],
    g: &DMatrix<f64>,
    c: &DVector<f64>,
) -> Result<Vec<Expr>, ModelError> {
    if g.nrows() != c.len() {
        return Err(ModelError::DimensionMismatch {
            expected: g.nrows(),
            found: c.len(),
        });
    }
    if let Some(a) = exprs.iter().map(Expr::arity).max() {
        if a > c.len() {
            return Err(ModelError::DimensionMismatch {
                expected: c.len(),
                found: a,
            });
        }
    }
    let subs: Vec<Expr> = (0..g.nrows())
        .map(|j| {
            (0..g.ncols()).fold(Expr::Const(c[j]), |acc, k| {
                let v = g[(j, k)];
                if v == 0.0 {
                    acc
                } else {
                    acc + Expr::Const(v) * Expr::Var(k)
                }
            })
        })
        .collect();
    Ok(exprs.iter().map(|e| e.substitute(&subs)).collect())
}
