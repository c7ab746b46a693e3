use nalgebra::{DMatrix, DVector};

use super::{check_dim, SetError, Zonotope};
use crate::interval::{Interval, IntervalVector};
use crate::linalg::{block_diag, hcat, pinv, row_support, vcat, vstack};
use crate::lp::{FeasibilityResult, LinearProgram};

/// `{G ξ + c : A ξ = b, ‖ξ‖∞ ≤ 1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedZonotope {
    pub g: DMatrix<f64>,
    pub c: DVector<f64>,
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
}

/// Result of a support-function query.
#[derive(Debug, Clone, PartialEq)]
pub struct Support {
    pub value: f64,
    /// A point of the set attaining `value`.
    pub point: DVector<f64>,
    /// Generator coefficients of `point`.
    pub xi: DVector<f64>,
}

impl From<Zonotope> for ConstrainedZonotope {
    fn from(z: Zonotope) -> Self {
        let ng = z.ngen();
        Self {
            g: z.g,
            c: z.c,
            a: DMatrix::zeros(0, ng),
            b: DVector::zeros(0),
        }
    }
}

impl ConstrainedZonotope {
    pub fn new(
        g: DMatrix<f64>,
        c: DVector<f64>,
        a: DMatrix<f64>,
        b: DVector<f64>,
    ) -> Result<Self, SetError> {
        check_dim(c.len(), g.nrows())?;
        check_dim(g.ncols(), a.ncols())?;
        check_dim(a.nrows(), b.len())?;
        Ok(Self { g, c, a, b })
    }

    pub fn point(c: DVector<f64>) -> Self {
        Zonotope::point(c).into()
    }

    pub fn from_box(b: &IntervalVector) -> Self {
        Zonotope::from_box(b).into()
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn ngen(&self) -> usize {
        self.g.ncols()
    }

    pub fn ncon(&self) -> usize {
        self.a.nrows()
    }

    pub fn is_unconstrained(&self) -> bool {
        self.ncon() == 0
    }

    /// Drops constraint rows that are identically `0 = 0`.
    pub fn without_trivial_rows(&self) -> Self {
        let keep: Vec<usize> = (0..self.ncon())
            .filter(|&i| self.a.row(i).iter().any(|&v| v != 0.0) || self.b[i] != 0.0)
            .collect();
        if keep.len() == self.ncon() {
            return self.clone();
        }
        Self {
            g: self.g.clone(),
            c: self.c.clone(),
            a: self.a.select_rows(&keep),
            b: DVector::from_iterator(keep.len(), keep.iter().map(|&i| self.b[i])),
        }
    }

    /// `R Z = {R G, R c, A, b}`.
    pub fn linear_map(&self, r: &DMatrix<f64>) -> Result<Self, SetError> {
        check_dim(self.dim(), r.ncols())?;
        Ok(Self {
            g: r * &self.g,
            c: r * &self.c,
            a: self.a.clone(),
            b: self.b.clone(),
        })
    }

    pub fn translate(&self, v: &DVector<f64>) -> Result<Self, SetError> {
        check_dim(self.dim(), v.len())?;
        Ok(Self {
            c: &self.c + v,
            ..self.clone()
        })
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self, SetError> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self {
            g: hcat(&self.g, &other.g),
            c: &self.c + &other.c,
            a: block_diag(&self.a, &other.a),
            b: vstack(&self.b, &other.b),
        })
    }

    /// `Z1 × Z2`.
    pub fn cartesian_product(&self, other: &Self) -> Self {
        Self {
            g: block_diag(&self.g, &other.g),
            c: vstack(&self.c, &other.c),
            a: block_diag(&self.a, &other.a),
            b: vstack(&self.b, &other.b),
        }
    }

    /// Intersection of two constrained zonotopes whose first `shared`
    /// generators are the same latent coefficients. With `shared = 0` this
    /// is the ordinary intersection.
    pub fn intersect(&self, other: &Self, shared: usize) -> Result<Self, SetError> {
        check_dim(self.dim(), other.dim())?;
        if shared > self.ngen() || shared > other.ngen() {
            return Err(SetError::DimensionMismatch {
                expected: shared,
                found: self.ngen().min(other.ngen()),
            });
        }
        let n1 = self.ngen() - shared;
        let n2 = other.ngen() - shared;
        let total = shared + n1 + n2;
        let spread = |m: &DMatrix<f64>, own_offset: usize, own: usize| {
            let mut out = DMatrix::zeros(m.nrows(), total);
            out.view_mut((0, 0), (m.nrows(), shared))
                .copy_from(&m.columns(0, shared));
            out.view_mut((0, own_offset), (m.nrows(), own))
                .copy_from(&m.columns(shared, own));
            out
        };
        let g1 = spread(&self.g, shared, n1);
        let g2 = spread(&other.g, shared + n1, n2);
        let a1 = spread(&self.a, shared, n1);
        let a2 = spread(&other.a, shared + n1, n2);

        let mut rows: Vec<(Vec<f64>, f64)> = Vec::new();
        let push = |row: Vec<f64>, rhs: f64, rows: &mut Vec<(Vec<f64>, f64)>| {
            if row.iter().all(|&v| v == 0.0) && rhs == 0.0 {
                return;
            }
            if !rows.iter().any(|(r, b)| *b == rhs && *r == row) {
                rows.push((row, rhs));
            }
        };
        for (m, b) in [(&a1, &self.b), (&a2, &other.b)] {
            for i in 0..m.nrows() {
                push(m.row(i).iter().copied().collect(), b[i], &mut rows);
            }
        }
        let gd = &g1 - &g2;
        let cd = &other.c - &self.c;
        for i in 0..self.dim() {
            push(gd.row(i).iter().copied().collect(), cd[i], &mut rows);
        }
        let a = DMatrix::from_fn(rows.len(), total, |i, j| rows[i].0[j]);
        let b = DVector::from_iterator(rows.len(), rows.iter().map(|r| r.1));
        Ok(Self {
            g: g1,
            c: self.c.clone(),
            a,
            b,
        })
    }

    /// `{z ∈ self : R z ∈ Y}`.
    pub fn generalized_intersection(&self, r: &DMatrix<f64>, y: &Self) -> Result<Self, SetError> {
        check_dim(self.dim(), r.ncols())?;
        check_dim(y.dim(), r.nrows())?;
        let nf = self.ngen();
        let ny = y.ngen();
        let g = hcat(&self.g, &DMatrix::zeros(self.dim(), ny));
        let top = hcat(&self.a, &DMatrix::zeros(self.ncon(), ny));
        let mid = hcat(&DMatrix::zeros(y.ncon(), nf), &y.a);
        let link = hcat(&(r * &self.g), &(-&y.g));
        let a = vcat(&vcat(&top, &mid), &link);
        let b = vstack(&vstack(&self.b, &y.b), &(&y.c - r * &self.c));
        Ok(Self {
            g,
            c: self.c.clone(),
            a,
            b,
        })
    }

    /// Drops the constraints; the result contains `self`.
    pub fn zonotope_hull(&self) -> Zonotope {
        Zonotope {
            g: self.g.clone(),
            c: self.c.clone(),
        }
    }

    fn unit_box_program(&self) -> LinearProgram {
        LinearProgram::new(self.ngen()).with_bounds(vec![Interval::unit(); self.ngen()])
    }

    /// Coefficients `ξ` with `G ξ + c = z`, `A ξ = b`, `‖ξ‖∞ ≤ 1`, if any.
    pub fn membership_witness(&self, z: &DVector<f64>) -> Result<Option<DVector<f64>>, SetError> {
        check_dim(self.dim(), z.len())?;
        if self.is_unconstrained() && self.g.is_square() {
            if let Some(inv) = self.g.clone().try_inverse() {
                let xi = inv * (z - &self.c);
                let inside =
                    xi.amax() <= 1.0 + 1e-9 && (&self.g * &xi + &self.c - z).amax() <= 1e-8;
                return Ok(inside.then(|| xi.map(|v| v.clamp(-1.0, 1.0))));
            }
        }
        let a = vcat(&self.g, &self.a);
        let b = vstack(&(z - &self.c), &self.b);
        match self.unit_box_program().with_equalities(a, b).feasible()? {
            FeasibilityResult::Feasible(xi) => Ok(Some(xi)),
            FeasibilityResult::Infeasible => Ok(None),
        }
    }

    pub fn contains(&self, z: &DVector<f64>) -> Result<bool, SetError> {
        Ok(self.membership_witness(z)?.is_some())
    }

    pub fn is_empty(&self) -> Result<bool, SetError> {
        if self.is_unconstrained() {
            return Ok(false);
        }
        let p = self
            .unit_box_program()
            .with_equalities(self.a.clone(), self.b.clone());
        Ok(!p.feasible()?.is_feasible())
    }

    /// `max {⟨d, z⟩ : z ∈ self}`.
    pub fn support(&self, d: &DVector<f64>) -> Result<Support, SetError> {
        check_dim(self.dim(), d.len())?;
        let obj = self.g.transpose() * d;
        let xi = if self.is_unconstrained() {
            obj.map(|v| if v >= 0.0 { 1.0 } else { -1.0 })
        } else {
            let p = self
                .unit_box_program()
                .with_equalities(self.a.clone(), self.b.clone())
                .with_objective(obj);
            match p.maximize() {
                Ok(s) => s.argmax,
                Err(crate::lp::LpError::InfeasibleProgram) => return Err(SetError::EmptySet),
                Err(e) => return Err(e.into()),
            }
        };
        let point = &self.g * &xi + &self.c;
        Ok(Support {
            value: d.dot(&point),
            point,
            xi,
        })
    }

    /// Tight axis-aligned bounding box, with the points attaining each face
    /// (lower faces first, then upper faces, axis by axis).
    pub fn interval_hull_with_witnesses(
        &self,
    ) -> Result<(IntervalVector, Vec<DVector<f64>>), SetError> {
        let n = self.dim();
        let mut bounds = Vec::with_capacity(n);
        let mut witnesses = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut d = DVector::zeros(n);
            d[i] = 1.0;
            let hi = self.support(&d)?;
            d[i] = -1.0;
            let lo = self.support(&d)?;
            let (l, h) = (-lo.value, hi.value);
            bounds.push(Interval::new(l.min(h), h.max(l)));
            witnesses.push(lo.point);
            witnesses.push(hi.point);
        }
        Ok((IntervalVector::new(bounds), witnesses))
    }

    pub fn interval_hull(&self) -> Result<IntervalVector, SetError> {
        if self.is_unconstrained() {
            return Ok(self.zonotope_hull().interval_hull());
        }
        Ok(self.interval_hull_with_witnesses()?.0)
    }

    /// A point of the set: the center when it is a member, otherwise the
    /// mean of the interval-hull witnesses (a convex combination of members).
    pub fn interior_anchor(&self) -> Result<DVector<f64>, SetError> {
        if self.contains(&self.c)? {
            return Ok(self.c.clone());
        }
        let (_, w) = self.interval_hull_with_witnesses()?;
        let n = w.len() as f64;
        Ok(w.iter().fold(DVector::zeros(self.dim()), |acc, p| acc + p) / n)
    }
}

/// Box `[ℓ̲, ℓ̄] ⊆ [-1, 1]^{n_g}` containing every `ξ` with `A ξ = b` and
/// `‖ξ‖∞ ≤ 1`. Coordinates fixed by the constraints are pinned to the
/// pseudoinverse solution `A† b`; all others are left at `[-1, 1]`.
pub fn constraint_interval_bound(
    a: &DMatrix<f64>,
    b: &DVector<f64>,
    ng: usize,
) -> Result<IntervalVector, SetError> {
    check_dim(ng, a.ncols())?;
    check_dim(a.nrows(), b.len())?;
    if a.nrows() == 0 {
        return Ok(IntervalVector::unit(ng));
    }
    let p = pinv(a);
    let x = &p * b;
    let free = row_support(&(DMatrix::identity(ng, ng) - &p * a), 1e-9);
    let tol = 1e-9;
    let mut out = Vec::with_capacity(ng);
    for i in 0..ng {
        if free[i] {
            out.push(Interval::unit());
        } else if x[i] > 1.0 + tol || x[i] < -1.0 - tol {
            return Err(SetError::EmptySet);
        } else {
            out.push(Interval::point(x[i].clamp(-1.0, 1.0)));
        }
    }
    Ok(IntervalVector::new(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn seg(lo: f64, hi: f64) -> ConstrainedZonotope {
        ConstrainedZonotope::from_box(&IntervalVector::new(vec![Interval::new(lo, hi)]))
    }

    fn v(x: &[f64]) -> DVector<f64> {
        DVector::from_vec(x.to_vec())
    }

    fn initial() -> ConstrainedZonotope {
        Zonotope::new(
            DMatrix::from_row_slice(2, 3, &[0.1, 0.2, -0.1, 0.1, 0.1, 0.0]),
            v(&[0.5, 0.5]),
        )
        .unwrap()
        .into()
    }

    #[test]
    fn linear_map_examples() {
        let z = initial();
        let doubled = z.linear_map(&(2.0 * DMatrix::identity(2, 2))).unwrap();
        assert_eq!(doubled.g, 2.0 * &z.g);
        let zero = z.linear_map(&DMatrix::zeros(2, 2)).unwrap();
        assert_eq!(
            zero.interval_hull().unwrap(),
            IntervalVector::new(vec![Interval::point(0.0); 2])
        );
        let c = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -1.0, 1.0]);
        let img = z.linear_map(&c).unwrap();
        assert!(img.contains(&(&c * v(&[0.55, 0.55]))).unwrap());
    }

    #[test]
    fn sum_and_product_examples() {
        let z = initial();
        let s = z
            .minkowski_sum(&ConstrainedZonotope::point(DVector::zeros(2)))
            .unwrap();
        assert!(s.contains(&v(&[0.55, 0.55])).unwrap());
        assert!(!s.contains(&v(&[2.0, 2.0])).unwrap());

        let y = ConstrainedZonotope::point(v(&[1.0, -0.3])).minkowski_sum(
            &ConstrainedZonotope::from_box(
                &IntervalVector::from_center_halfwidths(&[0.0, 0.0], &[0.4, 0.4]).unwrap(),
            ),
        );
        let sup = y.unwrap().support(&v(&[1.0, 0.0])).unwrap();
        assert!((sup.value - 1.4).abs() < 1e-12);

        let w = ConstrainedZonotope::from_box(
            &IntervalVector::from_center_halfwidths(&[0.0, 0.0], &[0.1, 0.1]).unwrap(),
        );
        let p = z.cartesian_product(&w);
        assert_eq!((p.dim(), p.ngen()), (4, 5));
        let pp = ConstrainedZonotope::point(v(&[1.0]))
            .cartesian_product(&ConstrainedZonotope::point(v(&[2.0])));
        assert_eq!(pp.c, v(&[1.0, 2.0]));
        let bx = seg(-1.0, 1.0).cartesian_product(&seg(-2.0, 2.0));
        assert_eq!(bx.interval_hull().unwrap().rad(), v(&[1.0, 2.0]));
    }

    #[test]
    fn independent_interval_intersection() {
        let z = seg(0.0, 2.0).intersect(&seg(1.0, 3.0), 0).unwrap();
        assert!(z.contains(&v(&[1.5])).unwrap());
        assert!(!z.contains(&v(&[0.5])).unwrap());
        let h = z.interval_hull().unwrap();
        assert!((h[0].lo() - 1.0).abs() < 1e-9 && (h[0].hi() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn fully_shared_self_intersection() {
        let z = initial();
        let zz = z.intersect(&z, z.ngen()).unwrap();
        assert_eq!(zz.ngen(), z.ngen());
        assert_eq!(zz.ncon(), 0);
    }

    #[test]
    fn rotated_squares_intersection_matches_pointwise_and() {
        let rot = |t: f64| DMatrix::from_row_slice(2, 2, &[t.cos(), -t.sin(), t.sin(), t.cos()]);
        let a: ConstrainedZonotope = Zonotope::new(rot(0.3), v(&[0.2, 0.0])).unwrap().into();
        let b: ConstrainedZonotope = Zonotope::new(rot(1.1), v(&[-0.1, 0.3])).unwrap().into();
        let ab = a.intersect(&b, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let z = v(&[rng.random_range(-1.8..1.8), rng.random_range(-1.8..1.8)]);
            assert_eq!(
                ab.contains(&z).unwrap(),
                a.contains(&z).unwrap() && b.contains(&z).unwrap()
            );
        }
    }

    #[test]
    fn generalized_intersection_scan() {
        let zf = seg(0.0, 2.0);
        let y = seg(1.0, 3.0);
        let z = zf
            .generalized_intersection(&DMatrix::identity(1, 1), &y)
            .unwrap();
        for k in 0..=30 {
            let x = 0.1 * f64::from(k);
            let expected = (1.0 - 1e-9..=2.0 + 1e-9).contains(&x);
            assert_eq!(z.contains(&v(&[x])).unwrap(), expected, "x = {x}");
        }
        // Y containing Zf leaves it unchanged
        let big = seg(-5.0, 5.0);
        let same = zf
            .generalized_intersection(&DMatrix::identity(1, 1), &big)
            .unwrap();
        assert_eq!(same.interval_hull().unwrap(), zf.interval_hull().unwrap());
    }

    #[test]
    fn hull_of_pinned_point() {
        let cz = ConstrainedZonotope::new(
            DMatrix::identity(2, 2),
            DVector::zeros(2),
            DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            v(&[2.0]),
        )
        .unwrap();
        assert!(cz.contains(&v(&[1.0, 1.0])).unwrap());
        assert!(!cz.contains(&v(&[0.0, 0.0])).unwrap());
        assert!(cz.zonotope_hull().contains(&v(&[1.0, 1.0])).unwrap());
        let trivial = ConstrainedZonotope::new(
            DMatrix::identity(1, 1),
            DVector::zeros(1),
            DMatrix::zeros(2, 1),
            DVector::zeros(2),
        )
        .unwrap()
        .without_trivial_rows();
        assert_eq!(trivial.ncon(), 0);
    }

    #[test]
    fn constraint_bound_examples() {
        let b =
            constraint_interval_bound(&DMatrix::from_row_slice(1, 2, &[1.0, 0.0]), &v(&[0.5]), 2)
                .unwrap();
        assert!((b[0].lo() - 0.5).abs() < 1e-14 && (b[0].hi() - 0.5).abs() < 1e-14);
        assert_eq!(b[1], Interval::unit());
        assert_eq!(
            constraint_interval_bound(&DMatrix::zeros(0, 3), &DVector::zeros(0), 3).unwrap(),
            IntervalVector::unit(3)
        );
        let pinned =
            constraint_interval_bound(&DMatrix::identity(3, 3), &DVector::zeros(3), 3).unwrap();
        assert!(pinned
            .iter()
            .all(|i| i.lo().abs() < 1e-15 && i.hi().abs() < 1e-15));
        assert_eq!(
            constraint_interval_bound(&DMatrix::identity(1, 1), &v(&[3.0]), 1).unwrap_err(),
            SetError::EmptySet
        );
    }

    #[test]
    fn constraint_bound_contains_feasible_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for trial in 0..20 {
            let ng = 4 + trial % 3;
            let nc = 1 + trial % 3;
            let mut a = DMatrix::from_fn(nc, ng, |_, _| rng.random_range(-1.0..1.0));
            // pin one coordinate in half of the trials
            if trial % 2 == 0 {
                a.row_mut(0).fill(0.0);
                a[(0, 0)] = 1.0;
            }
            let x0 = DVector::from_fn(ng, |_, _| rng.random_range(-0.8..0.8));
            let b = &a * &x0;
            let bound = constraint_interval_bound(&a, &b, ng).unwrap();
            let base = LinearProgram::new(ng)
                .with_bounds(vec![Interval::unit(); ng])
                .with_equalities(a.clone(), b.clone());
            for _ in 0..500 {
                let obj = DVector::from_fn(ng, |_, _| rng.random_range(-1.0..1.0));
                let xi = base.clone().with_objective(obj).maximize().unwrap().argmax;
                for i in 0..ng {
                    assert!(
                        bound[i].inflate(1e-9).contains(xi[i]),
                        "{} not in {}",
                        xi[i],
                        bound[i]
                    );
                }
            }
        }
    }
}
