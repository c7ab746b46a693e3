use nalgebra::{DMatrix, DVector};

use super::{check_dim, ConstrainedZonotope, SetError};
use crate::interval::{Interval, IntervalVector};
use crate::linalg::hcat;
use crate::lp::{LinearProgram, LpError};

/// `{z : A z ≤ b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HPolytope {
    pub ap: DMatrix<f64>,
    pub bp: DVector<f64>,
}

impl HPolytope {
    pub fn new(ap: DMatrix<f64>, bp: DVector<f64>) -> Result<Self, SetError> {
        check_dim(ap.nrows(), bp.len())?;
        Ok(Self { ap, bp })
    }

    pub fn dim(&self) -> usize {
        self.ap.ncols()
    }

    pub fn contains(&self, z: &DVector<f64>) -> bool {
        (&self.ap * z - &self.bp)
            .iter()
            .all(|&v| v <= crate::lp::FEASIBILITY_TOL)
    }

    /// Interval hull from support LPs along the coordinate axes.
    pub fn interval_hull(&self) -> Result<IntervalVector, SetError> {
        let n = self.dim();
        let base = LinearProgram::new(n).with_inequalities(self.ap.clone(), self.bp.clone());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut d = DVector::zeros(n);
            let mut solve = |sign: f64| -> Result<f64, SetError> {
                d[i] = sign;
                match base.clone().with_objective(d.clone()).maximize() {
                    Ok(s) => Ok(s.value),
                    Err(LpError::UnboundedProgram) => Err(SetError::UnboundedPolytope),
                    Err(LpError::InfeasibleProgram) => Err(SetError::EmptySet),
                    Err(e) => Err(e.into()),
                }
            };
            let hi = solve(1.0)?;
            let lo = -solve(-1.0)?;
            out.push(Interval::new(lo.min(hi), hi.max(lo)));
        }
        Ok(IntervalVector::new(out))
    }

    /// Exact conversion: the interval hull supplies one generator per axis
    /// and each inequality row gets a slack generator spanning its range
    /// over the hull, tied down by one equality constraint per row.
    pub fn to_cz(&self) -> Result<ConstrainedZonotope, SetError> {
        let hull = self.interval_hull()?;
        let (cb, rb) = (hull.mid(), hull.rad());
        let n = self.dim();
        let m = self.ap.nrows();
        let mut range = DVector::zeros(m);
        for i in 0..m {
            let row = self.ap.row(i);
            let lowest = row.dot(&cb.transpose())
                - row
                    .iter()
                    .zip(rb.iter())
                    .map(|(a, r)| a.abs() * r)
                    .sum::<f64>();
            range[i] = (self.bp[i] - lowest).max(0.0);
        }
        let g = hcat(&DMatrix::from_diagonal(&rb), &DMatrix::zeros(n, m));
        let a = hcat(
            &(&self.ap * DMatrix::from_diagonal(&rb)),
            &DMatrix::from_diagonal(&(0.5 * &range)),
        );
        let b = &self.bp - &self.ap * &cb - 0.5 * &range;
        ConstrainedZonotope::new(g, cb, a, b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn triangle_conversion() {
        let p = HPolytope::new(
            DMatrix::from_row_slice(3, 2, &[-1.0, 0.0, 0.0, -1.0, 1.0, 1.0]),
            DVector::from_vec(vec![0.0, 0.0, 1.0]),
        )
        .unwrap();
        let cz = p.to_cz().unwrap();
        assert!(cz.contains(&DVector::from_vec(vec![0.2, 0.2])).unwrap());
        assert!(!cz.contains(&DVector::from_vec(vec![0.8, 0.8])).unwrap());
    }

    #[test]
    fn box_conversion_matches_on_samples() {
        let p = HPolytope::new(
            DMatrix::from_row_slice(4, 2, &[1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0]),
            DVector::from_vec(vec![1.0, 0.5, 2.0, 1.0]),
        )
        .unwrap();
        let cz = p.to_cz().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let z = DVector::from_vec(vec![
                rng.random_range(-1.5..1.5),
                rng.random_range(-1.5..2.5),
            ]);
            assert_eq!(cz.contains(&z).unwrap(), p.contains(&z));
        }
    }

    #[test]
    fn halfspace_is_unbounded() {
        let p = HPolytope::new(
            DMatrix::from_row_slice(1, 2, &[1.0, 1.0]),
            DVector::from_vec(vec![1.0]),
        )
        .unwrap();
        assert_eq!(p.to_cz().unwrap_err(), SetError::UnboundedPolytope);
    }
}
