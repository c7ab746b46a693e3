use nalgebra::DVector;
use rayon::prelude::*;

use super::{check_dim, ConstrainedZonotope, SetError, Support, Zonotope};
use crate::interval::IntervalVector;

/// Intersection of constrained zonotopes sharing one ambient space.
#[derive(Debug, Clone, PartialEq)]
pub struct SetEnclosure {
    members: Vec<ConstrainedZonotope>,
}

impl SetEnclosure {
    pub fn new(members: Vec<ConstrainedZonotope>) -> Result<Self, SetError> {
        let first = members.first().ok_or(SetError::InvalidSpec(
            "enclosure needs at least one member".into(),
        ))?;
        for m in &members {
            check_dim(first.dim(), m.dim())?;
        }
        Ok(Self { members })
    }

    pub fn single(cz: ConstrainedZonotope) -> Self {
        Self { members: vec![cz] }
    }

    pub fn members(&self) -> &[ConstrainedZonotope] {
        &self.members
    }

    pub fn into_members(self) -> Vec<ConstrainedZonotope> {
        self.members
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Intersection-list union: every member of both operands.
    pub fn concat(&self, other: &SetEnclosure) -> Result<SetEnclosure, SetError> {
        check_dim(self.dim(), other.dim())?;
        let mut members = self.members.clone();
        members.extend(other.members.iter().cloned());
        Ok(SetEnclosure { members })
    }

    /// The exact intersection as a single constrained zonotope.
    pub fn combined(&self) -> Result<ConstrainedZonotope, SetError> {
        let mut acc = self.members[0].clone();
        for m in &self.members[1..] {
            acc = acc.intersect(m, 0)?;
        }
        Ok(acc)
    }

    pub fn contains(&self, z: &DVector<f64>) -> Result<bool, SetError> {
        for m in &self.members {
            if !m.contains(z)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the intersection is empty (decided on the combined set).
    pub fn is_empty_set(&self) -> Result<bool, SetError> {
        for m in &self.members {
            if m.is_empty()? {
                return Ok(true);
            }
        }
        if self.members.len() == 1 {
            return Ok(false);
        }
        self.combined()?.is_empty()
    }

    /// Per-axis minimum over members of their support functions. Fails with
    /// `EmptySet` if a member is empty or the bounds cross.
    pub fn interval_hull(&self) -> Result<IntervalVector, SetError> {
        let mut acc: Option<IntervalVector> = None;
        for m in &self.members {
            let h = m.interval_hull()?;
            acc = Some(match acc {
                None => h,
                Some(a) => a.intersect(&h).ok_or(SetError::EmptySet)?,
            });
        }
        acc.ok_or(SetError::EmptySet)
    }

    /// Exact support function of the intersection.
    pub fn support(&self, d: &DVector<f64>) -> Result<Support, SetError> {
        if self.members.len() == 1 {
            return self.members[0].support(d);
        }
        let cz = self.combined()?;
        cz.support(d)
    }

    /// Interval hull of the exact intersection (tighter than
    /// [`SetEnclosure::interval_hull`] but one larger LP per face).
    pub fn tight_interval_hull(&self) -> Result<IntervalVector, SetError> {
        if self.members.len() == 1 {
            return self.members[0].interval_hull();
        }
        self.combined()?.interval_hull()
    }

    pub fn oracle(&self) -> Result<MembershipOracle<'_>, SetError> {
        MembershipOracle::new(self)
    }
}

impl From<ConstrainedZonotope> for SetEnclosure {
    fn from(cz: ConstrainedZonotope) -> Self {
        Self::single(cz)
    }
}

impl From<Zonotope> for SetEnclosure {
    fn from(z: Zonotope) -> Self {
        Self::single(z.into())
    }
}

/// Membership tests against a fixed enclosure, with each member's interval
/// hull cached as a cheap rejection filter.
pub struct MembershipOracle<'a> {
    set: &'a SetEnclosure,
    boxes: Vec<IntervalVector>,
}

impl<'a> MembershipOracle<'a> {
    pub fn new(set: &'a SetEnclosure) -> Result<Self, SetError> {
        let boxes = set
            .members
            .iter()
            .map(|m| {
                m.interval_hull()
                    .map(|b| b.iter().map(|i| i.inflate(1e-9)).collect())
            })
            .collect::<Result<Vec<IntervalVector>, _>>()?;
        Ok(Self { set, boxes })
    }

    pub fn set(&self) -> &SetEnclosure {
        self.set
    }

    pub fn hull(&self) -> Option<IntervalVector> {
        let mut it = self.boxes.iter();
        let first = it.next()?.clone();
        it.try_fold(first, |acc, b| acc.intersect(b))
    }

    pub fn contains(&self, z: &DVector<f64>) -> Result<bool, SetError> {
        check_dim(self.set.dim(), z.len())?;
        if !self.boxes.iter().all(|b| b.contains(z.as_slice())) {
            return Ok(false);
        }
        for m in &self.set.members {
            if !m.contains(z)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Membership of every point, evaluated in parallel.
    pub fn contains_all(&self, points: &[DVector<f64>]) -> Result<Vec<bool>, SetError> {
        points.par_iter().map(|p| self.contains(p)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::Interval;
    use nalgebra::DMatrix;

    fn seg(lo: f64, hi: f64) -> ConstrainedZonotope {
        ConstrainedZonotope::from_box(&IntervalVector::new(vec![Interval::new(lo, hi)]))
    }

    #[test]
    fn hull_is_min_of_member_supports() {
        let s = SetEnclosure::new(vec![seg(0.0, 2.0), seg(1.0, 3.0)]).unwrap();
        let h = s.interval_hull().unwrap();
        assert_eq!(h[0], Interval::new(1.0, 2.0));
        let single = SetEnclosure::single(seg(-1.0, 4.0));
        assert_eq!(single.interval_hull().unwrap()[0], Interval::new(-1.0, 4.0));
        let disjoint = SetEnclosure::new(vec![seg(0.0, 1.0), seg(2.0, 3.0)]).unwrap();
        assert_eq!(disjoint.interval_hull().unwrap_err(), SetError::EmptySet);
        assert!(disjoint.is_empty_set().unwrap());
    }

    #[test]
    fn membership_is_conjunction() {
        let s = SetEnclosure::new(vec![seg(0.0, 2.0), seg(1.0, 3.0)]).unwrap();
        let o = s.oracle().unwrap();
        let pts: Vec<DVector<f64>> = [0.5, 1.5, 2.5]
            .iter()
            .map(|&x| DVector::from_element(1, x))
            .collect();
        assert_eq!(o.contains_all(&pts).unwrap(), vec![false, true, false]);
        assert!(s.contains(&pts[1]).unwrap());
        let comb = s.combined().unwrap();
        assert!(comb.contains(&pts[1]).unwrap() && !comb.contains(&pts[0]).unwrap());
    }

    #[test]
    fn empty_member_hull_fails() {
        let empty = ConstrainedZonotope::new(
            DMatrix::identity(1, 1),
            DVector::zeros(1),
            DMatrix::identity(1, 1),
            DVector::from_element(1, 2.0),
        )
        .unwrap();
        let s = SetEnclosure::single(empty);
        assert_eq!(s.interval_hull().unwrap_err(), SetError::EmptySet);
    }
}
