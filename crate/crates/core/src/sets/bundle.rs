use nalgebra::DVector;

use super::{check_dim, SetEnclosure, SetError, Zonotope};
use crate::interval::IntervalVector;

/// Intersection of zonotopes, kept implicit.
#[derive(Debug, Clone, PartialEq)]
pub struct ZonotopeBundle {
    members: Vec<Zonotope>,
}

impl ZonotopeBundle {
    pub fn new(members: Vec<Zonotope>) -> Result<Self, SetError> {
        let first = members.first().ok_or(SetError::InvalidSpec(
            "bundle needs at least one member".into(),
        ))?;
        for m in &members {
            check_dim(first.dim(), m.dim())?;
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[Zonotope] {
        &self.members
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    pub fn contains(&self, z: &DVector<f64>) -> Result<bool, SetError> {
        for m in &self.members {
            if !m.contains(z)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn interval_hull(&self) -> Result<IntervalVector, SetError> {
        let mut it = self.members.iter().map(Zonotope::interval_hull);
        let first = it.next().expect("non-empty bundle");
        it.try_fold(first, |acc, h| acc.intersect(&h))
            .ok_or(SetError::EmptySet)
    }

    pub fn to_enclosure(&self) -> SetEnclosure {
        SetEnclosure::new(self.members.iter().cloned().map(Into::into).collect())
            .expect("validated bundle")
    }
}
