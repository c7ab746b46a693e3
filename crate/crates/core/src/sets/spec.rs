//! JSON form of the set types.
//!
//! ```json
//! {"type": "zonotope",  "G": [[...], ...], "c": [...]}
//! {"type": "czonotope", "G": [[...], ...], "c": [...], "A": [[...], ...], "b": [...]}
//! {"type": "bundle",    "members": [<zonotope>, ...]}
//! {"type": "enclosure", "members": [<czonotope>, ...]}
//! {"type": "interval",  "lo": [...], "hi": [...]}
//! ```
//!
//! Matrices are row-major arrays of rows.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{ConstrainedZonotope, SetEnclosure, SetError, Zonotope, ZonotopeBundle};
use crate::interval::IntervalVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum SetSpec {
    Zonotope {
        #[serde(rename = "G")]
        g: Vec<Vec<f64>>,
        c: Vec<f64>,
    },
    Czonotope {
        #[serde(rename = "G")]
        g: Vec<Vec<f64>>,
        c: Vec<f64>,
        #[serde(rename = "A", default)]
        a: Vec<Vec<f64>>,
        #[serde(default)]
        b: Vec<f64>,
    },
    Bundle {
        members: Vec<SetSpec>,
    },
    Enclosure {
        members: Vec<SetSpec>,
    },
    Interval {
        lo: Vec<f64>,
        hi: Vec<f64>,
    },
}

fn matrix(
    rows: &[Vec<f64>],
    nrows: usize,
    ncols: Option<usize>,
    what: &str,
) -> Result<DMatrix<f64>, SetError> {
    if rows.len() != nrows {
        return Err(SetError::InvalidSpec(format!(
            "{what} has {} rows, expected {nrows}",
            rows.len()
        )));
    }
    let ncols = ncols.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
    if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
        return Err(SetError::InvalidSpec(format!(
            "{what} row has {} entries, expected {ncols}",
            r.len()
        )));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| m.row(i).iter().copied().collect())
        .collect()
}

impl SetSpec {
    fn zonotope(&self) -> Result<Zonotope, SetError> {
        match self {
            SetSpec::Zonotope { g, c } => {
                Zonotope::new(matrix(g, c.len(), None, "G")?, DVector::from_vec(c.clone()))
            }
            SetSpec::Interval { .. } => Ok(Zonotope::from_box(&self.interval()?)),
            _ => Err(SetError::InvalidSpec("expected a zonotope".into())),
        }
    }

    fn interval(&self) -> Result<IntervalVector, SetError> {
        match self {
            SetSpec::Interval { lo, hi } => {
                IntervalVector::from_bounds(lo, hi).map_err(SetError::from)
            }
            _ => Err(SetError::InvalidSpec("expected an interval box".into())),
        }
    }

    fn czonotope(&self) -> Result<ConstrainedZonotope, SetError> {
        match self {
            SetSpec::Czonotope { g, c, a, b } => {
                let g = matrix(g, c.len(), None, "G")?;
                let a = matrix(a, b.len(), Some(g.ncols()), "A")?;
                ConstrainedZonotope::new(
                    g,
                    DVector::from_vec(c.clone()),
                    a,
                    DVector::from_vec(b.clone()),
                )
            }
            SetSpec::Zonotope { .. } | SetSpec::Interval { .. } => Ok(self.zonotope()?.into()),
            _ => Err(SetError::InvalidSpec(
                "expected a constrained zonotope".into(),
            )),
        }
    }

    /// Any specification as an intersection list.
    pub fn to_enclosure(&self) -> Result<SetEnclosure, SetError> {
        match self {
            SetSpec::Bundle { members } | SetSpec::Enclosure { members } => SetEnclosure::new(
                members
                    .iter()
                    .map(SetSpec::czonotope)
                    .collect::<Result<_, _>>()?,
            ),
            other => Ok(SetEnclosure::single(other.czonotope()?)),
        }
    }

    /// A single constrained zonotope; multi-member sets are intersected.
    pub fn to_cz(&self) -> Result<ConstrainedZonotope, SetError> {
        self.to_enclosure()?.combined()
    }

    pub fn to_bundle(&self) -> Result<ZonotopeBundle, SetError> {
        match self {
            SetSpec::Bundle { members } => ZonotopeBundle::new(
                members
                    .iter()
                    .map(SetSpec::zonotope)
                    .collect::<Result<_, _>>()?,
            ),
            other => ZonotopeBundle::new(vec![other.zonotope()?]),
        }
    }

    pub fn from_zonotope(z: &Zonotope) -> Self {
        SetSpec::Zonotope {
            g: rows_of(&z.g),
            c: z.c.iter().copied().collect(),
        }
    }

    pub fn from_cz(z: &ConstrainedZonotope) -> Self {
        SetSpec::Czonotope {
            g: rows_of(&z.g),
            c: z.c.iter().copied().collect(),
            a: rows_of(&z.a),
            b: z.b.iter().copied().collect(),
        }
    }

    pub fn from_enclosure(s: &SetEnclosure) -> Self {
        SetSpec::Enclosure {
            members: s.members().iter().map(SetSpec::from_cz).collect(),
        }
    }

    pub fn from_bundle(b: &ZonotopeBundle) -> Self {
        SetSpec::Bundle {
            members: b.members().iter().map(SetSpec::from_zonotope).collect(),
        }
    }
}
