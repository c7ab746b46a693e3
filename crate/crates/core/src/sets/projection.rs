use std::f64::consts::TAU;

use nalgebra::DVector;

use super::{SetEnclosure, SetError};

/// Outer polygon of the projection onto axes `(i, j)`: the intersection of
/// the supporting half-planes in `directions` equally spaced directions,
/// returned as its vertex list in counter-clockwise order.
pub fn project_2d(
    set: &SetEnclosure,
    axes: (usize, usize),
    directions: usize,
) -> Result<Vec<(f64, f64)>, SetError> {
    if directions < 3 {
        return Err(SetError::InvalidSpec(
            "projection needs at least three directions".into(),
        ));
    }
    let n = set.dim();
    if axes.0 >= n || axes.1 >= n || axes.0 == axes.1 {
        return Err(SetError::DimensionMismatch {
            expected: n,
            found: axes.0.max(axes.1) + 1,
        });
    }
    let cz = if set.len() == 1 {
        set.members()[0].clone()
    } else {
        set.combined()?
    };
    let mut lines = Vec::with_capacity(directions);
    for k in 0..directions {
        let t = TAU * k as f64 / directions as f64;
        let (dx, dy) = (t.cos(), t.sin());
        let mut d = DVector::zeros(n);
        d[axes.0] = dx;
        d[axes.1] = dy;
        lines.push((dx, dy, cz.support(&d)?.value));
    }
    let mut poly = Vec::with_capacity(directions);
    for k in 0..directions {
        let (a1, b1, h1) = lines[k];
        let (a2, b2, h2) = lines[(k + 1) % directions];
        let det = a1 * b2 - a2 * b1;
        poly.push(((h1 * b2 - h2 * b1) / det, (a1 * h2 - a2 * h1) / det));
    }
    Ok(poly)
}

/// Shoelace area of a simple polygon.
pub fn polygon_area(poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    let twice: f64 = (0..n)
        .map(|k| {
            let (x1, y1) = poly[k];
            let (x2, y2) = poly[(k + 1) % n];
            x1 * y2 - x2 * y1
        })
        .sum();
    0.5 * twice.abs()
}
