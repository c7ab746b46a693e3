//! Mean-value-extension propagation and update.

use nalgebra::{DMatrix, DVector};

use super::{diag_generators, FilterError};
use crate::interval::{Interval, IntervalMatrix, IntervalVector};
use crate::linalg::{hcat, vcat, vstack};
use crate::mixmono::{bound_jacobian_via_decomposition, function_bounds, ExprRows, FamilyStrategy};
use crate::model::{ExprGrid, SystemModel};
use crate::sets::{check_dim, ConstrainedZonotope, Zonotope};

/// Where Jacobian bounds come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobianSource {
    /// Natural interval extension of the symbolic Jacobian.
    IntervalExtension,
    /// Decomposition bounds of each entry, intersected with the natural
    /// extension.
    Decomposition(FamilyStrategy),
}

impl JacobianSource {
    fn bounds(
        &self,
        jac: &ExprGrid,
        hess: &[ExprGrid],
        bx: &IntervalVector,
    ) -> Result<IntervalMatrix, FilterError> {
        match self {
            JacobianSource::IntervalExtension => Ok(jac.bounds_over_box(bx)?),
            JacobianSource::Decomposition(s) => {
                Ok(bound_jacobian_via_decomposition(jac, hess, bx, *s)?)
            }
        }
    }
}

/// Diagonal of `P` with `P_ii = Σ_k rad(J_ik) max_{x ∈ Z} |x_k|` for the
/// zonotope `Z`.
fn spread_radius(j: &IntervalMatrix, reach: &DVector<f64>) -> DVector<f64> {
    j.rad() * reach
}

fn zonotope_reach(z: &Zonotope) -> DVector<f64> {
    DVector::from_fn(z.dim(), |k, _| {
        z.c[k].abs() + z.g.row(k).iter().map(|v| v.abs()).sum::<f64>()
    })
}

/// [`cz_bound_product`] with a caller-supplied zonotope enclosing `x`.
pub fn cz_bound_product_with(
    j: &IntervalMatrix,
    x: &ConstrainedZonotope,
    enclosing: &Zonotope,
) -> Result<ConstrainedZonotope, FilterError> {
    check_dim(x.dim(), j.ncols())?;
    check_dim(x.dim(), enclosing.dim())?;
    let m = j.mid();
    let p = diag_generators(&spread_radius(j, &zonotope_reach(enclosing)));
    Ok(ConstrainedZonotope::new(
        hcat(&(&m * &x.g), &p),
        &m * &x.c,
        hcat(&x.a, &DMatrix::zeros(x.ncon(), p.ncols())),
        x.b.clone(),
    )?)
}

/// `{[mid(J) G, P], mid(J) c, [A 0], b}`, which contains `{J x : J ∈ 𝕁, x ∈ X}`.
/// The radius term `P` is computed from the zonotope hull of `x`.
pub fn cz_bound_product(
    j: &IntervalMatrix,
    x: &ConstrainedZonotope,
) -> Result<ConstrainedZonotope, FilterError> {
    cz_bound_product_with(j, x, &x.zonotope_hull())
}

fn checked_anchor(
    set: &ConstrainedZonotope,
    p: Option<&DVector<f64>>,
    err: FilterError,
) -> Result<DVector<f64>, FilterError> {
    match p {
        Some(p) => {
            check_dim(set.dim(), p.len())?;
            if set.contains(p)? {
                Ok(p.clone())
            } else {
                Err(err)
            }
        }
        None => Ok(set.interior_anchor()?),
    }
}

/// Box containing `{f(h, w) : w ∈ wbox}`: the decomposition bound over the
/// box `{h} × wbox`, intersected with the natural interval extension.
fn disturbance_image(
    model: &SystemModel,
    h: &DVector<f64>,
    wbox: &IntervalVector,
    strategy: FamilyStrategy,
) -> Result<IntervalVector, FilterError> {
    let hbox: IntervalVector = h.iter().map(|&v| Interval::point(v)).collect();
    let zbox = hbox.concat(wbox);
    let jac = model.jac_f().bounds_over_box(&zbox)?;
    let rows = ExprRows::new(model.f(), model.nz());
    let decomposed = function_bounds(&rows, &jac, &zbox, strategy)?;
    model
        .f()
        .iter()
        .zip(decomposed.iter())
        .map(|(e, d)| {
            let nat = e.eval_interval(zbox.entries())?;
            Ok(d.intersect(&nat).unwrap_or(nat))
        })
        .collect()
}

/// `Z ⊕ J(X − h)`: `Z` is a box containing `f(h, W)` and `J` bounds the
/// state Jacobian over `hull(X) × hull(W)`. Contains `f(X, W)`. The
/// expansion point `h` defaults to a point of `x`.
pub fn rrsr_propagate(
    model: &SystemModel,
    x: &ConstrainedZonotope,
    w: &ConstrainedZonotope,
    h: Option<&DVector<f64>>,
    source: JacobianSource,
    strategy: FamilyStrategy,
) -> Result<ConstrainedZonotope, FilterError> {
    check_dim(model.nx(), x.dim())?;
    check_dim(model.nw(), w.dim())?;
    let h = checked_anchor(x, h, FilterError::HNotInX)?;
    let xbox = x.interval_hull()?;
    let wbox = w.interval_hull()?;
    let jz = source.bounds(model.jac_f(), model.hess_f(), &xbox.concat(&wbox))?;
    let jx = jz.select_columns(0..model.nx());
    let shifted = x.translate(&-&h)?;
    let shifted_box =
        IntervalVector::from_bounds((xbox.lo() - &h).as_slice(), (xbox.hi() - &h).as_slice())?;
    let product = cz_bound_product_with(&jx, &shifted, &Zonotope::from_box(&shifted_box))?;
    let fh = disturbance_image(model, &h, &wbox, strategy)?;
    Ok(
        ConstrainedZonotope::from(Zonotope::new(diag_generators(&fh.rad()), fh.mid())?)
            .minkowski_sum(&product)?,
    )
}

/// `{x ∈ prior : μ(x) ∈ Y}` enclosed through the mean-value form
/// `μ(x) ∈ μ(x0) + J (x − x0)`. A linear observation is handled exactly by
/// a generalized intersection.
pub fn rrsr_update(
    model: &SystemModel,
    prior: &ConstrainedZonotope,
    y: &ConstrainedZonotope,
    x0: Option<&DVector<f64>>,
    source: JacobianSource,
) -> Result<ConstrainedZonotope, FilterError> {
    check_dim(model.nx(), prior.dim())?;
    check_dim(model.nmu(), y.dim())?;
    if let Some((c, d)) = model.linear_observation() {
        return Ok(prior.generalized_intersection(&c, &y.translate(&-d)?)?);
    }
    let x0 = checked_anchor(prior, x0, FilterError::X0NotInPrior)?;
    let xbox = prior.interval_hull()?;
    let jm = source.bounds(model.jac_mu(), model.hess_mu(), &xbox)?;
    let m = jm.mid();
    let reach = DVector::from_fn(xbox.len(), |k, _| {
        (xbox[k].lo() - x0[k])
            .abs()
            .max((xbox[k].hi() - x0[k]).abs())
    });
    let p = diag_generators(&spread_radius(&jm, &reach));
    let mu0 = model.observe(&x0)?;

    let (nb, ng, nd) = (prior.ngen(), y.ngen(), p.ncols());
    let g = hcat(&prior.g, &DMatrix::zeros(prior.dim(), ng + nd));
    let rows_f = hcat(&prior.a, &DMatrix::zeros(prior.ncon(), ng + nd));
    let rows_y = hcat(
        &hcat(&DMatrix::zeros(y.ncon(), nb), &y.a),
        &DMatrix::zeros(y.ncon(), nd),
    );
    let link = hcat(&hcat(&(&m * &prior.g), &-&y.g), &p);
    let a = vcat(&vcat(&rows_f, &rows_y), &link);
    let b = vstack(
        &vstack(&prior.b, &y.b),
        &(&y.c - mu0 + &m * (&x0 - &prior.c)),
    );
    Ok(ConstrainedZonotope::new(g, prior.c.clone(), a, b)?)
}
