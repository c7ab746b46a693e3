//! Decomposition-based propagation and update over zonotope bundles and
//! constrained zonotopes.

use nalgebra::{DMatrix, DVector};

use super::{diag_generators, FilterError};
use crate::interval::IntervalVector;
use crate::linalg::{block_diag, hcat, vcat, vstack};
use crate::mixmono::{build_h_family, jss_remainder_bounds, AffineLift, FamilyStrategy};
use crate::model::{Expr, ExprGrid, SystemModel};
use crate::sets::{
    check_dim, constraint_interval_bound, ConstrainedZonotope, SetEnclosure, Zonotope,
    ZonotopeBundle,
};

/// A linear remainder `H` and the bounds of `e(c + G ξ) − H ξ` over a box.
struct Remainder {
    h: DMatrix<f64>,
    lo: DVector<f64>,
    hi: DVector<f64>,
}

impl Remainder {
    fn center(&self) -> DVector<f64> {
        0.5 * (&self.lo + &self.hi)
    }

    fn radius_generators(&self) -> DMatrix<f64> {
        diag_generators(&(0.5 * (&self.hi - &self.lo)))
    }
}

fn remainders(
    exprs: &[Expr],
    jac: &ExprGrid,
    g: &DMatrix<f64>,
    c: &DVector<f64>,
    bx: &IntervalVector,
    strategy: FamilyStrategy,
) -> Result<Vec<Remainder>, FilterError> {
    let lift = AffineLift::new(exprs, g.clone(), c.clone());
    let jb = lift.jacobian_bounds(jac, bx)?;
    build_h_family(&jb.lo(), &jb.hi(), strategy)?
        .into_iter()
        .map(|sel| {
            let (lo, hi) = jss_remainder_bounds(&lift, &sel, bx)?;
            Ok(Remainder { h: sel.h, lo, hi })
        })
        .collect()
}

/// Lifted image of each bundle member `s` (taken jointly with `w`): one
/// zonotope `{[H, ½ diag(ḡ − g̲)], ½ (ḡ + g̲)}` per remainder matrix `H`.
/// The intersection of all of them contains `f(X, W)`.
pub fn dzb_propagate(
    model: &SystemModel,
    prior: &ZonotopeBundle,
    w: &Zonotope,
    strategy: FamilyStrategy,
) -> Result<SetEnclosure, FilterError> {
    check_dim(model.nx(), prior.dim())?;
    check_dim(model.nw(), w.dim())?;
    let mut members = Vec::new();
    for s in prior.members() {
        let g = block_diag(&s.g, &w.g);
        let c = vstack(&s.c, &w.c);
        let bx = IntervalVector::unit(g.ncols());
        for r in remainders(model.f(), model.jac_f(), &g, &c, &bx, strategy)? {
            members.push(Zonotope::new(hcat(&r.h, &r.radius_generators()), r.center())?.into());
        }
    }
    Ok(SetEnclosure::new(members)?)
}

/// Lifted image of `prior × w` as one constrained zonotope: the members
/// `{[H, ½ diag(ḡ − g̲)], ½ (ḡ + g̲), [A 0], b}` for every `H`, intersected
/// with their shared latent block. Remainder bounds are taken over the box
/// of latent coefficients left feasible by the constraints.
pub fn dcz_propagate(
    model: &SystemModel,
    prior: &ConstrainedZonotope,
    w: &ConstrainedZonotope,
    strategy: FamilyStrategy,
) -> Result<ConstrainedZonotope, FilterError> {
    check_dim(model.nx(), prior.dim())?;
    check_dim(model.nw(), w.dim())?;
    let z = prior.cartesian_product(w);
    let bx = constraint_interval_bound(&z.a, &z.b, z.ngen())?;
    let mut acc: Option<ConstrainedZonotope> = None;
    for r in remainders(model.f(), model.jac_f(), &z.g, &z.c, &bx, strategy)? {
        let rg = r.radius_generators();
        let member = ConstrainedZonotope::new(
            hcat(&r.h, &rg),
            r.center(),
            hcat(&z.a, &DMatrix::zeros(z.ncon(), rg.ncols())),
            z.b.clone(),
        )?;
        acc = Some(match acc {
            None => member,
            Some(a) => a.intersect(&member, z.ngen())?,
        });
    }
    Ok(acc.expect("remainder family is never empty"))
}

/// Both propagations with their member lists concatenated.
pub fn combined_propagate(
    model: &SystemModel,
    bundle: &ZonotopeBundle,
    cz: &ConstrainedZonotope,
    w: &ConstrainedZonotope,
    strategy: FamilyStrategy,
) -> Result<SetEnclosure, FilterError> {
    let zb = dzb_propagate(model, bundle, &w.zonotope_hull(), strategy)?;
    let czp = dcz_propagate(model, cz, w, strategy)?;
    Ok(zb.concat(&SetEnclosure::single(czp))?)
}

/// `{x ∈ prior : μ(x) ∈ y}` for one prior and one observation member,
/// intersected over the remainder family of `λ(β) = μ(c + G β)`. Latent
/// blocks `[β, γ, δ]`; `β` and `γ` are shared across the family.
fn measurement_update(
    model: &SystemModel,
    prior: &ConstrainedZonotope,
    y: &ConstrainedZonotope,
    strategy: FamilyStrategy,
) -> Result<ConstrainedZonotope, FilterError> {
    check_dim(model.nx(), prior.dim())?;
    check_dim(model.nmu(), y.dim())?;
    let bx = constraint_interval_bound(&prior.a, &prior.b, prior.ngen())?;
    let (nb, ng) = (prior.ngen(), y.ngen());
    let mut acc: Option<ConstrainedZonotope> = None;
    for r in remainders(
        model.mu(),
        model.jac_mu(),
        &prior.g,
        &prior.c,
        &bx,
        strategy,
    )? {
        let rg = r.radius_generators();
        let nd = rg.ncols();
        let g = hcat(&prior.g, &DMatrix::zeros(prior.dim(), ng + nd));
        let rows_f = hcat(&prior.a, &DMatrix::zeros(prior.ncon(), ng + nd));
        let rows_y = hcat(
            &hcat(&DMatrix::zeros(y.ncon(), nb), &y.a),
            &DMatrix::zeros(y.ncon(), nd),
        );
        let link = hcat(&hcat(&r.h, &-&y.g), &rg);
        let a = vcat(&vcat(&rows_f, &rows_y), &link);
        let b = vstack(&vstack(&prior.b, &y.b), &(&y.c - r.center()));
        let member = ConstrainedZonotope::new(g, prior.c.clone(), a, b)?;
        acc = Some(match acc {
            None => member,
            Some(a) => a.intersect(&member, nb + ng)?,
        });
    }
    Ok(acc.expect("remainder family is never empty"))
}

/// One constrained zonotope per (prior member, observation member) pair;
/// their intersection contains `{x ∈ prior : μ(x) ∈ y}`.
pub fn dzb_update(
    model: &SystemModel,
    prior: &SetEnclosure,
    y: &SetEnclosure,
    strategy: FamilyStrategy,
) -> Result<SetEnclosure, FilterError> {
    let mut members = Vec::with_capacity(prior.len() * y.len());
    for r in prior.members() {
        for t in y.members() {
            members.push(measurement_update(model, r, t, strategy)?);
        }
    }
    Ok(SetEnclosure::new(members)?)
}

/// A constrained zonotope containing `{x ∈ prior : μ(x) ∈ y}`.
pub fn dcz_update(
    model: &SystemModel,
    prior: &ConstrainedZonotope,
    y: &ConstrainedZonotope,
    strategy: FamilyStrategy,
) -> Result<ConstrainedZonotope, FilterError> {
    measurement_update(model, prior, y, strategy)
}
