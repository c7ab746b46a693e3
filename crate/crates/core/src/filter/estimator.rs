//! The recursive estimation loop.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::decomposition::{dcz_propagate, dcz_update, dzb_propagate, dzb_update};
use super::rrsr::{rrsr_propagate, rrsr_update, JacobianSource};
use super::FilterError;
use crate::linalg::{hcat, principal_frame, vcat, vstack, well_conditioned_frame};
use crate::mixmono::FamilyStrategy;
use crate::model::SystemModel;
use crate::sets::{
    ConstrainedZonotope, SetEnclosure, SetError, VolumeEstimate, Zonotope, ZonotopeBundle,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MethodId {
    Rrsr,
    DRrsr,
    DZb,
    DCz,
    Comb,
}

impl MethodId {
    pub const ALL: [MethodId; 5] = [
        MethodId::Rrsr,
        MethodId::DRrsr,
        MethodId::DZb,
        MethodId::DCz,
        MethodId::Comb,
    ];
    /// The methods that run their own recursion.
    pub const BASE: [MethodId; 4] = [
        MethodId::Rrsr,
        MethodId::DRrsr,
        MethodId::DZb,
        MethodId::DCz,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            MethodId::Rrsr => "RRSR",
            MethodId::DRrsr => "D-RRSR",
            MethodId::DZb => "D-ZB",
            MethodId::DCz => "D-CZ",
            MethodId::Comb => "COMB",
        }
    }
}

impl fmt::Display for MethodId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MethodId {
    type Err = FilterError;

    /// Case-insensitive; `_` and `-` are interchangeable.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_uppercase().replace('_', "-");
        MethodId::ALL
            .into_iter()
            .find(|m| m.name() == key)
            .ok_or_else(|| FilterError::UnknownMethod(s.to_string()))
    }
}

impl Serialize for MethodId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for MethodId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum StepStatus {
    Ok,
    /// The updated set is empty; the method stops here.
    Empty,
    /// The step failed; the method stops here.
    Error(String),
    /// An earlier step was empty or failed.
    Halted,
}

impl StepStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, StepStatus::Ok)
    }
}

impl fmt::Display for StepStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepStatus::Ok => write!(f, "ok"),
            StepStatus::Empty => write!(f, "empty"),
            StepStatus::Error(e) => write!(f, "error: {e}"),
            StepStatus::Halted => write!(f, "halted"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub k: usize,
    pub method: MethodId,
    pub propagated: Option<SetEnclosure>,
    pub updated: Option<SetEnclosure>,
    /// Seconds spent in propagation and update.
    pub wall_time: f64,
    /// Filled in by the caller; estimation time excludes it.
    pub volume: Option<VolumeEstimate>,
    pub status: StepStatus,
}

impl StepRecord {
    fn halted(k: usize, method: MethodId, status: StepStatus) -> Self {
        Self {
            k,
            method,
            propagated: None,
            updated: None,
            wall_time: 0.0,
            volume: None,
            status,
        }
    }
}

/// `{y} ⊕ (−V)`: the observations compatible with measurement `y`.
pub fn observation_set(
    y: &DVector<f64>,
    v: &ConstrainedZonotope,
) -> Result<ConstrainedZonotope, SetError> {
    ConstrainedZonotope::new(-&v.g, y - &v.c, v.a.clone(), v.b.clone())
}

/// The same set re-parametrized so that its first `n` latent coordinates
/// span its interval hull: `{[diag(r) 0], m, [[0 A], [diag(r) −G]], [b; c − m]}`
/// where `m ± r` is the hull. Unconstrained sets are returned unchanged.
pub fn anchor_to_hull(cz: &ConstrainedZonotope) -> Result<ConstrainedZonotope, SetError> {
    if cz.is_unconstrained() {
        return Ok(cz.clone());
    }
    let hull = cz.interval_hull()?;
    let (m, r) = (hull.mid(), hull.rad());
    let (n, ncon) = (cz.dim(), cz.ncon());
    let d = DMatrix::from_diagonal(&r);
    let g = hcat(&d, &DMatrix::zeros(n, cz.ngen()));
    let a = vcat(&hcat(&DMatrix::zeros(ncon, n), &cz.a), &hcat(&d, &-&cz.g));
    let b = vstack(&cz.b, &(&cz.c - &m));
    ConstrainedZonotope::new(g, m, a, b)
}

/// For each invertible frame `D`, the parallelotope `{x : D x ∈ B}` where
/// `B` is the tightest box around `D S`. Their intersection contains `S`.
pub fn parallelotope_bundle(
    set: &SetEnclosure,
    frames: &[DMatrix<f64>],
) -> Result<ZonotopeBundle, SetError> {
    let cz = if set.len() == 1 {
        set.members()[0].clone()
    } else {
        set.combined()?
    };
    let mut members = Vec::with_capacity(frames.len());
    for frame in frames {
        let Some(inv) = frame.clone().try_inverse() else {
            continue;
        };
        let n = frame.nrows();
        let mut mid = DVector::zeros(n);
        let mut rad = DVector::zeros(n);
        for i in 0..n {
            let d = frame.row(i).transpose();
            let hi = cz.support(&d)?.value;
            let lo = -cz.support(&-&d)?.value;
            mid[i] = 0.5 * (lo + hi);
            rad[i] = (0.5 * (hi - lo)).max(0.0);
        }
        members.push(Zonotope::new(
            &inv * DMatrix::from_diagonal(&rad),
            &inv * mid,
        )?);
    }
    ZonotopeBundle::new(members)
}

enum State {
    Cz(ConstrainedZonotope),
    Bundle(ZonotopeBundle),
    Halted,
}

struct Outcome {
    propagated: SetEnclosure,
    updated: SetEnclosure,
    next: State,
}

/// Runs the requested methods side by side on one measurement sequence.
pub struct Estimator<'m> {
    model: &'m SystemModel,
    w: ConstrainedZonotope,
    v: ConstrainedZonotope,
    strategy: FamilyStrategy,
    methods: Vec<MethodId>,
    states: BTreeMap<MethodId, State>,
    k: usize,
}

impl<'m> Estimator<'m> {
    /// Starts every method from `x0`. `COMB` implies running the other four.
    pub fn new(
        model: &'m SystemModel,
        x0: &SetEnclosure,
        w: ConstrainedZonotope,
        v: ConstrainedZonotope,
        strategy: FamilyStrategy,
        methods: &[MethodId],
    ) -> Result<Self, FilterError> {
        crate::sets::check_dim(model.nx(), x0.dim())?;
        crate::sets::check_dim(model.nw(), w.dim())?;
        crate::sets::check_dim(model.nmu(), v.dim())?;
        let mut methods: Vec<MethodId> = methods.to_vec();
        methods.sort();
        methods.dedup();
        let mut states = BTreeMap::new();
        for m in MethodId::BASE {
            if !(methods.contains(&m) || methods.contains(&MethodId::Comb)) {
                continue;
            }
            let state = match m {
                MethodId::DZb
                    if x0
                        .members()
                        .iter()
                        .all(ConstrainedZonotope::is_unconstrained) =>
                {
                    State::Bundle(ZonotopeBundle::new(
                        x0.members().iter().map(|z| z.zonotope_hull()).collect(),
                    )?)
                }
                MethodId::DZb => {
                    let n = x0.dim();
                    State::Bundle(parallelotope_bundle(x0, &[DMatrix::identity(n, n)])?)
                }
                _ => State::Cz(if x0.len() == 1 {
                    x0.members()[0].clone()
                } else {
                    x0.combined()?
                }),
            };
            states.insert(m, state);
        }
        Ok(Self {
            model,
            w,
            v,
            strategy,
            methods,
            states,
            k: 0,
        })
    }

    pub fn methods(&self) -> &[MethodId] {
        &self.methods
    }

    /// Step index of the last records produced.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Records for `k = 0`: every method holds the initial set.
    pub fn initial_records(&self, x0: &SetEnclosure) -> Vec<StepRecord> {
        self.methods
            .iter()
            .map(|&method| StepRecord {
                k: 0,
                method,
                propagated: Some(x0.clone()),
                updated: Some(x0.clone()),
                wall_time: 0.0,
                volume: None,
                status: StepStatus::Ok,
            })
            .collect()
    }

    /// Propagates every method one step and updates with measurement `y`.
    pub fn step(&mut self, y: &DVector<f64>) -> Result<Vec<StepRecord>, FilterError> {
        self.k += 1;
        let k = self.k;
        let ys = observation_set(y, &self.v)?;
        let mut done: BTreeMap<MethodId, StepRecord> = BTreeMap::new();
        let keys: Vec<MethodId> = self.states.keys().copied().collect();
        for m in keys {
            let state = self.states.insert(m, State::Halted).expect("known method");
            if matches!(state, State::Halted) {
                done.insert(m, StepRecord::halted(k, m, StepStatus::Halted));
                continue;
            }
            let start = Instant::now();
            let result = self.advance(m, state, &ys);
            let wall_time = start.elapsed().as_secs_f64();
            let record = match result {
                Ok(out) => {
                    self.states.insert(m, out.next);
                    StepRecord {
                        k,
                        method: m,
                        propagated: Some(out.propagated),
                        updated: Some(out.updated),
                        wall_time,
                        volume: None,
                        status: StepStatus::Ok,
                    }
                }
                Err(FilterError::Set(SetError::EmptySet)) => StepRecord {
                    wall_time,
                    ..StepRecord::halted(k, m, StepStatus::Empty)
                },
                Err(e) => StepRecord {
                    wall_time,
                    ..StepRecord::halted(k, m, StepStatus::Error(e.to_string()))
                },
            };
            done.insert(m, record);
        }
        if self.methods.contains(&MethodId::Comb) {
            let comb = self.combine(k, &done)?;
            done.insert(MethodId::Comb, comb);
        }
        Ok(self
            .methods
            .iter()
            .map(|m| done.remove(m).expect("every requested method ran"))
            .collect())
    }

    fn combine(
        &self,
        k: usize,
        parts: &BTreeMap<MethodId, StepRecord>,
    ) -> Result<StepRecord, FilterError> {
        let wall_time = parts.values().map(|r| r.wall_time).sum();
        if parts.values().any(|r| r.status == StepStatus::Empty) {
            return Ok(StepRecord {
                wall_time,
                ..StepRecord::halted(k, MethodId::Comb, StepStatus::Empty)
            });
        }
        let ok: Vec<&StepRecord> = parts.values().filter(|r| r.status.is_ok()).collect();
        if ok.is_empty() {
            return Ok(StepRecord::halted(k, MethodId::Comb, StepStatus::Halted));
        }
        let join =
            |pick: fn(&StepRecord) -> &Option<SetEnclosure>| -> Result<SetEnclosure, FilterError> {
                let mut acc = pick(ok[0]).clone().expect("ok records carry sets");
                for r in &ok[1..] {
                    acc = acc.concat(pick(r).as_ref().expect("ok records carry sets"))?;
                }
                Ok(acc)
            };
        Ok(StepRecord {
            k,
            method: MethodId::Comb,
            propagated: Some(join(|r| &r.propagated)?),
            updated: Some(join(|r| &r.updated)?),
            wall_time,
            volume: None,
            status: StepStatus::Ok,
        })
    }

    fn advance(
        &self,
        m: MethodId,
        state: State,
        y: &ConstrainedZonotope,
    ) -> Result<Outcome, FilterError> {
        let model = self.model;
        let strategy = self.strategy;
        match (m, state) {
            (MethodId::Rrsr | MethodId::DRrsr, State::Cz(x)) => {
                let source = if m == MethodId::Rrsr {
                    JacobianSource::IntervalExtension
                } else {
                    JacobianSource::Decomposition(strategy)
                };
                let prop = rrsr_propagate(model, &x, &self.w, None, source, strategy)?;
                let upd = rrsr_update(model, &prop, y, None, source)?;
                if upd.is_empty()? {
                    return Err(SetError::EmptySet.into());
                }
                Ok(Outcome {
                    propagated: prop.into(),
                    updated: upd.clone().into(),
                    next: State::Cz(upd),
                })
            }
            (MethodId::DCz, State::Cz(x)) => {
                let prop = dcz_propagate(model, &anchor_to_hull(&x)?, &self.w, strategy)?;
                let upd = dcz_update(model, &anchor_to_hull(&prop)?, y, strategy)?;
                if upd.is_empty()? {
                    return Err(SetError::EmptySet.into());
                }
                Ok(Outcome {
                    propagated: prop.into(),
                    updated: upd.clone().into(),
                    next: State::Cz(upd),
                })
            }
            (MethodId::DZb, State::Bundle(b)) => {
                let prop = dzb_propagate(model, &b, &self.w.zonotope_hull(), strategy)?;
                let upd = dzb_update(model, &prop, &SetEnclosure::single(y.clone()), strategy)?;
                let next = parallelotope_bundle(&upd, &self.frames(&upd)?)?;
                Ok(Outcome {
                    propagated: prop,
                    updated: upd,
                    next: State::Bundle(next),
                })
            }
            _ => unreachable!("state kind fixed per method at construction"),
        }
    }

    /// Identity, measurement-aligned and principal-axis frames for `set`.
    fn frames(&self, set: &SetEnclosure) -> Result<Vec<DMatrix<f64>>, FilterError> {
        let n = set.dim();
        let hull = set.interval_hull()?;
        let jm = self.model.jac_mu().bounds_over_box(&hull)?.mid();
        let combined = set.combined()?;
        Ok(vec![
            DMatrix::identity(n, n),
            well_conditioned_frame(&jm, n),
            principal_frame(&combined.g),
        ])
    }
}
