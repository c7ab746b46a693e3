//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use czest_core::filter::{cz_bound_product, observation_set, Estimator, MethodId, StepRecord};
use czest_core::mixmono::{
    bound_jacobian_via_decomposition, build_h_family, jss_remainder_bounds, ExprRows,
    FamilyStrategy,
};
use czest_core::model::{example1, unicycle, UnicycleParams};
use czest_core::runner::run;
use czest_core::sets::{mc_volume, UniformSampler};
use czest_core::simulate::{sample_consistent, simulate_truth};
use czest_core::{
    ConstrainedZonotope, Expr, ExprGrid, Interval, IntervalMatrix, IntervalVector, Scenario,
    SetEnclosure, SystemModel, Zonotope,
};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn x0_example1() -> Zonotope {
    Zonotope::new(
        DMatrix::from_row_slice(2, 3, &[0.1, 0.2, -0.1, 0.1, 0.1, 0.0]),
        DVector::from_vec(vec![0.5, 0.5]),
    )
    .unwrap()
}

fn boxed(lo: &[f64], hi: &[f64]) -> SetEnclosure {
    ConstrainedZonotope::from_box(&IntervalVector::from_bounds(lo, hi).unwrap()).into()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Runs every method along `truths` simulated trajectories and checks that
/// `per_truth` measurement-consistent trajectories stay inside the updated
/// sets at every step.
fn soundness(
    model: &SystemModel,
    x0: &SetEnclosure,
    w: &SetEnclosure,
    v: &SetEnclosure,
    start: Option<&DVector<f64>>,
) -> Outcome {
    const STEPS: usize = 5;
    const TRUTHS: u64 = 4;
    const PER_TRUTH: usize = 2_500;
    let (mut checked, mut missed, mut trajectories) = (0usize, 0usize, 0usize);
    for seed in 0..TRUTHS {
        let truth =
            simulate_truth(model, x0, w, v, STEPS, 100 + seed, start).map_err(|e| e.to_string())?;
        let samples = sample_consistent(
            model,
            &truth,
            x0,
            w,
            v,
            PER_TRUTH,
            200 + seed,
            PER_TRUTH * 10_000,
        )
        .map_err(|e| e.to_string())?;
        trajectories += samples.len();
        let mut est = Estimator::new(
            model,
            x0,
            w.combined().unwrap(),
            v.combined().unwrap(),
            FamilyStrategy::Adaptive,
            &MethodId::ALL,
        )
        .map_err(|e| e.to_string())?;
        let mut records: Vec<StepRecord> = est.initial_records(x0);
        for k in 1..STEPS {
            records.extend(
                est.step(&truth.measurements[k])
                    .map_err(|e| e.to_string())?,
            );
        }
        for r in &records {
            let Some(set) = r.updated.as_ref().filter(|_| r.status.is_ok()) else {
                return Err(format!("{} at k={} has status {}", r.method, r.k, r.status));
            };
            let oracle = set.oracle().map_err(|e| e.to_string())?;
            for traj in &samples {
                checked += 1;
                if !oracle.contains(&traj[r.k]).map_err(|e| e.to_string())? {
                    missed += 1;
                }
            }
        }
    }
    check(
        missed == 0 && trajectories == TRUTHS as usize * PER_TRUTH,
        format!("{trajectories} trajectories, {checked} memberships over 5 methods x {STEPS} steps, {missed} outside"),
    )
}

fn soundness_example1() -> Outcome {
    let x0: SetEnclosure = x0_example1().into();
    soundness(
        &example1(),
        &x0,
        &boxed(&[-0.1, -0.1], &[0.1, 0.1]),
        &boxed(&[-0.4, -0.4], &[0.4, 0.4]),
        None,
    )
}

fn soundness_unicycle() -> Outcome {
    let model = unicycle(&UnicycleParams::default()).map_err(|e| e.to_string())?;
    let x0 = boxed(&[0.08, 0.18, 0.98], &[0.12, 0.22, 1.02]);
    let w = boxed(&[-0.06, -0.04, -0.08], &[0.04, 0.02, 0.04]);
    let v = boxed(&[-0.01, -0.01, -0.02, -0.03], &[0.01, 0.02, 0.01, 0.02]);
    let start = DVector::from_vec(vec![0.1, 0.2, 1.0]);
    soundness(&model, &x0, &w, &v, Some(&start))
}

fn random_function(rng: &mut ChaCha8Rng) -> Expr {
    let (x, y) = (Expr::var(0), Expr::var(1));
    let mut k = || Expr::constant(rng.random_range(-2.0..2.0));
    k() * x.clone().powi(2)
        + k() * x.clone() * y.clone()
        + k() * y.clone().powi(3)
        + k() * (k() * x.clone() + k() * y.clone()).sin()
        + k() * (k() * y.clone()).cos()
        + k() * x
}

fn decomposition_tightness() -> Outcome {
    const N: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut worst = 0.0f64;
    let mut selections = 0;
    for _ in 0..20 {
        let f = [random_function(&mut rng)];
        let bx: IntervalVector = (0..2)
            .map(|_| {
                let c = rng.random_range(-2.0..2.0);
                Interval::from_center_radius(c, rng.random_range(0.05..1.0))
            })
            .collect();
        let jac = ExprGrid::jacobian(&f, 2)
            .bounds_over_box(&bx)
            .map_err(|e| e.to_string())?;
        let rows = ExprRows::new(&f, 2);
        for sel in build_h_family(&jac.lo(), &jac.hi(), FamilyStrategy::Exhaustive)
            .map_err(|e| e.to_string())?
        {
            selections += 1;
            let (lo, hi) = jss_remainder_bounds(&rows, &sel, &bx).map_err(|e| e.to_string())?;
            let (mut gmin, mut gmax) = (f64::INFINITY, f64::NEG_INFINITY);
            for i in 0..N {
                for j in 0..N {
                    let p = [
                        bx[0].lo() + bx[0].diam() * i as f64 / (N - 1) as f64,
                        bx[1].lo() + bx[1].diam() * j as f64 / (N - 1) as f64,
                    ];
                    let g = f[0].eval(&p).unwrap() - sel.h[(0, 0)] * p[0] - sel.h[(0, 1)] * p[1];
                    gmin = gmin.min(g);
                    gmax = gmax.max(g);
                }
            }
            worst = worst.max((gmin - lo[0]).abs()).max((gmax - hi[0]).abs());
        }
    }
    check(
        worst <= 1e-6,
        format!("20 functions, {selections} remainders, max |bound - grid extremum| = {worst:.3e}"),
    )
}

fn bound_product_oracle() -> Outcome {
    let model = example1();
    let x = x0_example1().to_cz();
    let hull = x
        .interval_hull()
        .unwrap()
        .concat(&IntervalVector::from_center_halfwidths(&[0.0, 0.0], &[0.1, 0.1]).unwrap());
    let jz = model
        .jac_f()
        .bounds_over_box(&hull)
        .map_err(|e| e.to_string())?;
    let j = IntervalMatrix::from_fn(2, 2, |r, c| jz.get(r, c));
    let out: SetEnclosure = cz_bound_product(&j, &x).map_err(|e| e.to_string())?.into();
    let oracle = out.oracle().unwrap();
    let xs = SetEnclosure::from(x.clone());
    let sampler = UniformSampler::new(&xs).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut missed = 0;
    const N: usize = 100_000;
    for _ in 0..N {
        let jm = DMatrix::from_fn(2, 2, |r, c| {
            let e = j.get(r, c);
            rng.random_range(e.lo()..=e.hi())
        });
        let p = sampler
            .sample(&mut rng, 10_000)
            .map_err(|e| e.to_string())?;
        if !oracle.contains(&(jm * p)).unwrap() {
            missed += 1;
        }
    }
    check(missed == 0, format!("{N} products J x, {missed} outside"))
}

fn jacobian_refinement() -> Outcome {
    let model = example1();
    let hull = x0_example1()
        .interval_hull()
        .concat(&IntervalVector::from_center_halfwidths(&[0.0, 0.0], &[0.1, 0.1]).unwrap());
    let natural = model
        .jac_f()
        .bounds_over_box(&hull)
        .map_err(|e| e.to_string())?;
    let refined = bound_jacobian_via_decomposition(
        model.jac_f(),
        model.hess_f(),
        &hull,
        FamilyStrategy::Adaptive,
    )
    .map_err(|e| e.to_string())?;
    let subset = refined.is_subset_of(&natural);
    let mut best = 0.0f64;
    for r in 0..natural.nrows() {
        for c in 0..natural.ncols() {
            best = best.max(natural.get(r, c).diam() - refined.get(r, c).diam());
        }
    }
    check(
        subset && best > 0.0,
        format!("subset: {subset}, largest width reduction {best:.4e}"),
    )
}

fn linear_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut a = DMatrix::from_fn(2, 2, |_, _| rng.random_range(-1.0..1.0));
    let norm: f64 = a.clone().svd(false, false).singular_values.max();
    a *= 0.9 / norm.max(0.9);
    let cm = DMatrix::from_fn(2, 2, |_, _| rng.random_range(-1.0..1.0));
    let d = DVector::from_fn(2, |_, _| rng.random_range(-0.5..0.5));
    let lin = |m: &DMatrix<f64>, i: usize, off: Expr| {
        (0..2).fold(off, |acc, j| acc + Expr::constant(m[(i, j)]) * Expr::var(j))
    };
    let f = (0..2).map(|i| lin(&a, i, Expr::var(2 + i))).collect();
    let mu = (0..2).map(|i| lin(&cm, i, Expr::constant(d[i]))).collect();
    let model = SystemModel::new("linear", 2, 2, f, mu).map_err(|e| e.to_string())?;
    let x0: SetEnclosure = x0_example1().into();
    let w = boxed(&[-0.05, -0.05], &[0.05, 0.05]);
    let v = boxed(&[-0.1, -0.1], &[0.1, 0.1]);
    let truth = simulate_truth(&model, &x0, &w, &v, 5, 3, None).map_err(|e| e.to_string())?;
    let (wc, vc) = (w.combined().unwrap(), v.combined().unwrap());
    let mut est = Estimator::new(
        &model,
        &x0,
        wc.clone(),
        vc.clone(),
        FamilyStrategy::Adaptive,
        &[MethodId::DCz],
    )
    .map_err(|e| e.to_string())?;
    let mut exact = x0_example1().to_cz();
    let (mut disagree, mut inside, mut total) = (0, 0, 0);
    for k in 1..5 {
        let rec = est
            .step(&truth.measurements[k])
            .map_err(|e| e.to_string())?
            .remove(0);
        let dcz = rec
            .updated
            .ok_or_else(|| format!("D-CZ at k={k}: {}", rec.status))?;
        let ys = observation_set(&truth.measurements[k], &vc)
            .unwrap()
            .translate(&-&d)
            .unwrap();
        exact = exact
            .linear_map(&a)
            .unwrap()
            .minkowski_sum(&wc)
            .unwrap()
            .generalized_intersection(&cm, &ys)
            .unwrap();
        let ex = SetEnclosure::from(exact.clone());
        let hull = dcz.interval_hull().unwrap();
        let eh = ex.interval_hull().unwrap();
        let bx: IntervalVector = hull
            .iter()
            .zip(eh.iter())
            .map(|(p, q)| p.hull(q).inflate(0.25 * p.hull(q).diam()))
            .collect();
        let (o1, o2) = (dcz.oracle().unwrap(), ex.oracle().unwrap());
        for _ in 0..250 {
            let z = DVector::from_fn(2, |i, _| rng.random_range(bx[i].lo()..=bx[i].hi()));
            let (m1, m2) = (o1.contains(&z).unwrap(), o2.contains(&z).unwrap());
            total += 1;
            inside += usize::from(m2);
            disagree += usize::from(m1 != m2);
        }
    }
    check(
        disagree == 0 && inside > 0,
        format!("{total} samples ({inside} inside), {disagree} disagreements"),
    )
}

fn comb_dominance() -> Outcome {
    let x0: SetEnclosure = x0_example1().into();
    let (w, v) = (
        boxed(&[-0.1, -0.1], &[0.1, 0.1]),
        boxed(&[-0.4, -0.4], &[0.4, 0.4]),
    );
    let model = example1();
    let truth = simulate_truth(&model, &x0, &w, &v, 5, 17, None).map_err(|e| e.to_string())?;
    let mut est = Estimator::new(
        &model,
        &x0,
        w.combined().unwrap(),
        v.combined().unwrap(),
        FamilyStrategy::Adaptive,
        &MethodId::ALL,
    )
    .map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let (mut violations, mut comb_hits, mut vol_fail) = (0, 0, Vec::new());
    for k in 1..5 {
        let recs = est
            .step(&truth.measurements[k])
            .map_err(|e| e.to_string())?;
        let sets: Vec<(MethodId, SetEnclosure)> = recs
            .iter()
            .map(|r| (r.method, r.updated.clone().expect("updated set")))
            .collect();
        let comb = &sets.iter().find(|(m, _)| *m == MethodId::Comb).unwrap().1;
        let mut bx = comb.interval_hull().unwrap();
        for (_, s) in &sets {
            let h = s.interval_hull().unwrap();
            bx = bx.iter().zip(h.iter()).map(|(a, b)| a.hull(b)).collect();
        }
        let oracles: Vec<_> = sets
            .iter()
            .map(|(m, s)| (*m, s.oracle().unwrap()))
            .collect();
        for _ in 0..2_500 {
            let z = DVector::from_fn(2, |i, _| rng.random_range(bx[i].lo()..=bx[i].hi()));
            let in_comb = oracles
                .iter()
                .find(|(m, _)| *m == MethodId::Comb)
                .unwrap()
                .1
                .contains(&z)
                .unwrap();
            if in_comb {
                comb_hits += 1;
                for (_, o) in &oracles {
                    if !o.contains(&z).unwrap() {
                        violations += 1;
                    }
                }
            }
        }
        let vols: Vec<_> = sets
            .iter()
            .map(|(m, s)| (*m, mc_volume(s, 20_000, 1000 + k as u64).unwrap()))
            .collect();
        let vc = vols.iter().find(|(m, _)| *m == MethodId::Comb).unwrap().1;
        for (m, vm) in &vols {
            if vc.estimate > vm.estimate + 3.0 * (vc.stderr.powi(2) + vm.stderr.powi(2)).sqrt() {
                vol_fail.push(format!("k={k} {m}"));
            }
        }
    }
    check(
        violations == 0 && comb_hits > 0 && vol_fail.is_empty(),
        format!("10000 samples, {comb_hits} in COMB, {violations} implication violations, volume exceedances {vol_fail:?}"),
    )
}

fn initial_volume() -> Outcome {
    let z = x0_example1();
    let mut area = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            area += 4.0 * (z.g[(0, i)] * z.g[(1, j)] - z.g[(1, i)] * z.g[(0, j)]).abs();
        }
    }
    let v = mc_volume(&z.into(), 100_000, 99).map_err(|e| e.to_string())?;
    check(
        (area - 0.12).abs() < 1e-12 && (v.estimate - area).abs() <= 3.0 * v.stderr,
        format!(
            "analytic {area:.6}, estimate {:.6} +- {:.6}",
            v.estimate, v.stderr
        ),
    )
}

fn determinism() -> Outcome {
    let mut s = Scenario::load(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../../scenarios/example1.json"
    ))
    .map_err(|e| e.to_string())?;
    s.samples = 5_000;
    s.trajectories = 200;
    let (a, b) = (
        run(&s).map_err(|e| e.to_string())?,
        run(&s).map_err(|e| e.to_string())?,
    );
    let key = |o: &czest_core::RunOutput| -> Vec<_> {
        o.rows
            .iter()
            .map(|r| {
                (
                    r.k,
                    r.method,
                    r.volume.map(|v| (v.estimate, v.stderr)),
                    r.containment,
                    r.status.clone(),
                )
            })
            .collect()
    };
    let sets_equal = a
        .records
        .iter()
        .zip(&b.records)
        .all(|(x, y)| x.updated == y.updated);
    check(
        key(&a) == key(&b) && sets_equal,
        format!(
            "{} rows compared, sets identical: {sets_equal}",
            a.rows.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("soundness, rational two-state system", soundness_example1),
        ("soundness, unicycle with range/bearing", soundness_unicycle),
        ("decomposition remainder tightness", decomposition_tightness),
        ("interval-matrix product enclosure", bound_product_oracle),
        ("decomposition-refined Jacobian bounds", jacobian_refinement),
        ("linear collapse of D-CZ", linear_collapse),
        ("COMB dominance", comb_dominance),
        ("initial-set volume", initial_volume),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("PASS  {name}: {d} ({secs:.1}s)"),
            Err(d) => {
                failed += 1;
                println!("FAIL  {name}: {d} ({secs:.1}s)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
