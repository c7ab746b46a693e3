use criterion::{criterion_group, criterion_main, Criterion};
use czest_core::filter::{
    dcz_propagate, dzb_propagate, observation_set, rrsr_propagate, rrsr_update, Estimator,
    JacobianSource, MethodId,
};
use czest_core::model::{example1, unicycle, UnicycleParams};
use czest_core::{
    ConstrainedZonotope, FamilyStrategy, IntervalVector, SetEnclosure, Zonotope, ZonotopeBundle,
};
use nalgebra::{DMatrix, DVector};
use std::hint::black_box;

fn x0() -> Zonotope {
    Zonotope::new(
        DMatrix::from_row_slice(2, 3, &[0.1, 0.2, -0.1, 0.1, 0.1, 0.0]),
        DVector::from_vec(vec![0.5, 0.5]),
    )
    .unwrap()
}

fn boxed(c: &[f64], r: &[f64]) -> ConstrainedZonotope {
    ConstrainedZonotope::from_box(&IntervalVector::from_center_halfwidths(c, r).unwrap())
}

fn membership(c: &mut Criterion) {
    let z = x0().to_cz();
    let y = boxed(&[0.5, 0.0], &[0.4, 0.4]);
    let set: SetEnclosure = z
        .generalized_intersection(&DMatrix::from_row_slice(2, 2, &[1.0, 0.0, -1.0, 1.0]), &y)
        .unwrap()
        .into();
    let oracle = set.oracle().unwrap();
    let p = DVector::from_vec(vec![0.55, 0.52]);
    c.bench_function("membership/constrained", |b| {
        b.iter(|| oracle.contains(black_box(&p)).unwrap())
    });
    c.bench_function("support/constrained", |b| {
        b.iter(|| {
            set.support(black_box(&DVector::from_vec(vec![0.6, 0.8])))
                .unwrap()
        })
    });
}

fn propagation(c: &mut Criterion) {
    let m = example1();
    let x = x0().to_cz();
    let w = boxed(&[0.0, 0.0], &[0.1, 0.1]);
    let bundle = ZonotopeBundle::new(vec![x0()]).unwrap();
    let wz = Zonotope::from_box(
        &IntervalVector::from_center_halfwidths(&[0.0, 0.0], &[0.1, 0.1]).unwrap(),
    );
    let s = FamilyStrategy::Adaptive;
    c.bench_function("propagate/RRSR", |b| {
        b.iter(|| {
            rrsr_propagate(
                &m,
                black_box(&x),
                &w,
                None,
                JacobianSource::IntervalExtension,
                s,
            )
            .unwrap()
        })
    });
    c.bench_function("propagate/D-RRSR", |b| {
        b.iter(|| {
            rrsr_propagate(
                &m,
                black_box(&x),
                &w,
                None,
                JacobianSource::Decomposition(s),
                s,
            )
            .unwrap()
        })
    });
    c.bench_function("propagate/D-ZB", |b| {
        b.iter(|| dzb_propagate(&m, black_box(&bundle), &wz, s).unwrap())
    });
    c.bench_function("propagate/D-CZ", |b| {
        b.iter(|| dcz_propagate(&m, black_box(&x), &w, s).unwrap())
    });
    let pred = rrsr_propagate(&m, &x, &w, None, JacobianSource::IntervalExtension, s).unwrap();
    let y = observation_set(
        &DVector::from_vec(vec![1.3, 0.1]),
        &boxed(&[0.0, 0.0], &[0.4, 0.4]),
    )
    .unwrap();
    c.bench_function("update/RRSR", |b| {
        b.iter(|| {
            rrsr_update(
                &m,
                black_box(&pred),
                &y,
                None,
                JacobianSource::IntervalExtension,
            )
            .unwrap()
        })
    });
}

fn full_step(c: &mut Criterion) {
    let m = unicycle(&UnicycleParams::default()).unwrap();
    let x0: SetEnclosure = boxed(&[0.1, 0.2, 1.0], &[0.02, 0.02, 0.02]).into();
    let w = boxed(&[-0.01, -0.01, -0.02], &[0.05, 0.03, 0.06]);
    let v = boxed(&[0.0, 0.005, -0.005, -0.005], &[0.01, 0.015, 0.015, 0.025]);
    let y = m
        .observe(
            &m.step(&DVector::from_vec(vec![0.1, 0.2, 1.0]), &DVector::zeros(3))
                .unwrap(),
        )
        .unwrap();
    let mut group = c.benchmark_group("unicycle-step");
    group.sample_size(10);
    for method in MethodId::ALL {
        group.bench_function(method.name(), |b| {
            b.iter(|| {
                let mut est = Estimator::new(
                    &m,
                    &x0,
                    w.clone(),
                    v.clone(),
                    FamilyStrategy::Adaptive,
                    &[method],
                )
                .unwrap();
                est.step(black_box(&y)).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, membership, propagation, full_step);
criterion_main!(benches);
