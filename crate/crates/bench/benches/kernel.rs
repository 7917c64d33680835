use chrono_kernel::auto::{apply, AutoWord, Generator};
use chrono_kernel::herm::projection_from_vector;
use chrono_kernel::preservers::{
    classify_interval_map, grid_map, interval_grid_points, is_coherency_preserver,
};
use chrono_kernel::scalar::{rat, GaussRational};
use chrono_kernel::spacetime::{cayley, coherent, distance, Point};
use chrono_kernel::Herm2;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn sample_points() -> Vec<Point> {
    let p = projection_from_vector(&[GaussRational::from_ints(2, 1), GaussRational::from_ints(1, 0)])
        .unwrap();
    vec![
        Point::zero(),
        Point::Finite(Herm2::identity()),
        Point::Finite(Herm2::new(rat(1, 3), rat(-2, 7), GaussRational::from_ints(1, 1))),
        Point::Finite(p.matrix().scale(&rat(3, 5))),
        Point::infinite(p, rat(1, 2)),
        Point::Omega,
    ]
}

fn bench_coherent(c: &mut Criterion) {
    let pts = sample_points();
    c.bench_function("coherent_pairs", |b| {
        b.iter(|| {
            for x in &pts {
                for y in &pts {
                    black_box(coherent(x, y));
                    black_box(distance(x, y));
                }
            }
        })
    });
}

fn bench_apply_word(c: &mut Criterion) {
    let w = AutoWord::of(vec![
        Generator::Invert,
        Generator::Translate(Herm2::identity()),
        Generator::Transpose,
        Generator::Invert,
    ]);
    let pts = sample_points();
    c.bench_function("apply_word", |b| {
        b.iter(|| {
            for x in &pts {
                black_box(apply(&w, x));
            }
        })
    });
}

fn bench_cayley(c: &mut Criterion) {
    let pts = sample_points();
    c.bench_function("cayley", |b| {
        b.iter(|| {
            for x in &pts {
                black_box(cayley(x));
            }
        })
    });
}

fn bench_preserver_scan(c: &mut Criterion) {
    let m = grid_map("identity", |x| Point::Finite(x.clone())).unwrap();
    c.bench_function("preserver_scan_185", |b| {
        b.iter(|| black_box(is_coherency_preserver(&m)))
    });
}

fn bench_classify(c: &mut Criterion) {
    let m = grid_map("identity", |x| Point::Finite(x.clone())).unwrap();
    let mut group = c.benchmark_group("classify");
    group.sample_size(10);
    group.bench_function("classify_identity_grid", |b| {
        b.iter(|| black_box(classify_interval_map(&m).unwrap()))
    });
    group.finish();
}

fn bench_grid(c: &mut Criterion) {
    c.bench_function("grid_generation", |b| b.iter(|| black_box(interval_grid_points())));
}

criterion_group!(
    benches,
    bench_coherent,
    bench_apply_word,
    bench_cayley,
    bench_preserver_scan,
    bench_classify,
    bench_grid
);
criterion_main!(benches);
