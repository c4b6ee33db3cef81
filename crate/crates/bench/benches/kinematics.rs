use criterion::{black_box, criterion_group, criterion_main, Criterion};
use lorcat_bench::{sample_velocities, C};
use lorcat_core::kinematics::{boost_apply, boost_matrix, einstein_add, gyration};
use lorcat_core::vecmat::{Event, Vec3};

fn bench_kinematics(c: &mut Criterion) {
    let vs = sample_velocities(64);
    let event = Event::new(1.0, Vec3::new(0.3, -0.2, 0.7));

    c.bench_function("boost_apply", |b| {
        let mut i = 0;
        b.iter(|| {
            i = (i + 1) % vs.len();
            black_box(boost_apply(&vs[i], C, black_box(&event)).unwrap())
        })
    });

    c.bench_function("boost_matrix", |b| {
        let mut i = 0;
        b.iter(|| {
            i = (i + 1) % vs.len();
            black_box(boost_matrix(&vs[i], C).unwrap())
        })
    });

    c.bench_function("einstein_add", |b| {
        let mut i = 0;
        b.iter(|| {
            i = (i + 1) % (vs.len() - 1);
            black_box(einstein_add(&vs[i], &vs[i + 1], C).unwrap())
        })
    });

    c.bench_function("gyration", |b| {
        let mut i = 0;
        b.iter(|| {
            i = (i + 1) % (vs.len() - 1);
            black_box(gyration(&vs[i], &vs[i + 1], C).unwrap())
        })
    });
}

criterion_group!(benches, bench_kinematics);
criterion_main!(benches);
