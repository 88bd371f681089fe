use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use roomframe::refine::connect_collinear;
use roomframe::{recover, ConstraintConfig, DegradeParams, FrameCategory, RefineConfig};
use roomframe_bench::{cluttered, fixture};

fn recover_by_category(c: &mut Criterion) {
    let mut g = c.benchmark_group("recover");
    let (refine, constraints) = (RefineConfig::default(), ConstraintConfig::default());
    for cat in FrameCategory::ALL {
        for (label, params) in [("noiseless", DegradeParams::identity()), ("degraded", DegradeParams::default())] {
            let f = fixture(3, cat, &params);
            let s = &f.scene;
            g.bench_function(BenchmarkId::new(label, cat), |b| {
                b.iter(|| recover(&f.segments, &s.truth_vps, cat, &s.image, &refine, &constraints))
            });
        }
    }
    g.finish();
}

fn recover_by_size(c: &mut Criterion) {
    let mut g = c.benchmark_group("recover_segments");
    let (refine, constraints) = (RefineConfig::default(), ConstraintConfig::default());
    for n in [100, 250, 500] {
        let f = cluttered(5, FrameCategory::FourC, n);
        let s = &f.scene;
        g.bench_with_input(BenchmarkId::from_parameter(n), &f.segments, |b, segs| {
            b.iter(|| recover(segs, &s.truth_vps, s.category, &s.image, &refine, &constraints))
        });
    }
    g.finish();
}

fn connect(c: &mut Criterion) {
    let f = cluttered(7, FrameCategory::FourC, 500);
    let cfg = RefineConfig::default();
    c.bench_function("connect_collinear/500", |b| b.iter(|| connect_collinear(&f.segments, &cfg)));
}

criterion_group!(benches, recover_by_category, recover_by_size, connect);
criterion_main!(benches);
