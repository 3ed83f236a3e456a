use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use curvlab::biquot::{esch_horizontal_flat_sampler, EschenburgParams};
use curvlab::census::{esch_census, CensusFilter};
use curvlab::homspace::QuotientCurvature;
use curvlab::liealg::Coeffs;
use curvlab::metric::LeftInvariantMetric;
use curvlab::optimize::{min_sectional, Budget};
use curvlab::par::Exec;
use curvlab::spaces::berger_b7;

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn b7_min_sectional(c: &mut Criterion) {
    let spec = berger_b7().unwrap();
    let q = QuotientCurvature::new(LeftInvariantMetric::biinvariant(spec.g().clone()), spec.h()).unwrap();
    let f = |a: &Coeffs, b: &Coeffs| q.eval_coords(a, b);
    let mut g = c.benchmark_group("b7_min_sectional");
    g.sample_size(10);
    for (name, exec) in MODES {
        let budget = Budget::new(20_000, 8, 200).with_exec(exec);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| min_sectional(&f, 7, &budget, 0).unwrap())
        });
    }
    g.finish();
}

fn flat_plane_sampler(c: &mut Criterion) {
    let p = EschenburgParams::new([1, 1, -2], [0, 0, 0]).unwrap();
    let mut g = c.benchmark_group("flat_plane_sampler");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| esch_horizontal_flat_sampler(&p, 0.7, 5_000, 0, exec).unwrap())
        });
    }
    g.finish();
}

fn eschenburg_census(c: &mut Criterion) {
    let mut g = c.benchmark_group("eschenburg_census");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| esch_census(8, true, CensusFilter::default(), exec).count())
        });
    }
    g.finish();
}

criterion_group!(benches, b7_min_sectional, flat_plane_sampler, eschenburg_census);
criterion_main!(benches);
