use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use confjord::exec::set_parallel;
use confjord::fermion::oracle_suite;
use confjord::kernel::axioms::generator_pairs;
use confjord::kernel::skew_suite;
use confjord::matrix::{closure_check, Family, FamilyKind, Kind, MatrixAlgebra};

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn skew(c: &mut Criterion) {
    let alg = MatrixAlgebra::new(2, 2);
    let pairs = generator_pairs(&alg);
    let mut g = c.benchmark_group("skew_r2x2");
    g.sample_size(10);
    for (name, on) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &on, |b, &on| {
            set_parallel(on);
            b.iter(|| skew_suite(&alg, &pairs))
        });
    }
    g.finish();
    set_parallel(true);
}

fn closure(c: &mut Criterion) {
    let mut g = c.benchmark_group("closure_star_k3");
    g.sample_size(10);
    for (name, on) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &on, |b, &on| {
            set_parallel(on);
            // a fresh family each time so cached bases do not carry over
            b.iter(|| closure_check(&Family::new(FamilyKind::new(Kind::Star, 2, 3).unwrap()), 5))
        });
    }
    g.finish();
    set_parallel(true);
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("fermionic_oracle");
    g.sample_size(10);
    for (name, on) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &on, |b, &on| {
            set_parallel(on);
            b.iter(|| oracle_suite(2, 1, false).unwrap())
        });
    }
    g.finish();
    set_parallel(true);
}

criterion_group!(benches, skew, closure, oracle);
criterion_main!(benches);
