use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rp3link::{
    linking_number, oracle_lk_rp3, random_disjoint_pair, samples, self_linking, OracleParams,
    PairSpec, RunConfig, Tolerances,
};

fn bench_linking(c: &mut Criterion) {
    let tol = Tolerances::default();
    let mut group = c.benchmark_group("linking_number");
    for edges in [16usize, 32, 64] {
        let spec = PairSpec {
            n_edges_a: edges,
            n_edges_b: edges,
            class_a: 1,
            class_b: 1,
            ..PairSpec::default()
        };
        let (a, b) = random_disjoint_pair(2024, &spec, &tol).unwrap();
        let cfg = RunConfig::with_seed(7);
        group.bench_with_input(BenchmarkId::from_parameter(edges), &edges, |bench, _| {
            bench.iter(|| linking_number(&a, &b, &cfg).unwrap());
        });
    }
    group.finish();
}

fn bench_selflink(c: &mut Criterion) {
    let tol = Tolerances::default();
    let k = samples::wrapped_knot(11, 48, 2, 0.35, &tol).unwrap();
    let cfg = RunConfig::with_seed(7);
    c.bench_function("self_linking_48_edges", |bench| {
        bench.iter(|| self_linking(&k, &cfg).unwrap());
    });
}

fn bench_oracle(c: &mut Criterion) {
    let tol = Tolerances::default();
    let params = OracleParams::default();
    let (a, b) = samples::affine_hopf_pair(24, &tol).unwrap();
    c.bench_function("oracle_lk_hopf_24_edges", |bench| {
        bench.iter(|| {
            oracle_lk_rp3(
                std::slice::from_ref(&a),
                std::slice::from_ref(&b),
                13,
                &params,
                &tol,
            )
            .unwrap()
        });
    });
}

fn bench_validate(c: &mut Criterion) {
    let tol = Tolerances::default();
    let k = rp3link::random_curve("K", 5, 128, 0, 1.0, &tol).unwrap();
    c.bench_function("validate_128_edges", |bench| {
        bench.iter(|| k.validate(&tol).unwrap());
    });
}

criterion_group!(benches, bench_linking, bench_selflink, bench_oracle, bench_validate);
criterion_main!(benches);
