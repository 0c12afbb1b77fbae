use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use sparsefac::divisibility::{divisibility_witness, DivBackend};
use sparsefac::engine::{constant_degree_factors, sparse_factors};
use sparsefac::irredproj::{su_oracle, GridMode};
use sparsefac::pit::{interpolation_plan, sparse_interpolate};
use sparsefac::{par, parse_expression, parse_poly_n, Config, SparsePoly};

fn e(s: &str, n: usize) -> SparsePoly {
    parse_expression(s, Some(n)).unwrap()
}

fn workloads() -> Vec<(&'static str, Box<dyn Fn()>)> {
    let cfg = Config::default();
    let cd = e("(z1+2*z2-z3)^2*(z1^2+z2*z3+3)*(z2-z3+4)", 3);
    let su = e("(z1^2+z2^2+z3^2+z4)*(z1+z4^2+2)", 4);
    let oracle = su_oracle(4, 2, GridMode::Sampled { k: 64 }).unwrap();
    let f = e("(z1^2-z2^2+z3)*(z1+z2)", 3);
    let g = e("z1+z2", 3);
    let sparse = parse_poly_n("3*z1^4*z2 - 7*z2^3*z3^2 + z1*z3^5 + 11*z4^6 - 2*z1*z2*z3*z4 + 5", 4).unwrap();
    let plan = interpolation_plan(6, 4, 6);
    let values = plan.evaluate(&sparse);
    let c1 = cfg.clone();
    let c2 = cfg;
    vec![
        ("constant_degree_factors", Box::new(move || {
            constant_degree_factors(&cd, 2, DivBackend::Exact, &c1).unwrap();
        })),
        ("sparse_factors_su", Box::new(move || {
            sparse_factors(&su, 8, &oracle, &c2).unwrap();
        })),
        ("divisibility_witness", Box::new(move || {
            divisibility_witness(&f, &g).unwrap();
        })),
        ("sparse_interpolate", Box::new(move || {
            sparse_interpolate(&values, 6, 4, 6).unwrap();
        })),
    ]
}

fn bench(c: &mut Criterion) {
    let mut group = c.benchmark_group("parallel_vs_sequential");
    group.sample_size(10);
    for (name, work) in workloads() {
        group.bench_function(BenchmarkId::new("parallel", name), |b| b.iter(|| work()));
        group.bench_function(BenchmarkId::new("sequential", name), |b| b.iter(|| par::sequential(|| work())));
    }
    group.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
