use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nondistill::certifier::{build_lp, certify, CertificationProblem, CertifyOptions, SolverRoute};
use nondistill::families::{deterministic_family, random_filter_family};
use nondistill::rational::half;
use nondistill::ratlp;
use nondistill_bench::{eve_knows_all, noisy_bit};

fn lp_construction(c: &mut Criterion) {
    let g = noisy_bit();
    let mut group = c.benchmark_group("build_lp");
    for m in [1, 3, 5] {
        let fam = deterministic_family(2, 2, m);
        let problem = CertificationProblem::new(&g, &fam, &half()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(m), &problem, |b, p| {
            b.iter(|| build_lp(p, &CertifyOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn certification(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    for (name, g) in [("eve_knows_all", eve_knows_all()), ("noisy_bit", noisy_bit())] {
        for m in [1, 3] {
            let fam = random_filter_family(2, 2, m, 7, 3);
            group.bench_function(BenchmarkId::new(name, m), |b| {
                b.iter(|| certify(&g, &fam, &half(), &CertifyOptions::default()).unwrap())
            });
        }
    }
    let g = noisy_bit();
    let fam = deterministic_family(2, 2, 2);
    for route in [SolverRoute::Decomposed, SolverRoute::Monolithic] {
        let opts = CertifyOptions { route, ..CertifyOptions::default() };
        group.bench_function(BenchmarkId::new("route", format!("{route:?}")), |b| {
            b.iter(|| certify(&g, &fam, &half(), &opts).unwrap())
        });
    }
    group.finish();
}

fn simplex(c: &mut Criterion) {
    let g = noisy_bit();
    let fam = deterministic_family(2, 2, 2);
    let problem = CertificationProblem::new(&g, &fam, &half()).unwrap();
    let clp = build_lp(&problem, &CertifyOptions::default()).unwrap();
    c.bench_function("simplex/monolithic_m2", |b| b.iter(|| ratlp::solve(&clp.lp).unwrap()));
}

criterion_group!(benches, lp_construction, certification, simplex);
criterion_main!(benches);
