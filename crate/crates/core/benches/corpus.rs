use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use holo::corpus::{audit_corpus, corpus, corpus_catalog};
use holo::degeneration::enumerate_limits;
use holo::fixtures::{demo_catalog, two_odd_asymptotics};
use holo::par::Execution;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn corpus_audit(c: &mut Criterion) {
    let cat = corpus_catalog();
    let bs = corpus(&cat, 2024, 200);
    let mut g = c.benchmark_group("corpus_audit");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| {
                for r in audit_corpus(&cat, &bs, exec) {
                    r.unwrap();
                }
            })
        });
    }
    g.finish();
}

fn limit_enumeration(c: &mut Criterion) {
    let cat = demo_catalog();
    let asym = two_odd_asymptotics();
    let mut g = c.benchmark_group("limit_enumeration");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &exec| {
            b.iter(|| enumerate_limits(&cat, &asym, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, corpus_audit, limit_enumeration);
criterion_main!(benches);
