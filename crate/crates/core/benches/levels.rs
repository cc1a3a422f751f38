use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use tldlite::kb::{parse_kb, KnowledgeBase};
use tldlite::matrix::{Config, Engine};

fn corpus(name: &str) -> KnowledgeBase {
    let path = format!("{}/../../corpus/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_kb(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn decide(c: &mut Criterion) {
    let mut group = c.benchmark_group("decide");
    group.sample_size(10);
    for (name, bound) in [("example5.kb", Some(24)), ("relay.kb", Some(24)), ("ownership.kb", None)] {
        let kb = corpus(name);
        for parallel in [false, true] {
            let mode = if parallel { "parallel" } else { "sequential" };
            group.bench_with_input(BenchmarkId::new(mode, name), &kb, |b, kb| {
                b.iter(|| {
                    let e = Engine::new(kb, Config { parallel, bound, ..Config::default() }).unwrap();
                    black_box(e.decide().unwrap().sat)
                })
            });
        }
    }
    group.finish();
}

fn witness(c: &mut Criterion) {
    let mut group = c.benchmark_group("witness");
    group.sample_size(10);
    let kb = corpus("example5.kb");
    for parallel in [false, true] {
        let mode = if parallel { "parallel" } else { "sequential" };
        group.bench_function(BenchmarkId::new(mode, 16), |b| {
            b.iter(|| {
                let e = Engine::new(&kb, Config { parallel, ..Config::default() }).unwrap();
                black_box(e.build_witness(16).unwrap())
            })
        });
    }
    group.finish();
}

criterion_group!(benches, decide, witness);
criterion_main!(benches);
