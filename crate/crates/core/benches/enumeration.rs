use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ornlat::lattice::{enumerate_lattice_with, search_popk_counterexample, TreeFilter, DEFAULT_LATTICE_CAP};
use ornlat::{Execution, RootedPlaneTree};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn lattice_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_lattice");
    for text in ["(((((((())))))))", "((()(()))(()))", "(()()()()()())"] {
        let tree = Arc::new(RootedPlaneTree::parse(text).unwrap());
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, text), &tree, |b, t| {
                b.iter(|| enumerate_lattice_with(t, DEFAULT_LATTICE_CAP, exec).unwrap().len())
            });
        }
    }
    group.finish();
}

fn brute_images(c: &mut Criterion) {
    let tree = Arc::new(RootedPlaneTree::chain(8).unwrap());
    let lattice = enumerate_lattice_with(&tree, DEFAULT_LATTICE_CAP, Execution::Sequential).unwrap();
    let mut group = c.benchmark_group("semidistributive_c8");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| lattice.check_semidistributive(exec).is_ok()));
    }
    group.finish();

    let mut group = c.benchmark_group("counterexample_search");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| search_popk_counterexample(5, 2, TreeFilter::All, exec).unwrap().is_some())
        });
    }
    group.finish();
}

criterion_group!(benches, lattice_enumeration, brute_images);
criterion_main!(benches);
