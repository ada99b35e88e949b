use criterion::{criterion_group, criterion_main, Criterion};

use dcode_bench::balanced_ensemble;
use dcode_core::advanced::{teoo_brute_force, teoo_minimize};
use dcode_core::SeededRng;

fn ensemble_search(c: &mut Criterion) {
    let ens = balanced_ensemble(3, 3, 3);
    let bounds = vec![(0.0, 1.0); 3];
    let boxes = teoo_brute_force(&ens, &bounds).unwrap().evaluations;
    c.bench_function("teoo_brute_force", |b| b.iter(|| teoo_brute_force(&ens, &bounds).unwrap()));
    c.bench_function("teoo_minimize_50x", |b| {
        b.iter(|| teoo_minimize(&ens, &bounds, 50 * boxes, &mut SeededRng::new(5)).unwrap())
    });
}

criterion_group!(benches, ensemble_search);
criterion_main!(benches);
