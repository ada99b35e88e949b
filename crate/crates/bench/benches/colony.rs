use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dcode_bench::random_instance;
use dcode_core::colony::{construct_tour, CandidateLists, HeuristicField, PheromoneField};
use dcode_core::experiment::default_clusters;
use dcode_core::{run_dco, ColonyConfig, DynamicEfficiency, SeededRng};

fn construction(c: &mut Criterion) {
    let mut group = c.benchmark_group("construct_tour");
    for n in [52, 200, 500] {
        let inst = random_instance(n);
        let pher = PheromoneField::uniform(n, 1.0);
        let heur = HeuristicField::from_instance(&inst);
        let cfg = ColonyConfig::default();
        let lists = CandidateLists::nearest(&inst, 20);
        group.bench_with_input(BenchmarkId::new("full", n), &n, |b, _| {
            let mut rng = SeededRng::new(1);
            b.iter(|| construct_tour(&inst, &pher, &heur, &cfg, None, &mut rng).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("nearest20", n), &n, |b, _| {
            let mut rng = SeededRng::new(1);
            b.iter(|| construct_tour(&inst, &pher, &heur, &cfg, Some(&lists), &mut rng).unwrap())
        });
    }
    group.finish();
}

fn iterations(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_dco_10_iterations");
    group.sample_size(10);
    let inst = random_instance(100);
    let cfg = ColonyConfig {
        max_iterations: 10,
        ..Default::default()
    };
    let de = DynamicEfficiency::defaults_for(&cfg, inst.len());
    group.bench_function("plain", |b| b.iter(|| run_dco(&inst, &cfg, None, &SeededRng::new(3)).unwrap()));
    group.bench_function("controlled", |b| {
        b.iter(|| run_dco(&inst, &cfg, Some(&de), &SeededRng::new(3)).unwrap())
    });
    let clustered = ColonyConfig {
        candidate_list_size: default_clusters(inst.len()),
        ..cfg.clone()
    };
    group.bench_function("nearest_sqrt_n", |b| {
        b.iter(|| run_dco(&inst, &clustered, None, &SeededRng::new(3)).unwrap())
    });
    group.finish();
}

criterion_group!(benches, construction, iterations);
criterion_main!(benches);
