use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use granule_core::factorize::{controller_canonical, Decomposer};
use granule_core::granules::GranuleTable;
use granule_core::testing::{oracle, random};
use granule_core::{compute_behavior, examples, Realization};
use rand::rngs::StdRng;
use rand::SeedableRng;
use std::hint::black_box;

/// A fixed batch of reduced realizations with nontrivial behavior.
fn corpus() -> Vec<Realization> {
    let mut rng = StdRng::seed_from_u64(7);
    let params = random::Params {
        min_n: 3,
        max_universe: 100_000,
        ..random::Params::default()
    };
    let mut out = Vec::new();
    while out.len() < 16 {
        let r = random::reduced_realization(&mut rng, &params);
        if compute_behavior(&r).behavior.order() > 8 {
            out.push(r);
        }
    }
    out
}

fn behavior(c: &mut Criterion) {
    let rs = corpus();
    let mut group = c.benchmark_group("behavior");
    group.bench_function("composition", |b| {
        b.iter(|| {
            rs.iter()
                .map(|r| compute_behavior(black_box(r)).behavior.order())
                .sum::<u64>()
        })
    });
    group.bench_function("brute_force", |b| {
        b.iter(|| {
            rs.iter()
                .map(|r| oracle::brute_force_behavior(black_box(r)).order())
                .sum::<u64>()
        })
    });
    group.finish();
}

fn granules(c: &mut Criterion) {
    let bundles: Vec<_> = corpus().iter().map(compute_behavior).collect();
    c.bench_function("granule_table", |b| {
        b.iter(|| {
            bundles
                .iter()
                .map(|x| GranuleTable::build(black_box(x)).records().len())
                .sum::<usize>()
        })
    });
}

fn factorization(c: &mut Criterion) {
    let rs = corpus();
    let prepared: Vec<_> = rs
        .iter()
        .map(|r| {
            let bundle = compute_behavior(r);
            let table = GranuleTable::build(&bundle);
            (r, bundle, table)
        })
        .collect();
    c.bench_function("decompose_all", |b| {
        b.iter(|| {
            for (_, bundle, table) in &prepared {
                let d = Decomposer::new(table).unwrap();
                for t in bundle.behavior.elements() {
                    black_box(d.decompose(t).unwrap());
                }
            }
        })
    });
    c.bench_function("canonical_trajectories", |b| {
        b.iter(|| {
            for (r, bundle, table) in &prepared {
                black_box(controller_canonical(r, bundle, table).unwrap().trajectories());
            }
        })
    });
}

fn z4_pipeline(c: &mut Criterion) {
    c.bench_function("z4_end_to_end", |b| {
        b.iter_batched(
            examples::z4_conventional,
            |r| {
                let bundle = compute_behavior(&r);
                let table = GranuleTable::build(&bundle);
                controller_canonical(&r, &bundle, &table).unwrap().trajectories()
            },
            BatchSize::SmallInput,
        )
    });
}

criterion_group!(benches, behavior, granules, factorization, z4_pipeline);
criterion_main!(benches);
