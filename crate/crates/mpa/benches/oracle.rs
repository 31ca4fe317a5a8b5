//! Compares the rayon-parallel inclusion oracle against the sequential
//! fallback on the catalog workloads. Both paths compute identical verdicts;
//! the interesting number is the wall-clock ratio as the word count grows.

use std::collections::BTreeSet;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use mpa::catalog;
use mpa::refine::{apply_transcript, check_refines_bounded, check_refines_bounded_seq};
use mpa::stream::Character;
use mpa::Automaton;

fn buffer_abc() -> Automaton {
    let data: BTreeSet<Character> = ["a", "b", "c"]
        .into_iter()
        .map(|t| Character::new(t).unwrap())
        .collect();
    catalog::bounded_buffer(&data, 3).unwrap()
}

fn bench_self_inclusion(c: &mut Criterion) {
    let buffer = buffer_abc();
    let parity = catalog::parity();

    let mut group = c.benchmark_group("self_inclusion");
    group.sample_size(20);
    for depth in [5usize, 6] {
        group.bench_with_input(BenchmarkId::new("buffer_parallel", depth), &depth, |b, &d| {
            b.iter(|| check_refines_bounded(&buffer, &buffer, d).unwrap());
        });
        group.bench_with_input(
            BenchmarkId::new("buffer_sequential", depth),
            &depth,
            |b, &d| {
                b.iter(|| check_refines_bounded_seq(&buffer, &buffer, d).unwrap());
            },
        );
    }
    for depth in [8usize] {
        group.bench_with_input(BenchmarkId::new("parity_parallel", depth), &depth, |b, &d| {
            b.iter(|| check_refines_bounded(&parity, &parity, d).unwrap());
        });
        group.bench_with_input(
            BenchmarkId::new("parity_sequential", depth),
            &depth,
            |b, &d| {
                b.iter(|| check_refines_bounded_seq(&parity, &parity, d).unwrap());
            },
        );
    }
    group.finish();
}

fn bench_development_steps(c: &mut Criterion) {
    let replay = apply_transcript(&catalog::figure2d_transcript()).unwrap();
    let pairs: Vec<(Automaton, Automaton)> = replay
        .rule_pairs()
        .into_iter()
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();

    let mut group = c.benchmark_group("development_steps");
    group.sample_size(20);
    group.bench_function("figure2d_parallel_d6", |b| {
        b.iter(|| {
            for (original, refined) in &pairs {
                assert!(check_refines_bounded(original, refined, 6).unwrap().holds);
            }
        });
    });
    group.bench_function("figure2d_sequential_d6", |b| {
        b.iter(|| {
            for (original, refined) in &pairs {
                assert!(check_refines_bounded_seq(original, refined, 6).unwrap().holds);
            }
        });
    });
    group.finish();
}

criterion_group!(benches, bench_self_inclusion, bench_development_steps);
criterion_main!(benches);
