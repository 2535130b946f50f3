use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use respk_core::par;
use respk_core::pgroups::enumerate_image;
use respk_core::separate::{separate_conjugacy_free, ConjOutcome};
use respk_core::words::{is_conjugate_free, words_up_to};
use respk_core::{Config, Execution, Word};

const MODES: [Execution; 2] = [Execution::Sequential, Execution::Parallel];

fn pairs(max_total: usize) -> Vec<(Word, Word)> {
    let words = words_up_to(2, max_total);
    let mut out = Vec::new();
    for g in &words {
        for h in &words {
            if g.len() + h.len() <= max_total && g.len() >= 2 && h.len() >= 2 && is_conjugate_free(g, h).is_none() {
                out.push((g.clone(), h.clone()));
            }
        }
    }
    out
}

fn separation(c: &mut Criterion) {
    let batch = pairs(6);
    let mut group = c.benchmark_group("free_separation_p3");
    group.sample_size(10);
    for exec in MODES {
        let cfg = Config { execution: exec, ..Config::with_prime(3) };
        group.bench_with_input(BenchmarkId::from_parameter(exec.name()), &cfg, |b, cfg| {
            b.iter(|| {
                for (g, h) in &batch {
                    let out = separate_conjugacy_free(g, h, 3, 2, cfg).expect("separable");
                    black_box(matches!(out, ConjOutcome::Witness(_)));
                }
            })
        });
    }
    // one pair per task, each solved sequentially
    let cfg = Config { execution: Execution::Sequential, ..Config::with_prime(3) };
    group.bench_function("batch-parallel", |b| {
        b.iter(|| {
            let found = par::map(Execution::Parallel, &batch, |(g, h)| {
                matches!(separate_conjugacy_free(g, h, 3, 2, &cfg).expect("separable"), ConjOutcome::Witness(_))
            });
            black_box(found)
        })
    });
    group.finish();
}

fn enumeration(c: &mut Criterion) {
    let g = Word::from_signed(&[1, 1, 2, -1, -1, 2]);
    let h = Word::from_signed(&[1, 2, 1, -1, 2, -1]);
    let cfg = Config::with_prime(3);
    let hom = match separate_conjugacy_free(&g, &h, 3, 2, &cfg).expect("separable") {
        ConjOutcome::Witness(w) => w.hom().expect("valid witness"),
        ConjOutcome::Conjugator(_) => panic!("pair is not conjugate"),
    };
    let mut group = c.benchmark_group("enumerate_image");
    group.sample_size(10);
    for exec in MODES {
        group.bench_with_input(BenchmarkId::from_parameter(exec.name()), &exec, |b, &exec| {
            b.iter(|| black_box(enumerate_image(&hom, 1_000_000, exec).expect("within cap").len()))
        });
    }
    group.finish();
}

criterion_group!(benches, separation, enumeration);
criterion_main!(benches);
