use std::hint::black_box;

use bbsim::graph::{sample_gnp, sample_partition};
use bbsim::protocols::Builtin;
use bbsim::blackboard::DEFAULT_STEP_BUDGET;
use bbsim::Seed;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn simulate(c: &mut Criterion) {
    let mut group = c.benchmark_group("simulate");
    for name in Builtin::NAMES {
        let protocol: Builtin = name.parse().unwrap();
        // exact list-colouring turns exponential on dense graphs past n = 32
        let sizes: &[usize] = if name == "palette-coloring" { &[16, 32] } else { &[16, 32, 64] };
        for &n in sizes {
            let g = sample_gnp(n, 0.5, &Seed::new(1, "graph"));
            let z = sample_partition(n, 8, &Seed::new(1, "partition")).unwrap();
            let public = Seed::new(2, "public");
            let private = Seed::new(3, "private");
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| protocol.run(black_box(&g), &z, &public, &private, DEFAULT_STEP_BUDGET).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, simulate);
criterion_main!(benches);
