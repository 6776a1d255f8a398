use criterion::{criterion_group, criterion_main, Criterion};

fn bench_counting(_c: &mut Criterion) {
    // Filled in once the counting module lands.
}

criterion_group!(benches, bench_counting);
criterion_main!(benches);
