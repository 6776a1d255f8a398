use criterion::{criterion_group, criterion_main, Criterion};

fn bench_incidence(_c: &mut Criterion) {
    // Filled in once the diagonal-quartic module lands.
}

criterion_group!(benches, bench_incidence);
criterion_main!(benches);
