use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use etk_bench::{bell_witness, random_hermitian, rng};
use etk_core::operator::{eig_hermitian, svd};
use etk_core::quantum::random::gaussian_matrix;
use etk_core::schmidt::min_schmidt_k_expectation;
use etk_core::sdp::{trace_norm_sdp, SolverOptions};

fn linear_algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("linalg");
    for d in [4, 9, 16] {
        let h = random_hermitian(d, 1);
        g.bench_with_input(BenchmarkId::new("eig_hermitian", d), &h, |b, h| {
            b.iter(|| eig_hermitian(black_box(h.matrix())).unwrap())
        });
        let m = gaussian_matrix(&mut rng(2), d, d);
        g.bench_with_input(BenchmarkId::new("svd", d), &m, |b, m| b.iter(|| svd(black_box(m))));
    }
    g.finish();
}

fn sdp(c: &mut Criterion) {
    let opts = SolverOptions::default();
    let mut g = c.benchmark_group("sdp");
    for d in [2, 4, 6] {
        let h = random_hermitian(d, 3);
        g.bench_with_input(BenchmarkId::new("trace_norm", d), &h, |b, h| {
            b.iter(|| trace_norm_sdp(black_box(h), &opts).unwrap())
        });
    }
    g.finish();
}

fn oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("oracle");
    for (d, k) in [(3, 1), (3, 2), (4, 2)] {
        let w = bell_witness(d, k);
        g.bench_with_input(BenchmarkId::new("min_schmidt_k", format!("{d}x{d}_k{k}")), &w, |b, w| {
            b.iter(|| min_schmidt_k_expectation(black_box(w), (d, d), k, 8, 0).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, linear_algebra, sdp, oracle);
criterion_main!(benches);
