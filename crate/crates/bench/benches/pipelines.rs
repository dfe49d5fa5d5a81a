use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use etk_bench::{quick_config, random_state};
use etk_core::discrimination::{binary_advantage, channel_pair_from_ta, diamond_norm, ta_from_ktp};
use etk_core::multichannel::advantage_ratio;
use etk_core::quantum::max_entangled;
use etk_core::robustness::robustness_bounds;
use etk_core::schmidt::ReductionFamilyMap;
use etk_core::sdp::SolverOptions;

fn robustness(c: &mut Criterion) {
    let mut g = c.benchmark_group("robustness");
    g.sample_size(10);
    let cfg = quick_config();
    g.bench_function("bell_2x2_k1", |b| {
        b.iter(|| robustness_bounds(black_box(&max_entangled(2)), 1, &cfg).unwrap())
    });
    g.bench_function("bell_3x3_k2", |b| {
        b.iter(|| robustness_bounds(black_box(&max_entangled(3)), 2, &cfg).unwrap())
    });
    let rho = random_state((3, 3), 5);
    g.bench_function("random_3x3_k1", |b| b.iter(|| robustness_bounds(black_box(&rho), 1, &cfg).unwrap()));
    g.finish();
}

fn discrimination(c: &mut Criterion) {
    let mut g = c.benchmark_group("discrimination");
    g.sample_size(10);
    let map = ReductionFamilyMap::new(3, 0.5).unwrap().channel();
    g.bench_function("binary_advantage_d3_k2", |b| {
        b.iter(|| binary_advantage(black_box(&max_entangled(3)), 2, &map, 16, 0).unwrap())
    });
    let pair = channel_pair_from_ta(&ta_from_ktp(&map).unwrap()).unwrap();
    let diff = pair.difference();
    let opts = SolverOptions::default();
    g.bench_function("diamond_norm_d3", |b| b.iter(|| diamond_norm(black_box(&diff), &opts).unwrap()));
    g.bench_function("multichannel_bell_2x2", |b| {
        b.iter(|| advantage_ratio(black_box(&max_entangled(2)), 1, &quick_config()).unwrap())
    });
    g.finish();
}

criterion_group!(benches, robustness, discrimination);
criterion_main!(benches);
