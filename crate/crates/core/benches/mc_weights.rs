use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use cyclic_core::graphs::AdmissibleGraph;
use cyclic_core::weights::{mc_weight, McParams};

fn bench_weights(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_weight");
    group.sample_size(10);
    for key in ["m1|d2:", "m1|d0:b0|d1:i0", "m1|d0:b0,i1|d0:i0,b0"] {
        let g: AdmissibleGraph = key.parse().expect("valid key");
        for parallel in [false, true] {
            let params = McParams { samples: 50_000, parallel, ..McParams::default() }.raw();
            let label = if parallel { "parallel" } else { "sequential" };
            group.bench_with_input(BenchmarkId::new(label, key), &g, |b, g| b.iter(|| mc_weight(g, &params).expect("admissible")));
        }
    }
    group.finish();
}

criterion_group!(benches, bench_weights);
criterion_main!(benches);
