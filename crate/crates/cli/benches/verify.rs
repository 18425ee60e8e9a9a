use std::time::Duration;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use trace_kit::verify::{run_suite, Settings, Suite};
use trace_kit_core::Exec;

fn suites(c: &mut Criterion) {
    let cases = [
        (Suite::Lefschetz, 200),
        (Suite::Reidemeister, 50),
        (Suite::Chain, 50),
        (Suite::Gpdrep, 100),
        (Suite::Matrix, 100),
        (Suite::HattoriStallings, 50),
        (Suite::SetTransfer, 1),
    ];
    let mut group = c.benchmark_group("verify");
    group.sample_size(10).measurement_time(Duration::from_secs(5));
    for (suite, instances) in cases {
        for (label, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            let settings = Settings { seed: 1, instances, bound: 8, exec };
            group.bench_with_input(BenchmarkId::new(suite.name(), label), &settings, |b, s| {
                b.iter(|| {
                    let r = run_suite(suite, s);
                    assert!(r.pass());
                    r.checked
                })
            });
        }
    }
    group.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
