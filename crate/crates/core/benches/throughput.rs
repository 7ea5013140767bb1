use blockcoh::analysis::{
    counterexample_search, default_alpha_grid, dis_curve, inequality_battery, sample_states,
    BatteryConfig,
};
use blockcoh::dynamics::{batch_yield_experiment, SimulationConfig};
use blockcoh::exec::Execution;
use blockcoh::measures::Measure;
use blockcoh::reference::alpha_reversal_pair;
use blockcoh::{LogBase, ProjectorSet, StateKind};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn dis(c: &mut Criterion) {
    let (r1, r2) = alpha_reversal_pair();
    let q = ProjectorSet::singlet_triplet();
    let grid = default_alpha_grid();
    let mut g = c.benchmark_group("dis_curve");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| dis_curve(&r1, &r2, &q, &grid, exec).unwrap())
        });
    }
    g.finish();
}

fn search(c: &mut Criterion) {
    let q = ProjectorSet::singlet_triplet();
    let rel = Measure::RelEntropy {
        base: LogBase::Bits,
    };
    let mut g = c.benchmark_group("counterexample_search");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                counterexample_search(&Measure::L1Tilde, &rel, &q, 500, StateKind::Mixed, 1, exec)
                    .unwrap()
            })
        });
    }
    g.finish();
}

fn battery(c: &mut Criterion) {
    let q = ProjectorSet::singlet_triplet();
    let mixed = sample_states(4, 4, StateKind::Mixed, 1);
    let pure = sample_states(4, 4, StateKind::Pure, 2);
    let mut g = c.benchmark_group("inequality_battery");
    g.sample_size(10);
    for (name, exec) in MODES {
        let mut cfg = BatteryConfig::default();
        cfg.budget = cfg.budget.with_execution(exec);
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| inequality_battery(&mixed, &pure, &q, &cfg).unwrap())
        });
    }
    g.finish();
}

fn batch(c: &mut Criterion) {
    let cfg = SimulationConfig {
        t_end: 5.0,
        stride: 1000,
        ..SimulationConfig::default()
    };
    let mut g = c.benchmark_group("batch_yield");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| batch_yield_experiment(8, &cfg, 3, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, dis, search, battery, batch);
criterion_main!(benches);
