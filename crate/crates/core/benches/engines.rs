//! Sequential against parallel execution of the three heavy loops.

use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use heavy_moments::engine::{enumerate_cycles_with, phi_bruteforce_with, EnumOptions, YModel, DEFAULT_PARTITION_CAP};
use heavy_moments::lab::{simulate, EnsembleSpec, SimulationConfig};
use heavy_moments::{Execution, HeavyParams, InterleavedWord, Word};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("cycle_enumeration");
    let gamma = [1u32; 14];
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, gamma.len()), &gamma, |b, gamma| {
            b.iter(|| enumerate_cycles_with(gamma, None, EnumOptions { exec, ..Default::default() }).unwrap().len())
        });
    }
    g.finish();
}

fn partition_oracle(c: &mut Criterion) {
    let mut g = c.benchmark_group("partition_oracle");
    g.sample_size(10);
    let p = HeavyParams::symbolic([1, 2], 4).unwrap();
    let w = InterleavedWord::parse("x1^2 x2^2 x1 x2 x1 x2").unwrap();
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| phi_bruteforce_with(&w, &p, &YModel::None, DEFAULT_PARTITION_CAP, exec).unwrap()));
    }
    g.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(10);
    let cfg = SimulationConfig {
        spec: EnsembleSpec::ErdosRenyi { alpha: 1.0 },
        n: 500,
        replicates: 16,
        base_seed: 1,
        diagonal_y: BTreeMap::new(),
    };
    let words: Vec<Word> = vec!["x1^4".parse().unwrap()];
    for (name, exec) in MODES {
        g.bench_function(name, |b| b.iter(|| simulate(&cfg, &words, exec).unwrap().mean));
    }
    g.finish();
}

criterion_group!(benches, enumeration, partition_oracle, monte_carlo);
criterion_main!(benches);
