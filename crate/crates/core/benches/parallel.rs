// Copyright 2026 The qwiretap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qwiretap_core::decoder::leakage_estimate;
use qwiretap_core::par::Exec;
use qwiretap_core::quantities::SmoothingParams;
use qwiretap_core::random;
use qwiretap_core::region::{frontier_scan, mac_law_grid, region_corollary1};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn frontier(c: &mut Criterion) {
    let ch = random::mawtc(2, 2, 2, 2, &mut ChaCha8Rng::seed_from_u64(1));
    let grid = mac_law_grid(2, 2, 0.1).unwrap();
    let p = SmoothingParams::default();
    let mut g = c.benchmark_group("frontier_scan");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| frontier_scan(black_box(&grid), |law| region_corollary1(&ch, law, &p), exec).unwrap())
        });
    }
    g.finish();
}

fn leakage(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let ch = random::mawtc(3, 3, 2, 4, &mut rng);
    let p1 = random::distribution(3, &mut rng);
    let p2 = random::distribution(3, &mut rng);
    let mut g = c.benchmark_group("leakage_estimate");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| leakage_estimate(&ch, &p1, &p2, 8, 8, black_box(200), 42, 0.1, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, frontier, leakage);
criterion_main!(benches);
