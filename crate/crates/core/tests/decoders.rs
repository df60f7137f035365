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


use proptest::prelude::*;
use qwiretap_core::decoder::{
    build_pgm_simultaneous, convex_split_verify, exact_error_simultaneous, leakage_estimate,
    multiple_hypothesis_commuting, Codebook, SimultaneousTest,
};
use qwiretap_core::par::Exec;
use qwiretap_core::random;
use qwiretap_core::state::{DensityOperator, MultipartiteState, Register};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// `min{Σ q_i w_i : Σ p_i w_i ≥ 1 − ε, 0 ≤ w ≤ 1}` by filling in order of
/// decreasing likelihood ratio.
fn likelihood_ratio_lp(p: &[f64], q: &[f64], eps: f64) -> f64 {
    let mut idx: Vec<usize> = (0..p.len()).collect();
    idx.sort_by(|&a, &b| (p[b] * q[a]).partial_cmp(&(p[a] * q[b])).unwrap());
    let (mut mass, mut cost) = (0.0, 0.0);
    for i in idx {
        let need = 1.0 - eps - mass;
        if need <= 0.0 {
            break;
        }
        let w = (need / p[i]).min(1.0);
        mass += w * p[i];
        cost += w * q[i];
    }
    -cost.log2()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fixed_codebooks_respect_their_bound(seed in any::<u64>(), c in prop::sample::select(vec![0.1, 1.0, 10.0])) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random::mawtc(2, 2, 2, 2, &mut rng);
        let p1 = random::distribution(2, &mut rng);
        let p2 = random::distribution(2, &mut rng);
        let test = SimultaneousTest::neyman_pearson(&ch, &p1, &p2, 0.1).unwrap();
        let cb1 = Codebook::sample(&p1, 2, 2, seed).unwrap();
        let cb2 = Codebook::sample(&p2, 2, 2, seed ^ 1).unwrap();
        let m = build_pgm_simultaneous(&test, &cb1, &cb2).unwrap();
        let r = exact_error_simultaneous(&ch, &test, &cb1, &cb2, &m, c).unwrap();
        prop_assert!(r.error <= r.hn_bound + 1e-8);
        let again = exact_error_simultaneous(&ch, &test, &cb1, &cb2, &build_pgm_simultaneous(&test, &cb1, &cb2).unwrap(), c).unwrap();
        prop_assert_eq!(r, again);
    }

    #[test]
    fn commuting_test_matches_classical_oracle(seed in any::<u64>(), d in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mu = random::diagonal_density(d, &mut rng);
        let a = random::diagonal_density(d, &mut rng);
        let b = random::diagonal_density(d, &mut rng);
        let r = multiple_hypothesis_commuting(&mu, &[a.clone(), b.clone()], 0.2, 0.1).unwrap();
        let p: Vec<f64> = (0..d).map(|i| mu.matrix()[(i, i)].re).collect();
        let q: Vec<f64> = (0..d).map(|i| 0.5 * (a.matrix()[(i, i)].re + b.matrix()[(i, i)].re)).collect();
        prop_assert!((r.mixture_exponent - likelihood_ratio_lp(&p, &q, 0.2)).abs() < 1e-8);
        prop_assert!(r.shortfall >= 0.0);
    }

    #[test]
    fn leakage_is_reproducible(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random::mawtc(2, 2, 1, 2, &mut rng);
        let p = random::distribution(2, &mut rng);
        let a = leakage_estimate(&ch, &p, &p, 2, 2, 16, seed, 0.1, Exec::Parallel).unwrap();
        let b = leakage_estimate(&ch, &p, &p, 2, 2, 16, seed, 0.1, Exec::Sequential).unwrap();
        prop_assert_eq!(a, b);
        prop_assert!(a.mean >= 0.0 && a.mean <= 2.0);
    }
}

#[test]
fn convex_split_meets_its_conclusion() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let op = random::density(4, &mut rng);
    let s = MultipartiteState::new(vec![Register::quantum("X", 2), Register::quantum("B", 2)], op).unwrap();
    let mut last = f64::INFINITY;
    for k in [1, 2, 4, 8] {
        let r = convex_split_verify(&s, "X", "B", k, 0.5, 0.3).unwrap();
        assert!(r.bound_ok(), "{r:?}");
        assert!(r.distance <= last + 1e-12);
        last = r.distance;
    }
}

#[test]
fn eve_silent_leakage_vanishes() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let z = random::density(2, &mut rng);
    let ys: Vec<DensityOperator> = (0..4).map(|_| random::density(2, &mut rng)).collect();
    let ch = qwiretap_core::channel::CqMaWtc::eve_silent(2, 2, ys, &z).unwrap();
    let p = random::distribution(2, &mut rng);
    let r = leakage_estimate(&ch, &p, &p, 4, 2, 50, 7, 0.1, Exec::Parallel).unwrap();
    assert_eq!(r.mean, 0.0);
}
