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

//! Outer optimization over perturbed laws of a classical conditioning register.
//!
//! The conditional one-shot quantities take the best law `p′` within
//! purified distance `ε` of `p` and the worst block value in its support.
//! The block values depend on `p′` only through its support `S`, and among
//! laws supported on `S` the renormalized restriction of `p` is closest, with
//! fidelity `p(S)`. So a support is admissible iff `p(S) ≥ 1 − ε²`, and the
//! optimum keeps the blocks with the largest values.

/// Slack on the admissibility test `p(S) ≥ 1 − ε²`.
pub const MASS_TOL: f64 = 1e-12;

/// `max_{S : p(S) ≥ 1 − ε²} min_{z ∈ S} values[z]`.
///
/// Blocks with zero probability are ignored (their values may be NaN).
pub fn outer_max(probs: &[f64], values: &[f64], eps: f64) -> f64 {
    let need = 1.0 - eps * eps - MASS_TOL;
    let mut blocks: Vec<(f64, f64)> = probs
        .iter()
        .zip(values)
        .filter(|(p, _)| **p > 0.0)
        .map(|(p, v)| (*p, *v))
        .collect();
    blocks.sort_by(|a, b| b.1.total_cmp(&a.1));
    let mut mass = 0.0;
    for (p, v) in &blocks {
        mass += p;
        if mass >= need {
            return *v;
        }
    }
    blocks.last().map_or(f64::NAN, |b| b.1)
}

/// The admissible support attaining [`outer_max`], as block indices.
pub fn optimal_support(probs: &[f64], values: &[f64], eps: f64) -> Vec<usize> {
    let need = 1.0 - eps * eps - MASS_TOL;
    let mut idx: Vec<usize> = (0..probs.len()).filter(|&i| probs[i] > 0.0).collect();
    idx.sort_by(|a, b| values[*b].total_cmp(&values[*a]));
    let mut mass = 0.0;
    let mut out = Vec::new();
    for i in idx {
        out.push(i);
        mass += probs[i];
        if mass >= need {
            break;
        }
    }
    out
}
