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

//! Seeded random instances: states, operators, distributions and channels.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::channel::{CqMaWtc, InputLaw, PpQwtc, Qbc};
use crate::linalg::{self, CMatrix, Spectrum};
use crate::state::{DensityOperator, Distribution};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    linalg::symmetrize(&ginibre(n, n, rng))
}

/// Random full-rank density operator (induced measure, `G G† / Tr`).
pub fn density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityOperator {
    let g = ginibre(n, n, rng);
    let m = &g * g.adjoint();
    let tr = linalg::trace_re(&m);
    DensityOperator::from_raw(linalg::symmetrize(&(m * linalg::re(1.0 / tr))))
}

/// Random density operator of rank at most `rank`.
pub fn density_of_rank<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> DensityOperator {
    let g = ginibre(n, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = linalg::trace_re(&m);
    DensityOperator::from_raw(linalg::symmetrize(&(m * linalg::re(1.0 / tr))))
}

pub fn state_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|a| a / norm).collect()
}

pub fn pure<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityOperator {
    DensityOperator::pure(&state_vector(n, rng)).expect("nonzero vector")
}

/// Uniform draw from the probability simplex.
pub fn distribution<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Distribution {
    let w: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1) + 1e-12).collect();
    Distribution::from_weights(&w).expect("positive weights")
}

pub fn diagonal_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DensityOperator {
    DensityOperator::from_raw(linalg::diag(distribution(n, rng).probs()))
}

/// Random PSD matrix with spectrum in `[0, scale]`.
pub fn psd<R: Rng + ?Sized>(n: usize, scale: f64, rng: &mut R) -> CMatrix {
    let spec = Spectrum::of(&hermitian(n, rng));
    let vals: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * scale).collect();
    linalg::symmetrize(&spec.assemble(|_, k, _| vals[k]))
}

/// Random operator with `0 ≤ S ≤ I`.
pub fn contraction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    psd(n, 1.0, rng)
}

/// `n` random states on `dim` dimensions.
pub fn densities<R: Rng + ?Sized>(count: usize, dim: usize, rng: &mut R) -> Vec<DensityOperator> {
    (0..count).map(|_| density(dim, rng)).collect()
}

/// Random channel with independent random outputs per input pair.
pub fn mawtc<R: Rng + ?Sized>(x1: usize, x2: usize, dy: usize, dz: usize, rng: &mut R) -> CqMaWtc {
    CqMaWtc::new(x1, x2, dy, dz, densities(x1 * x2, dy * dz, rng)).expect("consistent sizes")
}

/// Random multiple-access channel whose eavesdropper output is constant.
pub fn eve_silent_mawtc<R: Rng + ?Sized>(x1: usize, x2: usize, dy: usize, dz: usize, rng: &mut R) -> CqMaWtc {
    let ys = densities(x1 * x2, dy, rng);
    CqMaWtc::eve_silent(x1, x2, ys, &density(dz, rng)).expect("consistent sizes")
}

pub fn ppqwtc<R: Rng + ?Sized>(u1: usize, u2: usize, dy: usize, dz: usize, rng: &mut R) -> PpQwtc {
    PpQwtc::direct(u1, u2, dy, dz, densities(u1 * u2, dy * dz, rng)).expect("consistent sizes")
}

pub fn eve_silent_ppqwtc<R: Rng + ?Sized>(u1: usize, u2: usize, dy: usize, dz: usize, rng: &mut R) -> PpQwtc {
    let ys = densities(u1 * u2, dy, rng);
    PpQwtc::eve_silent(u1, u2, ys, &density(dz, rng)).expect("consistent sizes")
}

pub fn qbc<R: Rng + ?Sized>(x: usize, d1: usize, d2: usize, rng: &mut R) -> Qbc {
    Qbc::new(x, d1, d2, densities(x, d1 * d2, rng)).expect("consistent sizes")
}

/// Random law without time sharing.
pub fn input_law<R: Rng + ?Sized>(x1: usize, x2: usize, rng: &mut R) -> InputLaw {
    InputLaw::independent(distribution(x1, rng), distribution(x2, rng))
}
