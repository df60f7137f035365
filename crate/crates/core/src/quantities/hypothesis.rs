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

//! Hypothesis-testing relative entropy via the quantum Neyman–Pearson test.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Partition, Spectrum};
use crate::quantities::conditional::outer_max;
use crate::quantities::entropy::{check_same_dim, Reference};
use crate::state::{DensityOperator, MultipartiteState};

pub const MAX_ITERATIONS: usize = 200;
/// Relative width at which the threshold bisection stops.
pub const BISECTION_RTOL: f64 = 1e-13;
/// Required relative agreement of primal and dual values.
pub const DUALITY_GAP_TOL: f64 = 1e-6;

/// Optimal test of `ρ` against `σ` with its Lagrange threshold.
///
/// `test` is the optimizer of `min Tr{Tσ}` subject to `Tr{Tρ} ≥ 1 − ε`,
/// `0 ≤ T ≤ I`. `lambda` is the threshold of the positive part of
/// `ρ − λσ`; `dual_value` is the lower bound
/// `((1 − ε) − Tr{(ρ − λσ)₊}) / λ`.
#[derive(Debug, Clone)]
pub struct NpTestCertificate {
    pub test: CMatrix,
    pub lambda: f64,
    pub primal_value: f64,
    pub dual_value: f64,
    /// `Tr{Tρ}`.
    pub acceptance: f64,
}

impl NpTestCertificate {
    pub fn gap(&self) -> f64 {
        (self.primal_value - self.dual_value).abs()
    }

    pub fn gap_ok(&self) -> bool {
        self.gap() <= DUALITY_GAP_TOL * self.primal_value.abs().max(1.0)
    }
}

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps = {eps} not in (0, 1)")));
    }
    Ok(())
}

struct Level {
    spectrum: Spectrum,
    rho_w: Vec<Vec<f64>>,
    sigma_w: Vec<Vec<f64>>,
}

fn level(rho: &CMatrix, sigma: &CMatrix, lambda: f64, part: &Partition) -> Level {
    let h = rho - sigma * linalg::re(lambda);
    let spectrum = Spectrum::with_partition(&h, part);
    let rho_w = spectrum.expectations(rho);
    let sigma_w = spectrum.expectations(sigma);
    Level {
        spectrum,
        rho_w,
        sigma_w,
    }
}

/// `Tr{ρ {ρ − λσ > 0}}`.
fn accepted_mass(rho: &CMatrix, sigma: &CMatrix, lambda: f64, part: &Partition) -> f64 {
    let l = level(rho, sigma, lambda, part);
    let mut acc = 0.0;
    for (b, w) in l.spectrum.blocks().iter().zip(&l.rho_w) {
        for (e, r) in b.values.iter().zip(w) {
            if *e > 0.0 {
                acc += r;
            }
        }
    }
    acc
}

pub(crate) fn neyman_pearson_raw(rho: &CMatrix, sigma: &CMatrix, eps: f64) -> Result<(f64, NpTestCertificate)> {
    check_eps(eps)?;
    check_same_dim(rho, sigma)?;
    let target = 1.0 - eps;
    let part = Partition::of(&[rho, sigma]);

    let reference = Reference::new(rho, sigma);
    let off = reference.mass_off_support();
    if off >= target {
        let scale = target / off;
        let thr = reference.threshold;
        let test = reference
            .spectrum
            .assemble(|_, _, v| if v <= thr { scale } else { 0.0 });
        let primal = linalg::trace_product_re(&test, sigma).max(0.0);
        return Ok((
            f64::INFINITY,
            NpTestCertificate {
                test,
                lambda: f64::INFINITY,
                primal_value: primal,
                dual_value: 0.0,
                acceptance: target,
            },
        ));
    }

    let mut iterations = 0usize;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while accepted_mass(rho, sigma, hi, &part) >= target {
        iterations += 1;
        if iterations >= MAX_ITERATIONS {
            return Err(Error::NonConvergence { iterations, lo, hi });
        }
        lo = hi;
        hi *= 2.0;
    }
    loop {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= BISECTION_RTOL * hi || mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        if iterations >= MAX_ITERATIONS {
            return Err(Error::NonConvergence { iterations, lo, hi });
        }
        if accepted_mass(rho, sigma, mid, &part) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let lambda = 0.5 * (lo + hi);
    let l = level(rho, sigma, lambda, &part);
    let sigma_norm = reference.spectrum.max().abs();
    let rho_norm = linalg::max_eigenvalue(rho).abs();
    let band = 2.0 * (hi - lo) * sigma_norm + 64.0 * f64::EPSILON * (rho_norm + lambda * sigma_norm);

    let blocks = l.spectrum.blocks();
    let (mut w_pos, mut w_bnd) = (0.0, 0.0);
    for (b, rw) in blocks.iter().zip(&l.rho_w) {
        for (e, r) in b.values.iter().zip(rw) {
            if *e > band {
                w_pos += r;
            } else if e.abs() <= band {
                w_bnd += r;
            }
        }
    }
    let weights: Vec<Vec<f64>> = if w_pos <= target && w_pos + w_bnd >= target && w_bnd > 0.0 {
        let frac = ((target - w_pos) / w_bnd).clamp(0.0, 1.0);
        blocks
            .iter()
            .map(|b| {
                b.values
                    .iter()
                    .map(|e| {
                        if *e > band {
                            1.0
                        } else if e.abs() <= band {
                            frac
                        } else {
                            0.0
                        }
                    })
                    .collect()
            })
            .collect()
    } else {
        greedy_fill(&l, target)
    };

    let mut primal = 0.0;
    let mut acceptance = 0.0;
    for ((w, rw), sw) in weights.iter().zip(&l.rho_w).zip(&l.sigma_w) {
        for ((wi, r), s) in w.iter().zip(rw).zip(sw) {
            primal += wi * s;
            acceptance += wi * r;
        }
    }
    let primal = primal.max(0.0);
    let positive: f64 = blocks
        .iter()
        .flat_map(|b| b.values.iter())
        .filter(|e| **e > 0.0)
        .sum();
    let dual_value = if lambda > 0.0 {
        (target - positive) / lambda
    } else {
        0.0
    };
    let test = l.spectrum.assemble(|bi, k, _| weights[bi][k]);
    let value = if primal > 0.0 {
        -primal.log2()
    } else {
        f64::INFINITY
    };
    Ok((
        value,
        NpTestCertificate {
            test,
            lambda,
            primal_value: primal,
            dual_value,
            acceptance,
        },
    ))
}

/// Fill eigenvectors in decreasing order of `ρ − λσ` eigenvalue until the
/// accepted `ρ` mass reaches `target`.
fn greedy_fill(l: &Level, target: f64) -> Vec<Vec<f64>> {
    let blocks = l.spectrum.blocks();
    let mut order: Vec<(usize, usize, f64)> = blocks
        .iter()
        .enumerate()
        .flat_map(|(bi, b)| b.values.iter().enumerate().map(move |(k, e)| (bi, k, *e)))
        .collect();
    order.sort_by(|a, b| b.2.total_cmp(&a.2));
    let mut weights: Vec<Vec<f64>> = blocks.iter().map(|b| vec![0.0; b.values.len()]).collect();
    let mut mass = 0.0;
    for (bi, k, _) in order {
        if mass >= target {
            break;
        }
        let r = l.rho_w[bi][k].max(0.0);
        if r <= 0.0 {
            continue;
        }
        let w = ((target - mass) / r).min(1.0);
        weights[bi][k] = w;
        mass += w * r;
    }
    weights
}

/// `D_H^ε(ρ‖σ) = −log₂ min{Tr{Tσ} : 0 ≤ T ≤ I, Tr{Tρ} ≥ 1 − ε}`.
pub fn hypothesis_testing_relative_entropy(
    rho: &DensityOperator,
    sigma: &DensityOperator,
    eps: f64,
) -> Result<(f64, NpTestCertificate)> {
    neyman_pearson_raw(rho.matrix(), sigma.matrix(), eps)
}

/// `ρ_AB` and `ρ_A ⊗ ρ_B` (registers A then B).
pub(crate) fn joint_and_product(
    s: &MultipartiteState,
    a: &[&str],
    b: &[&str],
) -> Result<(MultipartiteState, MultipartiteState)> {
    let ab: Vec<&str> = a.iter().chain(b).copied().collect();
    let joint = s.marginal(&ab)?;
    let product = joint.product_of_marginals(a, b)?;
    Ok((joint, product))
}

/// `I_H^ε(A;B) = D_H^ε(ρ_AB‖ρ_A ⊗ ρ_B)`.
pub fn hypothesis_testing_mi(s: &MultipartiteState, a: &[&str], b: &[&str], eps: f64) -> Result<f64> {
    hypothesis_testing_mi_with_certificate(s, a, b, eps).map(|(v, _)| v)
}

pub fn hypothesis_testing_mi_with_certificate(
    s: &MultipartiteState,
    a: &[&str],
    b: &[&str],
    eps: f64,
) -> Result<(f64, NpTestCertificate)> {
    let (joint, product) = joint_and_product(s, a, b)?;
    neyman_pearson_raw(joint.matrix(), product.matrix(), eps)
}

/// `I_H^ε(A;B|Z)`: best perturbed law on the classical `Z`, worst block in
/// its support.
pub fn conditional_hypothesis_testing_mi(
    s: &MultipartiteState,
    a: &[&str],
    b: &[&str],
    z: &[&str],
    eps: f64,
) -> Result<f64> {
    check_eps(eps)?;
    if z.is_empty() {
        return hypothesis_testing_mi(s, a, b, eps);
    }
    let blocks = s.condition_on(z)?;
    let mut probs = Vec::with_capacity(blocks.len());
    let mut values = Vec::with_capacity(blocks.len());
    for blk in &blocks {
        probs.push(blk.prob);
        values.push(match &blk.state {
            Some(st) => hypothesis_testing_mi(st, a, b, eps)?,
            None => f64::NAN,
        });
    }
    Ok(outer_max(&probs, &values, eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::state::{cq_state, Distribution, Register};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Classical Neyman–Pearson by likelihood-ratio sorting.
    fn classical_np(p: &[f64], q: &[f64], eps: f64) -> f64 {
        let mut idx: Vec<usize> = (0..p.len()).collect();
        let ratio = |i: usize| if q[i] == 0.0 { f64::INFINITY } else { p[i] / q[i] };
        idx.sort_by(|a, b| ratio(*b).total_cmp(&ratio(*a)));
        let (mut mass, mut cost) = (0.0, 0.0);
        for i in idx {
            if mass >= 1.0 - eps {
                break;
            }
            let w = ((1.0 - eps - mass) / p[i]).min(1.0);
            if p[i] == 0.0 {
                continue;
            }
            mass += w * p[i];
            cost += w * q[i];
        }
        -cost.log2()
    }

    #[test]
    fn identical_states_give_scaled_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let r = random::density(3, &mut rng);
        for eps in [0.1, 0.3, 0.5] {
            let (v, cert) = hypothesis_testing_relative_entropy(&r, &r, eps).unwrap();
            assert!((v + (1.0 - eps).log2()).abs() < 1e-9, "{v}");
            assert!(cert.gap_ok());
        }
    }

    #[test]
    fn orthogonal_supports_are_infinite() {
        let r = DensityOperator::basis(2, 0);
        let s = DensityOperator::basis(2, 1);
        let (v, cert) = hypothesis_testing_relative_entropy(&r, &s, 0.2).unwrap();
        assert_eq!(v, f64::INFINITY);
        assert!(cert.primal_value.abs() < 1e-12);
    }

    #[test]
    fn diagonal_anchor_is_one_bit() {
        let r = DensityOperator::diagonal(&[0.9, 0.1]).unwrap();
        let s = DensityOperator::maximally_mixed(2);
        let (v, cert) = hypothesis_testing_relative_entropy(&r, &s, 0.1).unwrap();
        assert!((v - 1.0).abs() < 1e-9);
        assert!(cert.gap_ok());
    }

    #[test]
    fn matches_classical_lp() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for n in 2..6 {
            let p = random::distribution(n, &mut rng);
            let q = random::distribution(n, &mut rng);
            let r = DensityOperator::diagonal(p.probs()).unwrap();
            let s = DensityOperator::diagonal(q.probs()).unwrap();
            for eps in [0.05, 0.2] {
                let (v, _) = hypothesis_testing_relative_entropy(&r, &s, eps).unwrap();
                assert!((v - classical_np(p.probs(), q.probs(), eps)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn certificates_close_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 2..7 {
            let r = random::density(n, &mut rng);
            let s = random::density(n, &mut rng);
            let (_, cert) = hypothesis_testing_relative_entropy(&r, &s, 0.1).unwrap();
            assert!(cert.gap_ok(), "gap {}", cert.gap());
            assert!(cert.acceptance >= 0.9 - 1e-9);
        }
    }

    #[test]
    fn correlated_bits() {
        let conds = [DensityOperator::basis(2, 0), DensityOperator::basis(2, 1)];
        let s = cq_state(&Distribution::uniform(2), &conds, &[Register::classical("X", 2)], &[Register::quantum("Y", 2)]).unwrap();
        for eps in [0.1, 0.3] {
            let v = hypothesis_testing_mi(&s, &["X"], &["Y"], eps).unwrap();
            assert!((v - (1.0 - (1.0 - eps).log2())).abs() < 1e-9);
        }
    }

    #[test]
    fn trivial_conditioning() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let conds = random::densities(2, 2, &mut rng);
        let base = cq_state(&random::distribution(2, &mut rng), &conds, &[Register::classical("X", 2)], &[Register::quantum("Y", 2)]).unwrap();
        let z = MultipartiteState::single(Register::classical("Z", 1), DensityOperator::basis(1, 0)).unwrap();
        let s = z.tensor(&base).unwrap();
        let c = conditional_hypothesis_testing_mi(&s, &["X"], &["Y"], &["Z"], 0.2).unwrap();
        let u = hypothesis_testing_mi(&base, &["X"], &["Y"], 0.2).unwrap();
        assert_eq!(c, u);
    }

    #[test]
    fn rejects_bad_eps() {
        let r = DensityOperator::maximally_mixed(2);
        assert!(hypothesis_testing_relative_entropy(&r, &r, 0.0).is_err());
        assert!(hypothesis_testing_relative_entropy(&r, &r, 1.0).is_err());
    }
}
