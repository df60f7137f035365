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

//! Max-relative entropy, max mutual information and their smoothed forms.
//!
//! Smoothing follows the truncation path: with `M = σ^{-1/2} ρ σ^{-1/2}`
//! and `M_t = min(M, t)`, the candidate `ρ′_t = σ^{1/2} M_t σ^{1/2} / Z(t)`
//! has `D_max(ρ′_t‖σ) = log₂(min(t, m_max) / Z(t))`, which is monotone in
//! `t`. The smallest `t` keeping `P(ρ′_t, ρ) ≤ ε` is found by bisection.
//! This is an upper bound on the exact smooth quantity.

use crate::error::Result;
use crate::linalg::{self, CMatrix, Spectrum};
use crate::quantities::conditional::outer_max;
use crate::quantities::entropy::{check_same_dim, Reference, SUPPORT_MASS_TOL};
use crate::quantities::hypothesis::{check_eps, joint_and_product};
use crate::state::{purified_distance_raw, DensityOperator, MultipartiteState};

/// Bisection steps on `log t`.
pub const TRUNCATION_STEPS: usize = 64;
/// The path is searched over `t ∈ [m_max · 2^{-TRUNCATION_RANGE}, m_max]`.
pub const TRUNCATION_RANGE: f64 = 60.0;
/// Grid points on the truncation path for the alternate smooth max-MI.
pub const ALT_GRID: usize = 128;
/// Smallest truncation level on the alternate grid, relative to `m_max`.
pub const ALT_GRID_FLOOR: f64 = 1e-6;

pub(crate) fn max_relative_entropy_raw(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let r = Reference::new(rho, sigma);
    if r.mass_off_support() > SUPPORT_MASS_TOL {
        return f64::INFINITY;
    }
    let thr = r.threshold;
    let s = r.spectrum.map(|v| if v > thr { 1.0 / v.sqrt() } else { 0.0 });
    let m = &s * rho * &s;
    Spectrum::of(&m).max().log2()
}

/// `D_max(ρ‖σ) = log₂ min{λ : ρ ≤ λσ}`, `+∞` when `supp ρ ⊄ supp σ`.
pub fn max_relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_same_dim(rho.matrix(), sigma.matrix())?;
    Ok(max_relative_entropy_raw(rho.matrix(), sigma.matrix()))
}

/// `I_max(A;B) = D_max(ρ_AB‖ρ_A ⊗ ρ_B)`.
pub fn max_mi(s: &MultipartiteState, a: &[&str], b: &[&str]) -> Result<f64> {
    let (joint, product) = joint_and_product(s, a, b)?;
    Ok(max_relative_entropy_raw(joint.matrix(), product.matrix()))
}

struct TruncationPath<'a> {
    rho: &'a CMatrix,
    m: Spectrum,
    sigma_w: Vec<Vec<f64>>,
    sqrt_sigma: CMatrix,
    m_max: f64,
    in_support: bool,
}

impl<'a> TruncationPath<'a> {
    fn new(rho: &'a CMatrix, sigma: &CMatrix) -> Self {
        let spec = Spectrum::of(sigma);
        let thr = spec.support_threshold();
        let inv = spec.map(|v| if v > thr { 1.0 / v.sqrt() } else { 0.0 });
        let sqrt_sigma = spec.map(|v| v.max(0.0).sqrt());
        let m = Spectrum::of(&(&inv * rho * &inv));
        let sigma_w = m.expectations(sigma);
        let m_max = m.max().max(0.0);
        let in_support = Reference::new(rho, sigma).mass_off_support() <= SUPPORT_MASS_TOL;
        TruncationPath {
            in_support,
            rho,
            m,
            sigma_w,
            sqrt_sigma,
            m_max,
        }
    }

    fn normalizer(&self, t: f64) -> f64 {
        let mut z = 0.0;
        for (b, w) in self.m.blocks().iter().zip(&self.sigma_w) {
            for (v, s) in b.values.iter().zip(w) {
                z += v.max(0.0).min(t) * s;
            }
        }
        z
    }

    fn state(&self, t: f64) -> Option<CMatrix> {
        let z = self.normalizer(t);
        if !(z > 0.0) {
            return None;
        }
        let mt = self.m.map(|v| v.max(0.0).min(t));
        Some(linalg::symmetrize(&(&self.sqrt_sigma * mt * &self.sqrt_sigma * linalg::re(1.0 / z))))
    }

    fn dmax(&self, t: f64) -> f64 {
        (t.min(self.m_max) / self.normalizer(t)).log2()
    }

    /// Smoothed state at level `t` and its purified distance to `ρ`.
    fn candidate(&self, t: f64) -> Option<(CMatrix, f64)> {
        if t >= self.m_max && self.in_support {
            return Some((self.rho.clone(), 0.0));
        }
        let st = self.state(t)?;
        let d = purified_distance_raw(&st, self.rho);
        Some((st, d))
    }

    fn feasible(&self, t: f64, eps: f64) -> bool {
        self.candidate(t).is_some_and(|(_, d)| d <= eps)
    }
}

pub(crate) fn smooth_max_relative_entropy_raw(rho: &CMatrix, sigma: &CMatrix, eps: f64) -> f64 {
    let path = TruncationPath::new(rho, sigma);
    if !(path.m_max > 0.0) || !path.feasible(path.m_max, eps) {
        return f64::INFINITY;
    }
    let (mut lo, mut hi) = (path.m_max.log2() - TRUNCATION_RANGE, path.m_max.log2());
    if path.feasible(lo.exp2(), eps) {
        return path.dmax(lo.exp2());
    }
    for _ in 0..TRUNCATION_STEPS {
        let mid = 0.5 * (lo + hi);
        if path.feasible(mid.exp2(), eps) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    path.dmax(hi.exp2())
}

/// `D_max^ε(ρ‖σ)` by truncation smoothing (an upper bound on the exact value).
pub fn smooth_max_relative_entropy(rho: &DensityOperator, sigma: &DensityOperator, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    check_same_dim(rho.matrix(), sigma.matrix())?;
    Ok(smooth_max_relative_entropy_raw(rho.matrix(), sigma.matrix(), eps))
}

/// `I_max^ε(A;B)`, clipped at zero.
pub fn smooth_max_mi(s: &MultipartiteState, a: &[&str], b: &[&str], eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let (joint, product) = joint_and_product(s, a, b)?;
    Ok(smooth_max_relative_entropy_raw(joint.matrix(), product.matrix(), eps).max(0.0))
}

/// `Ĩ_max^ε(B;A) = inf D_max(ρ′_AB‖ρ_A ⊗ ρ′_B)` over the `ε`-ball, with `A`
/// keeping its exact marginal. Clipped at zero.
///
/// Candidates are taken on a fixed grid along the truncation path towards
/// `ρ_A ⊗ ρ_B`, so the result is nonincreasing in `ε` and never above the
/// unsmoothed value.
pub fn alt_smooth_max_mi(s: &MultipartiteState, b: &[&str], a: &[&str], eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let (joint, product) = joint_and_product(s, a, b)?;
    let rho_a = joint.marginal(a)?;
    let rho = joint.matrix();
    let path = TruncationPath::new(rho, product.matrix());
    let mut best = f64::INFINITY;
    if !(path.m_max > 0.0) {
        return Ok(best);
    }
    for k in 0..=ALT_GRID {
        let t = path.m_max * ALT_GRID_FLOOR.powf(k as f64 / ALT_GRID as f64);
        let Some((st, d)) = path.candidate(t) else { continue };
        if d > eps {
            continue;
        }
        let smoothed = MultipartiteState::from_parts(joint.registers().to_vec(), DensityOperator::from_raw(st))?;
        let reference = rho_a.tensor(&smoothed.marginal(b)?)?;
        best = best.min(max_relative_entropy_raw(smoothed.matrix(), reference.matrix()));
    }
    Ok(best.max(0.0))
}

fn conditional<F>(s: &MultipartiteState, z: &[&str], eps: f64, f: F) -> Result<f64>
where
    F: Fn(&MultipartiteState) -> Result<f64>,
{
    check_eps(eps)?;
    let blocks = s.condition_on(z)?;
    let mut probs = Vec::with_capacity(blocks.len());
    let mut values = Vec::with_capacity(blocks.len());
    for blk in &blocks {
        probs.push(blk.prob);
        values.push(match &blk.state {
            Some(st) => f(st)?,
            None => f64::NAN,
        });
    }
    Ok(outer_max(&probs, &values, eps))
}

/// `I_max^ε(A;B|Z)` with the outer optimization over the law of classical `Z`.
pub fn conditional_smooth_max_mi(
    s: &MultipartiteState,
    a: &[&str],
    b: &[&str],
    z: &[&str],
    eps: f64,
) -> Result<f64> {
    if z.is_empty() {
        return smooth_max_mi(s, a, b, eps);
    }
    conditional(s, z, eps, |st| smooth_max_mi(st, a, b, eps))
}

/// `Ĩ_max^ε(B;A|Z)`, same outer optimization.
pub fn conditional_alt_smooth_max_mi(
    s: &MultipartiteState,
    b: &[&str],
    a: &[&str],
    z: &[&str],
    eps: f64,
) -> Result<f64> {
    if z.is_empty() {
        return alt_smooth_max_mi(s, b, a, eps);
    }
    conditional(s, z, eps, |st| alt_smooth_max_mi(st, b, a, eps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::state::{cq_state, purified_distance, Distribution, Register};
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn anchors() {
        let z = DensityOperator::basis(2, 0);
        let m = DensityOperator::maximally_mixed(2);
        assert!((max_relative_entropy(&z, &m).unwrap() - 1.0).abs() < 1e-12);
        assert!(max_relative_entropy(&m, &m).unwrap().abs() < 1e-12);
        assert_eq!(max_relative_entropy(&m, &z).unwrap(), f64::INFINITY);
    }

    #[test]
    fn bell_pair_max_mi() {
        let s = 0.5f64.sqrt();
        let o = Complex64::new(0.0, 0.0);
        let op = DensityOperator::pure(&[Complex64::new(s, 0.0), o, o, Complex64::new(s, 0.0)]).unwrap();
        let st = MultipartiteState::new(vec![Register::quantum("A", 2), Register::quantum("B", 2)], op).unwrap();
        assert!((max_mi(&st, &["A"], &["B"]).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn tiny_budget_is_unsmoothed() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = random::density(3, &mut rng);
        let s = random::density(3, &mut rng);
        let d = max_relative_entropy(&r, &s).unwrap();
        let ds = smooth_max_relative_entropy(&r, &s, 1e-9).unwrap();
        assert!(ds <= d + 1e-9 && ds > d - 1e-6, "{ds} vs {d}");
    }

    #[test]
    fn smoothing_is_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..5 {
            let r = random::density(3, &mut rng);
            let s = random::density(3, &mut rng);
            let mut prev = max_relative_entropy(&r, &s).unwrap() + 1e-9;
            for eps in [0.01, 0.05, 0.1, 0.2, 0.4] {
                let v = smooth_max_relative_entropy(&r, &s, eps).unwrap();
                assert!(v <= prev + 1e-9);
                prev = v;
            }
        }
    }

    /// Grid over diagonal states `diag(a, 1 − a)` within the ball.
    #[test]
    fn qubit_diagonal_grid_oracle() {
        let r = DensityOperator::diagonal(&[0.99, 0.01]).unwrap();
        let s = DensityOperator::maximally_mixed(2);
        let eps = 0.2;
        let mut best = f64::INFINITY;
        for i in 0..=100_000 {
            let a = i as f64 / 100_000.0;
            let cand = DensityOperator::diagonal(&[a, 1.0 - a]).unwrap();
            if purified_distance(&cand, &r).unwrap() <= eps {
                best = best.min(max_relative_entropy(&cand, &s).unwrap());
            }
        }
        let v = smooth_max_relative_entropy(&r, &s, eps).unwrap();
        assert!(v >= best - 1e-4 && v <= best + 0.1, "{v} vs oracle {best}");
    }

    #[test]
    fn product_state_has_no_information() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let conds = vec![random::density(2, &mut rng); 2];
        let st = cq_state(&Distribution::uniform(2), &conds, &[Register::classical("X", 2)], &[Register::quantum("Y", 2)]).unwrap();
        assert!(max_mi(&st, &["X"], &["Y"]).unwrap().abs() < 1e-9);
        assert_eq!(smooth_max_mi(&st, &["X"], &["Y"], 0.1).unwrap(), 0.0);
        assert_eq!(alt_smooth_max_mi(&st, &["Y"], &["X"], 0.1).unwrap(), 0.0);
    }

    #[test]
    fn alt_is_monotone_and_below_unsmoothed() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let conds = random::densities(2, 2, &mut rng);
        let st = cq_state(&random::distribution(2, &mut rng), &conds, &[Register::classical("X", 2)], &[Register::quantum("Y", 2)]).unwrap();
        let mut prev = max_mi(&st, &["X"], &["Y"]).unwrap() + 1e-9;
        for eps in [0.05, 0.1, 0.2, 0.4] {
            let v = alt_smooth_max_mi(&st, &["Y"], &["X"], eps).unwrap();
            assert!(v <= prev + 1e-12);
            prev = v;
        }
    }
}
