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

//! Commuting multiple-hypothesis testing, the convex-split construction and
//! Monte-Carlo leakage of random codebooks.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::DIM_CAP;
use crate::channel::CqMaWtc;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::par::{map_indexed, Exec};
use crate::quantities::hypothesis::neyman_pearson_raw;
use crate::quantities::{alt_smooth_max_mi, max_mi};
use crate::state::{purified_distance, DensityOperator, Distribution, MultipartiteState};

/// Largest commutator norm accepted as commuting.
pub const COMMUTE_TOL: f64 = 1e-9;
/// Largest null-hypothesis mass tolerated outside an alternative's support.
pub const SUPPORT_TOL: f64 = 1e-9;
/// Outputs closer than this (entrywise) count as the same state.
pub const SAME_OUTPUT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct MultiHypothesisReport {
    pub test: CMatrix,
    /// `Tr{(I−T)μ}`.
    pub type1: f64,
    /// `Tr{Tθᵢ}`.
    pub type2: Vec<f64>,
    /// `−log₂ Tr{Tθᵢ}`.
    pub exponents: Vec<f64>,
    /// `D_H^ε(μ‖θ̄)` for the equal-weight mixture.
    pub mixture_exponent: f64,
    /// `D_H^ε(μ‖θᵢ)`, each against its own optimal test.
    pub individual: Vec<f64>,
    /// `min D_H^ε(μ‖θᵢ) − min −log₂ Tr{Tθᵢ}`; nonnegative.
    pub shortfall: f64,
    /// `c = δ/ε`.
    pub c: f64,
    /// `−log₂(4ε/δ²)`.
    pub penalty: f64,
    /// `D_H^ε(μ‖θᵢ) − log₂(4ε/δ²)` for each alternative.
    pub rates: Vec<f64>,
    pub error_label: &'static str,
    /// `ε + 2δ`.
    pub error_budget: f64,
}

/// One test against a commuting family of alternatives, taken as the
/// Neyman–Pearson test against their equal-weight mixture.
pub fn multiple_hypothesis_commuting(
    mu: &DensityOperator,
    thetas: &[DensityOperator],
    eps: f64,
    delta: f64,
) -> Result<MultiHypothesisReport> {
    if thetas.is_empty() {
        return Err(Error::InvalidParameter("no alternative hypotheses".into()));
    }
    if !(delta > 0.0) {
        return Err(Error::predicate("delta > 0", format!("delta = {delta}")));
    }
    let n = mu.dim();
    if thetas.iter().any(|t| t.dim() != n) {
        return Err(Error::DimensionMismatch("hypotheses of different dimensions".into()));
    }
    for i in 0..thetas.len() {
        for j in i + 1..thetas.len() {
            let c = linalg::commutator_norm(thetas[i].matrix(), thetas[j].matrix());
            if c > COMMUTE_TOL {
                return Err(Error::NonCommuting(c));
            }
        }
        let off = 1.0 - linalg::trace_product_re(&linalg::support_projector(thetas[i].matrix()), mu.matrix());
        if off > SUPPORT_TOL {
            return Err(Error::InvalidOperator(format!(
                "null hypothesis has mass {off:e} outside the support of alternative {i}"
            )));
        }
    }
    let r = thetas.len() as f64;
    let mut mix = linalg::zeros(n);
    for t in thetas {
        mix += t.matrix() / linalg::re(r);
    }
    let (mixture_exponent, cert) = neyman_pearson_raw(mu.matrix(), &mix, eps)?;
    let type2: Vec<f64> = thetas
        .iter()
        .map(|t| linalg::trace_product_re(&cert.test, t.matrix()))
        .collect();
    let exponents: Vec<f64> = type2.iter().map(|p| -p.log2()).collect();
    let individual = thetas
        .iter()
        .map(|t| neyman_pearson_raw(mu.matrix(), t.matrix(), eps).map(|(v, _)| v))
        .collect::<Result<Vec<_>>>()?;
    let best = individual.iter().copied().fold(f64::INFINITY, f64::min);
    let achieved = exponents.iter().copied().fold(f64::INFINITY, f64::min);
    let penalty = -(4.0 * eps / (delta * delta)).log2();
    Ok(MultiHypothesisReport {
        type1: 1.0 - cert.acceptance,
        test: cert.test,
        type2,
        exponents,
        mixture_exponent,
        rates: individual.iter().map(|d| d + penalty).collect(),
        individual,
        shortfall: (best - achieved).max(0.0),
        c: delta / eps,
        penalty,
        error_label: "ε + 2δ",
        error_budget: eps + 2.0 * delta,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvexSplitReport {
    pub copies: usize,
    /// `P(τ, ρ_X^{⊗K} ⊗ ρ_B)`.
    pub distance: f64,
    /// `Ĩ_max^{√ε−δ}(B;X) + 2 log₂(1/δ)`.
    pub threshold: f64,
    pub log2_copies: f64,
    /// `log₂ K ≥ threshold`.
    pub size_condition: bool,
    /// `√ε`.
    pub target: f64,
}

impl ConvexSplitReport {
    /// The lemma's conclusion whenever its size condition holds.
    pub fn bound_ok(&self) -> bool {
        !self.size_condition || self.distance <= self.target + 1e-9
    }
}

fn slot(i: usize) -> String {
    format!("X#{i}")
}

/// Uniform mixture over `j` of `ρ_{X_j B} ⊗ ⨂_{i≠j} ρ_{X_i}`, registers
/// `X#0 … X#{K−1} B`.
pub fn convex_split_state(s: &MultipartiteState, x: &str, b: &str, copies: usize) -> Result<MultipartiteState> {
    let xb = s.marginal(&[x, b])?.relabel(&[(x, "X"), (b, "B")])?;
    let rx = xb.marginal(&["X"])?;
    let labels: Vec<String> = (0..copies).map(slot).chain(["B".to_string()]).collect();
    let order: Vec<&str> = labels.iter().map(String::as_str).collect();
    let mut acc: Option<CMatrix> = None;
    let mut regs = Vec::new();
    for j in 0..copies {
        let mut parts: Option<MultipartiteState> = None;
        for i in 0..copies {
            let piece = if i == j {
                xb.relabel(&[("X", &slot(i))])?
            } else {
                rx.relabel(&[("X", &slot(i))])?
            };
            parts = Some(match parts {
                None => piece,
                Some(p) => p.tensor(&piece)?,
            });
        }
        let term = parts.expect("at least one copy").reorder(&order)?;
        regs = term.registers().to_vec();
        acc = Some(match acc {
            None => term.matrix().clone(),
            Some(m) => m + term.matrix(),
        });
    }
    let m = acc.expect("at least one copy") / linalg::re(copies as f64);
    MultipartiteState::from_parts(regs, DensityOperator::from_raw(m))
}

/// Builds the convex-split mixture and tests the lemma's conclusion.
pub fn convex_split_verify(
    s: &MultipartiteState,
    x: &str,
    b: &str,
    copies: usize,
    eps: f64,
    delta: f64,
) -> Result<ConvexSplitReport> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::predicate("eps in (0, 1)", format!("eps = {eps}")));
    }
    if !(delta > 0.0 && delta <= eps.sqrt()) {
        return Err(Error::predicate("delta in (0, sqrt(eps)]", format!("delta = {delta}, eps = {eps}")));
    }
    if copies == 0 {
        return Err(Error::InvalidParameter("at least one copy is needed".into()));
    }
    let dx = s.register(x)?.dim;
    let db = s.register(b)?.dim;
    let dim = dx.checked_pow(copies as u32).and_then(|d| d.checked_mul(db)).unwrap_or(usize::MAX);
    if dim > DIM_CAP {
        return Err(Error::DimensionCap { dim, cap: DIM_CAP });
    }
    let tau = convex_split_state(s, x, b, copies)?;
    let xb = s.marginal(&[x, b])?;
    let rx = xb.marginal(&[x])?.op().clone();
    let mut product = rx.clone();
    for _ in 1..copies {
        product = product.tensor(&rx);
    }
    let product = product.tensor(xb.marginal(&[b])?.op());
    let distance = purified_distance(tau.op(), &product)?;
    let smoothing = eps.sqrt() - delta;
    let info = if smoothing > 0.0 {
        alt_smooth_max_mi(s, &[b], &[x], smoothing)?
    } else {
        max_mi(s, &[x], &[b])?
    };
    let threshold = info + 2.0 * (1.0 / delta).log2();
    let log2_copies = (copies as f64).log2();
    Ok(ConvexSplitReport {
        copies,
        distance,
        threshold,
        log2_copies,
        size_condition: log2_copies >= threshold,
        target: eps.sqrt(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LeakageReport {
    pub trials: usize,
    /// Mean over trials of `‖(1/K₁K₂) Σ ρ^Z_{x₁ᵢ x₂ⱼ} − ρ^Z‖₁`.
    pub mean: f64,
    pub std_error: f64,
    /// `20 δ′^{1/8}`.
    pub bound: f64,
    /// The bound is at least the largest possible trace distance.
    pub vacuous: bool,
}

/// Monte-Carlo estimate of the eavesdropper's deviation from the average
/// output under random keys. Trial `t` uses stream `t` of the seeded
/// generator.
#[allow(clippy::too_many_arguments)]
pub fn leakage_estimate(
    ch: &CqMaWtc,
    p1: &Distribution,
    p2: &Distribution,
    k1: usize,
    k2: usize,
    trials: usize,
    seed: u64,
    delta_prime: f64,
    exec: Exec,
) -> Result<LeakageReport> {
    if k1 == 0 || k2 == 0 || trials == 0 {
        return Err(Error::InvalidParameter(format!("k1 = {k1}, k2 = {k2}, trials = {trials}")));
    }
    if p1.len() != ch.x1_size() || p2.len() != ch.x2_size() {
        return Err(Error::DimensionMismatch("law does not match channel inputs".into()));
    }
    if !(delta_prime > 0.0) {
        return Err(Error::predicate("delta' > 0", format!("delta' = {delta_prime}")));
    }
    let n2 = ch.x2_size();
    let mut classes: Vec<CMatrix> = Vec::new();
    let mut class_of = Vec::with_capacity(ch.x1_size() * n2);
    let mut law_w: Vec<f64> = Vec::new();
    for a in 0..ch.x1_size() {
        for b in 0..n2 {
            let z = ch.z_output(a, b).into_matrix();
            let idx = match classes.iter().position(|c| linalg::max_abs(&(c - &z)) <= SAME_OUTPUT_TOL) {
                Some(i) => i,
                None => {
                    classes.push(z);
                    law_w.push(0.0);
                    classes.len() - 1
                }
            };
            class_of.push(idx);
            law_w[idx] += p1.get(a) * p2.get(b);
        }
    }
    let total: f64 = law_w.iter().sum();
    let law_w: Vec<f64> = law_w.iter().map(|w| w / total).collect();
    let s1 = WeightedIndex::new(p1.probs()).expect("valid distribution");
    let s2 = WeightedIndex::new(p2.probs()).expect("valid distribution");
    let values = map_indexed(exec, trials, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64);
        let xs: Vec<usize> = (0..k1).map(|_| s1.sample(&mut rng)).collect();
        let ys: Vec<usize> = (0..k2).map(|_| s2.sample(&mut rng)).collect();
        let mut counts = vec![0usize; classes.len()];
        for a in &xs {
            for b in &ys {
                counts[class_of[a * n2 + b]] += 1;
            }
        }
        let pairs = (k1 * k2) as f64;
        let coeffs: Vec<f64> = counts
            .iter()
            .zip(&law_w)
            .map(|(c, w)| *c as f64 / pairs - w)
            .collect();
        if coeffs.iter().all(|c| *c == 0.0) {
            return 0.0;
        }
        let mut diff = linalg::zeros(classes[0].nrows());
        for (c, m) in coeffs.iter().zip(&classes) {
            diff += m * linalg::re(*c);
        }
        linalg::trace_norm(&linalg::symmetrize(&diff))
    });
    let n = trials as f64;
    let mean = values.iter().sum::<f64>() / n;
    let std_error = if trials > 1 {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    } else {
        0.0
    };
    let bound = 20.0 * delta_prime.powf(0.125);
    Ok(LeakageReport { trials, mean, std_error, bound, vacuous: bound >= 2.0 })
}
