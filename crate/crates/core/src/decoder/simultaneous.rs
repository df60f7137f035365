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

//! Simultaneous position-based decoding over the multiple-access channel.
//!
//! Codebook registers are classical, so the position-based measurement is
//! block diagonal over codebook realizations. Every realization is decoded
//! with a square-root measurement on the receiver output alone, using the
//! `(x₁, x₂)` blocks of the four-hypothesis test.

use super::codebook::Codebook;
use super::povm::{pgm, PovmSet};
use super::DecoderParams;
use crate::channel::{control_state_sen, CqMaWtc, InputLaw, Q, X1, X2, Y};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::par::{try_map_indexed, Exec};
use crate::quantities::hypothesis::neyman_pearson_raw;
use crate::state::{Distribution, MultipartiteState};

/// `Tr{(I−T)μ}` and `Tr{Tθᵢ}` for the three product alternatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypothesisTraces {
    pub miss: f64,
    /// `θ₁ = ρ_{X₁} ⊗ ρ_{X₂Y}`, `θ₂ = ρ_{X₁Y} ⊗ ρ_{X₂}`, `θ₃ = ρ_{X₁} ⊗ ρ_{X₂} ⊗ ρ_Y`.
    pub false_alarm: [f64; 3],
}

/// The hypotheses on `X₁ X₂ Y`: the joint state then the three alternatives.
pub fn simultaneous_hypotheses(
    ch: &CqMaWtc,
    p1: &Distribution,
    p2: &Distribution,
) -> Result<(MultipartiteState, [MultipartiteState; 3])> {
    let s = control_state_sen(ch, &InputLaw::independent(p1.clone(), p2.clone()))?.partial_trace(&[Q])?;
    let r1 = s.marginal(&[X1])?;
    let r2 = s.marginal(&[X2])?;
    let order = [X1, X2, Y];
    let t1 = r1.tensor(&s.marginal(&[X2, Y])?)?;
    let t2 = s.marginal(&[X1, Y])?.tensor(&r2)?.reorder(&order)?;
    let t3 = r1.tensor(&r2)?.tensor(&s.marginal(&[Y])?)?;
    Ok((s, [t1, t2, t3]))
}

/// Per-`(x₁, x₂)` blocks of a test operator on `X₁ X₂ Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct SimultaneousTest {
    x2: usize,
    dy: usize,
    blocks: Vec<CMatrix>,
    /// Mixture weights of the composite alternative.
    pub weights: [f64; 3],
    pub traces: HypothesisTraces,
}

fn pinch(t: &CMatrix, count: usize, dy: usize) -> Vec<CMatrix> {
    (0..count)
        .map(|b| t.view((b * dy, b * dy), (dy, dy)).into_owned())
        .collect()
}

fn block_diag(blocks: &[CMatrix]) -> CMatrix {
    let dy = blocks[0].nrows();
    let mut m = linalg::zeros(blocks.len() * dy);
    for (b, blk) in blocks.iter().enumerate() {
        m.view_mut((b * dy, b * dy), (dy, dy)).copy_from(blk);
    }
    m
}

impl SimultaneousTest {
    /// Neyman–Pearson test of the joint state against the equal-weight
    /// mixture of the alternatives, pinched to the classical blocks.
    pub fn neyman_pearson(ch: &CqMaWtc, p1: &Distribution, p2: &Distribution, eps: f64) -> Result<Self> {
        let (mu, thetas) = simultaneous_hypotheses(ch, p1, p2)?;
        let mut mix = linalg::zeros(mu.dim());
        for t in &thetas {
            mix += t.matrix() / linalg::re(3.0);
        }
        let (_, cert) = neyman_pearson_raw(mu.matrix(), &mix, eps)?;
        let blocks = pinch(&cert.test, ch.x1_size() * ch.x2_size(), ch.y_dim());
        Ok(Self::assemble(ch, blocks, &mu, &thetas))
    }

    /// Projector onto the support of each output: the test with no miss.
    pub fn support(ch: &CqMaWtc, p1: &Distribution, p2: &Distribution) -> Result<Self> {
        let (mu, thetas) = simultaneous_hypotheses(ch, p1, p2)?;
        let blocks = (0..ch.x1_size())
            .flat_map(|a| (0..ch.x2_size()).map(move |b| (a, b)))
            .map(|(a, b)| linalg::support_projector(ch.y_output(a, b).matrix()))
            .collect();
        Ok(Self::assemble(ch, blocks, &mu, &thetas))
    }

    fn assemble(ch: &CqMaWtc, blocks: Vec<CMatrix>, mu: &MultipartiteState, thetas: &[MultipartiteState; 3]) -> Self {
        let full = block_diag(&blocks);
        let traces = HypothesisTraces {
            miss: 1.0 - linalg::trace_product_re(&full, mu.matrix()),
            false_alarm: [0, 1, 2].map(|i| linalg::trace_product_re(&full, thetas[i].matrix())),
        };
        SimultaneousTest {
            x2: ch.x2_size(),
            dy: ch.y_dim(),
            blocks,
            weights: [1.0 / 3.0; 3],
            traces,
        }
    }

    /// Test block on the output for inputs `(x₁, x₂)`.
    pub fn block(&self, x1: usize, x2: usize) -> &CMatrix {
        &self.blocks[x1 * self.x2 + x2]
    }

    /// Final line of the error chain: hypothesis traces weighted by the
    /// position counts `N₁ = |M₁||K₁|`, `N₂ = |M₂||K₂|`.
    pub fn hypothesis_bound(&self, n1: usize, n2: usize, c: f64) -> f64 {
        let (a, b) = ((n1 - 1) as f64, (n2 - 1) as f64);
        let [t1, t2, t3] = self.traces.false_alarm;
        (1.0 + c) * self.traces.miss + (2.0 + c + 1.0 / c) * (a * t1 + b * t2 + a * b * t3)
    }
}

fn check_codebooks(ch: &CqMaWtc, cb1: &Codebook, cb2: &Codebook, cap: usize) -> Result<()> {
    if cb1.alphabet() != ch.x1_size() || cb2.alphabet() != ch.x2_size() || cb1.parents() != 1 || cb2.parents() != 1 {
        return Err(Error::DimensionMismatch("codebooks do not match the channel inputs".into()));
    }
    let dim = cb1.positions() * cb2.positions() * ch.y_dim();
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    Ok(())
}

/// Square-root measurement over all position pairs `(j₁, j₂)`, flattened
/// `j₁ · N₂ + j₂`.
pub fn build_pgm_simultaneous(test: &SimultaneousTest, cb1: &Codebook, cb2: &Codebook) -> Result<PovmSet> {
    if test.blocks.len() != cb1.alphabet() * cb2.alphabet() {
        return Err(Error::DimensionMismatch("test blocks do not match codebook alphabets".into()));
    }
    let gammas: Vec<CMatrix> = (0..cb1.positions())
        .flat_map(|j1| (0..cb2.positions()).map(move |j2| (j1, j2)))
        .map(|(j1, j2)| test.block(cb1.symbol(j1), cb2.symbol(j2)).clone())
        .collect();
    pgm(&gammas)
}

/// Exact error of one codebook pair and its Hayashi–Nagaoka bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimultaneousReport {
    /// `Pr{(M̂₁, M̂₂) ≠ (M₁, M₂)}` for uniform messages and keys.
    pub error: f64,
    /// `(1+c) Tr{(I−Γ)ρ} + (2+c+1/c) Σ Tr{Γ′ρ}`, averaged over positions.
    pub hn_bound: f64,
}

/// Error of the square-root measurement for these codebooks. The
/// completion outcome is read as the message pair `(0, 0)`.
pub fn exact_error_simultaneous(
    ch: &CqMaWtc,
    test: &SimultaneousTest,
    cb1: &Codebook,
    cb2: &Codebook,
    pgm: &PovmSet,
    c: f64,
) -> Result<SimultaneousReport> {
    check_codebooks(ch, cb1, cb2, usize::MAX)?;
    let (n1, n2) = (cb1.positions(), cb2.positions());
    if pgm.len() != n1 * n2 || pgm.dim() != ch.y_dim() {
        return Err(Error::DimensionMismatch("measurement was built for other codebooks".into()));
    }
    if !(c > 0.0) {
        return Err(Error::predicate("c > 0", format!("c = {c}")));
    }
    let outputs: Vec<CMatrix> = (0..ch.x1_size())
        .flat_map(|a| (0..ch.x2_size()).map(move |b| (a, b)))
        .map(|(a, b)| ch.y_output(a, b).into_matrix())
        .collect();
    let mut error = 0.0;
    let mut hn = 0.0;
    for j1 in 0..n1 {
        for j2 in 0..n2 {
            let (x1, x2) = (cb1.symbol(j1), cb2.symbol(j2));
            let rho = &outputs[x1 * ch.x2_size() + x2];
            let (probs, rest) = pgm.probabilities(rho);
            let (m1, m2) = (cb1.message_of(j1), cb2.message_of(j2));
            let mut correct = if m1 == 0 && m2 == 0 { rest } else { 0.0 };
            let mut hit = 0.0;
            let mut others = 0.0;
            for a in 0..n1 {
                for b in 0..n2 {
                    let k = a * n2 + b;
                    if cb1.message_of(a) == m1 && cb2.message_of(b) == m2 {
                        correct += probs[k];
                    }
                    let g = linalg::trace_product_re(test.block(cb1.symbol(a), cb2.symbol(b)), rho);
                    if a == j1 && b == j2 {
                        hit = g;
                    } else {
                        others += g;
                    }
                }
            }
            error += 1.0 - correct;
            hn += (1.0 + c) * (1.0 - hit) + (2.0 + c + 1.0 / c) * others;
        }
    }
    let n = (n1 * n2) as f64;
    Ok(SimultaneousReport {
        error: (error / n).clamp(0.0, 1.0),
        hn_bound: hn / n,
    })
}

/// Errors averaged over every codebook realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AverageReport {
    pub error: f64,
    /// Average of the per-codebook bounds.
    pub hn_bound: f64,
    /// Same bound from the hypothesis traces; equals `hn_bound` up to
    /// round-off.
    pub hypothesis_bound: f64,
    pub realizations: usize,
}

/// Exact codebook-averaged error of the simultaneous decoder.
pub fn average_error_simultaneous(
    ch: &CqMaWtc,
    test: &SimultaneousTest,
    p1: &Distribution,
    p2: &Distribution,
    params: &DecoderParams,
    exec: Exec,
) -> Result<AverageReport> {
    params.check()?;
    let all1 = Codebook::realizations(p1, params.m1, params.k1)?;
    let all2 = Codebook::realizations(p2, params.m2, params.k2)?;
    let dim = all1.len().saturating_mul(all2.len()).saturating_mul(ch.y_dim());
    if dim > params.cap {
        return Err(Error::DimensionCap { dim, cap: params.cap });
    }
    let rows = try_map_indexed(exec, all1.len(), |i| {
        let (cb1, w1) = &all1[i];
        let mut acc = (0.0, 0.0);
        for (cb2, w2) in &all2 {
            let w = w1 * w2;
            if w == 0.0 {
                continue;
            }
            let pgm = build_pgm_simultaneous(test, cb1, cb2)?;
            let r = exact_error_simultaneous(ch, test, cb1, cb2, &pgm, params.c)?;
            acc.0 += w * r.error;
            acc.1 += w * r.hn_bound;
        }
        Ok::<_, Error>(acc)
    })?;
    let (error, hn_bound) = rows.iter().fold((0.0, 0.0), |a, r| (a.0 + r.0, a.1 + r.1));
    Ok(AverageReport {
        error,
        hn_bound,
        hypothesis_bound: test.hypothesis_bound(params.m1 * params.k1, params.m2 * params.k2, params.c),
        realizations: all1.len() * all2.len(),
    })
}
