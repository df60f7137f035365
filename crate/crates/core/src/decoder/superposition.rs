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

//! Superposition coding over the broadcast channel: a cloud codebook for
//! the common message and a satellite codebook under each cloud position.

use super::codebook::Codebook;
use super::povm::pgm;
use super::{pinched_test, TestChoice};
use crate::channel::{control_state_qbc, Qbc, QbcLaw, U, X, Y1, Y2};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::quantities::{conditional_hypothesis_testing_mi, hypothesis_testing_mi};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionReport {
    /// `Pr{M̂₁ ≠ M₁}` at the first receiver.
    pub p_e1: f64,
    /// `Pr{M̂_c ≠ M_c}` at the second receiver.
    pub p_e2: f64,
    /// `Σ 2^{−I + (log₂ ε − 2)}` over the three testing informations.
    pub bound: f64,
    /// `I_H^ε(X;Y₁|U)`, `I_H^ε(U;Y₂)`, `I_H^ε(X;Y₁)`.
    pub informations: [f64; 3],
}

fn satellite(cb: &Codebook, parent: usize, pos: usize) -> usize {
    if cb.parents() == 1 {
        cb.symbol(pos)
    } else {
        cb.conditional_symbol(parent, pos)
    }
}

/// Exact errors of both receivers' square-root measurements. The first
/// receiver decodes the pair `(m_c, m₁)` over positions `j_c · N₁ + j₁` and
/// declares `m₁`; a completion outcome is read as position 0 at either
/// receiver. `eps` sets the reported bound.
pub fn superposition_decoder_sim(
    ch: &Qbc,
    law: &QbcLaw,
    cloud: &Codebook,
    sat: &Codebook,
    tests: TestChoice,
    eps: f64,
    cap: usize,
) -> Result<SuperpositionReport> {
    let s = control_state_qbc(ch, law)?;
    let nx = ch.x_size();
    if cloud.parents() != 1
        || cloud.alphabet() != law.u.len()
        || sat.alphabet() != nx
        || (sat.parents() != 1 && sat.parents() != cloud.positions())
    {
        return Err(Error::DimensionMismatch("codebooks do not match the channel and law".into()));
    }
    let (nc, n1) = (cloud.positions(), sat.positions());
    let dim = nc.saturating_mul(n1).saturating_mul(ch.y1_dim().max(ch.y2_dim()));
    if dim > cap {
        return Err(Error::DimensionCap { dim, cap });
    }
    let (d1, d2) = (ch.y1_dim(), ch.y2_dim());
    let (first, second): (Vec<CMatrix>, Vec<CMatrix>) = match tests {
        TestChoice::NeymanPearson(e) => (
            pinched_test(&s, &[U, X], &[Y1], e, d1)?,
            pinched_test(&s, &[U], &[Y2], e, d2)?,
        ),
        TestChoice::Support => {
            let per_x: Vec<CMatrix> = (0..nx).map(|x| linalg::support_projector(ch.y1_output(x).matrix())).collect();
            let first = (0..law.u.len()).flat_map(|_| per_x.iter().cloned()).collect();
            let second = law
                .x_given_u
                .iter()
                .map(|row| {
                    let mut m = linalg::zeros(d2);
                    for x in 0..nx {
                        m += ch.y2_output(x).matrix() * linalg::re(row.get(x));
                    }
                    linalg::support_projector(&m)
                })
                .collect();
            (first, second)
        }
    };
    let symbols: Vec<(usize, usize)> = (0..nc)
        .flat_map(|jc| (0..n1).map(move |j1| (jc, j1)))
        .map(|(jc, j1)| (cloud.symbol(jc), satellite(sat, jc, j1)))
        .collect();
    let pgm1 = pgm(&symbols.iter().map(|(u, x)| first[u * nx + x].clone()).collect::<Vec<_>>())?;
    let pgm2 = pgm(&(0..nc).map(|jc| second[cloud.symbol(jc)].clone()).collect::<Vec<_>>())?;

    let (mut e1, mut e2) = (0.0, 0.0);
    for jc in 0..nc {
        let mc = cloud.message_of(jc);
        for j1 in 0..n1 {
            let m1 = sat.message_of(j1);
            let x = symbols[jc * n1 + j1].1;
            let (p1, rest1) = pgm1.probabilities(ch.y1_output(x).matrix());
            let mut w1 = if m1 != 0 { rest1 } else { 0.0 };
            w1 += (0..nc * n1).filter(|k| sat.message_of(k % n1) != m1).map(|k| p1[k]).sum::<f64>();
            let (p2, rest2) = pgm2.probabilities(ch.y2_output(x).matrix());
            let mut w2 = if mc != 0 { rest2 } else { 0.0 };
            w2 += (0..nc).filter(|k| cloud.message_of(*k) != mc).map(|k| p2[k]).sum::<f64>();
            e1 += w1;
            e2 += w2;
        }
    }
    let n = (nc * n1) as f64;
    let informations = [
        conditional_hypothesis_testing_mi(&s, &[X], &[Y1], &[U], eps)?,
        hypothesis_testing_mi(&s, &[U], &[Y2], eps)?,
        hypothesis_testing_mi(&s, &[X], &[Y1], eps)?,
    ];
    let shift = eps.log2() - 2.0;
    Ok(SuperpositionReport {
        p_e1: (e1 / n).clamp(0.0, 1.0),
        p_e2: (e2 / n).clamp(0.0, 1.0),
        bound: informations.iter().map(|i| (shift - i).exp2()).sum(),
        informations,
    })
}
