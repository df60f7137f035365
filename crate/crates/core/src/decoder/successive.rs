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

//! Two successive position-based decoders for the point-to-point channel
//! with two independent senders.
//!
//! The first stage decodes the outer codebook with a square-root
//! measurement and leaves the output in the post-measurement state of the
//! observed outcome. The second stage decodes the inner codebook with tests
//! conditioned on the symbol the first stage declared.

use super::codebook::Codebook;
use super::povm::{instrument, pgm, PovmSet};
use super::{pinched_test, TestChoice, DIM_CAP};
use crate::channel::{control_state_ppqwtc, PpLaw, PpQwtc, U1, U2, Y, Z};
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::quantities::SmoothingParams;
use crate::region::Budget;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DecodingOrder {
    /// Decode the first sender's message, then the second's.
    #[default]
    FirstThenSecond,
    SecondThenFirst,
}

impl DecodingOrder {
    pub fn label(self) -> &'static str {
        match self {
            DecodingOrder::FirstThenSecond => "m1->m2",
            DecodingOrder::SecondThenFirst => "m2->m1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuccessiveOptions {
    pub order: DecodingOrder,
    pub tests: TestChoice,
    pub cap: usize,
}

impl SuccessiveOptions {
    /// Neyman–Pearson tests at `ε₁ − δ₁`, first sender decoded first.
    pub fn from_params(p: &SmoothingParams) -> Self {
        SuccessiveOptions {
            order: DecodingOrder::FirstThenSecond,
            tests: TestChoice::NeymanPearson(p.theorem2_testing_eps()),
            cap: DIM_CAP,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuccessiveReport {
    pub order: DecodingOrder,
    /// `Pr{M̂₁ ≠ M₁}`.
    pub p_e1: f64,
    /// `Pr{M̂₂ ≠ M₂}`.
    pub p_e2: f64,
    /// Error of whichever message is decoded first.
    pub first_stage_error: f64,
    /// Error of the message decoded second, given the first was right.
    pub second_stage_error_given_first: f64,
    pub budgets: Vec<Budget>,
}

struct Stage {
    outer_blocks: Vec<CMatrix>,
    /// `inner_blocks[a][b]`: test for inner symbol `b` when `a` was declared.
    inner_blocks: Vec<Vec<CMatrix>>,
}

fn stage_tests(ch: &PpQwtc, law: &PpLaw, outer: &str, inner: &str, tests: TestChoice) -> Result<Stage> {
    let s = control_state_ppqwtc(ch, law)?.partial_trace(&[Z])?;
    let dy = ch.y_dim();
    let n_inner = s.register(inner)?.dim;
    let outer_blocks = match tests {
        TestChoice::NeymanPearson(eps) => pinched_test(&s, &[outer], &[Y], eps, dy)?,
        TestChoice::Support => s
            .marginal(&[outer, Y])?
            .condition_on(&[outer])?
            .into_iter()
            .map(|b| match b.state {
                Some(st) => linalg::support_projector(st.matrix()),
                None => linalg::identity(dy),
            })
            .collect(),
    };
    let inner_blocks = s
        .condition_on(&[outer])?
        .into_iter()
        .map(|b| match (b.state, tests) {
            (None, _) => Ok(vec![linalg::identity(dy); n_inner]),
            (Some(st), TestChoice::NeymanPearson(eps)) => pinched_test(&st, &[inner], &[Y], eps, dy),
            (Some(st), TestChoice::Support) => Ok(st
                .condition_on(&[inner])?
                .into_iter()
                .map(|c| match c.state {
                    Some(y) => linalg::support_projector(y.matrix()),
                    None => linalg::identity(dy),
                })
                .collect()),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Stage { outer_blocks, inner_blocks })
}

/// Exact error probabilities of successive position-based decoding for
/// fixed unconditional codebooks. A completion outcome of either
/// measurement is read as position 0.
pub fn successive_decoder_sim(
    ch: &PpQwtc,
    law: &PpLaw,
    cb1: &Codebook,
    cb2: &Codebook,
    params: &SmoothingParams,
    opts: &SuccessiveOptions,
) -> Result<SuccessiveReport> {
    if cb1.alphabet() != ch.u1_size() || cb2.alphabet() != ch.u2_size() || cb1.parents() != 1 || cb2.parents() != 1 {
        return Err(Error::DimensionMismatch("codebooks do not match the channel inputs".into()));
    }
    let dim = cb1.positions().saturating_mul(cb2.positions()).saturating_mul(ch.y_dim());
    if dim > opts.cap {
        return Err(Error::DimensionCap { dim, cap: opts.cap });
    }
    let first = opts.order == DecodingOrder::FirstThenSecond;
    let (outer_cb, inner_cb, outer_label, inner_label) = if first {
        (cb1, cb2, U1, U2)
    } else {
        (cb2, cb1, U2, U1)
    };
    let stage = stage_tests(ch, law, outer_label, inner_label, opts.tests)?;
    let output = |a: usize, b: usize| {
        if first {
            ch.y_output(a, b).into_matrix()
        } else {
            ch.y_output(b, a).into_matrix()
        }
    };
    let (no, ni) = (outer_cb.positions(), inner_cb.positions());
    let outer_pgm = pgm(&(0..no).map(|j| stage.outer_blocks[outer_cb.symbol(j)].clone()).collect::<Vec<_>>())?;
    let inner_pgms: Vec<PovmSet> = stage
        .inner_blocks
        .iter()
        .map(|row| pgm(&(0..ni).map(|j| row[inner_cb.symbol(j)].clone()).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let mut outcomes: Vec<&CMatrix> = outer_pgm.elements().iter().map(|e| e.matrix()).collect();
    outcomes.push(outer_pgm.completion());

    let (mut err_outer, mut err_inner, mut err_inner_given_ok) = (0.0, 0.0, 0.0);
    for jo in 0..no {
        for ji in 0..ni {
            let rho = output(outer_cb.symbol(jo), inner_cb.symbol(ji));
            let (mo, mi) = (outer_cb.message_of(jo), inner_cb.message_of(ji));
            let (mut outer_wrong, mut inner_wrong, mut outer_ok, mut inner_wrong_ok) = (0.0, 0.0, 0.0, 0.0);
            for (k, lambda) in outcomes.iter().enumerate() {
                let pos = if k == no { 0 } else { k };
                let Some((post, p)) = instrument(lambda, &rho) else { continue };
                let second = &inner_pgms[outer_cb.symbol(pos)];
                let (probs, rest) = second.probabilities(&post);
                let mut w = if mi != 0 { rest } else { 0.0 };
                w += (0..ni).filter(|j| inner_cb.message_of(*j) != mi).map(|j| probs[j]).sum::<f64>();
                inner_wrong += p * w;
                if outer_cb.message_of(pos) == mo {
                    outer_ok += p;
                    inner_wrong_ok += p * w;
                } else {
                    outer_wrong += p;
                }
            }
            err_outer += outer_wrong;
            err_inner += inner_wrong;
            err_inner_given_ok += if outer_ok > 0.0 { inner_wrong_ok / outer_ok } else { 1.0 };
        }
    }
    let n = (no * ni) as f64;
    let (err_outer, err_inner) = ((err_outer / n).clamp(0.0, 1.0), (err_inner / n).clamp(0.0, 1.0));
    let (p_e1, p_e2) = if first { (err_outer, err_inner) } else { (err_inner, err_outer) };
    Ok(SuccessiveReport {
        order: opts.order,
        p_e1,
        p_e2,
        first_stage_error: err_outer,
        second_stage_error_given_first: (err_inner_given_ok / n).clamp(0.0, 1.0),
        budgets: vec![
            Budget::new("first-stage", "ε₁ + √ε₂", params.eps1 + params.eps2.sqrt()),
            Budget::new("second-stage", "2(ε₁ + √ε₂) + √ε₁′", f64::NAN),
        ],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::state::{DensityOperator, Distribution};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn orthogonal() -> PpQwtc {
        let z = DensityOperator::maximally_mixed(2);
        let outs = (0..4).map(|i| DensityOperator::basis(4, i).tensor(&z)).collect();
        PpQwtc::direct(2, 2, 4, 2, outs).unwrap()
    }

    fn opts(order: DecodingOrder, tests: TestChoice) -> SuccessiveOptions {
        SuccessiveOptions { order, tests, cap: DIM_CAP }
    }

    #[test]
    fn orthogonal_both_stages_exact() {
        let ch = orthogonal();
        let law = PpLaw::uniform(2, 2);
        let cb1 = Codebook::from_entries(2, 2, 1, vec![0, 1]).unwrap();
        let cb2 = Codebook::from_entries(2, 2, 1, vec![1, 0]).unwrap();
        for order in [DecodingOrder::FirstThenSecond, DecodingOrder::SecondThenFirst] {
            let r = successive_decoder_sim(&ch, &law, &cb1, &cb2, &SmoothingParams::default(), &opts(order, TestChoice::Support))
                .unwrap();
            assert!(r.p_e1 < 1e-9 && r.p_e2 < 1e-9, "{r:?}");
        }
    }

    #[test]
    fn single_inner_message_never_errs() {
        let mut rng = ChaCha8Rng::seed_from_u64(90);
        let ch = random::ppqwtc(2, 2, 2, 2, &mut rng);
        let law = PpLaw::independent(&Distribution::uniform(2), &Distribution::point(2, 1));
        let cb1 = Codebook::sample(&Distribution::uniform(2), 2, 2, 3).unwrap();
        let cb2 = Codebook::from_entries(2, 1, 1, vec![1]).unwrap();
        let r = successive_decoder_sim(
            &ch,
            &law,
            &cb1,
            &cb2,
            &SmoothingParams::default(),
            &opts(DecodingOrder::FirstThenSecond, TestChoice::NeymanPearson(0.1)),
        )
        .unwrap();
        assert_eq!(r.p_e2, 0.0);
        assert!((0.0..=1.0).contains(&r.p_e1));
    }

    #[test]
    fn orders_differ_on_asymmetric_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        let ch = random::ppqwtc(2, 2, 2, 1, &mut rng);
        let law = PpLaw::uniform(2, 2);
        let cb1 = Codebook::from_entries(2, 2, 1, vec![0, 1]).unwrap();
        let cb2 = Codebook::from_entries(2, 2, 1, vec![0, 1]).unwrap();
        let p = SmoothingParams::default();
        let a = successive_decoder_sim(&ch, &law, &cb1, &cb2, &p, &opts(DecodingOrder::FirstThenSecond, TestChoice::NeymanPearson(0.1))).unwrap();
        let b = successive_decoder_sim(&ch, &law, &cb1, &cb2, &p, &opts(DecodingOrder::SecondThenFirst, TestChoice::NeymanPearson(0.1))).unwrap();
        for r in [&a, &b] {
            assert!((0.0..=1.0).contains(&r.p_e1) && (0.0..=1.0).contains(&r.p_e2));
        }
        assert_eq!(a.first_stage_error, a.p_e1);
        assert_eq!(b.first_stage_error, b.p_e2);
        assert!((a.p_e1 - b.p_e1).abs() + (a.p_e2 - b.p_e2).abs() > 1e-9);
    }

    #[test]
    fn budgets_are_labelled() {
        let ch = orthogonal();
        let cb = Codebook::from_entries(2, 1, 1, vec![0]).unwrap();
        let r = successive_decoder_sim(
            &ch,
            &PpLaw::uniform(2, 2),
            &cb,
            &cb,
            &SmoothingParams::default(),
            &opts(DecodingOrder::FirstThenSecond, TestChoice::Support),
        )
        .unwrap();
        assert_eq!(r.budgets[0].label, "ε₁ + √ε₂");
        assert!((r.budgets[0].value - (0.1 + 0.1f64.sqrt())).abs() < 1e-12);
        assert!(r.budgets[1].value.is_nan());
    }

    #[test]
    fn cap_is_enforced() {
        let ch = orthogonal();
        let cb = Codebook::from_entries(2, 1, 1, vec![0]).unwrap();
        let o = SuccessiveOptions { cap: 2, ..opts(DecodingOrder::FirstThenSecond, TestChoice::Support) };
        assert!(matches!(
            successive_decoder_sim(&ch, &PpLaw::uniform(2, 2), &cb, &cb, &SmoothingParams::default(), &o),
            Err(Error::DimensionCap { .. })
        ));
    }
}
