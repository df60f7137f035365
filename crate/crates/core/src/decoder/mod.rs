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

//! Decoders and lemma objects at toy scale: position-based square-root
//! measurements, exact error probabilities, the Hayashi–Nagaoka bound, the
//! commuting multiple-hypothesis test, convex split and leakage sampling,
//! successive decoding and superposition coding.

pub mod codebook;
pub mod lemmas;
pub mod povm;
pub mod simultaneous;
pub mod successive;
pub mod superposition;

pub use codebook::Codebook;
pub use lemmas::{
    convex_split_verify, leakage_estimate, multiple_hypothesis_commuting, ConvexSplitReport, LeakageReport,
    MultiHypothesisReport,
};
pub use povm::{hayashi_nagaoka_check, instrument, pgm, HnCheck, PovmSet, TestOperator};
pub use simultaneous::{
    average_error_simultaneous, build_pgm_simultaneous, exact_error_simultaneous, simultaneous_hypotheses,
    AverageReport, HypothesisTraces, SimultaneousReport, SimultaneousTest,
};
pub use successive::{successive_decoder_sim, DecodingOrder, SuccessiveOptions, SuccessiveReport};
pub use superposition::{superposition_decoder_sim, SuperpositionReport};

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::quantities::hypothesis_testing_mi_with_certificate;
use crate::state::MultipartiteState;

/// Largest operator dimension any decoder construction may reach.
pub const DIM_CAP: usize = 4096;

/// Sizes of the two codebooks and the Hayashi–Nagaoka constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoderParams {
    pub c: f64,
    pub m1: usize,
    pub k1: usize,
    pub m2: usize,
    pub k2: usize,
    pub cap: usize,
}

impl Default for DecoderParams {
    fn default() -> Self {
        DecoderParams { c: 1.0, m1: 2, k1: 2, m2: 2, k2: 2, cap: DIM_CAP }
    }
}

impl DecoderParams {
    pub fn check(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::predicate("c > 0", format!("c = {}", self.c)));
        }
        if [self.m1, self.k1, self.m2, self.k2].contains(&0) {
            return Err(Error::InvalidParameter("codebook sizes must be positive".into()));
        }
        Ok(())
    }
}

/// How the binary tests inside a position-based decoder are chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TestChoice {
    /// Neyman–Pearson test at this type-I error.
    NeymanPearson(f64),
    /// Projector onto the support of each conditional output (no miss).
    Support,
}

/// Neyman–Pearson test of `ρ_{AB}` against `ρ_A ⊗ ρ_B` for classical `A`,
/// cut into its `A`-blocks of size `db`.
pub(crate) fn pinched_test(s: &MultipartiteState, a: &[&str], b: &[&str], eps: f64, db: usize) -> Result<Vec<CMatrix>> {
    let (_, cert) = hypothesis_testing_mi_with_certificate(s, a, b, eps)?;
    let count = cert.test.nrows() / db;
    Ok((0..count)
        .map(|k| cert.test.view((k * db, k * db), (db, db)).into_owned())
        .collect())
}
