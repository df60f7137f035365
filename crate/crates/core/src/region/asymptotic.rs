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

//! I.i.d. limits and the per-copy convergence of one-shot terms.

use super::{RateRegion, Term};
use crate::channel::{control_state_ppqwtc, PpLaw, PpQwtc, U1, U2, Y, Z};
use crate::error::{Error, Result};
use crate::par::{try_map_indexed, Exec};
use crate::quantities::{
    conditional_hypothesis_testing_mi, conditional_mutual_information, conditional_smooth_max_mi, mutual_information,
    SmoothingParams,
};

/// Largest control-state dimension the harness will build.
pub const HARNESS_DIM_CAP: usize = 4096;

/// `R′₁ ≤ I(U₁;Y|U₂) − I(U₁;Z)`, `R′₂ ≤ I(U₂;Y|U₁) − I(U₂;Z|U₁)`.
pub fn asymptotic_region(ch: &PpQwtc, law: &PpLaw) -> Result<RateRegion> {
    let s = control_state_ppqwtc(ch, law)?;
    let mut r = RateRegion::new("asymptotic", &["R1", "R2"]);
    r.push(
        &[1, 0],
        vec![
            Term::new("I(U1;Y|U2)", conditional_mutual_information(&s, &[U1], &[Y], &[U2])?),
            Term::new("-I(U1;Z)", -mutual_information(&s, &[U1], &[Z])?),
        ],
    );
    r.push(
        &[0, 1],
        vec![
            Term::new("I(U2;Y|U1)", conditional_mutual_information(&s, &[U2], &[Y], &[U1])?),
            Term::new("-I(U2;Z|U1)", -conditional_mutual_information(&s, &[U2], &[Z], &[U1])?),
        ],
    );
    Ok(r)
}

/// One row of [`convergence_harness`]: per-copy one-shot terms on the
/// `n`-fold control state next to their von Neumann limits.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    /// `(1/n) I_H(U₁;Y|U₂)` at `ε₁ − δ₁`.
    pub testing1: f64,
    /// `(1/n) I_H(U₂;Y|U₁)` at `ε₁ − δ₁`.
    pub testing2: f64,
    /// `(1/n) I_max(U₁;Z)` at `√ε₂ − δ₂ − γ`.
    pub leakage1: f64,
    /// `(1/n) I_max(U₂;Z|U₁)` at `√ε₂ − δ₂ − γ`.
    pub leakage2: f64,
    pub target_testing1: f64,
    pub target_testing2: f64,
    pub target_leakage1: f64,
    /// `I(U₁;Z|U₂)`, the alternative limit of the first leakage term.
    pub target_leakage1_given_u2: f64,
    pub target_leakage2: f64,
}

/// Rows for `n = 1..=n_max`.
pub fn convergence_harness(
    ch: &PpQwtc,
    law: &PpLaw,
    p: &SmoothingParams,
    n_max: usize,
    exec: Exec,
) -> Result<Vec<ConvergenceRow>> {
    p.check_theorem2()?;
    let te = p.theorem2_testing_eps();
    let le = p.theorem2_leakage_eps() - p.gamma;
    if !(le > 0.0 && le < 1.0) {
        return Err(Error::predicate(
            "sqrt(eps2) - delta2 - gamma in (0, 1)",
            format!("sqrt(eps2) - delta2 - gamma = {le}"),
        ));
    }
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let s = control_state_ppqwtc(ch, law)?;
    let dim = s.dim().saturating_pow(n_max as u32);
    if dim > HARNESS_DIM_CAP {
        return Err(Error::DimensionCap { dim, cap: HARNESS_DIM_CAP });
    }
    let target_testing1 = conditional_mutual_information(&s, &[U1], &[Y], &[U2])?;
    let target_testing2 = conditional_mutual_information(&s, &[U2], &[Y], &[U1])?;
    let target_leakage1 = mutual_information(&s, &[U1], &[Z])?;
    let target_leakage1_given_u2 = conditional_mutual_information(&s, &[U1], &[Z], &[U2])?;
    let target_leakage2 = conditional_mutual_information(&s, &[U2], &[Z], &[U1])?;
    try_map_indexed(exec, n_max, |i| {
        let n = i + 1;
        let sn = s.tensor_power(n)?;
        let k = n as f64;
        Ok(ConvergenceRow {
            n,
            testing1: conditional_hypothesis_testing_mi(&sn, &[U1], &[Y], &[U2], te)? / k,
            testing2: conditional_hypothesis_testing_mi(&sn, &[U2], &[Y], &[U1], te)? / k,
            leakage1: conditional_smooth_max_mi(&sn, &[U1], &[Z], &[], le)? / k,
            leakage2: conditional_smooth_max_mi(&sn, &[U2], &[Z], &[U1], le)? / k,
            target_testing1,
            target_testing2,
            target_leakage1,
            target_leakage1_given_u2,
            target_leakage2,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::state::DensityOperator;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn noiseless_eve_silent_rates_are_one_bit() {
        let ys = (0..4).map(|i| DensityOperator::basis(4, i)).collect();
        let ch = PpQwtc::eve_silent(2, 2, ys, &DensityOperator::maximally_mixed(2)).unwrap();
        let r = asymptotic_region(&ch, &PpLaw::uniform(2, 2)).unwrap();
        for b in r.bounds() {
            assert!((b - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn input_independent_outputs_give_zero() {
        let out = DensityOperator::maximally_mixed(2).tensor(&DensityOperator::basis(2, 1));
        let ch = PpQwtc::direct(2, 2, 2, 2, vec![out; 4]).unwrap();
        let r = asymptotic_region(&ch, &PpLaw::uniform(2, 2)).unwrap();
        assert!(r.bounds().iter().all(|b| b.abs() < 1e-9));
    }

    #[test]
    fn harness_first_row_is_one_shot() {
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        let ch = random::ppqwtc(2, 2, 2, 1, &mut rng);
        let law = PpLaw::uniform(2, 2);
        let p = SmoothingParams::default();
        let rows = convergence_harness(&ch, &law, &p, 2, Exec::Sequential).unwrap();
        let s = control_state_ppqwtc(&ch, &law).unwrap();
        let direct = conditional_hypothesis_testing_mi(&s, &[U1], &[Y], &[U2], p.theorem2_testing_eps()).unwrap();
        assert_eq!(rows[0].testing1, direct);
        assert_eq!(rows[0].leakage1, 0.0);
        assert_eq!(rows[1].leakage2, 0.0);
        assert_eq!(rows, convergence_harness(&ch, &law, &p, 2, Exec::Parallel).unwrap());
    }

    #[test]
    fn harness_respects_cap() {
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let ch = random::ppqwtc(2, 2, 2, 2, &mut rng);
        let err = convergence_harness(&ch, &PpLaw::uniform(2, 2), &SmoothingParams::default(), 5, Exec::Sequential);
        assert!(matches!(err, Err(Error::DimensionCap { .. })));
    }
}
