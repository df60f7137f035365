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

//! Numerical checks of the relations between one-shot quantities.

use crate::error::{Error, Result};
use crate::quantities::entropy::{binary_entropy, relative_entropy};
use crate::quantities::hypothesis::{check_eps, hypothesis_testing_relative_entropy};
use crate::quantities::maxrel::{alt_smooth_max_mi, smooth_max_mi};
use crate::state::{DensityOperator, MultipartiteState};

pub const FACT_SLACK: f64 = 1e-6;

/// Both sides of an inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl InequalityCheck {
    /// `rhs − lhs`.
    pub fn slack(&self) -> f64 {
        self.rhs - self.lhs
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + FACT_SLACK
    }
}

/// `D_H^ε(ρ‖σ)` against `(D(ρ‖σ) + h_b(ε)) / (1 − ε)`.
pub fn fact1_sides(rho: &DensityOperator, sigma: &DensityOperator, eps: f64) -> Result<InequalityCheck> {
    check_eps(eps)?;
    let d = relative_entropy(rho, sigma)?;
    if !d.is_finite() {
        return Err(Error::InvalidParameter("relative entropy is infinite".into()));
    }
    let (dh, _) = hypothesis_testing_relative_entropy(rho, sigma, eps)?;
    Ok(InequalityCheck {
        lhs: dh,
        rhs: (d + binary_entropy(eps)?) / (1.0 - eps),
    })
}

pub fn check_fact1(rho: &DensityOperator, sigma: &DensityOperator, eps: f64) -> Result<bool> {
    fact1_sides(rho, sigma, eps).map(|c| c.holds())
}

/// `Ĩ_max^ε(B;A)` against `I_max^{ε−γ}(A;B) + log₂(3/γ²)`.
///
/// Both sides use truncation smoothing, so a failure flags the heuristic
/// rather than the relation itself.
pub fn fact3_sides(s: &MultipartiteState, a: &[&str], b: &[&str], eps: f64, gamma: f64) -> Result<InequalityCheck> {
    check_eps(eps)?;
    if !(gamma > 0.0 && gamma < eps) {
        return Err(Error::predicate("gamma in (0, eps)", format!("gamma = {gamma}, eps = {eps}")));
    }
    Ok(InequalityCheck {
        lhs: alt_smooth_max_mi(s, b, a, eps)?,
        rhs: smooth_max_mi(s, a, b, eps - gamma)? + (3.0 / (gamma * gamma)).log2(),
    })
}

pub fn check_fact3(s: &MultipartiteState, a: &[&str], b: &[&str], eps: f64, gamma: f64) -> Result<bool> {
    fact3_sides(s, a, b, eps, gamma).map(|c| c.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use crate::state::{cq_state, Distribution, Register};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fact1_identical_states() {
        let r = DensityOperator::maximally_mixed(3);
        for eps in [0.01, 0.1, 0.5, 0.9] {
            let c = fact1_sides(&r, &r, eps).unwrap();
            assert!(c.holds(), "{c:?}");
        }
    }

    #[test]
    fn fact1_random_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..30 {
            let r = random::density(2, &mut rng);
            let s = random::density(2, &mut rng);
            assert!(check_fact1(&r, &s, 0.1).unwrap());
        }
    }

    #[test]
    fn fact3_product_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let conds = vec![random::density(2, &mut rng); 2];
        let st = cq_state(&Distribution::uniform(2), &conds, &[Register::classical("X", 2)], &[Register::quantum("Y", 2)]).unwrap();
        let c = fact3_sides(&st, &["X"], &["Y"], 0.2, 0.1).unwrap();
        assert_eq!(c.lhs, 0.0);
        assert!((c.rhs - (3.0f64 / 0.01).log2()).abs() < 1e-12);
        assert!(fact3_sides(&st, &["X"], &["Y"], 0.2, 0.3).is_err());
    }
}
