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

//! The smoothing and slack parameters of the one-shot bounds.

use crate::error::{Error, Result};

/// Parameter bundle shared by the region builders and decoders.
///
/// Each builder checks only the predicates it needs; see the `check_*`
/// methods. `o1` is the unspecified constant term of the multiple-access
/// bounds (default 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingParams {
    pub eps: f64,
    pub delta: f64,
    pub eps_prime: f64,
    pub delta_prime: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub gamma: f64,
    /// Hayashi–Nagaoka constant.
    pub c: f64,
    pub o1: f64,
}

impl Default for SmoothingParams {
    fn default() -> Self {
        SmoothingParams {
            eps: 0.1,
            delta: 0.05,
            eps_prime: 0.05,
            delta_prime: 0.2,
            eps1: 0.1,
            eps2: 0.1,
            delta1: 0.05,
            delta2: 0.05,
            gamma: 0.05,
            c: 1.0,
            o1: 0.0,
        }
    }
}

fn open(x: f64, lo: f64, hi: f64) -> bool {
    x > lo && x < hi
}

fn require(ok: bool, predicate: &str, detail: String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::predicate(predicate, detail))
    }
}

impl SmoothingParams {
    /// `η = δ′ − ε′`.
    pub fn eta(&self) -> f64 {
        self.delta_prime - self.eps_prime
    }

    pub fn check_eps(&self) -> Result<()> {
        require(open(self.eps, 0.0, 1.0), "eps in (0, 1)", format!("eps = {}", self.eps))
    }

    /// Leakage parameters of the multiple-access bounds.
    fn check_leakage(&self) -> Result<()> {
        require(self.delta_prime > 0.0, "delta' > 0", format!("delta' = {}", self.delta_prime))?;
        require(
            open(self.eps_prime, 0.0, self.delta_prime),
            "eps' in (0, delta')",
            format!("eps' = {}, delta' = {}", self.eps_prime, self.delta_prime),
        )?;
        require(open(self.eta(), 0.0, 1.0), "delta' - eps' in (0, 1)", format!("eta = {}", self.eta()))
    }

    pub fn check_corollary1(&self) -> Result<()> {
        self.check_eps()?;
        self.check_leakage()
    }

    /// Admits `δ = ε`, where the two multiple-access regions coincide.
    pub fn check_theorem1(&self) -> Result<()> {
        self.check_eps()?;
        require(
            self.delta > 0.0 && self.delta <= self.eps,
            "delta in (0, eps]",
            format!("delta = {}, eps = {}", self.delta, self.eps),
        )?;
        self.check_leakage()
    }

    /// Admits `δ₂ = ε₂`, the choice behind the leakage-free reduction.
    pub fn check_theorem2(&self) -> Result<()> {
        require(open(self.eps1, 0.0, 1.0), "eps1 in (0, 1)", format!("eps1 = {}", self.eps1))?;
        require(open(self.eps2, 0.0, 1.0), "eps2 in (0, 1)", format!("eps2 = {}", self.eps2))?;
        require(
            open(self.delta1, 0.0, self.eps1),
            "delta1 in (0, eps1)",
            format!("delta1 = {}, eps1 = {}", self.delta1, self.eps1),
        )?;
        require(
            self.delta2 > 0.0 && self.delta2 <= self.eps2,
            "delta2 in (0, eps2]",
            format!("delta2 = {}, eps2 = {}", self.delta2, self.eps2),
        )?;
        let s = self.eps2.sqrt() - self.delta2;
        require(open(s, 0.0, 1.0), "sqrt(eps2) - delta2 in (0, 1)", format!("sqrt(eps2) - delta2 = {s}"))
    }

    pub fn check_lemma2(&self) -> Result<()> {
        self.check_eps()?;
        require(
            self.delta > 0.0 && self.delta <= self.eps.sqrt(),
            "delta in (0, sqrt(eps)]",
            format!("delta = {}, eps = {}", self.delta, self.eps),
        )
    }

    pub fn check_fact3(&self) -> Result<()> {
        self.check_eps()?;
        require(
            open(self.gamma, 0.0, self.eps),
            "gamma in (0, eps)",
            format!("gamma = {}, eps = {}", self.gamma, self.eps),
        )
    }

    pub fn check_c(&self) -> Result<()> {
        require(self.c > 0.0, "c > 0", format!("c = {}", self.c))
    }

    /// Hypothesis-testing smoothing of the successive decoder, `ε₁ − δ₁`.
    pub fn theorem2_testing_eps(&self) -> f64 {
        self.eps1 - self.delta1
    }

    /// Leakage smoothing of the successive decoder, `√ε₂ − δ₂`.
    pub fn theorem2_leakage_eps(&self) -> f64 {
        self.eps2.sqrt() - self.delta2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn predicate_of(r: Result<()>) -> String {
        match r {
            Err(Error::PredicateViolated { predicate, .. }) => predicate,
            other => panic!("expected predicate violation, got {other:?}"),
        }
    }

    #[test]
    fn defaults_pass_every_check() {
        let p = SmoothingParams::default();
        p.check_corollary1().unwrap();
        p.check_theorem1().unwrap();
        p.check_theorem2().unwrap();
        p.check_lemma2().unwrap();
        p.check_fact3().unwrap();
        p.check_c().unwrap();
        assert_eq!(p.eta(), p.delta_prime - p.eps_prime);
    }

    #[test]
    fn named_predicates() {
        let p = SmoothingParams { eps: 1.2, ..Default::default() };
        assert_eq!(predicate_of(p.check_corollary1()), "eps in (0, 1)");
        let p = SmoothingParams { eps_prime: 0.3, delta_prime: 0.2, ..Default::default() };
        assert_eq!(predicate_of(p.check_corollary1()), "eps' in (0, delta')");
        let p = SmoothingParams { delta: 0.2, eps: 0.1, ..Default::default() };
        assert_eq!(predicate_of(p.check_theorem1()), "delta in (0, eps]");
        let p = SmoothingParams { delta1: 0.1, ..Default::default() };
        assert_eq!(predicate_of(p.check_theorem2()), "delta1 in (0, eps1)");
        let p = SmoothingParams { delta: 0.5, eps: 0.1, ..Default::default() };
        assert_eq!(predicate_of(p.check_lemma2()), "delta in (0, sqrt(eps)]");
        let p = SmoothingParams { gamma: 0.1, ..Default::default() };
        assert_eq!(predicate_of(p.check_fact3()), "gamma in (0, eps)");
    }

    #[test]
    fn boundary_choices_admitted() {
        let p = SmoothingParams { delta: 0.1, eps: 0.1, ..Default::default() };
        p.check_theorem1().unwrap();
        let p = SmoothingParams { delta2: 0.1, eps2: 0.1, ..Default::default() };
        p.check_theorem2().unwrap();
    }
}
