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

//! Test operators, square-root measurements and the Hayashi–Nagaoka
//! operator inequality.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};

/// Slack on `0 ≤ T ≤ I` for test operators.
pub const TEST_TOL: f64 = 1e-9;
/// Slack on `Σ Λ ≤ I` for measurements.
pub const POVM_TOL: f64 = 1e-8;
/// Slack on the eigenvalue check of the operator inequality.
pub const HN_TOL: f64 = 1e-8;

/// An operator with `0 ≤ T ≤ I`.
#[derive(Debug, Clone, PartialEq)]
pub struct TestOperator {
    op: CMatrix,
}

impl TestOperator {
    pub fn new(op: CMatrix) -> Result<Self> {
        if !op.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} test operator", op.nrows(), op.ncols())));
        }
        let dev = linalg::hermitian_deviation(&op);
        if dev > linalg::HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let op = linalg::symmetrize(&op);
        let vals = linalg::Spectrum::of(&op).values();
        let (lo, hi) = (vals[0], vals[vals.len() - 1]);
        if lo < -TEST_TOL || hi > 1.0 + TEST_TOL {
            return Err(Error::InvalidOperator(format!("spectrum [{lo:e}, {hi}] outside [0, 1]")));
        }
        Ok(TestOperator { op })
    }

    pub(crate) fn from_raw(op: CMatrix) -> Self {
        TestOperator { op }
    }

    pub fn identity(n: usize) -> Self {
        TestOperator { op: linalg::identity(n) }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.op
    }

    pub fn dim(&self) -> usize {
        self.op.nrows()
    }
}

/// Measurement elements with `Σ Λ ≤ I`; the completion `I − Σ Λ` is kept
/// explicitly.
#[derive(Debug, Clone, PartialEq)]
pub struct PovmSet {
    elements: Vec<TestOperator>,
    completion: CMatrix,
}

impl PovmSet {
    pub fn new(elements: Vec<TestOperator>) -> Result<Self> {
        let n = elements.first().map_or(0, TestOperator::dim);
        if n == 0 {
            return Err(Error::InvalidOperator("empty measurement".into()));
        }
        if elements.iter().any(|e| e.dim() != n) {
            return Err(Error::DimensionMismatch("measurement elements of different sizes".into()));
        }
        let mut completion = linalg::identity(n);
        for e in &elements {
            completion -= e.matrix();
        }
        let lo = linalg::min_eigenvalue(&completion);
        if lo < -POVM_TOL {
            return Err(Error::InvalidOperator(format!("elements sum above identity by {:e}", -lo)));
        }
        Ok(PovmSet { elements, completion })
    }

    pub fn elements(&self) -> &[TestOperator] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.completion.nrows()
    }

    /// `I − Σ Λ`.
    pub fn completion(&self) -> &CMatrix {
        &self.completion
    }

    /// Outcome probabilities `Tr{Λ_i ρ}`, then the completion probability.
    pub fn probabilities(&self, rho: &CMatrix) -> (Vec<f64>, f64) {
        let p = self
            .elements
            .iter()
            .map(|e| linalg::trace_product_re(e.matrix(), rho))
            .collect();
        (p, linalg::trace_product_re(&self.completion, rho))
    }
}

/// Square-root measurement `Λ_i = S^{-1/2} Γ_i S^{-1/2}` with `S = Σ Γ`,
/// the inverse taken on the support of `S`.
pub fn pgm(gammas: &[CMatrix]) -> Result<PovmSet> {
    let n = gammas.first().map_or(0, |g| g.nrows());
    if n == 0 {
        return Err(Error::InvalidOperator("no operators to normalize".into()));
    }
    let mut total = linalg::zeros(n);
    for g in gammas {
        if g.nrows() != n || !g.is_square() {
            return Err(Error::DimensionMismatch("operators of different sizes".into()));
        }
        total += g;
    }
    let inv = linalg::pinv_sqrt(&linalg::symmetrize(&total));
    let elements = gammas
        .iter()
        .map(|g| TestOperator::from_raw(linalg::symmetrize(&(&inv * g * &inv))))
        .collect();
    PovmSet::new(elements)
}

/// Post-measurement state `√Λ ρ √Λ / Tr{Λρ}` and the outcome probability.
/// `None` when the outcome has zero probability.
pub fn instrument(lambda: &CMatrix, rho: &CMatrix) -> Option<(CMatrix, f64)> {
    let p = linalg::trace_product_re(lambda, rho);
    if !(p > 0.0) {
        return None;
    }
    let r = linalg::sqrt_psd(lambda);
    Some((linalg::symmetrize(&(&r * rho * &r)) / linalg::re(p), p))
}

/// Outcome of [`hayashi_nagaoka_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HnCheck {
    /// Smallest eigenvalue of `(1+c)(I−S) + (2+c+1/c)T − (I − Λ)`.
    pub min_eigenvalue: f64,
}

impl HnCheck {
    pub fn holds(&self) -> bool {
        self.min_eigenvalue >= -HN_TOL
    }
}

/// `I − (S+T)^{-1/2} S (S+T)^{-1/2} ≤ (1+c)(I − S) + (2 + c + 1/c) T`.
pub fn hayashi_nagaoka_check(s: &TestOperator, t: &CMatrix, c: f64) -> Result<HnCheck> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::predicate("c > 0", format!("c = {c}")));
    }
    let n = s.dim();
    if t.nrows() != n || !t.is_square() {
        return Err(Error::DimensionMismatch(format!("S is {n}x{n}, T is {}x{}", t.nrows(), t.ncols())));
    }
    let dev = linalg::hermitian_deviation(t);
    if dev > linalg::HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    if linalg::min_eigenvalue(&linalg::symmetrize(t)) < -linalg::PSD_TOL {
        return Err(Error::InvalidOperator("T is not positive semidefinite".into()));
    }
    let sum = linalg::symmetrize(&(s.matrix() + t));
    let inv = linalg::pinv_sqrt(&sum);
    let id = linalg::identity(n);
    let lhs = &id - &inv * s.matrix() * &inv;
    let rhs = (&id - s.matrix()) * linalg::re(1.0 + c) + t * linalg::re(2.0 + c + 1.0 / c);
    Ok(HnCheck {
        min_eigenvalue: linalg::min_eigenvalue(&linalg::symmetrize(&(rhs - lhs))),
    })
}
