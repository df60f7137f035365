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

use thiserror::Error;

/// Errors produced by the library.
///
/// Variants fall in two families: validation failures (bad inputs, violated
/// parameter predicates) and numeric failures (non-convergence, dimension
/// caps). [`Error::is_numeric`] distinguishes them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("register label collision: {0}")]
    LabelCollision(String),

    #[error("unknown register: {0}")]
    UnknownRegister(String),

    #[error("register {0} is not classical")]
    NotClassical(String),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("parameter predicate violated: {predicate} (got {detail})")]
    PredicateViolated { predicate: String, detail: String },

    #[error("alternatives do not commute (commutator norm {0:e})")]
    NonCommuting(f64),

    #[error("bisection did not converge after {iterations} iterations; bracket [{lo:e}, {hi:e}]")]
    NonConvergence { iterations: usize, lo: f64, hi: f64 },

    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
}

impl Error {
    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::DimensionCap { .. }
        )
    }

    pub(crate) fn predicate(predicate: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::PredicateViolated {
            predicate: predicate.into(),
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
