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

//! Von Neumann, relative and Rényi entropies.

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Partition, Spectrum};
use crate::state::{DensityOperator, MultipartiteState};

/// Weight of `rho` outside the support of `sigma` that still counts as inside.
pub const SUPPORT_MASS_TOL: f64 = 1e-9;

/// `−Σ λ log₂ λ` over the spectrum of a PSD matrix, with `0 log 0 = 0`.
pub fn entropy_of_matrix(m: &CMatrix) -> f64 {
    Spectrum::of(m)
        .values()
        .iter()
        .filter(|v| **v > 0.0)
        .map(|v| -v * v.log2())
        .sum()
}

pub fn von_neumann_entropy(s: &MultipartiteState, registers: &[&str]) -> Result<f64> {
    Ok(entropy_of_matrix(s.marginal(registers)?.matrix()))
}

fn joined<'a>(a: &[&'a str], b: &[&'a str]) -> Vec<&'a str> {
    a.iter().chain(b).copied().collect()
}

/// `H(A|B) = H(AB) − H(B)`.
pub fn conditional_entropy(s: &MultipartiteState, a: &[&str], b: &[&str]) -> Result<f64> {
    Ok(von_neumann_entropy(s, &joined(a, b))? - von_neumann_entropy(s, b)?)
}

/// `I(A;B) = H(A) + H(B) − H(AB)`.
pub fn mutual_information(s: &MultipartiteState, a: &[&str], b: &[&str]) -> Result<f64> {
    Ok(von_neumann_entropy(s, a)? + von_neumann_entropy(s, b)?
        - von_neumann_entropy(s, &joined(a, b))?)
}

/// `I(A;B|C) = H(A|C) + H(B|C) − H(AB|C)`.
pub fn conditional_mutual_information(
    s: &MultipartiteState,
    a: &[&str],
    b: &[&str],
    c: &[&str],
) -> Result<f64> {
    if c.is_empty() {
        return mutual_information(s, a, b);
    }
    let ac = joined(a, c);
    let bc = joined(b, c);
    let abc = joined(&joined(a, b), c);
    Ok(von_neumann_entropy(s, &ac)? + von_neumann_entropy(s, &bc)?
        - von_neumann_entropy(s, &abc)?
        - von_neumann_entropy(s, c)?)
}

pub(crate) fn check_same_dim(rho: &CMatrix, sigma: &CMatrix) -> Result<()> {
    if rho.nrows() != sigma.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "operators of dimension {} and {}",
            rho.nrows(),
            sigma.nrows()
        )));
    }
    Ok(())
}

/// Spectrum of `sigma` on the joint block structure of `rho` and `sigma`,
/// with the `rho` weight of each eigenvector.
pub(crate) struct Reference {
    pub spectrum: Spectrum,
    pub rho_weights: Vec<Vec<f64>>,
    pub threshold: f64,
}

impl Reference {
    pub fn new(rho: &CMatrix, sigma: &CMatrix) -> Self {
        let part = Partition::of(&[rho, sigma]);
        let spectrum = Spectrum::with_partition(sigma, &part);
        let rho_weights = spectrum.expectations(rho);
        let threshold = spectrum.support_threshold();
        Reference {
            spectrum,
            rho_weights,
            threshold,
        }
    }

    /// `rho` mass on the kernel of `sigma`.
    pub fn mass_off_support(&self) -> f64 {
        let mut acc = 0.0;
        for (b, w) in self.spectrum.blocks().iter().zip(&self.rho_weights) {
            for (v, r) in b.values.iter().zip(w) {
                if *v <= self.threshold {
                    acc += r;
                }
            }
        }
        acc.max(0.0)
    }
}

pub(crate) fn relative_entropy_raw(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let r = Reference::new(rho, sigma);
    if r.mass_off_support() > SUPPORT_MASS_TOL {
        return f64::INFINITY;
    }
    let mut cross = 0.0;
    for (b, w) in r.spectrum.blocks().iter().zip(&r.rho_weights) {
        for (v, rw) in b.values.iter().zip(w) {
            if *v > r.threshold {
                cross += rw * v.log2();
            }
        }
    }
    -entropy_of_matrix(rho) - cross
}

/// `D(ρ‖σ) = Tr{ρ(log₂ρ − log₂σ)}`, `+∞` when `supp ρ ⊄ supp σ`.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_same_dim(rho.matrix(), sigma.matrix())?;
    Ok(relative_entropy_raw(rho.matrix(), sigma.matrix()))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!("alpha = {alpha} must be positive")));
    }
    if alpha == 1.0 {
        return Err(Error::InvalidParameter(
            "alpha = 1 is the relative entropy; use relative_entropy".into(),
        ));
    }
    Ok(())
}

/// `D_α(ρ‖σ) = log₂ Tr{ρ^α σ^{1−α}} / (α − 1)`.
pub fn renyi_relative_entropy(rho: &DensityOperator, sigma: &DensityOperator, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    check_same_dim(rho.matrix(), sigma.matrix())?;
    if alpha > 1.0 && Reference::new(rho.matrix(), sigma.matrix()).mass_off_support() > SUPPORT_MASS_TOL {
        return Ok(f64::INFINITY);
    }
    let ra = linalg::psd_power(rho.matrix(), alpha);
    let sb = linalg::psd_power(sigma.matrix(), 1.0 - alpha);
    let q = linalg::trace_product_re(&ra, &sb);
    if q <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(q.log2() / (alpha - 1.0))
}

/// `H_α(ρ) = log₂ Tr{ρ^α} / (1 − α)`.
pub fn renyi_entropy(rho: &DensityOperator, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let q: f64 = Spectrum::of(rho.matrix())
        .values()
        .iter()
        .filter(|v| **v > 0.0)
        .map(|v| v.powf(alpha))
        .sum();
    Ok(q.log2() / (1.0 - alpha))
}

/// `h_b(ε) = −ε log₂ ε − (1 − ε) log₂(1 − ε)`.
pub fn binary_entropy(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("binary entropy argument {eps} not in [0, 1]")));
    }
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(eps) + term(1.0 - eps))
}
