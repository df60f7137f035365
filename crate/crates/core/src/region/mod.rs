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

//! Achievable rate regions as finite lists of linear constraints.

mod asymptotic;
mod builders;
mod frontier;

pub use asymptotic::{asymptotic_region, convergence_harness, ConvergenceRow, HARNESS_DIM_CAP};
pub use builders::{
    region_18, region_19, region_corollary1, region_corollary2, region_theorem1, region_theorem2, region_theorem3,
};
pub use frontier::{
    frontier_scan, mac_law_grid, pp_law_grid, simplex_grid, Frontier, FrontierEntry, DEFAULT_GRANULARITY,
};

use nalgebra::{DMatrix, DVector};

/// Slack used when testing points against constraints and vertices.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// A rate tuple, one entry per coordinate of its region.
#[derive(Debug, Clone, PartialEq)]
pub struct RatePoint(pub Vec<f64>);

impl RatePoint {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// True if `self` is at least `other` in every coordinate.
    pub fn dominates(&self, other: &RatePoint) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a >= *b - FEASIBILITY_TOL)
    }
}

/// One signed contribution to a bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub label: String,
    pub value: f64,
}

impl Term {
    pub fn new(label: impl Into<String>, value: f64) -> Self {
        Term { label: label.into(), value }
    }
}

/// `Σ coeffs[i] · R_i ≤ bound`, with `bound` the sum of `terms`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<u8>,
    pub terms: Vec<Term>,
    pub bound: f64,
}

impl Constraint {
    pub fn new(coeffs: Vec<u8>, terms: Vec<Term>) -> Self {
        let bound = terms.iter().map(|t| t.value).sum();
        Constraint { coeffs, terms, bound }
    }

    /// More than one rate on the left-hand side.
    pub fn is_sum_rate(&self) -> bool {
        self.coeffs.iter().filter(|c| **c != 0).count() > 1
    }

    pub fn lhs(&self, p: &RatePoint) -> f64 {
        self.coeffs.iter().zip(&p.0).map(|(c, r)| f64::from(*c) * r).sum()
    }

    /// Human-readable left-hand side, e.g. `R1+R2`.
    pub fn lhs_label(&self, coords: &[String]) -> String {
        coords
            .iter()
            .zip(&self.coeffs)
            .filter(|(_, c)| **c != 0)
            .map(|(l, _)| l.as_str())
            .collect::<Vec<_>>()
            .join("+")
    }
}

/// Error or secrecy budget attached to a region.
#[derive(Debug, Clone, PartialEq)]
pub struct Budget {
    pub name: String,
    pub label: String,
    pub value: f64,
}

impl Budget {
    pub fn new(name: &str, label: &str, value: f64) -> Self {
        Budget {
            name: name.into(),
            label: label.into(),
            value,
        }
    }
}

/// A polytope `{R : constraints}` with its budgets and notes.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRegion {
    pub name: String,
    pub coords: Vec<String>,
    pub constraints: Vec<Constraint>,
    pub budgets: Vec<Budget>,
    pub notes: Vec<String>,
}

impl RateRegion {
    pub fn new(name: &str, coords: &[&str]) -> Self {
        RateRegion {
            name: name.into(),
            coords: coords.iter().map(|c| c.to_string()).collect(),
            constraints: Vec::new(),
            budgets: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub(crate) fn push(&mut self, coeffs: &[u8], terms: Vec<Term>) {
        debug_assert_eq!(coeffs.len(), self.coords.len());
        self.constraints.push(Constraint::new(coeffs.to_vec(), terms));
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn bounds(&self) -> Vec<f64> {
        self.constraints.iter().map(|c| c.bound).collect()
    }

    /// Bound of the constraint with exactly these coefficients.
    pub fn bound(&self, coeffs: &[u8]) -> Option<f64> {
        self.constraints.iter().find(|c| c.coeffs == coeffs).map(|c| c.bound)
    }

    /// Raw containment: every constraint holds (within [`FEASIBILITY_TOL`]).
    pub fn contains(&self, p: &RatePoint) -> bool {
        p.0.len() == self.dim() && self.constraints.iter().all(|c| c.lhs(p) <= c.bound + FEASIBILITY_TOL)
    }

    /// Display copy with every bound clamped at zero.
    pub fn clamped(&self) -> RateRegion {
        let mut r = self.clone();
        for c in &mut r.constraints {
            c.bound = c.bound.max(0.0);
        }
        r
    }

    /// Vertices of the region intersected with the nonnegative orthant,
    /// sorted lexicographically. Empty when the origin is already excluded.
    pub fn corners(&self) -> Vec<RatePoint> {
        let d = self.dim();
        let mut planes: Vec<(Vec<f64>, f64)> = self
            .constraints
            .iter()
            .map(|c| (c.coeffs.iter().map(|x| f64::from(*x)).collect(), c.bound))
            .collect();
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            planes.push((e, 0.0));
        }
        let mut out: Vec<RatePoint> = Vec::new();
        for subset in combinations(planes.len(), d) {
            let a = DMatrix::from_fn(d, d, |i, j| planes[subset[i]].0[j]);
            let b = DVector::from_fn(d, |i, _| planes[subset[i]].1);
            let Some(x) = a.lu().solve(&b) else { continue };
            let p = RatePoint(x.iter().copied().collect());
            if p.0.iter().any(|v| !v.is_finite() || *v < -FEASIBILITY_TOL) || !self.contains(&p) {
                continue;
            }
            let p = RatePoint(p.0.iter().map(|v| if v.abs() < FEASIBILITY_TOL { 0.0 } else { *v }).collect());
            if !out.iter().any(|q| q.0.iter().zip(&p.0).all(|(a, b)| (a - b).abs() < 1e-9)) {
                out.push(p);
            }
        }
        out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        out
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
