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

//! Unions of regions over finite grids of input laws.

use super::{RatePoint, RateRegion};
use crate::channel::{InputLaw, PpLaw};
use crate::error::{Error, Result};
use crate::par::{try_map_indexed, Exec};
use crate::state::Distribution;

/// Default spacing of the simplex grid.
pub const DEFAULT_GRANULARITY: f64 = 0.1;

/// Every distribution on `n` points whose entries are multiples of
/// `granularity`, in lexicographic order of the weight vectors.
pub fn simplex_grid(n: usize, granularity: f64) -> Result<Vec<Distribution>> {
    if n == 0 {
        return Err(Error::InvalidParameter("simplex over an empty alphabet".into()));
    }
    if !(granularity > 0.0 && granularity <= 1.0) {
        return Err(Error::InvalidParameter(format!("granularity {granularity} not in (0, 1]")));
    }
    let steps = (1.0 / granularity).round() as usize;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    compositions(steps, n, &mut cur, &mut |c| {
        let w: Vec<f64> = c.iter().map(|k| *k as f64 / steps as f64).collect();
        out.push(Distribution::from_weights(&w).expect("nonzero total"));
    });
    Ok(out)
}

fn compositions(left: usize, parts: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if parts == 1 {
        cur.push(left);
        f(cur);
        cur.pop();
        return;
    }
    for k in 0..=left {
        cur.push(k);
        compositions(left - k, parts - 1, cur, f);
        cur.pop();
    }
}

/// Independent input laws without time sharing, both marginals on the grid.
pub fn mac_law_grid(x1: usize, x2: usize, granularity: f64) -> Result<Vec<InputLaw>> {
    let g1 = simplex_grid(x1, granularity)?;
    let g2 = simplex_grid(x2, granularity)?;
    Ok(g1
        .iter()
        .flat_map(|a| g2.iter().map(move |b| InputLaw::independent(a.clone(), b.clone())))
        .collect())
}

/// Joint auxiliary laws on the grid.
pub fn pp_law_grid(u1: usize, u2: usize, granularity: f64) -> Result<Vec<PpLaw>> {
    simplex_grid(u1 * u2, granularity)?
        .into_iter()
        .map(|d| PpLaw::new(u1, u2, d))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierEntry<L> {
    pub law: L,
    pub region: RateRegion,
    pub corners: Vec<RatePoint>,
}

/// Per-law regions and the Pareto-maximal corners over all laws.
#[derive(Debug, Clone, PartialEq)]
pub struct Frontier<L> {
    pub entries: Vec<FrontierEntry<L>>,
    pub envelope: Vec<RatePoint>,
}

/// Evaluate `build` on every law and merge the corners.
pub fn frontier_scan<L, F>(laws: &[L], build: F, exec: Exec) -> Result<Frontier<L>>
where
    L: Clone + Send + Sync,
    F: Fn(&L) -> Result<RateRegion> + Sync + Send,
{
    if laws.is_empty() {
        return Err(Error::InvalidParameter("empty law grid".into()));
    }
    let entries = try_map_indexed(exec, laws.len(), |i| {
        let region = build(&laws[i])?;
        let corners = region.corners();
        Ok(FrontierEntry { law: laws[i].clone(), region, corners })
    })?;
    let all: Vec<&RatePoint> = entries.iter().flat_map(|e| e.corners.iter()).collect();
    let mut envelope: Vec<RatePoint> = Vec::new();
    for (i, p) in all.iter().enumerate() {
        let beaten = all
            .iter()
            .enumerate()
            .any(|(j, q)| j != i && q.dominates(p) && (!p.dominates(q) || j < i));
        if !beaten {
            envelope.push((*p).clone());
        }
    }
    envelope.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    Ok(Frontier { entries, envelope })
}
