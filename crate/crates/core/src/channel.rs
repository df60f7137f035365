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

//! Finite-alphabet channels and their control states.
//!
//! Three channel families are modeled: the two-sender multiple-access
//! wiretap channel, the single-sender wiretap channel carrying two messages
//! through auxiliary inputs, and the two-receiver broadcast channel. Every
//! channel is a dense table of output states.

use crate::error::{Error, Result};
use crate::linalg;
use crate::state::{cq_state, DensityOperator, Distribution, MultipartiteState, Register};

pub const Q: &str = "Q";
pub const X: &str = "X";
pub const X1: &str = "X1";
pub const X2: &str = "X2";
pub const U: &str = "U";
pub const U1: &str = "U1";
pub const U2: &str = "U2";
pub const Y: &str = "Y";
pub const Y1: &str = "Y1";
pub const Y2: &str = "Y2";
pub const Z: &str = "Z";

fn check_table(table: &[DensityOperator], len: usize, dim: usize) -> Result<()> {
    if table.len() != len {
        return Err(Error::DimensionMismatch(format!(
            "channel table has {} entries, alphabet needs {len}",
            table.len()
        )));
    }
    if let Some((i, op)) = table.iter().enumerate().find(|(_, op)| op.dim() != dim) {
        return Err(Error::DimensionMismatch(format!(
            "output {i} has dimension {}, expected {dim}",
            op.dim()
        )));
    }
    Ok(())
}

fn check_alphabet(name: &str, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::DimensionMismatch(format!("alphabet {name} is empty")));
    }
    Ok(())
}

/// Output of a bipartite table entry with one side traced out.
fn reduce(op: &DensityOperator, d_keep_first: usize, d_second: usize, keep_first: bool) -> DensityOperator {
    let regs = vec![Register::quantum("A", d_keep_first), Register::quantum("B", d_second)];
    let s = MultipartiteState::from_parts(regs, op.clone()).expect("dimensions checked at construction");
    let drop = if keep_first { "B" } else { "A" };
    s.partial_trace(&[drop]).expect("known label").op().clone()
}

/// Two-sender classical-quantum wiretap channel `(x₁, x₂) → ρ^{YZ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CqMaWtc {
    x1: usize,
    x2: usize,
    dy: usize,
    dz: usize,
    /// Indexed `x₁ · |X₂| + x₂`.
    table: Vec<DensityOperator>,
}

impl CqMaWtc {
    pub fn new(x1: usize, x2: usize, dy: usize, dz: usize, table: Vec<DensityOperator>) -> Result<Self> {
        check_alphabet(X1, x1)?;
        check_alphabet(X2, x2)?;
        check_table(&table, x1 * x2, dy * dz)?;
        Ok(CqMaWtc { x1, x2, dy, dz, table })
    }

    /// Channel whose eavesdropper output is `z` for every input.
    pub fn eve_silent(x1: usize, x2: usize, y_outputs: Vec<DensityOperator>, z: &DensityOperator) -> Result<Self> {
        let dy = y_outputs.first().map_or(1, |o| o.dim());
        check_table(&y_outputs, x1 * x2, dy)?;
        let table = y_outputs.iter().map(|y| y.tensor(z)).collect();
        Self::new(x1, x2, dy, z.dim(), table)
    }

    pub fn x1_size(&self) -> usize {
        self.x1
    }

    pub fn x2_size(&self) -> usize {
        self.x2
    }

    pub fn y_dim(&self) -> usize {
        self.dy
    }

    pub fn z_dim(&self) -> usize {
        self.dz
    }

    pub fn table(&self) -> &[DensityOperator] {
        &self.table
    }

    pub fn output(&self, x1: usize, x2: usize) -> &DensityOperator {
        &self.table[x1 * self.x2 + x2]
    }

    /// Legitimate receiver's output `ρ^Y_{x₁x₂}`.
    pub fn y_output(&self, x1: usize, x2: usize) -> DensityOperator {
        reduce(self.output(x1, x2), self.dy, self.dz, true)
    }

    /// Eavesdropper's output `ρ^Z_{x₁x₂}`.
    pub fn z_output(&self, x1: usize, x2: usize) -> DensityOperator {
        reduce(self.output(x1, x2), self.dy, self.dz, false)
    }
}

/// Single-sender wiretap channel with two messages: auxiliary inputs
/// `(u₁, u₂)` are mapped to a physical input `x(u₁, u₂)`, then to `ρ^{YZ}_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PpQwtc {
    u1: usize,
    u2: usize,
    dy: usize,
    dz: usize,
    /// Physical input for `u₁ · |U₂| + u₂`.
    encoding: Vec<usize>,
    /// Output per physical input.
    outputs: Vec<DensityOperator>,
}

impl PpQwtc {
    pub fn new(
        u1: usize,
        u2: usize,
        dy: usize,
        dz: usize,
        encoding: Vec<usize>,
        outputs: Vec<DensityOperator>,
    ) -> Result<Self> {
        check_alphabet(U1, u1)?;
        check_alphabet(U2, u2)?;
        check_alphabet(X, outputs.len())?;
        check_table(&outputs, outputs.len(), dy * dz)?;
        if encoding.len() != u1 * u2 {
            return Err(Error::DimensionMismatch(format!(
                "encoding has {} entries, auxiliary alphabet needs {}",
                encoding.len(),
                u1 * u2
            )));
        }
        if let Some(x) = encoding.iter().find(|x| **x >= outputs.len()) {
            return Err(Error::DimensionMismatch(format!(
                "encoding maps to input {x}, channel has {}",
                outputs.len()
            )));
        }
        Ok(PpQwtc { u1, u2, dy, dz, encoding, outputs })
    }

    /// One physical input per auxiliary pair.
    pub fn direct(u1: usize, u2: usize, dy: usize, dz: usize, table: Vec<DensityOperator>) -> Result<Self> {
        Self::new(u1, u2, dy, dz, (0..u1 * u2).collect(), table)
    }

    /// Channel whose eavesdropper output is `z` for every input.
    pub fn eve_silent(u1: usize, u2: usize, y_outputs: Vec<DensityOperator>, z: &DensityOperator) -> Result<Self> {
        let dy = y_outputs.first().map_or(1, |o| o.dim());
        check_table(&y_outputs, u1 * u2, dy)?;
        let table = y_outputs.iter().map(|y| y.tensor(z)).collect();
        Self::direct(u1, u2, dy, z.dim(), table)
    }

    pub fn u1_size(&self) -> usize {
        self.u1
    }

    pub fn u2_size(&self) -> usize {
        self.u2
    }

    pub fn y_dim(&self) -> usize {
        self.dy
    }

    pub fn z_dim(&self) -> usize {
        self.dz
    }

    pub fn encoding(&self) -> &[usize] {
        &self.encoding
    }

    pub fn outputs(&self) -> &[DensityOperator] {
        &self.outputs
    }

    pub fn output(&self, u1: usize, u2: usize) -> &DensityOperator {
        &self.outputs[self.encoding[u1 * self.u2 + u2]]
    }

    pub fn y_output(&self, u1: usize, u2: usize) -> DensityOperator {
        reduce(self.output(u1, u2), self.dy, self.dz, true)
    }

    pub fn z_output(&self, u1: usize, u2: usize) -> DensityOperator {
        reduce(self.output(u1, u2), self.dy, self.dz, false)
    }
}

/// Two-receiver broadcast channel `x → ρ^{Y₁Y₂}_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Qbc {
    x: usize,
    d1: usize,
    d2: usize,
    table: Vec<DensityOperator>,
}

impl Qbc {
    pub fn new(x: usize, d1: usize, d2: usize, table: Vec<DensityOperator>) -> Result<Self> {
        check_alphabet(X, x)?;
        check_table(&table, x, d1 * d2)?;
        Ok(Qbc { x, d1, d2, table })
    }

    pub fn x_size(&self) -> usize {
        self.x
    }

    pub fn y1_dim(&self) -> usize {
        self.d1
    }

    pub fn y2_dim(&self) -> usize {
        self.d2
    }

    pub fn table(&self) -> &[DensityOperator] {
        &self.table
    }

    pub fn output(&self, x: usize) -> &DensityOperator {
        &self.table[x]
    }

    pub fn y1_output(&self, x: usize) -> DensityOperator {
        reduce(self.output(x), self.d1, self.d2, true)
    }

    pub fn y2_output(&self, x: usize) -> DensityOperator {
        reduce(self.output(x), self.d1, self.d2, false)
    }
}

fn check_rows(name: &str, rows: &[Distribution], count: usize, len: usize) -> Result<()> {
    if rows.len() != count {
        return Err(Error::DimensionMismatch(format!(
            "{name} has {} rows, expected {count}",
            rows.len()
        )));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != len) {
        return Err(Error::DimensionMismatch(format!(
            "{name} row of length {}, expected {len}",
            r.len()
        )));
    }
    Ok(())
}

/// `p(q) p(x₁|q) p(x₂|q)` for the multiple-access channel.
#[derive(Debug, Clone, PartialEq)]
pub struct InputLaw {
    pub q: Distribution,
    pub x1_given_q: Vec<Distribution>,
    pub x2_given_q: Vec<Distribution>,
}

impl InputLaw {
    pub fn new(q: Distribution, x1_given_q: Vec<Distribution>, x2_given_q: Vec<Distribution>) -> Result<Self> {
        let nq = q.len();
        let n1 = x1_given_q.first().map_or(0, |d| d.len());
        let n2 = x2_given_q.first().map_or(0, |d| d.len());
        check_rows("p(x1|q)", &x1_given_q, nq, n1)?;
        check_rows("p(x2|q)", &x2_given_q, nq, n2)?;
        Ok(InputLaw { q, x1_given_q, x2_given_q })
    }

    /// No time sharing.
    pub fn independent(p1: Distribution, p2: Distribution) -> Self {
        InputLaw {
            q: Distribution::point(1, 0),
            x1_given_q: vec![p1],
            x2_given_q: vec![p2],
        }
    }

    pub fn uniform(x1: usize, x2: usize) -> Self {
        Self::independent(Distribution::uniform(x1), Distribution::uniform(x2))
    }

    pub fn q_size(&self) -> usize {
        self.q.len()
    }

    pub fn x1_size(&self) -> usize {
        self.x1_given_q[0].len()
    }

    pub fn x2_size(&self) -> usize {
        self.x2_given_q[0].len()
    }

    /// Marginal law of `X₁`.
    pub fn x1_marginal(&self) -> Distribution {
        marginal_mix(&self.q, &self.x1_given_q)
    }

    pub fn x2_marginal(&self) -> Distribution {
        marginal_mix(&self.q, &self.x2_given_q)
    }
}

fn marginal_mix(q: &Distribution, rows: &[Distribution]) -> Distribution {
    let n = rows[0].len();
    let w: Vec<f64> = (0..n)
        .map(|x| rows.iter().enumerate().map(|(i, r)| q.get(i) * r.get(x)).sum())
        .collect();
    Distribution::from_weights(&w).expect("mixture of distributions")
}

/// Joint law `p(u₁, u₂)`, flattened `u₁ · |U₂| + u₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct PpLaw {
    pub u1: usize,
    pub u2: usize,
    pub joint: Distribution,
}

impl PpLaw {
    pub fn new(u1: usize, u2: usize, joint: Distribution) -> Result<Self> {
        if joint.len() != u1 * u2 {
            return Err(Error::DimensionMismatch(format!(
                "joint law has {} entries, expected {}",
                joint.len(),
                u1 * u2
            )));
        }
        Ok(PpLaw { u1, u2, joint })
    }

    pub fn independent(p1: &Distribution, p2: &Distribution) -> Self {
        let w: Vec<f64> = p1
            .probs()
            .iter()
            .flat_map(|a| p2.probs().iter().map(move |b| a * b))
            .collect();
        PpLaw {
            u1: p1.len(),
            u2: p2.len(),
            joint: Distribution::from_weights(&w).expect("product law"),
        }
    }

    pub fn uniform(u1: usize, u2: usize) -> Self {
        Self::independent(&Distribution::uniform(u1), &Distribution::uniform(u2))
    }

    pub fn get(&self, u1: usize, u2: usize) -> f64 {
        self.joint.get(u1 * self.u2 + u2)
    }

    pub fn u1_marginal(&self) -> Distribution {
        let w: Vec<f64> = (0..self.u1).map(|a| (0..self.u2).map(|b| self.get(a, b)).sum()).collect();
        Distribution::from_weights(&w).expect("marginal")
    }

    pub fn u2_marginal(&self) -> Distribution {
        let w: Vec<f64> = (0..self.u2).map(|b| (0..self.u1).map(|a| self.get(a, b)).sum()).collect();
        Distribution::from_weights(&w).expect("marginal")
    }
}

/// `p(u) p(x|u)` for the broadcast channel.
#[derive(Debug, Clone, PartialEq)]
pub struct QbcLaw {
    pub u: Distribution,
    pub x_given_u: Vec<Distribution>,
}

impl QbcLaw {
    pub fn new(u: Distribution, x_given_u: Vec<Distribution>) -> Result<Self> {
        let n = x_given_u.first().map_or(0, |d| d.len());
        check_rows("p(x|u)", &x_given_u, u.len(), n)?;
        Ok(QbcLaw { u, x_given_u })
    }

    /// Constant auxiliary.
    pub fn without_auxiliary(p: Distribution) -> Self {
        QbcLaw {
            u: Distribution::point(1, 0),
            x_given_u: vec![p],
        }
    }
}

/// `p(u) p(x₁|u) p(x₂|u x₁)`; the physical input is `x₁ · |X₂| + x₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct QbcPairLaw {
    pub u: Distribution,
    pub x1_given_u: Vec<Distribution>,
    /// Indexed `u · |X₁| + x₁`.
    pub x2_given_ux1: Vec<Distribution>,
}

impl QbcPairLaw {
    pub fn new(u: Distribution, x1_given_u: Vec<Distribution>, x2_given_ux1: Vec<Distribution>) -> Result<Self> {
        let n1 = x1_given_u.first().map_or(0, |d| d.len());
        let n2 = x2_given_ux1.first().map_or(0, |d| d.len());
        check_rows("p(x1|u)", &x1_given_u, u.len(), n1)?;
        check_rows("p(x2|u,x1)", &x2_given_ux1, u.len() * n1, n2)?;
        Ok(QbcPairLaw { u, x1_given_u, x2_given_ux1 })
    }

    /// Independent inputs without auxiliary.
    pub fn independent(p1: Distribution, p2: Distribution) -> Self {
        let n1 = p1.len();
        QbcPairLaw {
            u: Distribution::point(1, 0),
            x1_given_u: vec![p1],
            x2_given_ux1: vec![p2; n1],
        }
    }

    pub fn x1_size(&self) -> usize {
        self.x1_given_u[0].len()
    }

    pub fn x2_size(&self) -> usize {
        self.x2_given_ux1[0].len()
    }
}

/// Control state on `Q X₁ X₂ Y Z`.
pub fn control_state_mawtc(ch: &CqMaWtc, law: &InputLaw) -> Result<MultipartiteState> {
    if law.x1_size() != ch.x1 || law.x2_size() != ch.x2 {
        return Err(Error::DimensionMismatch(format!(
            "law over {}x{} inputs, channel has {}x{}",
            law.x1_size(),
            law.x2_size(),
            ch.x1,
            ch.x2
        )));
    }
    let nq = law.q_size();
    let mut p = Vec::with_capacity(nq * ch.x1 * ch.x2);
    let mut conds = Vec::with_capacity(p.capacity());
    for q in 0..nq {
        for a in 0..ch.x1 {
            for b in 0..ch.x2 {
                p.push(law.q.get(q) * law.x1_given_q[q].get(a) * law.x2_given_q[q].get(b));
                conds.push(ch.output(a, b).clone());
            }
        }
    }
    cq_state(
        &Distribution::from_weights(&p)?,
        &conds,
        &[
            Register::classical(Q, nq),
            Register::classical(X1, ch.x1),
            Register::classical(X2, ch.x2),
        ],
        &[Register::quantum(Y, ch.dy), Register::quantum(Z, ch.dz)],
    )
}

/// Control state on `Q X₁ X₂ Y` (eavesdropper traced out).
pub fn control_state_sen(ch: &CqMaWtc, law: &InputLaw) -> Result<MultipartiteState> {
    control_state_mawtc(ch, law)?.partial_trace(&[Z])
}

/// Control state on `U₁ U₂ Y Z`.
pub fn control_state_ppqwtc(ch: &PpQwtc, law: &PpLaw) -> Result<MultipartiteState> {
    if law.u1 != ch.u1 || law.u2 != ch.u2 {
        return Err(Error::DimensionMismatch(format!(
            "law over {}x{} inputs, channel has {}x{}",
            law.u1, law.u2, ch.u1, ch.u2
        )));
    }
    let conds: Vec<DensityOperator> = (0..ch.u1)
        .flat_map(|a| (0..ch.u2).map(move |b| (a, b)))
        .map(|(a, b)| ch.output(a, b).clone())
        .collect();
    cq_state(
        &law.joint,
        &conds,
        &[Register::classical(U1, ch.u1), Register::classical(U2, ch.u2)],
        &[Register::quantum(Y, ch.dy), Register::quantum(Z, ch.dz)],
    )
}

/// Control state on `U X Y₁ Y₂`.
pub fn control_state_qbc(ch: &Qbc, law: &QbcLaw) -> Result<MultipartiteState> {
    let nx = law.x_given_u[0].len();
    if nx != ch.x {
        return Err(Error::DimensionMismatch(format!(
            "law over {nx} inputs, channel has {}",
            ch.x
        )));
    }
    let nu = law.u.len();
    let mut p = Vec::with_capacity(nu * nx);
    let mut conds = Vec::with_capacity(nu * nx);
    for u in 0..nu {
        for x in 0..nx {
            p.push(law.u.get(u) * law.x_given_u[u].get(x));
            conds.push(ch.output(x).clone());
        }
    }
    cq_state(
        &Distribution::from_weights(&p)?,
        &conds,
        &[Register::classical(U, nu), Register::classical(X, nx)],
        &[Register::quantum(Y1, ch.d1), Register::quantum(Y2, ch.d2)],
    )
}

/// Control state on `U X₁ X₂ Y₁ Y₂` for a channel whose input alphabet is
/// the pair alphabet `X₁ × X₂`.
pub fn control_state_qbc_pair(ch: &Qbc, law: &QbcPairLaw) -> Result<MultipartiteState> {
    let (n1, n2) = (law.x1_size(), law.x2_size());
    if n1 * n2 != ch.x {
        return Err(Error::DimensionMismatch(format!(
            "pair law over {n1}x{n2} inputs, channel has {}",
            ch.x
        )));
    }
    let nu = law.u.len();
    let mut p = Vec::with_capacity(nu * n1 * n2);
    let mut conds = Vec::with_capacity(p.capacity());
    for u in 0..nu {
        for a in 0..n1 {
            for b in 0..n2 {
                p.push(law.u.get(u) * law.x1_given_u[u].get(a) * law.x2_given_ux1[u * n1 + a].get(b));
                conds.push(ch.output(a * n2 + b).clone());
            }
        }
    }
    cq_state(
        &Distribution::from_weights(&p)?,
        &conds,
        &[
            Register::classical(U, nu),
            Register::classical(X1, n1),
            Register::classical(X2, n2),
        ],
        &[Register::quantum(Y1, ch.d1), Register::quantum(Y2, ch.d2)],
    )
}

/// Three perfectly correlated classical copies `Σ p(x) |xxx⟩⟨xxx|`.
fn threefold(p: &Distribution, base: &str) -> Result<MultipartiteState> {
    let n = p.len();
    let mut diag = vec![0.0; n * n * n];
    for x in 0..n {
        diag[(x * n + x) * n + x] = p.get(x);
    }
    MultipartiteState::new(
        vec![
            Register::classical(base, n),
            Register::classical(&format!("{base}'"), n),
            Register::classical(&format!("{base}''"), n),
        ],
        DensityOperator::from_raw(linalg::diag(&diag)),
    )
}

/// The pre-shared states on `X₁ X₁′ X₁″` and `X₂ X₂′ X₂″`.
pub fn shared_randomness_states(p1: &Distribution, p2: &Distribution) -> Result<(MultipartiteState, MultipartiteState)> {
    Ok((threefold(p1, X1)?, threefold(p2, X2)?))
}

/// View a multiple-access channel as a single-sender channel with
/// `U₁ = X₁`, `U₂ = X₂`.
pub fn mawtc_to_ppqwtc(ch: &CqMaWtc) -> PpQwtc {
    PpQwtc {
        u1: ch.x1,
        u2: ch.x2,
        dy: ch.dy,
        dz: ch.dz,
        encoding: (0..ch.x1 * ch.x2).collect(),
        outputs: ch.table.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use num_complex::Complex64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn orthogonal_mac() -> CqMaWtc {
        let table = (0..4).map(|i| DensityOperator::basis(4, i).tensor(&DensityOperator::basis(2, 0))).collect();
        CqMaWtc::new(2, 2, 4, 2, table).unwrap()
    }

    #[test]
    fn point_mass_single_block() {
        let ch = orthogonal_mac();
        let law = InputLaw::independent(Distribution::point(2, 1), Distribution::point(2, 0));
        let s = control_state_mawtc(&ch, &law).unwrap();
        let blocks = s.condition_on(&[Q, X1, X2]).unwrap();
        let live: Vec<_> = blocks.iter().filter(|b| b.prob > 0.0).collect();
        assert_eq!(live.len(), 1);
        assert_eq!(live[0].value, vec![0, 1, 0]);
        assert_eq!(live[0].state.as_ref().unwrap().matrix(), ch.output(1, 0).matrix());
    }

    #[test]
    fn uniform_orthogonal_four_blocks() {
        let ch = orthogonal_mac();
        let s = control_state_mawtc(&ch, &InputLaw::uniform(2, 2)).unwrap();
        let blocks = s.condition_on(&[X1, X2]).unwrap();
        assert!(blocks.iter().all(|b| (b.prob - 0.25).abs() < 1e-15));
    }

    #[test]
    fn mawtc_triple_sum_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let ch = random::mawtc(2, 3, 2, 2, &mut rng);
        let q = random::distribution(2, &mut rng);
        let r1 = vec![random::distribution(2, &mut rng), random::distribution(2, &mut rng)];
        let r2 = vec![random::distribution(3, &mut rng), random::distribution(3, &mut rng)];
        let law = InputLaw::new(q.clone(), r1.clone(), r2.clone()).unwrap();
        let s = control_state_mawtc(&ch, &law).unwrap();
        let d = 4;
        let mut want = linalg::zeros(2 * 2 * 3 * d);
        for qq in 0..2 {
            for a in 0..2 {
                for b in 0..3 {
                    let w = q.get(qq) * r1[qq].get(a) * r2[qq].get(b);
                    let base = ((qq * 2 + a) * 3 + b) * d;
                    for i in 0..d {
                        for j in 0..d {
                            want[(base + i, base + j)] = ch.output(a, b).matrix()[(i, j)] * w;
                        }
                    }
                }
            }
        }
        assert!(linalg::max_abs(&(s.matrix() - want)) < 1e-15);
        let cl = s.marginal(&[Q, X1, X2]).unwrap();
        for qq in 0..2 {
            for a in 0..2 {
                for b in 0..3 {
                    let k = (qq * 2 + a) * 3 + b;
                    assert!((cl.matrix()[(k, k)].re - q.get(qq) * r1[qq].get(a) * r2[qq].get(b)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sen_state_is_partial_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let ch = random::mawtc(2, 2, 2, 2, &mut rng);
        let law = InputLaw::uniform(2, 2);
        let a = control_state_sen(&ch, &law).unwrap();
        let b = control_state_mawtc(&ch, &law).unwrap().partial_trace(&[Z]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.labels(), vec![Q, X1, X2, Y]);
    }

    #[test]
    fn pp_state_double_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let ch = random::ppqwtc(2, 2, 2, 1, &mut rng);
        let law = PpLaw::new(2, 2, random::distribution(4, &mut rng)).unwrap();
        let s = control_state_ppqwtc(&ch, &law).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                let base = (a * 2 + b) * 2;
                for i in 0..2 {
                    for j in 0..2 {
                        let want = ch.output(a, b).matrix()[(i, j)] * law.get(a, b);
                        assert!((s.matrix()[(base + i, base + j)] - want).norm() < 1e-15);
                    }
                }
            }
        }
        let point = PpLaw::new(2, 2, Distribution::point(4, 3)).unwrap();
        let blocks = control_state_ppqwtc(&ch, &point).unwrap().condition_on(&[U1, U2]).unwrap();
        assert_eq!(blocks.iter().filter(|b| b.prob > 0.0).count(), 1);
    }

    #[test]
    fn qbc_constant_auxiliary_is_cq_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let ch = random::qbc(3, 2, 2, &mut rng);
        let p = random::distribution(3, &mut rng);
        let s = control_state_qbc(&ch, &QbcLaw::without_auxiliary(p.clone())).unwrap();
        let direct = cq_state(&p, ch.table(), &[Register::classical(X, 3)], &[Register::quantum(Y1, 2), Register::quantum(Y2, 2)]).unwrap();
        assert!(linalg::max_abs(&(s.partial_trace(&[U]).unwrap().matrix() - direct.matrix())) < 1e-15);
    }

    #[test]
    fn qbc_identity_law_correlates_u_and_x() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let ch = random::qbc(2, 2, 2, &mut rng);
        let law = QbcLaw::new(Distribution::uniform(2), vec![Distribution::point(2, 0), Distribution::point(2, 1)]).unwrap();
        let ux = control_state_qbc(&ch, &law).unwrap().marginal(&[U, X]).unwrap();
        assert!(linalg::max_abs(&(ux.matrix() - linalg::diag(&[0.5, 0.0, 0.0, 0.5]))) < 1e-15);
    }

    #[test]
    fn shared_randomness_diagonal() {
        let p = Distribution::new(vec![0.3, 0.7]).unwrap();
        let (a, b) = shared_randomness_states(&p, &Distribution::uniform(2)).unwrap();
        assert_eq!(a.labels(), vec!["X1", "X1'", "X1''"]);
        assert_eq!(a.matrix()[(0, 0)].re, 0.3);
        assert_eq!(a.matrix()[(7, 7)].re, 0.7);
        assert_eq!(b.matrix()[(7, 7)].re, 0.5);
        let (c, _) = shared_randomness_states(&Distribution::point(2, 0), &p).unwrap();
        assert_eq!(c.matrix()[(0, 0)].re, 1.0);
        assert_eq!(linalg::trace_re(c.matrix()), 1.0);
    }

    #[test]
    fn conversion_preserves_outputs() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        let ch = random::mawtc(2, 2, 2, 2, &mut rng);
        let pp = mawtc_to_ppqwtc(&ch);
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(pp.output(a, b), ch.output(a, b));
            }
        }
        let p1 = random::distribution(2, &mut rng);
        let p2 = random::distribution(2, &mut rng);
        let s_pp = control_state_ppqwtc(&pp, &PpLaw::independent(&p1, &p2)).unwrap();
        let s_mac = control_state_mawtc(&ch, &InputLaw::independent(p1, p2))
            .unwrap()
            .partial_trace(&[Q])
            .unwrap()
            .relabel(&[(X1, U1), (X2, U2)])
            .unwrap();
        assert!(linalg::max_abs(&(s_pp.matrix() - s_mac.matrix())) < 1e-15);
    }

    #[test]
    fn eve_silent_outputs_share_z() {
        let z = DensityOperator::pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]).unwrap();
        let ys = (0..4).map(|i| DensityOperator::basis(4, i)).collect();
        let ch = CqMaWtc::eve_silent(2, 2, ys, &z).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!(linalg::max_abs(&(ch.z_output(a, b).matrix() - z.matrix())) < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_mismatched_tables() {
        assert!(CqMaWtc::new(2, 2, 2, 1, vec![DensityOperator::basis(2, 0); 3]).is_err());
        assert!(Qbc::new(2, 2, 2, vec![DensityOperator::basis(2, 0); 2]).is_err());
        let ch = orthogonal_mac();
        assert!(control_state_mawtc(&ch, &InputLaw::uniform(3, 2)).is_err());
    }
}
