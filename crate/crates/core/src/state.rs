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

//! Density operators over labeled register sets.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, Spectrum, HERMITIAN_TOL, PSD_TOL, TRACE_TOL};

/// Max off-diagonal coherence tolerated on a classical register.
pub const CLASSICAL_TOL: f64 = 1e-9;
/// Tolerance on probability vectors summing to one.
pub const DISTRIBUTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegisterKind {
    Classical,
    Quantum,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Register {
    pub label: String,
    pub dim: usize,
    pub kind: RegisterKind,
}

impl Register {
    pub fn classical(label: &str, dim: usize) -> Self {
        Register {
            label: label.to_string(),
            dim,
            kind: RegisterKind::Classical,
        }
    }

    pub fn quantum(label: &str, dim: usize) -> Self {
        Register {
            label: label.to_string(),
            dim,
            kind: RegisterKind::Quantum,
        }
    }

    pub fn is_classical(&self) -> bool {
        self.kind == RegisterKind::Classical
    }
}

/// A validated density operator: Hermitian, PSD and unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    mat: CMatrix,
}

impl DensityOperator {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() || mat.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "density operator must be square and nonempty, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let dev = linalg::hermitian_deviation(&mat);
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let mat = linalg::symmetrize(&mat);
        let tr = linalg::trace_re(&mat);
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = Spectrum::of(&mat).min();
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(DensityOperator { mat })
    }

    /// Wrap a matrix known to be a state up to round-off.
    pub(crate) fn from_raw(mat: CMatrix) -> Self {
        DensityOperator { mat }
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if amplitudes.is_empty() || norm2 <= 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let n = amplitudes.len();
        let mat = CMatrix::from_fn(n, n, |i, j| amplitudes[i] * amplitudes[j].conj() / norm2);
        Ok(DensityOperator { mat })
    }

    /// Computational basis state `|i⟩⟨i|`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut mat = linalg::zeros(dim);
        mat[(i, i)] = linalg::re(1.0);
        DensityOperator { mat }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        DensityOperator {
            mat: linalg::identity(dim) * linalg::re(1.0 / dim as f64),
        }
    }

    pub fn diagonal(probs: &[f64]) -> Result<Self> {
        let p = Distribution::new(probs.to_vec())?;
        Ok(DensityOperator {
            mat: linalg::diag(p.probs()),
        })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn tensor(&self, other: &DensityOperator) -> DensityOperator {
        DensityOperator {
            mat: linalg::kron(&self.mat, &other.mat),
        }
    }
}

/// A probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    probs: Vec<f64>,
}

impl Distribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::InvalidDistribution(format!("entry {p} is not a probability")));
        }
        let s: f64 = probs.iter().sum();
        if (s - 1.0).abs() > DISTRIBUTION_TOL {
            return Err(Error::InvalidDistribution(format!("sums to {s}")));
        }
        Ok(Distribution { probs })
    }

    /// Normalize nonnegative weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let s: f64 = weights.iter().sum();
        if !(s > 0.0) || weights.iter().any(|w| *w < 0.0) {
            return Err(Error::InvalidDistribution("weights must be nonnegative with positive sum".into()));
        }
        Ok(Distribution {
            probs: weights.iter().map(|w| w / s).collect(),
        })
    }

    pub fn uniform(n: usize) -> Self {
        Distribution {
            probs: vec![1.0 / n as f64; n],
        }
    }

    pub fn point(n: usize, i: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[i] = 1.0;
        Distribution { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.probs[i]
    }
}

/// One block of a state conditioned on classical registers.
#[derive(Debug, Clone)]
pub struct ConditionalBlock {
    /// Values of the conditioning registers, in the order requested.
    pub value: Vec<usize>,
    pub prob: f64,
    /// Normalized conditional state; `None` when `prob` is zero.
    pub state: Option<MultipartiteState>,
}

/// A density operator on an ordered list of labeled registers.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipartiteState {
    registers: Vec<Register>,
    op: DensityOperator,
}

fn check_labels(registers: &[Register]) -> Result<()> {
    for (i, r) in registers.iter().enumerate() {
        if r.dim == 0 {
            return Err(Error::DimensionMismatch(format!("register {} has dimension 0", r.label)));
        }
        if registers[..i].iter().any(|s| s.label == r.label) {
            return Err(Error::LabelCollision(r.label.clone()));
        }
    }
    Ok(())
}

/// For each flat index over `regs` listed in `order`, the corresponding flat
/// index over `regs` in declared order, split as (selected part, rest part).
fn index_table(dims: &[usize], keep: &[usize]) -> (usize, usize, Vec<Vec<usize>>) {
    let n = dims.len();
    let rest: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
    let mut stride = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let dk: usize = keep.iter().map(|&i| dims[i]).product();
    let dr: usize = rest.iter().map(|&i| dims[i]).product();
    let offsets = |regs: &[usize], mut flat: usize| -> usize {
        let mut off = 0;
        for &r in regs.iter().rev() {
            off += (flat % dims[r]) * stride[r];
            flat /= dims[r];
        }
        off
    };
    let rest_off: Vec<usize> = (0..dr).map(|f| offsets(&rest, f)).collect();
    let table = (0..dk)
        .map(|k| {
            let base = offsets(keep, k);
            rest_off.iter().map(|o| base + o).collect()
        })
        .collect();
    (dk, dr, table)
}

impl MultipartiteState {
    /// Validates dimensions, label uniqueness and classicality.
    pub fn new(registers: Vec<Register>, op: DensityOperator) -> Result<Self> {
        let s = Self::from_parts(registers, op)?;
        s.check_classical()?;
        Ok(s)
    }

    /// Like [`MultipartiteState::new`] without the classicality check.
    pub(crate) fn from_parts(registers: Vec<Register>, op: DensityOperator) -> Result<Self> {
        check_labels(&registers)?;
        let d: usize = registers.iter().map(|r| r.dim).product();
        if d != op.dim() {
            return Err(Error::DimensionMismatch(format!(
                "registers span dimension {d}, operator has {}",
                op.dim()
            )));
        }
        Ok(MultipartiteState { registers, op })
    }

    fn check_classical(&self) -> Result<()> {
        let classical: Vec<&str> = self
            .registers
            .iter()
            .filter(|r| r.is_classical())
            .map(|r| r.label.as_str())
            .collect();
        if classical.is_empty() {
            return Ok(());
        }
        let m = self.marginal(&classical)?;
        let mat = m.matrix();
        let n = mat.nrows();
        for i in 0..n {
            for j in 0..n {
                if i != j && mat[(i, j)].norm() > CLASSICAL_TOL {
                    return Err(Error::NotClassical(classical.join(",")));
                }
            }
        }
        Ok(())
    }

    /// Single-register state.
    pub fn single(register: Register, op: DensityOperator) -> Result<Self> {
        Self::new(vec![register], op)
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn op(&self) -> &DensityOperator {
        &self.op
    }

    pub fn matrix(&self) -> &CMatrix {
        self.op.matrix()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.registers.iter().map(|r| r.label.as_str()).collect()
    }

    pub fn register(&self, label: &str) -> Result<&Register> {
        self.registers
            .iter()
            .find(|r| r.label == label)
            .ok_or_else(|| Error::UnknownRegister(label.to_string()))
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.registers
            .iter()
            .position(|r| r.label == label)
            .ok_or_else(|| Error::UnknownRegister(label.to_string()))
    }

    fn positions(&self, labels: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let p = self.position(l)?;
            if out.contains(&p) {
                return Err(Error::LabelCollision(l.to_string()));
            }
            out.push(p);
        }
        Ok(out)
    }

    fn dims(&self) -> Vec<usize> {
        self.registers.iter().map(|r| r.dim).collect()
    }

    pub fn tensor(&self, other: &MultipartiteState) -> Result<Self> {
        let mut regs = self.registers.clone();
        regs.extend(other.registers.iter().cloned());
        check_labels(&regs)?;
        Ok(MultipartiteState {
            registers: regs,
            op: self.op.tensor(&other.op),
        })
    }

    /// Reduced state on `keep`, with registers in the order given.
    pub fn marginal(&self, keep: &[&str]) -> Result<Self> {
        let pos = self.positions(keep)?;
        let (dk, dr, table) = index_table(&self.dims(), &pos);
        let m = self.matrix();
        let out = CMatrix::from_fn(dk, dk, |a, b| {
            let (ra, rb) = (&table[a], &table[b]);
            let mut acc = Complex64::new(0.0, 0.0);
            for r in 0..dr {
                acc += m[(ra[r], rb[r])];
            }
            acc
        });
        Ok(MultipartiteState {
            registers: pos.iter().map(|&p| self.registers[p].clone()).collect(),
            op: DensityOperator::from_raw(out),
        })
    }

    /// Trace out `drop`; remaining registers keep their declared order.
    pub fn partial_trace(&self, drop: &[&str]) -> Result<Self> {
        self.positions(drop)?;
        let keep: Vec<&str> = self
            .registers
            .iter()
            .map(|r| r.label.as_str())
            .filter(|l| !drop.contains(l))
            .collect();
        self.marginal(&keep)
    }

    /// Same state with registers permuted into `order` (all labels required).
    pub fn reorder(&self, order: &[&str]) -> Result<Self> {
        if order.len() != self.registers.len() {
            return Err(Error::DimensionMismatch(format!(
                "reorder needs all {} registers, got {}",
                self.registers.len(),
                order.len()
            )));
        }
        self.marginal(order)
    }

    /// `ρ_A ⊗ ρ_B` with registers `a` then `b`.
    pub fn product_of_marginals(&self, a: &[&str], b: &[&str]) -> Result<Self> {
        self.marginal(a)?.tensor(&self.marginal(b)?)
    }

    /// Split along the values of classical registers `z`.
    ///
    /// Each block carries the probability of its value and the normalized
    /// state of the remaining registers (declared order).
    pub fn condition_on(&self, z: &[&str]) -> Result<Vec<ConditionalBlock>> {
        let pos = self.positions(z)?;
        for &p in &pos {
            if !self.registers[p].is_classical() {
                return Err(Error::NotClassical(self.registers[p].label.clone()));
            }
        }
        let (dz, dr, table) = index_table(&self.dims(), &pos);
        let m = self.matrix();
        for a in 0..dz {
            for b in 0..dz {
                if a == b {
                    continue;
                }
                for r in 0..dr {
                    for s in 0..dr {
                        if m[(table[a][r], table[b][s])].norm() > CLASSICAL_TOL {
                            return Err(Error::NotClassical(z.join(",")));
                        }
                    }
                }
            }
        }
        let rest: Vec<Register> = self
            .registers
            .iter()
            .enumerate()
            .filter(|(i, _)| !pos.contains(i))
            .map(|(_, r)| r.clone())
            .collect();
        let zdims: Vec<usize> = pos.iter().map(|&p| self.registers[p].dim).collect();
        let mut out = Vec::with_capacity(dz);
        for (a, idx) in table.iter().enumerate().take(dz) {
            let block = CMatrix::from_fn(dr, dr, |i, j| m[(idx[i], idx[j])]);
            let prob = linalg::trace_re(&block).max(0.0);
            let state = if prob > 0.0 {
                Some(MultipartiteState {
                    registers: rest.clone(),
                    op: DensityOperator::from_raw(block * linalg::re(1.0 / prob)),
                })
            } else {
                None
            };
            out.push(ConditionalBlock {
                value: unflatten(a, &zdims),
                prob,
                state,
            });
        }
        Ok(out)
    }

    /// `ρ^{⊗n}` with the copies of each register merged into one register
    /// of dimension `d^n` under the same label.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("tensor power needs n >= 1".into()));
        }
        let k = self.registers.len();
        let mut mat = self.matrix().clone();
        for _ in 1..n {
            mat = linalg::kron(&mat, self.matrix());
        }
        // copy c of register r sits at position c*k + r; gather by register
        let dims: Vec<usize> = (0..n).flat_map(|_| self.dims()).collect();
        let order: Vec<usize> = (0..k).flat_map(|r| (0..n).map(move |c| c * k + r)).collect();
        let (d, _, table) = index_table(&dims, &order);
        let out = CMatrix::from_fn(d, d, |a, b| mat[(table[a][0], table[b][0])]);
        let registers = self
            .registers
            .iter()
            .map(|r| Register {
                label: r.label.clone(),
                dim: r.dim.pow(n as u32),
                kind: r.kind,
            })
            .collect();
        Ok(MultipartiteState {
            registers,
            op: DensityOperator::from_raw(out),
        })
    }

    /// Rename registers; `map` pairs old and new labels.
    pub fn relabel(&self, map: &[(&str, &str)]) -> Result<Self> {
        let mut regs = self.registers.clone();
        for (old, new) in map {
            let p = self.position(old)?;
            regs[p].label = new.to_string();
        }
        check_labels(&regs)?;
        Ok(MultipartiteState {
            registers: regs,
            op: self.op.clone(),
        })
    }
}

/// Mixed-radix digits of `flat` (most significant first).
pub fn unflatten(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = flat % dims[i];
        flat /= dims[i];
    }
    out
}

/// Inverse of [`unflatten`].
pub fn flatten(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (d, n)| acc * n + d)
}

/// `Σ_x p(x) |x⟩⟨x| ⊗ ρ^x` over classical registers (flat index `x`)
/// followed by quantum registers.
pub fn cq_state(
    p: &Distribution,
    conditionals: &[DensityOperator],
    classical: &[Register],
    quantum: &[Register],
) -> Result<MultipartiteState> {
    let dc: usize = classical.iter().map(|r| r.dim).product();
    let dq: usize = quantum.iter().map(|r| r.dim).product();
    if p.len() != dc || conditionals.len() != dc {
        return Err(Error::DimensionMismatch(format!(
            "classical registers span {dc} values, got {} probabilities and {} conditionals",
            p.len(),
            conditionals.len()
        )));
    }
    if let Some(c) = conditionals.iter().find(|c| c.dim() != dq) {
        return Err(Error::DimensionMismatch(format!(
            "conditional of dimension {}, quantum registers span {dq}",
            c.dim()
        )));
    }
    if let Some(r) = classical.iter().find(|r| !r.is_classical()) {
        return Err(Error::NotClassical(r.label.clone()));
    }
    let mut mat = linalg::zeros(dc * dq);
    for (x, rho) in conditionals.iter().enumerate() {
        let w = p.get(x);
        if w == 0.0 {
            continue;
        }
        let base = x * dq;
        for i in 0..dq {
            for j in 0..dq {
                mat[(base + i, base + j)] = rho.matrix()[(i, j)] * w;
            }
        }
    }
    let mut regs = classical.to_vec();
    regs.extend(quantum.iter().cloned());
    MultipartiteState::from_parts(regs, DensityOperator::from_raw(mat))
}

fn same_dim(rho: &CMatrix, sigma: &CMatrix) -> Result<()> {
    if rho.nrows() != sigma.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "operators of dimension {} and {}",
            rho.nrows(),
            sigma.nrows()
        )));
    }
    Ok(())
}

/// `Tr|σ − ρ|`, in `[0, 2]`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho.matrix(), sigma.matrix())?;
    Ok(linalg::trace_norm(&(sigma.matrix() - rho.matrix())))
}

/// `‖√ρ √σ‖₁` on raw PSD matrices.
pub(crate) fn root_fidelity_raw(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let sr = linalg::sqrt_psd(rho);
    linalg::trace_sqrt_psd(&(&sr * sigma * &sr))
}

/// `F(ρ, σ) = ‖√ρ √σ‖₁²`, clamped to `[0, 1]`.
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    same_dim(rho.matrix(), sigma.matrix())?;
    let f = root_fidelity_raw(rho.matrix(), sigma.matrix());
    Ok((f * f).clamp(0.0, 1.0))
}

pub(crate) fn purified_distance_raw(rho: &CMatrix, sigma: &CMatrix) -> f64 {
    let f = root_fidelity_raw(rho, sigma);
    (1.0 - (f * f).min(1.0)).max(0.0).sqrt()
}

/// `P(ρ, σ) = √(1 − F(ρ, σ))` with `F` the squared root fidelity.
pub fn purified_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    let f = fidelity(rho, sigma)?;
    Ok((1.0 - f).max(0.0).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubit(label: &str) -> Register {
        Register::quantum(label, 2)
    }

    #[test]
    fn maximally_mixed_composition() {
        let a = MultipartiteState::single(qubit("A"), DensityOperator::maximally_mixed(2)).unwrap();
        let b = MultipartiteState::single(qubit("B"), DensityOperator::maximally_mixed(2)).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert!(linalg::max_abs(&(ab.matrix() - DensityOperator::maximally_mixed(4).matrix())) < 1e-15);
    }

    #[test]
    fn basis_composition() {
        let a = MultipartiteState::single(qubit("A"), DensityOperator::basis(2, 0)).unwrap();
        let b = MultipartiteState::single(qubit("B"), DensityOperator::basis(2, 1)).unwrap();
        let ab = a.tensor(&b).unwrap();
        assert_eq!(ab.matrix()[(1, 1)].re, 1.0);
        assert!((linalg::trace_re(ab.matrix()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tensor_rejects_collision() {
        let a = MultipartiteState::single(qubit("A"), DensityOperator::basis(2, 0)).unwrap();
        assert_eq!(a.tensor(&a), Err(Error::LabelCollision("A".into())));
    }

    #[test]
    fn bell_pair_marginal_is_maximally_mixed() {
        let s = 0.5f64.sqrt();
        let bell = DensityOperator::pure(&[
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(s, 0.0),
        ])
        .unwrap();
        let st = MultipartiteState::new(vec![qubit("A"), qubit("B")], bell).unwrap();
        let a = st.partial_trace(&["B"]).unwrap();
        assert!(linalg::max_abs(&(a.matrix() - DensityOperator::maximally_mixed(2).matrix())) < 1e-15);
    }

    #[test]
    fn unknown_label_rejected() {
        let a = MultipartiteState::single(qubit("A"), DensityOperator::basis(2, 0)).unwrap();
        assert_eq!(a.partial_trace(&["Q"]), Err(Error::UnknownRegister("Q".into())));
    }

    #[test]
    fn partial_trace_matches_double_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rho = random::density(6, &mut rng);
        let st = MultipartiteState::new(vec![qubit("A"), Register::quantum("B", 3)], rho.clone()).unwrap();
        let a = st.partial_trace(&["B"]).unwrap();
        let b = st.partial_trace(&["A"]).unwrap();
        let m = rho.matrix();
        for i in 0..2 {
            for j in 0..2 {
                let want: Complex64 = (0..3).map(|k| m[(i * 3 + k, j * 3 + k)]).sum();
                assert!((a.matrix()[(i, j)] - want).norm() < 1e-15);
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let want: Complex64 = (0..2).map(|k| m[(k * 3 + i, k * 3 + j)]).sum();
                assert!((b.matrix()[(i, j)] - want).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn reorder_swaps_tensor_factors() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = MultipartiteState::single(qubit("A"), random::density(2, &mut rng)).unwrap();
        let b = MultipartiteState::single(Register::quantum("B", 3), random::density(3, &mut rng)).unwrap();
        let ab = a.tensor(&b).unwrap().reorder(&["B", "A"]).unwrap();
        let ba = b.tensor(&a).unwrap();
        assert!(linalg::max_abs(&(ab.matrix() - ba.matrix())) < 1e-15);
        assert_eq!(ab.labels(), vec!["B", "A"]);
    }

    #[test]
    fn trace_distance_anchors() {
        let r = DensityOperator::diagonal(&[0.9, 0.1]).unwrap();
        let s = DensityOperator::maximally_mixed(2);
        assert!((trace_distance(&r, &s).unwrap() - 0.8).abs() < 1e-12);
        let z = DensityOperator::basis(2, 0);
        let o = DensityOperator::basis(2, 1);
        assert!((trace_distance(&z, &o).unwrap() - 2.0).abs() < 1e-12);
        assert!(trace_distance(&r, &r).unwrap().abs() < 1e-12);
    }

    #[test]
    fn fidelity_anchors() {
        let z = DensityOperator::basis(2, 0);
        let o = DensityOperator::basis(2, 1);
        assert!((fidelity(&z, &z).unwrap() - 1.0).abs() < 1e-12);
        assert!(purified_distance(&z, &z).unwrap() < 1e-6);
        assert!(fidelity(&z, &o).unwrap().abs() < 1e-12);
        assert!((purified_distance(&z, &o).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pure_fidelity_reduces_to_overlap() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let psi = random::state_vector(3, &mut rng);
            let pure = DensityOperator::pure(&psi).unwrap();
            let rho = random::density(3, &mut rng);
            let v = nalgebra::DVector::from_column_slice(&psi);
            let overlap = v.dotc(&(rho.matrix() * &v)).re;
            assert!((fidelity(&pure, &rho).unwrap() - overlap).abs() < 1e-9);
        }
    }

    #[test]
    fn cq_state_block_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let p = random::distribution(3, &mut rng);
        let conds: Vec<DensityOperator> = (0..3).map(|_| random::density(2, &mut rng)).collect();
        let st = cq_state(&p, &conds, &[Register::classical("X", 3)], &[qubit("Y")]).unwrap();
        let m = st.matrix();
        for x in 0..3 {
            for y in 0..3 {
                for i in 0..2 {
                    for j in 0..2 {
                        let want = if x == y { conds[x].matrix()[(i, j)] * p.get(x) } else { Complex64::new(0.0, 0.0) };
                        assert!((m[(x * 2 + i, y * 2 + j)] - want).norm() < 1e-15);
                    }
                }
            }
        }
        let px = st.partial_trace(&["Y"]).unwrap();
        for x in 0..3 {
            assert!((px.matrix()[(x, x)].re - p.get(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_bit_with_basis_outputs() {
        let conds = [DensityOperator::basis(2, 0), DensityOperator::basis(2, 1)];
        let st = cq_state(&Distribution::uniform(2), &conds, &[Register::classical("X", 2)], &[qubit("Y")]).unwrap();
        let want = linalg::diag(&[0.5, 0.0, 0.0, 0.5]);
        assert!(linalg::max_abs(&(st.matrix() - want)) < 1e-15);
    }

    #[test]
    fn condition_on_recovers_conditionals() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = Distribution::new(vec![0.25, 0.75, 0.0]).unwrap();
        let conds: Vec<DensityOperator> = (0..3).map(|_| random::density(2, &mut rng)).collect();
        let st = cq_state(&p, &conds, &[Register::classical("X", 3)], &[qubit("Y")]).unwrap();
        let blocks = st.condition_on(&["X"]).unwrap();
        assert_eq!(blocks.len(), 3);
        assert!(blocks[2].state.is_none());
        let b1 = blocks[1].state.as_ref().unwrap();
        assert!(linalg::max_abs(&(b1.matrix() - conds[1].matrix())) < 1e-14);
        assert!(matches!(st.condition_on(&["Y"]), Err(Error::NotClassical(_))));
    }

    #[test]
    fn rejects_coherent_classical_register() {
        let s = 0.5f64.sqrt();
        let plus = DensityOperator::pure(&[Complex64::new(s, 0.0), Complex64::new(s, 0.0)]).unwrap();
        assert!(matches!(
            MultipartiteState::single(Register::classical("X", 2), plus),
            Err(Error::NotClassical(_))
        ));
    }

    #[test]
    fn tensor_power_groups_copies() {
        let conds = [DensityOperator::basis(2, 0), DensityOperator::basis(2, 1)];
        let st = cq_state(&Distribution::uniform(2), &conds, &[Register::classical("X", 2)], &[qubit("Y")]).unwrap();
        let st2 = st.tensor_power(2).unwrap();
        assert_eq!(st2.registers()[0].dim, 4);
        // X and Y stay perfectly correlated: diag over (x1 x2, y1 y2) with x = y
        for x in 0..4 {
            assert!((st2.matrix()[(x * 4 + x, x * 4 + x)].re - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn density_validation() {
        assert!(matches!(DensityOperator::new(linalg::diag(&[0.5, 0.6])), Err(Error::InvalidState(_))));
        assert!(matches!(DensityOperator::new(linalg::diag(&[1.5, -0.5])), Err(Error::InvalidState(_))));
        let mut m = linalg::diag(&[0.5, 0.5]);
        m[(0, 1)] = linalg::re(0.1);
        assert!(matches!(DensityOperator::new(m), Err(Error::NotHermitian(_))));
    }
}
