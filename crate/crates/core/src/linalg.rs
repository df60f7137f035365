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

//! Dense complex Hermitian linear algebra.
//!
//! Matrices are `nalgebra` dense complex matrices. Spectral work goes through
//! [`Spectrum`], which first splits the index set into blocks that no input
//! matrix couples (exact zeros off the blocks) and diagonalizes each block on
//! its own. Classical registers make almost every operator in this crate
//! block-diagonal, so this is where most of the speed comes from.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Max entrywise deviation from Hermiticity accepted on input.
pub const HERMITIAN_TOL: f64 = 1e-9;
/// Most negative eigenvalue accepted for a PSD operator.
pub const PSD_TOL: f64 = 1e-9;
/// Max deviation of a density operator's trace from one.
pub const TRACE_TOL: f64 = 1e-9;
/// Max-norm reconstruction error guaranteed by [`eigh`].
pub const RECONSTRUCTION_TOL: f64 = 1e-8;
/// Eigenvalues at or below this fraction of the largest are round-off for
/// square roots.
pub const ROUNDOFF_REL: f64 = 1e-13;
/// Eigenvalues at or below this fraction of the largest one are outside the support.
pub const SUPPORT_REL_TOL: f64 = 1e-9;

#[inline]
pub fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(n: usize) -> CMatrix {
    CMatrix::zeros(n, n)
}

/// Diagonal matrix with real entries.
pub fn diag(values: &[f64]) -> CMatrix {
    let mut m = zeros(values.len());
    for (i, v) in values.iter().enumerate() {
        m[(i, i)] = re(*v);
    }
    m
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace_re(a: &CMatrix) -> f64 {
    a.diagonal().iter().map(|z| z.re).sum()
}

/// `Tr{ab}` without forming the product.
pub fn trace_product_re(a: &CMatrix, b: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            let x = a[(i, k)];
            if x != Complex64::new(0.0, 0.0) {
                acc += (x * b[(k, i)]).re;
            }
        }
    }
    acc
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// `max |a − a†|` over entries.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// `(a + a†) / 2`.
pub fn symmetrize(a: &CMatrix) -> CMatrix {
    (a + a.adjoint()) * re(0.5)
}

/// Partition of `0..n` into blocks such that every supplied matrix is
/// block-diagonal with respect to it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn trivial(n: usize) -> Self {
        Partition {
            n,
            blocks: vec![(0..n).collect()],
        }
    }

    /// Finest partition compatible with the nonzero pattern of every matrix.
    pub fn of(mats: &[&CMatrix]) -> Self {
        let n = mats.first().map_or(0, |m| m.nrows());
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let zero = Complex64::new(0.0, 0.0);
        for m in mats {
            for j in 0..n {
                for i in 0..n {
                    if i != j && m[(i, j)] != zero {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        if a != b {
                            parent[a.max(b)] = a.min(b);
                        }
                    }
                }
            }
        }
        let mut root_to_block = vec![usize::MAX; n];
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            if root_to_block[r] == usize::MAX {
                root_to_block[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[root_to_block[r]].push(i);
        }
        Partition { n, blocks }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }
}

fn sub_block(a: &CMatrix, idx: &[usize]) -> CMatrix {
    CMatrix::from_fn(idx.len(), idx.len(), |i, j| a[(idx[i], idx[j])])
}

/// One diagonal block of a [`Spectrum`].
#[derive(Debug, Clone)]
pub struct SpecBlock {
    /// Global indices spanned by this block.
    pub idx: Vec<usize>,
    pub values: Vec<f64>,
    /// Columns are eigenvectors in block-local coordinates.
    pub vectors: CMatrix,
}

/// Eigen-decomposition of a Hermitian matrix, stored blockwise.
#[derive(Debug, Clone)]
pub struct Spectrum {
    n: usize,
    blocks: Vec<SpecBlock>,
}

impl Spectrum {
    /// Diagonalize `h` (symmetrized first) on its own block structure.
    pub fn of(h: &CMatrix) -> Self {
        Self::with_partition(h, &Partition::of(&[h]))
    }

    /// Diagonalize `h` on a partition known to be compatible with it.
    pub fn with_partition(h: &CMatrix, partition: &Partition) -> Self {
        let blocks = partition
            .blocks()
            .iter()
            .map(|idx| {
                let sub = symmetrize(&sub_block(h, idx));
                let eig = sub.symmetric_eigen();
                SpecBlock {
                    idx: idx.clone(),
                    values: eig.eigenvalues.iter().copied().collect(),
                    vectors: eig.eigenvectors,
                }
            })
            .collect();
        Spectrum { n: h.nrows(), blocks }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[SpecBlock] {
        &self.blocks
    }

    /// All eigenvalues, ascending.
    pub fn values(&self) -> Vec<f64> {
        let mut v: Vec<f64> = self.blocks.iter().flat_map(|b| b.values.iter().copied()).collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    pub fn max(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.values.iter().copied())
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.blocks
            .iter()
            .flat_map(|b| b.values.iter().copied())
            .fold(f64::INFINITY, f64::min)
    }

    /// Threshold below which an eigenvalue counts as outside the support.
    pub fn support_threshold(&self) -> f64 {
        let scale = self
            .blocks
            .iter()
            .flat_map(|b| b.values.iter().map(|v| v.abs()))
            .fold(0.0, f64::max);
        SUPPORT_REL_TOL * scale
    }

    /// `⟨v|a|v⟩` for every eigenvector, grouped like the blocks.
    pub fn expectations(&self, a: &CMatrix) -> Vec<Vec<f64>> {
        self.blocks
            .iter()
            .map(|b| {
                let sub = sub_block(a, &b.idx);
                let av = &sub * &b.vectors;
                (0..b.values.len())
                    .map(|k| b.vectors.column(k).dotc(&av.column(k)).re)
                    .collect()
            })
            .collect()
    }

    /// `Σ w(block, k, λ) |v⟩⟨v|` over all eigenpairs.
    pub fn assemble<F>(&self, weight: F) -> CMatrix
    where
        F: Fn(usize, usize, f64) -> f64,
    {
        let mut out = zeros(self.n);
        for (bi, b) in self.blocks.iter().enumerate() {
            let m = b.values.len();
            let mut scaled = b.vectors.clone();
            let mut any = false;
            for k in 0..m {
                let w = weight(bi, k, b.values[k]);
                if w != 0.0 {
                    any = true;
                }
                scaled.column_mut(k).scale_mut(w);
            }
            if !any {
                continue;
            }
            let local = &scaled * b.vectors.adjoint();
            for (i, &gi) in b.idx.iter().enumerate() {
                for (j, &gj) in b.idx.iter().enumerate() {
                    out[(gi, gj)] = local[(i, j)];
                }
            }
        }
        out
    }

    /// `f(h)` for a real function of the eigenvalues.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> CMatrix {
        self.assemble(|_, _, v| f(v))
    }

    /// Eigenvalues ascending with the matching unitary (full, dense).
    pub fn into_sorted(self) -> Eigh {
        let mut pairs: Vec<(f64, usize, usize)> = Vec::with_capacity(self.n);
        for (bi, b) in self.blocks.iter().enumerate() {
            for (k, v) in b.values.iter().enumerate() {
                pairs.push((*v, bi, k));
            }
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut vectors = zeros(self.n);
        for (col, (_, bi, k)) in pairs.iter().enumerate() {
            let b = &self.blocks[*bi];
            for (i, &gi) in b.idx.iter().enumerate() {
                vectors[(gi, col)] = b.vectors[(i, *k)];
            }
        }
        Eigh {
            values: pairs.iter().map(|p| p.0).collect(),
            vectors,
        }
    }
}

/// Eigenvalues (ascending) and eigenvectors (columns) of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl Eigh {
    pub fn reconstruct(&self) -> CMatrix {
        let d = diag(&self.values);
        &self.vectors * d * self.vectors.adjoint()
    }
}

/// Hermitian eigen-decomposition. Rejects inputs further than
/// [`HERMITIAN_TOL`] from Hermitian; symmetrizes the rest.
pub fn eigh(h: &CMatrix) -> Result<Eigh> {
    if !h.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "eigh needs a square matrix, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let dev = hermitian_deviation(h);
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    Ok(Spectrum::of(h).into_sorted())
}

pub fn min_eigenvalue(h: &CMatrix) -> f64 {
    Spectrum::of(h).min()
}

pub fn max_eigenvalue(h: &CMatrix) -> f64 {
    Spectrum::of(h).max()
}

/// Square root of a PSD matrix; negatives and round-off are clipped to zero.
pub fn sqrt_psd(a: &CMatrix) -> CMatrix {
    let s = Spectrum::of(a);
    let floor = ROUNDOFF_REL * s.max().max(0.0);
    s.map(|v| if v > floor { v.sqrt() } else { 0.0 })
}

/// `Tr √a` for PSD `a`, with the clipping of [`sqrt_psd`].
pub fn trace_sqrt_psd(a: &CMatrix) -> f64 {
    let v = Spectrum::of(a).values();
    let floor = ROUNDOFF_REL * v.last().copied().unwrap_or(0.0).max(0.0);
    v.iter().filter(|x| **x > floor).map(|x| x.sqrt()).sum()
}

/// `a^{-1/2}` on the support of `a`, zero elsewhere.
pub fn pinv_sqrt(a: &CMatrix) -> CMatrix {
    let s = Spectrum::of(a);
    let thr = s.support_threshold();
    s.map(|v| if v > thr { 1.0 / v.sqrt() } else { 0.0 })
}

/// Projector onto the support of a PSD matrix.
pub fn support_projector(a: &CMatrix) -> CMatrix {
    let s = Spectrum::of(a);
    let thr = s.support_threshold();
    s.map(|v| if v > thr { 1.0 } else { 0.0 })
}

/// `a^p` on the support of a PSD matrix, zero elsewhere.
pub fn psd_power(a: &CMatrix, p: f64) -> CMatrix {
    let s = Spectrum::of(a);
    let thr = s.support_threshold();
    s.map(|v| if v > thr { v.powf(p) } else { 0.0 })
}

/// `Tr|a|` for Hermitian `a`.
pub fn trace_norm(a: &CMatrix) -> f64 {
    Spectrum::of(a).values().iter().map(|v| v.abs()).sum()
}

/// Largest entrywise norm of the commutator `[a, b]`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    max_abs(&(a * b - b * a))
}
