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

//! Random codebooks for position-based coding.
//!
//! Positions are flattened as `m · |K| + k`. A conditional codebook holds
//! one sub-codebook per parent position, drawn from the law conditioned on
//! the parent's symbol.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution as _;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::state::{unflatten, Distribution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Codebook {
    alphabet: usize,
    messages: usize,
    keys: usize,
    parents: usize,
    entries: Vec<usize>,
    seed: Option<u64>,
}

fn sampler(d: &Distribution) -> WeightedIndex<f64> {
    WeightedIndex::new(d.probs()).expect("valid distribution has positive mass")
}

fn check_sizes(messages: usize, keys: usize) -> Result<()> {
    if messages == 0 || keys == 0 {
        return Err(Error::InvalidParameter(format!("codebook sizes |M| = {messages}, |K| = {keys}")));
    }
    Ok(())
}

impl Codebook {
    pub fn from_entries(alphabet: usize, messages: usize, keys: usize, entries: Vec<usize>) -> Result<Self> {
        Self::conditional_from_entries(alphabet, 1, messages, keys, entries)
    }

    pub fn conditional_from_entries(
        alphabet: usize,
        parents: usize,
        messages: usize,
        keys: usize,
        entries: Vec<usize>,
    ) -> Result<Self> {
        check_sizes(messages, keys)?;
        if entries.len() != parents * messages * keys {
            return Err(Error::DimensionMismatch(format!(
                "{} codebook entries, expected {}",
                entries.len(),
                parents * messages * keys
            )));
        }
        if let Some(x) = entries.iter().find(|x| **x >= alphabet) {
            return Err(Error::DimensionMismatch(format!("symbol {x} outside alphabet of size {alphabet}")));
        }
        Ok(Codebook { alphabet, messages, keys, parents, entries, seed: None })
    }

    /// I.i.d. entries from `law`, reproducible from `seed`.
    pub fn sample(law: &Distribution, messages: usize, keys: usize, seed: u64) -> Result<Self> {
        check_sizes(messages, keys)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = sampler(law);
        let entries = (0..messages * keys).map(|_| w.sample(&mut rng)).collect();
        Ok(Codebook { alphabet: law.len(), messages, keys, parents: 1, entries, seed: Some(seed) })
    }

    /// One sub-codebook per parent symbol, drawn from `rows[parent]`.
    pub fn sample_conditional(
        rows: &[Distribution],
        parent_symbols: &[usize],
        messages: usize,
        keys: usize,
        seed: u64,
    ) -> Result<Self> {
        check_sizes(messages, keys)?;
        let alphabet = rows.first().map_or(0, Distribution::len);
        if let Some(p) = parent_symbols.iter().find(|p| **p >= rows.len()) {
            return Err(Error::DimensionMismatch(format!("parent symbol {p} has no conditional law")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let samplers: Vec<_> = rows.iter().map(sampler).collect();
        let mut entries = Vec::with_capacity(parent_symbols.len() * messages * keys);
        for p in parent_symbols {
            for _ in 0..messages * keys {
                entries.push(samplers[*p].sample(&mut rng));
            }
        }
        Ok(Codebook {
            alphabet,
            messages,
            keys,
            parents: parent_symbols.len(),
            entries,
            seed: Some(seed),
        })
    }

    /// Every unconditional codebook with its probability under `law`.
    pub fn realizations(law: &Distribution, messages: usize, keys: usize) -> Result<Vec<(Codebook, f64)>> {
        check_sizes(messages, keys)?;
        let n = messages * keys;
        let count = (law.len() as u64)
            .checked_pow(n as u32)
            .filter(|c| *c <= 1 << 24)
            .ok_or(Error::DimensionCap { dim: usize::MAX, cap: 1 << 24 })? as usize;
        let dims = vec![law.len(); n];
        Ok((0..count)
            .map(|i| {
                let entries = unflatten(i, &dims);
                let p = entries.iter().map(|x| law.get(*x)).product();
                (Codebook { alphabet: law.len(), messages, keys, parents: 1, entries, seed: None }, p)
            })
            .collect())
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn messages(&self) -> usize {
        self.messages
    }

    pub fn keys(&self) -> usize {
        self.keys
    }

    pub fn parents(&self) -> usize {
        self.parents
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Positions per parent, `|M||K|`.
    pub fn positions(&self) -> usize {
        self.messages * self.keys
    }

    pub fn message_of(&self, position: usize) -> usize {
        position / self.keys
    }

    /// Symbol at `position` of an unconditional codebook.
    pub fn symbol(&self, position: usize) -> usize {
        self.entries[position]
    }

    /// Symbol at `position` of the sub-codebook under `parent`.
    pub fn conditional_symbol(&self, parent: usize, position: usize) -> usize {
        self.entries[parent * self.positions() + position]
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_sampling_is_reproducible() {
        let law = Distribution::new(vec![0.2, 0.3, 0.5]).unwrap();
        let a = Codebook::sample(&law, 4, 3, 9).unwrap();
        assert_eq!(a, Codebook::sample(&law, 4, 3, 9).unwrap());
        assert_ne!(a.entries(), Codebook::sample(&law, 4, 3, 10).unwrap().entries());
        assert_eq!(a.positions(), 12);
        assert_eq!(a.message_of(7), 2);
    }

    #[test]
    fn point_mass_law_fills_table() {
        let cb = Codebook::sample(&Distribution::point(3, 2), 2, 2, 1).unwrap();
        assert!(cb.entries().iter().all(|x| *x == 2));
    }

    #[test]
    fn realizations_sum_to_one() {
        let law = Distribution::new(vec![0.3, 0.7]).unwrap();
        let all = Codebook::realizations(&law, 2, 2).unwrap();
        assert_eq!(all.len(), 16);
        assert!((all.iter().map(|(_, p)| p).sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conditional_rows_follow_parents() {
        let rows = vec![Distribution::point(2, 0), Distribution::point(2, 1)];
        let cb = Codebook::sample_conditional(&rows, &[1, 0, 1], 1, 2, 3).unwrap();
        assert_eq!(cb.entries(), &[1, 1, 0, 0, 1, 1]);
        assert_eq!(cb.conditional_symbol(1, 1), 0);
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(Codebook::from_entries(2, 2, 1, vec![0, 2]).is_err());
        assert!(Codebook::from_entries(2, 2, 1, vec![0]).is_err());
        assert!(Codebook::sample(&Distribution::uniform(2), 0, 1, 0).is_err());
    }
}
