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

//! The channel specification file: TOML with a mandatory schema version,
//! alphabet sizes, one output matrix per input tuple (row-major `[re, im]`
//! pairs), an optional input law and optional smoothing parameters.

use serde::{Deserialize, Serialize};

use qwiretap_core::channel::{CqMaWtc, InputLaw, PpLaw, PpQwtc, Qbc, QbcLaw, QbcPairLaw};
use qwiretap_core::linalg::CMatrix;
use qwiretap_core::num_complex::Complex64;
use qwiretap_core::quantities::SmoothingParams;
use qwiretap_core::state::{flatten, unflatten, DensityOperator, Distribution};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChannelKind {
    Mawtc,
    Ppqwtc,
    Qbc,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sizes {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u2: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y1: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y2: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputEntry {
    pub input: Vec<usize>,
    pub matrix: Vec<[f64; 2]>,
}

/// Input law. Missing pieces default to uniform.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LawSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p1: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p2: Option<Vec<f64>>,
    /// Joint law of the two inputs, row-major.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint: Option<Vec<f64>>,
    /// Broadcast auxiliary law.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_given_u: Option<Vec<Vec<f64>>>,
    /// Broadcast pair split: `|X| = x1_size · (|X| / x1_size)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x1_size: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_prime: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub o1: Option<f64>,
}

impl ParamsSpec {
    pub fn resolve(&self) -> SmoothingParams {
        let d = SmoothingParams::default();
        SmoothingParams {
            eps: self.eps.unwrap_or(d.eps),
            delta: self.delta.unwrap_or(d.delta),
            eps_prime: self.eps_prime.unwrap_or(d.eps_prime),
            delta_prime: self.delta_prime.unwrap_or(d.delta_prime),
            eps1: self.eps1.unwrap_or(d.eps1),
            eps2: self.eps2.unwrap_or(d.eps2),
            delta1: self.delta1.unwrap_or(d.delta1),
            delta2: self.delta2.unwrap_or(d.delta2),
            gamma: self.gamma.unwrap_or(d.gamma),
            c: self.c.unwrap_or(d.c),
            o1: self.o1.unwrap_or(d.o1),
        }
    }

    /// Applies `key=value`.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "eps" => &mut self.eps,
            "delta" => &mut self.delta,
            "eps_prime" => &mut self.eps_prime,
            "delta_prime" => &mut self.delta_prime,
            "eps1" => &mut self.eps1,
            "eps2" => &mut self.eps2,
            "delta1" => &mut self.delta1,
            "delta2" => &mut self.delta2,
            "gamma" => &mut self.gamma,
            "c" => &mut self.c,
            "o1" => &mut self.o1,
            _ => return Err(CliError::validation(format!("unknown parameter `{key}`"))),
        };
        *slot = Some(value);
        Ok(())
    }
}

pub fn params_echo(p: &SmoothingParams) -> Vec<(&'static str, f64)> {
    vec![
        ("eps", p.eps),
        ("delta", p.delta),
        ("eps_prime", p.eps_prime),
        ("delta_prime", p.delta_prime),
        ("eps1", p.eps1),
        ("eps2", p.eps2),
        ("delta1", p.delta1),
        ("delta2", p.delta2),
        ("gamma", p.gamma),
        ("c", p.c),
        ("o1", p.o1),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpecFile {
    pub schema_version: u32,
    pub kind: ChannelKind,
    pub sizes: Sizes,
    pub outputs: Vec<OutputEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law: Option<LawSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsSpec>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Channel {
    Mawtc(CqMaWtc),
    Ppqwtc(PpQwtc),
    Qbc(Qbc),
}

/// A validated spec: the channel, its law and parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedSpec {
    pub channel: Channel,
    pub law: LawSpec,
    pub params: ParamsSpec,
}

fn need(v: Option<usize>, name: &str) -> Result<usize> {
    match v {
        Some(n) if n > 0 => Ok(n),
        Some(_) => Err(CliError::validation(format!("sizes.{name} must be positive"))),
        None => Err(CliError::validation(format!("sizes.{name} is required for this channel kind"))),
    }
}

fn matrix_of(entry: &OutputEntry, idx: usize, dim: usize) -> Result<DensityOperator> {
    if entry.matrix.len() != dim * dim {
        return Err(CliError::validation(format!(
            "outputs[{idx}].matrix has {} entries, expected {}",
            entry.matrix.len(),
            dim * dim
        )));
    }
    let m = CMatrix::from_fn(dim, dim, |r, c| {
        let [re, im] = entry.matrix[r * dim + c];
        Complex64::new(re, im)
    });
    DensityOperator::new(m).map_err(|e| CliError::validation(format!("outputs[{idx}].matrix: {e}")))
}

fn matrix_entries(op: &DensityOperator) -> Vec<[f64; 2]> {
    let m = op.matrix();
    let n = m.nrows();
    (0..n * n).map(|k| [m[(k / n, k % n)].re, m[(k / n, k % n)].im]).collect()
}

fn distribution(v: &[f64], len: usize, name: &str) -> Result<Distribution> {
    if v.len() != len {
        return Err(CliError::validation(format!("law.{name} has {} entries, expected {len}", v.len())));
    }
    Distribution::new(v.to_vec()).map_err(|e| CliError::validation(format!("law.{name}: {e}")))
}

impl ChannelSpecFile {
    pub fn parse(text: &str) -> Result<Self> {
        let spec: Self = toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        if spec.schema_version != SCHEMA_VERSION {
            return Err(CliError::validation(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                spec.schema_version
            )));
        }
        Ok(spec)
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::parse(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("spec files always serialize")
    }

    /// Ordered table of outputs, one per input tuple in row-major order.
    fn table(&self, arity: &[usize], dim: usize) -> Result<Vec<DensityOperator>> {
        let count: usize = arity.iter().product();
        if self.outputs.len() != count {
            return Err(CliError::validation(format!(
                "{} output entries, expected one per input tuple ({count})",
                self.outputs.len()
            )));
        }
        let mut slots: Vec<Option<DensityOperator>> = vec![None; count];
        for (i, e) in self.outputs.iter().enumerate() {
            if e.input.len() != arity.len() || e.input.iter().zip(arity).any(|(x, n)| x >= n) {
                return Err(CliError::validation(format!("outputs[{i}].input {:?} is out of range", e.input)));
            }
            let k = flatten(&e.input, arity);
            if slots[k].is_some() {
                return Err(CliError::validation(format!("outputs[{i}].input {:?} appears twice", e.input)));
            }
            slots[k] = Some(matrix_of(e, i, dim)?);
        }
        Ok(slots.into_iter().map(|s| s.expect("every slot filled")).collect())
    }

    /// Full validation. Nothing is computed from a spec that fails here.
    pub fn load(&self) -> Result<LoadedSpec> {
        let s = &self.sizes;
        let channel = match self.kind {
            ChannelKind::Mawtc => {
                let (a, b, dy, dz) = (need(s.x1, "x1")?, need(s.x2, "x2")?, need(s.y, "y")?, need(s.z, "z")?);
                Channel::Mawtc(CqMaWtc::new(a, b, dy, dz, self.table(&[a, b], dy * dz)?)?)
            }
            ChannelKind::Ppqwtc => {
                let (a, b, dy, dz) = (need(s.u1, "u1")?, need(s.u2, "u2")?, need(s.y, "y")?, need(s.z, "z")?);
                Channel::Ppqwtc(PpQwtc::direct(a, b, dy, dz, self.table(&[a, b], dy * dz)?)?)
            }
            ChannelKind::Qbc => {
                let (x, d1, d2) = (need(s.x, "x")?, need(s.y1, "y1")?, need(s.y2, "y2")?);
                Channel::Qbc(Qbc::new(x, d1, d2, self.table(&[x], d1 * d2)?)?)
            }
        };
        let loaded = LoadedSpec {
            channel,
            law: self.law.clone().unwrap_or_default(),
            params: self.params.clone().unwrap_or_default(),
        };
        loaded.check_law()?;
        Ok(loaded)
    }

    pub fn from_channel(channel: &Channel, law: Option<LawSpec>, params: Option<ParamsSpec>) -> Self {
        let (kind, sizes, arity, table): (_, _, Vec<usize>, Vec<DensityOperator>) = match channel {
            Channel::Mawtc(c) => (
                ChannelKind::Mawtc,
                Sizes { x1: Some(c.x1_size()), x2: Some(c.x2_size()), y: Some(c.y_dim()), z: Some(c.z_dim()), ..Default::default() },
                vec![c.x1_size(), c.x2_size()],
                c.table().to_vec(),
            ),
            Channel::Ppqwtc(c) => (
                ChannelKind::Ppqwtc,
                Sizes { u1: Some(c.u1_size()), u2: Some(c.u2_size()), y: Some(c.y_dim()), z: Some(c.z_dim()), ..Default::default() },
                vec![c.u1_size(), c.u2_size()],
                (0..c.u1_size())
                    .flat_map(|a| (0..c.u2_size()).map(move |b| (a, b)))
                    .map(|(a, b)| c.output(a, b).clone())
                    .collect(),
            ),
            Channel::Qbc(c) => (
                ChannelKind::Qbc,
                Sizes { x: Some(c.x_size()), y1: Some(c.y1_dim()), y2: Some(c.y2_dim()), ..Default::default() },
                vec![c.x_size()],
                c.table().to_vec(),
            ),
        };
        let outputs = table
            .iter()
            .enumerate()
            .map(|(k, op)| OutputEntry { input: unflatten(k, &arity), matrix: matrix_entries(op) })
            .collect();
        ChannelSpecFile { schema_version: SCHEMA_VERSION, kind, sizes, outputs, law, params }
    }
}

impl LoadedSpec {
    pub fn smoothing(&self) -> SmoothingParams {
        self.params.resolve()
    }

    fn check_law(&self) -> Result<()> {
        match &self.channel {
            Channel::Mawtc(c) => {
                self.input_law(c.x1_size(), c.x2_size())?;
            }
            Channel::Ppqwtc(c) => {
                self.pp_law(c.u1_size(), c.u2_size())?;
            }
            Channel::Qbc(c) => {
                self.qbc_law(c.x_size())?;
                if self.law.x1_size.is_some() {
                    self.qbc_pair_law(c.x_size())?;
                }
            }
        }
        Ok(())
    }

    fn marginal(&self, v: &Option<Vec<f64>>, len: usize, name: &str) -> Result<Distribution> {
        match v {
            Some(v) => distribution(v, len, name),
            None => Ok(Distribution::uniform(len)),
        }
    }

    /// Independent inputs with `|Q| = 1`.
    pub fn input_law(&self, n1: usize, n2: usize) -> Result<InputLaw> {
        if self.law.joint.is_some() {
            return Err(CliError::validation("law.joint is not supported for mawtc specs; give p1 and p2"));
        }
        Ok(InputLaw::independent(
            self.marginal(&self.law.p1, n1, "p1")?,
            self.marginal(&self.law.p2, n2, "p2")?,
        ))
    }

    pub fn pp_law(&self, n1: usize, n2: usize) -> Result<PpLaw> {
        match &self.law.joint {
            Some(j) => Ok(PpLaw::new(n1, n2, distribution(j, n1 * n2, "joint")?)?),
            None => Ok(PpLaw::independent(
                &self.marginal(&self.law.p1, n1, "p1")?,
                &self.marginal(&self.law.p2, n2, "p2")?,
            )),
        }
    }

    pub fn qbc_law(&self, nx: usize) -> Result<QbcLaw> {
        match (&self.law.u, &self.law.x_given_u) {
            (None, None) => Ok(QbcLaw::without_auxiliary(self.marginal(&self.law.p1, nx, "p1")?)),
            (u, rows) => {
                let u = match u {
                    Some(u) => distribution(u, u.len(), "u")?,
                    None => Distribution::point(1, 0),
                };
                let rows = match rows {
                    Some(r) => r
                        .iter()
                        .enumerate()
                        .map(|(i, r)| distribution(r, nx, &format!("x_given_u[{i}]")))
                        .collect::<Result<Vec<_>>>()?,
                    None => vec![Distribution::uniform(nx); u.len()],
                };
                if rows.len() != u.len() {
                    return Err(CliError::validation(format!(
                        "law.x_given_u has {} rows, expected {}",
                        rows.len(),
                        u.len()
                    )));
                }
                Ok(QbcLaw::new(u, rows)?)
            }
        }
    }

    /// Independent pair law on `X₁ × X₂` for the broadcast channel.
    pub fn qbc_pair_law(&self, nx: usize) -> Result<QbcPairLaw> {
        let n1 = self
            .law
            .x1_size
            .ok_or_else(|| CliError::validation("law.x1_size is required to split the broadcast input"))?;
        if n1 == 0 || nx % n1 != 0 {
            return Err(CliError::validation(format!("law.x1_size = {n1} does not divide |X| = {nx}")));
        }
        Ok(QbcPairLaw::independent(
            self.marginal(&self.law.p1, n1, "p1")?,
            self.marginal(&self.law.p2, nx / n1, "p2")?,
        ))
    }
}
