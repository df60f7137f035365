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

//! The four commands. Each one validates its inputs completely, then
//! computes, then returns a report; nothing is written on failure.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qwiretap_core::channel::{
    control_state_mawtc, control_state_ppqwtc, control_state_qbc, control_state_qbc_pair, mawtc_to_ppqwtc, PpLaw,
    PpQwtc,
};
use qwiretap_core::decoder::{
    build_pgm_simultaneous, convex_split_verify, exact_error_simultaneous, hayashi_nagaoka_check, leakage_estimate,
    successive_decoder_sim, superposition_decoder_sim, Codebook, DecodingOrder, SimultaneousTest, SuccessiveOptions,
    SuccessiveReport, TestChoice,
    TestOperator, DIM_CAP,
};
use qwiretap_core::par::try_map_indexed;
use qwiretap_core::quantities::{
    alt_smooth_max_mi, conditional_alt_smooth_max_mi, conditional_entropy, conditional_hypothesis_testing_mi,
    conditional_mutual_information, conditional_smooth_max_mi, hypothesis_testing_relative_entropy, max_mi,
    max_relative_entropy, relative_entropy, smooth_max_relative_entropy, von_neumann_entropy, SmoothingParams,
};
use qwiretap_core::region::{
    asymptotic_region, convergence_harness, frontier_scan, mac_law_grid, pp_law_grid, region_18, region_19,
    region_corollary1, region_corollary2, region_theorem1, region_theorem2, region_theorem3, RateRegion,
    DEFAULT_GRANULARITY,
};
use qwiretap_core::{random, DensityOperator, Error as CoreError, Exec, MultipartiteState};

use crate::error::{CliError, Result};
use crate::report::{points_csv, RunReport};
use crate::specfile::{params_echo, Channel, ChannelSpecFile, LoadedSpec, ParamsSpec};

/// Arguments shared by every command.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Channel spec file (TOML).
    #[arg(long)]
    pub spec: PathBuf,
    /// Parameter override `key=value`; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Run fan-out sequentially.
    #[arg(long)]
    pub sequential: bool,
}

impl Common {
    pub fn new(spec: impl Into<PathBuf>) -> Self {
        Common { spec: spec.into(), params: Vec::new(), sequential: false }
    }

    fn exec(&self) -> Exec {
        if self.sequential {
            Exec::Sequential
        } else {
            Exec::default()
        }
    }

    fn load(&self) -> Result<(LoadedSpec, SmoothingParams)> {
        let file = ChannelSpecFile::read(&self.spec)?;
        let mut loaded = file.load()?;
        apply_overrides(&mut loaded.params, &self.params)?;
        let p = loaded.smoothing();
        Ok((loaded, p))
    }
}

fn apply_overrides(params: &mut ParamsSpec, overrides: &[String]) -> Result<()> {
    for o in overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| CliError::validation(format!("parameter override `{o}` is not KEY=VALUE")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| CliError::validation(format!("parameter `{k}` has non-numeric value `{v}`")))?;
        params.set(k.trim(), v)?;
    }
    Ok(())
}

fn echo_params(r: &mut RunReport, p: &SmoothingParams) {
    for (k, v) in params_echo(p) {
        r.param(k, v);
    }
}

fn labels(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn control_state(spec: &LoadedSpec) -> Result<MultipartiteState> {
    Ok(match &spec.channel {
        Channel::Mawtc(c) => control_state_mawtc(c, &spec.input_law(c.x1_size(), c.x2_size())?)?,
        Channel::Ppqwtc(c) => control_state_ppqwtc(c, &spec.pp_law(c.u1_size(), c.u2_size())?)?,
        Channel::Qbc(c) if spec.law.x1_size.is_some() => control_state_qbc_pair(c, &spec.qbc_pair_law(c.x_size())?)?,
        Channel::Qbc(c) => control_state_qbc(c, &spec.qbc_law(c.x_size())?)?,
    })
}

fn table(spec: &LoadedSpec) -> Vec<DensityOperator> {
    match &spec.channel {
        Channel::Mawtc(c) => c.table().to_vec(),
        Channel::Ppqwtc(c) => (0..c.u1_size())
            .flat_map(|a| (0..c.u2_size()).map(move |b| (a, b)))
            .map(|(a, b)| c.output(a, b).clone())
            .collect(),
        Channel::Qbc(c) => c.table().to_vec(),
    }
}

/// The two-sender point-to-point view: native, or converted from the
/// multiple-access channel with its independent law.
fn pp_view(spec: &LoadedSpec) -> Result<(PpQwtc, PpLaw)> {
    match &spec.channel {
        Channel::Ppqwtc(c) => Ok((c.clone(), spec.pp_law(c.u1_size(), c.u2_size())?)),
        Channel::Mawtc(c) => {
            let law = spec.input_law(c.x1_size(), c.x2_size())?;
            Ok((mawtc_to_ppqwtc(c), PpLaw::independent(&law.x1_marginal(), &law.x2_marginal())))
        }
        Channel::Qbc(_) => Err(CliError::validation("this command needs a mawtc or ppqwtc spec")),
    }
}

fn wrong_kind(what: &str, need: &str) -> CliError {
    CliError::validation(format!("{what} needs a {need} spec"))
}

fn numeric_warnings(r: &mut RunReport, p: &SmoothingParams, testing_budget: bool) {
    if testing_budget && 49.0 * p.eps.sqrt() >= 1.0 {
        r.warn("vacuous-budget", format!("49√ε = {} is at least 1", 49.0 * p.eps.sqrt()));
    }
    let leak = 20.0 * p.delta_prime.powf(0.125);
    if leak >= 2.0 {
        r.warn("vacuous-budget", format!("20δ′^(1/8) = {leak} is at least 2, the largest trace distance"));
    }
}

fn o1_warning(r: &mut RunReport, p: &SmoothingParams) {
    r.warn("o1", format!("unspecified constant term of the multiple-access bounds set to o1 = {}", p.o1));
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityName {
    /// Hypothesis-testing mutual information `I_H^ε(A;B|given)`.
    #[value(name = "I_H")]
    TestingMi,
    /// Max-mutual information `I_max(A;B)`.
    #[value(name = "I_max")]
    MaxMi,
    /// Smooth max-mutual information `I_max^ε(A;B|given)`.
    #[value(name = "I_max_smooth")]
    SmoothMaxMi,
    /// Alternate smooth max-information `Ĩ_max^ε(B;A|given)`; `A` keeps
    /// its exact marginal.
    #[value(name = "I_alt")]
    AltMaxMi,
    /// Von Neumann mutual information `I(A;B|given)`.
    #[value(name = "I")]
    Mi,
    /// Von Neumann entropy `H(A)` or `H(A|B)`.
    #[value(name = "H")]
    Entropy,
    /// `D_H^ε(first‖second)` between two table outputs.
    #[value(name = "D_H")]
    TestingDivergence,
    #[value(name = "D_max")]
    MaxDivergence,
    #[value(name = "D_max_smooth")]
    SmoothMaxDivergence,
    #[value(name = "D")]
    Divergence,
}

impl QuantityName {
    fn label(self) -> &'static str {
        match self {
            QuantityName::TestingMi => "I_H",
            QuantityName::MaxMi => "I_max",
            QuantityName::SmoothMaxMi => "I_max_smooth",
            QuantityName::AltMaxMi => "I_alt",
            QuantityName::Mi => "I",
            QuantityName::Entropy => "H",
            QuantityName::TestingDivergence => "D_H",
            QuantityName::MaxDivergence => "D_max",
            QuantityName::SmoothMaxDivergence => "D_max_smooth",
            QuantityName::Divergence => "D",
        }
    }

    fn uses_eps(self) -> bool {
        matches!(
            self,
            QuantityName::TestingMi
                | QuantityName::SmoothMaxMi
                | QuantityName::AltMaxMi
                | QuantityName::TestingDivergence
                | QuantityName::SmoothMaxDivergence
        )
    }

    fn on_table(self) -> bool {
        matches!(
            self,
            QuantityName::TestingDivergence
                | QuantityName::MaxDivergence
                | QuantityName::SmoothMaxDivergence
                | QuantityName::Divergence
        )
    }
}

#[derive(Debug, Clone, Args)]
pub struct QuantityArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub name: QuantityName,
    /// First register group (comma separated).
    #[arg(long, value_delimiter = ',')]
    pub a: Vec<String>,
    /// Second register group.
    #[arg(long, value_delimiter = ',')]
    pub b: Vec<String>,
    /// Classical conditioning registers.
    #[arg(long, value_delimiter = ',')]
    pub given: Vec<String>,
    /// Table index of the first state for divergences.
    #[arg(long)]
    pub first: Option<usize>,
    /// Table index of the second state for divergences.
    #[arg(long)]
    pub second: Option<usize>,
    /// Smoothing or testing parameter; defaults to `eps`.
    #[arg(long)]
    pub eps: Option<f64>,
}

pub fn cmd_quantity(args: &QuantityArgs) -> Result<RunReport> {
    let (spec, p) = args.common.load()?;
    let q = args.name;
    let eps = args.eps.unwrap_or(p.eps);
    let mut r = RunReport::new("quantity");
    r.echo("spec", args.common.spec.display());
    r.echo("name", q.label());
    let value = if q.on_table() {
        let t = table(&spec);
        let (i, j) = match (args.first, args.second) {
            (Some(i), Some(j)) if i < t.len() && j < t.len() => (i, j),
            (Some(_), Some(_)) => {
                return Err(CliError::validation(format!("table indices must be below {}", t.len())))
            }
            _ => return Err(CliError::validation("divergences need --first and --second table indices")),
        };
        r.echo("first", i);
        r.echo("second", j);
        let (rho, sigma) = (&t[i], &t[j]);
        match q {
            QuantityName::TestingDivergence => hypothesis_testing_relative_entropy(rho, sigma, eps)?.0,
            QuantityName::MaxDivergence => max_relative_entropy(rho, sigma)?,
            QuantityName::SmoothMaxDivergence => smooth_max_relative_entropy(rho, sigma, eps)?,
            _ => relative_entropy(rho, sigma)?,
        }
    } else {
        if args.a.is_empty() {
            return Err(CliError::validation("--a is required for register quantities"));
        }
        if args.b.is_empty() && q != QuantityName::Entropy {
            return Err(CliError::validation("--b is required for this quantity"));
        }
        if !args.given.is_empty() && matches!(q, QuantityName::MaxMi | QuantityName::Entropy) {
            return Err(CliError::validation(format!("{} does not take --given", q.label())));
        }
        let s = control_state(&spec)?;
        for l in args.a.iter().chain(&args.b).chain(&args.given) {
            s.register(l)?;
        }
        r.echo("a", args.a.join("+"));
        r.echo("b", args.b.join("+"));
        r.echo("given", args.given.join("+"));
        let (a, b, z) = (labels(&args.a), labels(&args.b), labels(&args.given));
        match q {
            QuantityName::TestingMi => conditional_hypothesis_testing_mi(&s, &a, &b, &z, eps)?,
            QuantityName::MaxMi => max_mi(&s, &a, &b)?,
            QuantityName::SmoothMaxMi => conditional_smooth_max_mi(&s, &a, &b, &z, eps)?,
            QuantityName::AltMaxMi if z.is_empty() => alt_smooth_max_mi(&s, &b, &a, eps)?,
            QuantityName::AltMaxMi => conditional_alt_smooth_max_mi(&s, &b, &a, &z, eps)?,
            QuantityName::Mi => conditional_mutual_information(&s, &a, &b, &z)?,
            QuantityName::Entropy if b.is_empty() => von_neumann_entropy(&s, &a)?,
            _ => conditional_entropy(&s, &a, &b)?,
        }
    };
    if q.uses_eps() {
        r.param("eps", eps);
        let source = if args.eps.is_some() { "--eps" } else { "params.eps" };
        r.row("provenance", "eps", source);
    }
    r.row("result", q.label(), value);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegionName {
    Corollary1,
    Theorem1,
    Theorem2,
    Theorem3,
    Corollary2,
    Eq18,
    Eq19,
    Asymptotic,
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub name: RegionName,
    /// Write the corner points here.
    #[arg(long)]
    pub corners: Option<PathBuf>,
    /// Scan input laws on a simplex grid and write the envelope here.
    #[arg(long)]
    pub frontier: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_GRANULARITY)]
    pub granularity: f64,
}

fn build_region(spec: &LoadedSpec, name: RegionName, p: &SmoothingParams) -> Result<RateRegion> {
    Ok(match name {
        RegionName::Corollary1 | RegionName::Theorem1 => {
            let Channel::Mawtc(c) = &spec.channel else { return Err(wrong_kind("this region", "mawtc")) };
            let law = spec.input_law(c.x1_size(), c.x2_size())?;
            if name == RegionName::Corollary1 {
                region_corollary1(c, &law, p)?
            } else {
                region_theorem1(c, &law, p)?
            }
        }
        RegionName::Theorem2 | RegionName::Eq19 | RegionName::Asymptotic => {
            let (c, law) = pp_view(spec)?;
            match name {
                RegionName::Theorem2 => region_theorem2(&c, &law, p)?,
                RegionName::Eq19 => region_19(&c, &law, p)?,
                _ => asymptotic_region(&c, &law)?,
            }
        }
        RegionName::Theorem3 => {
            let Channel::Qbc(c) = &spec.channel else { return Err(wrong_kind("theorem3", "qbc")) };
            region_theorem3(c, &spec.qbc_law(c.x_size())?, p.eps)?
        }
        RegionName::Corollary2 | RegionName::Eq18 => {
            let Channel::Qbc(c) = &spec.channel else { return Err(wrong_kind("this region", "qbc")) };
            let law = spec.qbc_pair_law(c.x_size())?;
            if name == RegionName::Corollary2 {
                region_corollary2(c, &law, p.eps)?
            } else {
                region_18(c, &law, p.eps)?
            }
        }
    })
}

fn frontier_points(
    spec: &LoadedSpec,
    name: RegionName,
    p: &SmoothingParams,
    g: f64,
    exec: Exec,
) -> Result<Vec<Vec<f64>>> {
    let points = match (name, &spec.channel) {
        (RegionName::Corollary1 | RegionName::Theorem1, Channel::Mawtc(c)) => {
            let laws = mac_law_grid(c.x1_size(), c.x2_size(), g)?;
            let f = frontier_scan(
                &laws,
                |law| if name == RegionName::Corollary1 { region_corollary1(c, law, p) } else { region_theorem1(c, law, p) },
                exec,
            )?;
            f.envelope
        }
        (RegionName::Theorem2 | RegionName::Eq19 | RegionName::Asymptotic, _) => {
            let (c, _) = pp_view(spec)?;
            let laws = pp_law_grid(c.u1_size(), c.u2_size(), g)?;
            let f = frontier_scan(
                &laws,
                |law| match name {
                    RegionName::Theorem2 => region_theorem2(&c, law, p),
                    RegionName::Eq19 => region_19(&c, law, p),
                    _ => asymptotic_region(&c, law),
                },
                exec,
            )?;
            f.envelope
        }
        _ => return Err(CliError::validation("frontier scans are available for mawtc and ppqwtc regions")),
    };
    Ok(points.into_iter().map(|pt| pt.0).collect())
}

pub fn cmd_region(args: &RegionArgs) -> Result<RunReport> {
    let (spec, p) = args.common.load()?;
    if args.frontier.is_some()
        && matches!(args.name, RegionName::Theorem3 | RegionName::Corollary2 | RegionName::Eq18)
    {
        return Err(CliError::validation("frontier scans are available for mawtc and ppqwtc regions"));
    }
    if !(args.granularity > 0.0 && args.granularity <= 1.0) {
        return Err(CliError::validation(format!("granularity {} not in (0, 1]", args.granularity)));
    }
    let region = build_region(&spec, args.name, &p)?;
    let mut r = RunReport::new("region");
    r.echo("spec", args.common.spec.display());
    r.echo("name", &region.name);
    echo_params(&mut r, &p);
    for c in &region.constraints {
        let lhs = c.lhs_label(&region.coords);
        r.row("constraint", &lhs, c.bound + 0.0);
        for t in &c.terms {
            r.row("term", format!("{lhs}|{}", t.label), t.value + 0.0);
        }
    }
    let corners = region.corners();
    for (i, c) in corners.iter().enumerate() {
        let v: Vec<String> = c.values().iter().map(f64::to_string).collect();
        r.row("corner", i.to_string(), v.join(";"));
    }
    for b in &region.budgets {
        r.row("budget", format!("{}|{}", b.name, b.label), b.value);
    }
    for n in &region.notes {
        r.warn("note", n.clone());
    }
    if matches!(args.name, RegionName::Corollary1 | RegionName::Theorem1) {
        numeric_warnings(&mut r, &p, args.name == RegionName::Corollary1);
    }
    o1_warning(&mut r, &p);
    let frontier = match &args.frontier {
        Some(_) => Some(frontier_points(&spec, args.name, &p, args.granularity, args.common.exec())?),
        None => None,
    };
    if let Some(path) = &args.corners {
        let pts: Vec<Vec<f64>> = corners.iter().map(|c| c.0.clone()).collect();
        crate::report::write_file(path, &points_csv(&region.coords, &pts))?;
    }
    if let (Some(path), Some(pts)) = (&args.frontier, &frontier) {
        r.row("frontier", "points", pts.len());
        crate::report::write_file(path, &points_csv(&region.coords, pts))?;
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecoderName {
    Simultaneous,
    Successive,
    Superposition,
    Leakage,
    ConvexSplit,
    HnCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestKind {
    /// Neyman–Pearson tests.
    Np,
    /// Support projectors of the outputs.
    Support,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OrderArg {
    #[value(name = "12")]
    FirstThenSecond,
    #[value(name = "21")]
    SecondThenFirst,
    Both,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_enum)]
    pub decoder: DecoderName,
    /// Messages of the first sender (superposition: first receiver).
    #[arg(long, default_value_t = 2)]
    pub m1: usize,
    #[arg(long, default_value_t = 2)]
    pub k1: usize,
    /// Messages of the second sender (superposition: common message).
    #[arg(long, default_value_t = 2)]
    pub m2: usize,
    #[arg(long, default_value_t = 2)]
    pub k2: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Trials; defaults to 200 for leakage and hn-check, 20 otherwise.
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, value_enum, default_value_t = TestKind::Np)]
    pub test: TestKind,
    /// Type-I error of the Neyman–Pearson tests.
    #[arg(long)]
    pub test_eps: Option<f64>,
    /// Fixed first codebook (replaces sampling).
    #[arg(long, value_delimiter = ',')]
    pub entries1: Option<Vec<usize>>,
    /// Fixed second codebook (conditional codebooks list each parent in turn).
    #[arg(long, value_delimiter = ',')]
    pub entries2: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = OrderArg::Both)]
    pub order: OrderArg,
    /// Convex-split copy counts.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
    pub copies: Vec<usize>,
    /// Convex-split codeword register.
    #[arg(long)]
    pub a: Option<String>,
    /// Convex-split side register.
    #[arg(long)]
    pub b: Option<String>,
    /// Operator dimension for hn-check draws.
    #[arg(long, default_value_t = 4)]
    pub dim: usize,
}

impl SimulateArgs {
    pub fn new(common: Common, decoder: DecoderName) -> Self {
        SimulateArgs {
            common,
            decoder,
            m1: 2,
            k1: 2,
            m2: 2,
            k2: 2,
            seed: 0,
            trials: None,
            test: TestKind::Np,
            test_eps: None,
            entries1: None,
            entries2: None,
            order: OrderArg::Both,
            copies: vec![1, 2, 4, 8],
            a: None,
            b: None,
            dim: 4,
        }
    }

    fn trials(&self) -> usize {
        self.trials.unwrap_or(match self.decoder {
            DecoderName::Leakage | DecoderName::HnCheck => 200,
            _ => 20,
        })
    }

    fn tests(&self, default_eps: f64) -> TestChoice {
        match self.test {
            TestKind::Np => TestChoice::NeymanPearson(self.test_eps.unwrap_or(default_eps)),
            TestKind::Support => TestChoice::Support,
        }
    }

    fn check(&self) -> Result<()> {
        if [self.m1, self.k1, self.m2, self.k2].contains(&0) {
            return Err(CliError::validation("codebook sizes must be positive"));
        }
        if self.trials() == 0 {
            return Err(CliError::validation("trials must be at least 1"));
        }
        if let Some(e) = self.test_eps {
            if !(e > 0.0 && e < 1.0) {
                return Err(CliError::validation(format!("test_eps = {e} not in (0, 1)")));
            }
        }
        Ok(())
    }
}

fn trial_seeds(seed: u64, t: usize) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(t as u64);
    use rand::RngCore;
    (rng.next_u64(), rng.next_u64())
}

fn fixed_or_sampled(
    entries: &Option<Vec<usize>>,
    alphabet: usize,
    m: usize,
    k: usize,
    sample: impl Fn() -> std::result::Result<Codebook, CoreError>,
) -> Result<Codebook> {
    match entries {
        Some(e) => Ok(Codebook::from_entries(alphabet, m, k, e.clone())?),
        None => Ok(sample()?),
    }
}

fn cap_check(dim: usize) -> Result<()> {
    if dim > DIM_CAP {
        return Err(CoreError::DimensionCap { dim, cap: DIM_CAP }.into());
    }
    Ok(())
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<RunReport> {
    args.check()?;
    let (spec, p) = args.common.load()?;
    let exec = args.common.exec();
    let fixed = args.entries1.is_some() || args.entries2.is_some();
    let trials = if fixed { 1 } else { args.trials() };
    let mut r = RunReport::new("simulate");
    r.echo("spec", args.common.spec.display());
    r.echo("decoder", format!("{:?}", args.decoder).to_lowercase());
    r.echo("seed", args.seed);
    r.echo("trials", trials);
    r.echo("sizes", format!("m1={} k1={} m2={} k2={}", args.m1, args.k1, args.m2, args.k2));
    echo_params(&mut r, &p);
    match args.decoder {
        DecoderName::Simultaneous => {
            let Channel::Mawtc(ch) = &spec.channel else { return Err(wrong_kind("simultaneous", "mawtc")) };
            let law = spec.input_law(ch.x1_size(), ch.x2_size())?;
            let (p1, p2) = (law.x1_marginal(), law.x2_marginal());
            cap_check(args.m1 * args.k1 * args.m2 * args.k2 * ch.y_dim())?;
            let test = match args.tests(p.eps) {
                TestChoice::NeymanPearson(e) => SimultaneousTest::neyman_pearson(ch, &p1, &p2, e)?,
                TestChoice::Support => SimultaneousTest::support(ch, &p1, &p2)?,
            };
            let rows = try_map_indexed(exec, trials, |t| {
                let (s1, s2) = trial_seeds(args.seed, t);
                let cb1 = fixed_or_sampled(&args.entries1, ch.x1_size(), args.m1, args.k1, || {
                    Codebook::sample(&p1, args.m1, args.k1, s1)
                })?;
                let cb2 = fixed_or_sampled(&args.entries2, ch.x2_size(), args.m2, args.k2, || {
                    Codebook::sample(&p2, args.m2, args.k2, s2)
                })?;
                let m = build_pgm_simultaneous(&test, &cb1, &cb2)?;
                Ok::<_, CliError>(exact_error_simultaneous(ch, &test, &cb1, &cb2, &m, p.c)?)
            })?;
            let mut within = 0;
            for (t, row) in rows.iter().enumerate() {
                r.row("trial", format!("{t}|error"), row.error);
                r.row("trial", format!("{t}|hn_bound"), row.hn_bound);
                within += usize::from(row.error <= row.hn_bound + 1e-8);
            }
            let n = rows.len() as f64;
            r.row("result", "mean_error", rows.iter().map(|x| x.error).sum::<f64>() / n);
            r.row("result", "mean_hn_bound", rows.iter().map(|x| x.hn_bound).sum::<f64>() / n);
            r.row(
                "result",
                "hypothesis_bound",
                test.hypothesis_bound(args.m1 * args.k1, args.m2 * args.k2, p.c),
            );
            r.row("result", "trials_within_bound", within);
            r.row("metadata", "composite_weights", "1/3;1/3;1/3");
            r.row("budget", "ε + 2δ + 20δ′^{1/8}", p.eps + 2.0 * p.delta + 20.0 * p.delta_prime.powf(0.125));
            numeric_warnings(&mut r, &p, false);
        }
        DecoderName::Successive => {
            let (ch, law) = pp_view(&spec)?;
            let (p1, p2) = (law.u1_marginal(), law.u2_marginal());
            cap_check(args.m1 * args.k1 * args.m2 * args.k2 * ch.y_dim())?;
            let orders: &[DecodingOrder] = match args.order {
                OrderArg::FirstThenSecond => &[DecodingOrder::FirstThenSecond],
                OrderArg::SecondThenFirst => &[DecodingOrder::SecondThenFirst],
                OrderArg::Both => &[DecodingOrder::FirstThenSecond, DecodingOrder::SecondThenFirst],
            };
            let tests = args.tests(p.theorem2_testing_eps());
            let rows = try_map_indexed(exec, trials, |t| {
                let (s1, s2) = trial_seeds(args.seed, t);
                let cb1 = fixed_or_sampled(&args.entries1, ch.u1_size(), args.m1, args.k1, || {
                    Codebook::sample(&p1, args.m1, args.k1, s1)
                })?;
                let cb2 = fixed_or_sampled(&args.entries2, ch.u2_size(), args.m2, args.k2, || {
                    Codebook::sample(&p2, args.m2, args.k2, s2)
                })?;
                orders
                    .iter()
                    .map(|o| {
                        let opts = SuccessiveOptions { order: *o, tests, cap: DIM_CAP };
                        successive_decoder_sim(&ch, &law, &cb1, &cb2, &p, &opts).map_err(CliError::from)
                    })
                    .collect::<Result<Vec<_>>>()
            })?;
            for (i, o) in orders.iter().enumerate() {
                let tag = o.label();
                for (t, row) in rows.iter().enumerate() {
                    r.row("trial", format!("{t}|{tag}|p_e1"), row[i].p_e1);
                    r.row("trial", format!("{t}|{tag}|p_e2"), row[i].p_e2);
                }
                let n = rows.len() as f64;
                r.row("result", format!("{tag}|mean_p_e1"), rows.iter().map(|x| x[i].p_e1).sum::<f64>() / n);
                r.row("result", format!("{tag}|mean_p_e2"), rows.iter().map(|x| x[i].p_e2).sum::<f64>() / n);
                for b in &rows[0][i].budgets {
                    r.row("budget", format!("{tag}|{}|{}", b.name, b.label), b.value);
                }
            }
            if orders.len() == 2 {
                let n = rows.len() as f64;
                let worst = |x: &SuccessiveReport| x.p_e1.max(x.p_e2);
                let best = rows.iter().map(|x| worst(&x[0]).min(worst(&x[1]))).sum::<f64>() / n;
                r.row("result", "best_order_max_error", best);
                r.row("metadata", "region", "intersection of the regions of both decoding orders");
            }
        }
        DecoderName::Superposition => {
            let Channel::Qbc(ch) = &spec.channel else { return Err(wrong_kind("superposition", "qbc")) };
            let law = spec.qbc_law(ch.x_size())?;
            let (n1, nc) = (args.m1 * args.k1, args.m2 * args.k2);
            cap_check(nc * n1 * ch.y1_dim().max(ch.y2_dim()))?;
            let tests = args.tests(p.eps);
            let rows = try_map_indexed(exec, trials, |t| {
                let (s1, s2) = trial_seeds(args.seed, t);
                let cloud = fixed_or_sampled(&args.entries2, law.u.len(), args.m2, args.k2, || {
                    Codebook::sample(&law.u, args.m2, args.k2, s2)
                })?;
                let sat = match &args.entries1 {
                    Some(e) if e.len() == n1 => Codebook::from_entries(ch.x_size(), args.m1, args.k1, e.clone())?,
                    Some(e) => Codebook::conditional_from_entries(ch.x_size(), nc, args.m1, args.k1, e.clone())?,
                    None => Codebook::sample_conditional(&law.x_given_u, cloud.entries(), args.m1, args.k1, s1)?,
                };
                Ok::<_, CliError>(superposition_decoder_sim(ch, &law, &cloud, &sat, tests, p.eps, DIM_CAP)?)
            })?;
            for (t, row) in rows.iter().enumerate() {
                r.row("trial", format!("{t}|p_e1"), row.p_e1);
                r.row("trial", format!("{t}|p_e2"), row.p_e2);
            }
            let n = rows.len() as f64;
            r.row("result", "mean_p_e1", rows.iter().map(|x| x.p_e1).sum::<f64>() / n);
            r.row("result", "mean_p_e2", rows.iter().map(|x| x.p_e2).sum::<f64>() / n);
            r.row("result", "bound", rows[0].bound);
            for (k, v) in ["I_H(X;Y1|U)", "I_H(U;Y2)", "I_H(X;Y1)"].iter().zip(rows[0].informations) {
                r.row("metadata", *k, v);
            }
        }
        DecoderName::Leakage => {
            let Channel::Mawtc(ch) = &spec.channel else { return Err(wrong_kind("leakage", "mawtc")) };
            let law = spec.input_law(ch.x1_size(), ch.x2_size())?;
            let l = leakage_estimate(
                ch,
                &law.x1_marginal(),
                &law.x2_marginal(),
                args.k1,
                args.k2,
                trials,
                args.seed,
                p.delta_prime,
                exec,
            )?;
            r.row("result", "mean", l.mean);
            r.row("result", "std_error", l.std_error);
            r.row("budget", "20δ′^{1/8}", l.bound);
            if l.vacuous {
                r.warn("vacuous-budget", format!("20δ′^(1/8) = {} is at least 2, the largest trace distance", l.bound));
            }
        }
        DecoderName::ConvexSplit => {
            let s = control_state(&spec)?;
            let (da, db) = match &spec.channel {
                Channel::Mawtc(_) => ("X1", "Y"),
                Channel::Ppqwtc(_) => ("U1", "Y"),
                Channel::Qbc(_) => ("X", "Y1"),
            };
            let a = args.a.as_deref().unwrap_or(da);
            let b = args.b.as_deref().unwrap_or(db);
            s.register(a)?;
            s.register(b)?;
            if args.copies.is_empty() || args.copies.contains(&0) {
                return Err(CliError::validation("copies must be positive"));
            }
            r.echo("registers", format!("{a}|{b}"));
            for k in &args.copies {
                let c = convex_split_verify(&s, a, b, *k, p.eps, p.delta)?;
                r.row("result", format!("{k}|distance"), c.distance);
                r.row("result", format!("{k}|threshold"), c.threshold);
                r.row("result", format!("{k}|size_condition"), c.size_condition);
                r.row("result", format!("{k}|bound_ok"), c.bound_ok());
            }
            r.row("budget", "√ε", p.eps.sqrt());
        }
        DecoderName::HnCheck => {
            if !(2..=64).contains(&args.dim) {
                return Err(CliError::validation(format!("dim = {} not in [2, 64]", args.dim)));
            }
            p.check_c()?;
            let mins = try_map_indexed(exec, trials, |t| {
                let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
                rng.set_stream(t as u64);
                let s = TestOperator::new(random::contraction(args.dim, &mut rng))?;
                let tt = random::psd(args.dim, 1.0, &mut rng);
                hayashi_nagaoka_check(&s, &tt, p.c).map(|h| h.min_eigenvalue)
            })?;
            let worst = mins.iter().copied().fold(f64::INFINITY, f64::min);
            r.row("result", "min_eigenvalue", worst);
            r.row("result", "holds", worst >= -1e-8);
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, Args)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 2)]
    pub n_max: usize,
    /// Write the per-n table here.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

pub fn cmd_converge(args: &ConvergeArgs) -> Result<RunReport> {
    let (spec, p) = args.common.load()?;
    let (ch, law) = pp_view(&spec)?;
    let rows = convergence_harness(&ch, &law, &p, args.n_max, args.common.exec())?;
    let mut r = RunReport::new("converge");
    r.echo("spec", args.common.spec.display());
    r.echo("n_max", args.n_max);
    echo_params(&mut r, &p);
    let columns = [
        "n",
        "testing1",
        "target_testing1",
        "gap_testing1",
        "testing2",
        "target_testing2",
        "gap_testing2",
        "leakage1",
        "target_leakage1",
        "target_leakage1_given_u2",
        "gap_leakage1",
        "leakage2",
        "target_leakage2",
        "gap_leakage2",
    ];
    let mut points = Vec::new();
    for row in &rows {
        let vals = [
            row.n as f64,
            row.testing1,
            row.target_testing1,
            (row.testing1 - row.target_testing1).abs(),
            row.testing2,
            row.target_testing2,
            (row.testing2 - row.target_testing2).abs(),
            row.leakage1,
            row.target_leakage1,
            row.target_leakage1_given_u2,
            (row.leakage1 - row.target_leakage1).abs(),
            row.leakage2,
            row.target_leakage2,
            (row.leakage2 - row.target_leakage2).abs(),
        ];
        for (c, v) in columns.iter().zip(vals).skip(1) {
            r.row("row", format!("{}|{c}", row.n), v);
        }
        points.push(vals.to_vec());
    }
    if let Some(path) = &args.table {
        let cols: Vec<String> = columns.iter().map(|c| c.to_string()).collect();
        crate::report::write_file(path, &points_csv(&cols, &points))?;
    }
    Ok(r)
}
