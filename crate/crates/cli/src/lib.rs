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

//! Command-line surface over `qwiretap-core`: channel spec files in,
//! CSV reports out.

pub mod commands;
pub mod error;
pub mod report;
pub mod specfile;

use clap::{Parser, Subcommand};

pub use commands::{cmd_converge, cmd_quantity, cmd_region, cmd_simulate};
pub use error::{CliError, Result};
pub use report::RunReport;
pub use specfile::ChannelSpecFile;

#[derive(Debug, Parser)]
#[command(name = "qwiretap", version, about = "One-shot secrecy rate regions for classical-quantum wiretap channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one entropic quantity on the spec's control state.
    Quantity(commands::QuantityArgs),
    /// Assemble a rate region, its corners and optionally its frontier.
    Region(commands::RegionArgs),
    /// Run a decoder or lemma construction.
    Simulate(commands::SimulateArgs),
    /// Per-copy one-shot terms against their i.i.d. limits.
    Converge(commands::ConvergeArgs),
}

pub fn run(cmd: &Command) -> Result<RunReport> {
    match cmd {
        Command::Quantity(a) => cmd_quantity(a),
        Command::Region(a) => cmd_region(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Converge(a) => cmd_converge(a),
    }
}
