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

//! One-shot secrecy rate regions for classical-quantum multiple-access
//! wiretap channels, their point-to-point and broadcast duals, and explicit
//! small-scale constructions of the decoders and lemmas behind them.
//!
//! All logarithms are base 2.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod decoder;
pub mod error;
pub mod linalg;
pub mod par;
pub mod quantities;
pub mod random;
pub mod region;
pub mod state;

pub use error::{Error, Result};
pub use num_complex;
pub use par::Exec;
pub use state::{cq_state, fidelity, purified_distance, trace_distance};
pub use state::{DensityOperator, Distribution, MultipartiteState, Register, RegisterKind};
