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

//! Entropic quantities: von Neumann and Rényi entropies, relative entropies,
//! hypothesis-testing and max-relative entropies with smooth and conditional
//! variants.

pub mod conditional;
pub mod entropy;
pub mod facts;
pub mod hypothesis;
pub mod maxrel;
pub mod params;

pub use entropy::{
    binary_entropy, conditional_entropy, conditional_mutual_information, mutual_information,
    relative_entropy, renyi_entropy, renyi_relative_entropy, von_neumann_entropy,
};
pub use facts::{check_fact1, check_fact3, fact1_sides, fact3_sides, InequalityCheck};
pub use hypothesis::{
    conditional_hypothesis_testing_mi, hypothesis_testing_mi, hypothesis_testing_mi_with_certificate,
    hypothesis_testing_relative_entropy, NpTestCertificate,
};
pub use maxrel::{
    alt_smooth_max_mi, conditional_alt_smooth_max_mi, conditional_smooth_max_mi, max_mi,
    max_relative_entropy, smooth_max_mi, smooth_max_relative_entropy,
};
pub use params::SmoothingParams;
