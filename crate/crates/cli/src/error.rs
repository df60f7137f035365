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

use qwiretap_core::Error as CoreError;
use thiserror::Error;

/// Everything a command can fail with, split into the two exit-code
/// families.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("could not parse spec: {0}")]
    Parse(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    pub fn validation(msg: impl Into<String>) -> Self {
        CliError::Validation(msg.into())
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, CliError::Core(e) if e.is_numeric())
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_numeric() {
            2
        } else {
            1
        }
    }

    /// Single line, prefixed by the failure family.
    pub fn render(&self) -> String {
        let family = if self.is_numeric() { "numeric" } else { "validation" };
        let msg = self.to_string().replace('\n', " ");
        format!("error[{family}]: {}", msg.trim())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
