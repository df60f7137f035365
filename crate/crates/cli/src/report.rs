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

use std::fmt::Display;

use crate::error::{CliError, Result};

/// One `kind,key,value` line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Row {
    pub kind: String,
    pub key: String,
    pub value: String,
}

/// Command echo, parameter echo, results and warnings, in that order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RunReport {
    pub command: Vec<(String, String)>,
    pub params: Vec<(String, String)>,
    pub rows: Vec<Row>,
    pub warnings: Vec<(String, String)>,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport { command: vec![("command".into(), command.into())], ..Default::default() }
    }

    pub fn echo(&mut self, key: &str, value: impl Display) {
        self.command.push((key.into(), value.to_string()));
    }

    pub fn param(&mut self, key: &str, value: impl Display) {
        self.params.push((key.into(), value.to_string()));
    }

    pub fn row(&mut self, kind: &str, key: impl Into<String>, value: impl Display) {
        self.rows.push(Row { kind: kind.into(), key: key.into(), value: value.to_string() });
    }

    pub fn warn(&mut self, key: &str, message: impl Into<String>) {
        self.warnings.push((key.into(), message.into()));
    }

    /// First result row with this key.
    pub fn value(&self, key: &str) -> Option<&str> {
        self.rows.iter().find(|r| r.key == key).map(|r| r.value.as_str())
    }

    pub fn rows_of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Row> + 'a {
        self.rows.iter().filter(move |r| r.kind == kind)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let mut put = |k: &str, key: &str, v: &str| w.write_record([k, key, v]).expect("in-memory write");
        put("kind", "key", "value");
        for (k, v) in &self.command {
            put("command", k, v);
        }
        for (k, v) in &self.params {
            put("param", k, v);
        }
        for r in &self.rows {
            put(&r.kind, &r.key, &r.value);
        }
        for (k, v) in &self.warnings {
            put("warning", k, v);
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
    }
}

/// Plot-ready point file: a header of coordinate names, then one point per
/// line.
pub fn points_csv(coords: &[String], points: &[Vec<f64>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(coords).expect("in-memory write");
    for p in points {
        w.write_record(p.iter().map(|v| v.to_string())).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8")
}

pub fn write_file(path: &std::path::Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| CliError::Io { path: path.display().to_string(), message: e.to_string() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut r = RunReport::new("quantity");
        r.param("eps", 0.1);
        r.row("result", "I_H", 0.5);
        r.warn("o1", "constant term, is 0");
        assert_eq!(
            r.to_csv(),
            "kind,key,value\ncommand,command,quantity\nparam,eps,0.1\nresult,I_H,0.5\nwarning,o1,\"constant term, is 0\"\n"
        );
        assert_eq!(r.value("I_H"), Some("0.5"));
    }

    #[test]
    fn points_file() {
        let s = points_csv(&["R1".into(), "R2".into()], &[vec![0.0, 1.5]]);
        assert_eq!(s, "R1,R2\n0,1.5\n");
    }
}
