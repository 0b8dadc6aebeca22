//! Machine-readable run reports.
//!
//! Keys of every object are written in a fixed order: the top level follows
//! [`Report`], nested objects are sorted. Numbers use the shortest decimal form
//! that reads back to the same double.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub library_version: &'static str,
    pub config_sha256: String,
    pub config: BTreeMap<String, String>,
    pub inputs: BTreeMap<String, Value>,
    pub results: BTreeMap<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    pub checks: BTreeMap<String, bool>,
    pub pass: bool,
    pub wall_time_s: f64,
}

/// Collects the parts of a report while a command runs.
#[derive(Debug, Default)]
pub struct Builder {
    inputs: BTreeMap<String, Value>,
    results: BTreeMap<String, Value>,
    residuals: BTreeMap<String, f64>,
    checks: BTreeMap<String, bool>,
}

fn value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialize")
}

impl Builder {
    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), value(v));
        self
    }

    pub fn result(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.results.insert(key.into(), value(v));
        self
    }

    pub fn residual(&mut self, key: &str, v: f64) -> &mut Self {
        self.residuals.insert(key.into(), v);
        self
    }

    pub fn check(&mut self, key: &str, ok: bool) -> &mut Self {
        self.checks.insert(key.into(), ok);
        self
    }

    pub fn finish(self, command: &str, config: &RunConfig, wall_time_s: f64) -> Report {
        let pass = self.checks.values().all(|c| *c);
        Report {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            library_version: rotelast::VERSION,
            config_sha256: config.sha256(),
            config: config.entries().clone(),
            inputs: self.inputs,
            results: self.results,
            residuals: self.residuals,
            checks: self.checks,
            pass,
            wall_time_s,
        }
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => fs::write(p, self.to_json())?,
            None => print!("{}", self.to_json()),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_requires_every_check() {
        let cfg = RunConfig::default();
        let mut b = Builder::default();
        b.check("a", true).check("b", false);
        assert!(!b.finish("x", &cfg, 0.0).pass);
        let mut b = Builder::default();
        b.check("a", true).residual("r", 0.1);
        let r = b.finish("x", &cfg, 0.0);
        assert!(r.pass);
        let text = r.to_json();
        assert!(text.find("schema_version").unwrap() < text.find("wall_time_s").unwrap());
    }

    #[test]
    fn doubles_round_trip() {
        let cfg = RunConfig::default();
        let mut b = Builder::default();
        let x: f64 = 0.1 + 0.2;
        b.result("x", x);
        let v: Value = serde_json::from_str(&b.finish("x", &cfg, 0.0).to_json()).unwrap();
        assert_eq!(v["results"]["x"].as_f64().unwrap().to_bits(), x.to_bits());
    }
}
