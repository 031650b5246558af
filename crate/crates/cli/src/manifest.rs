use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub parameters: BTreeMap<String, Value>,
    pub seed: u64,
    pub tolerance: f64,
    pub checks: Vec<Check>,
    pub error_budget: BTreeMap<String, f64>,
    pub wall_clock_seconds: f64,
    pub version: String,
}

impl RunManifest {
    pub fn new(subcommand: &str, seed: u64, tolerance: f64) -> Self {
        Self {
            subcommand: subcommand.into(),
            parameters: BTreeMap::new(),
            seed,
            tolerance,
            checks: Vec::new(),
            error_budget: BTreeMap::new(),
            wall_clock_seconds: 0.0,
            version: concat!("fraclap ", env!("CARGO_PKG_VERSION")).into(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.insert(key.into(), value.into());
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(Check { name: name.into(), passed, detail });
    }

    pub fn budget(&mut self, key: &str, value: f64) {
        self.error_budget.insert(key.into(), value);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}
