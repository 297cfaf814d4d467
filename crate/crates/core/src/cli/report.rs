//! Report envelope shared by every command: run configuration, per-stage
//! status, and a typed result whose claims name the operation behind them.

use std::fmt::Write as _;

use schemars::JsonSchema;
use serde::{Deserialize, Serialize};

/// Stage outcome, ordered by severity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, JsonSchema)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    /// Conclusive and passing.
    Pass,
    /// Not run because nothing required it (e.g. no positive-betti subgroup).
    Skipped,
    /// A search that completed within its budget without reaching its goal;
    /// the goal carries no effective bound, so this is not a failure.
    BestEffort,
    /// A budget ran out before the question was decided.
    Inconclusive,
    /// A check was decided and failed.
    Fail,
}

impl Status {
    /// Process exit code: 0 success, 3 incomplete, 4 failure. Input errors
    /// exit with 1 before any report is produced.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass | Status::Skipped | Status::BestEffort => 0,
            Status::Inconclusive => 3,
            Status::Fail => 4,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Skipped => "SKIP",
            Status::BestEffort => "BEST-EFFORT",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Fail => "FAIL",
        }
    }
}

/// A value together with the library operation that produced it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Claim<T> {
    pub operation: String,
    pub value: T,
}

pub fn claim<T>(operation: &str, value: T) -> Claim<T> {
    Claim { operation: operation.to_string(), value }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct Stage {
    pub name: String,
    pub status: Status,
    pub summary: String,
}

/// Every budget of a run; all are positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct Budgets {
    pub max_cosets: usize,
    pub max_index: usize,
    pub search_nodes: u64,
    pub word_length: usize,
    pub prime_bound: u64,
    pub density_words: usize,
    pub depth: usize,
    pub samples: usize,
    pub sample_length: usize,
    pub order_cap: u32,
    pub kernel_generators: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct Input {
    pub role: String,
    /// File path as given, or `builtin:<name>` for bundled data.
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize, JsonSchema)]
pub struct RunConfig {
    pub command: String,
    pub inputs: Vec<Input>,
    pub budgets: Budgets,
    pub seed: u64,
    pub out: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, JsonSchema)]
pub struct Report<T> {
    pub tool: String,
    pub version: String,
    /// Words in this report are 0-based generator indices.
    pub word_convention: String,
    pub config: RunConfig,
    pub status: Status,
    pub exit_code: i32,
    pub stages: Vec<Stage>,
    pub result: T,
}

/// Collects stages while a command runs.
#[derive(Default)]
pub struct Stages(pub Vec<Stage>);

impl Stages {
    pub fn push(&mut self, name: &str, status: Status, summary: impl Into<String>) -> Status {
        self.0.push(Stage { name: name.to_string(), status, summary: summary.into() });
        status
    }

    pub fn worst(&self) -> Status {
        self.0.iter().map(|s| s.status).max().unwrap_or(Status::Pass)
    }

    pub fn failed(&self) -> bool {
        self.worst() == Status::Fail
    }
}

impl<T> Report<T> {
    pub fn new(config: RunConfig, stages: Stages, result: T) -> Self {
        let status = stages.worst();
        Report {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            word_convention: "0-based generator indices".to_string(),
            config,
            status,
            exit_code: status.exit_code(),
            stages: stages.0,
            result,
        }
    }

    /// Human-readable summary: one line per stage.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} — {}\n", self.tool, self.version, self.config.command);
        for input in &self.config.inputs {
            let _ = writeln!(out, "  {}: {}", input.role, input.source);
        }
        let _ = writeln!(out, "  seed: {}", self.config.seed);
        for s in &self.stages {
            let _ = writeln!(out, "[{}] {}: {}", s.status.label(), s.name, s.summary);
        }
        let _ = writeln!(out, "status: {} (exit {})", self.status.label(), self.exit_code);
        out
    }
}

impl<T: Serialize> Report<T> {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}
