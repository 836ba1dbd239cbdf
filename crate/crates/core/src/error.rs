use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

/// Scenario construction and validation failures. Every variant names the
/// offending field and value.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("{field}: unknown label {label:?}, expected one of {valid:?}")]
    UnknownLabel {
        field: String,
        label: String,
        valid: Vec<String>,
    },
    #[error("{field}: duplicate label {label:?}")]
    DuplicateLabel { field: String, label: String },
    #[error("{field}: probability {value} outside [0, 1]")]
    OutOfRange { field: String, value: f64 },
    #[error("{field}: row sum {sum} differs from 1")]
    RowSum { field: String, sum: f64 },
    #[error("{field}: expected {expected} entries, found {found}")]
    Dimension {
        field: String,
        expected: usize,
        found: usize,
    },
}

impl ScenarioError {
    pub(crate) fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Errors raised by the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FusionError {
    #[error("unknown sensor index {0}")]
    UnknownSensor(usize),
    #[error("unknown threat type index {0}")]
    UnknownType(usize),
    #[error("unknown region index {0}")]
    UnknownRegion(usize),
    #[error("detection from sensor {detection} passed with sensor model {sensor}")]
    SensorMismatch { detection: usize, sensor: usize },
    #[error("sensor {0} is indicative but a direct likelihood was requested")]
    NotDirect(usize),
    #[error("sensor {0} is direct but an indicative likelihood was requested")]
    NotIndicative(usize),
    #[error("direct detection from sensor {0} carries no predicted type")]
    MissingPredictedType(usize),
    #[error("indicative detection from sensor {0} carries a predicted type")]
    UnexpectedPredictedType(usize),
    #[error("confidence {0} outside [0, 1]")]
    Confidence(f64),
    #[error("sensor {0} appears more than once in a detection set")]
    DuplicateSensor(usize),
    #[error("degenerate evidence: posterior normalizer is zero")]
    DegenerateEvidence,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RegionError {
    #[error("region label {label:?} is not a scenario region, expected one of {valid:?}")]
    UnknownRegion { label: String, valid: Vec<String> },
    #[error("alias map contains a cycle through {0:?}")]
    AliasCycle(String),
    #[error("malformed geometry: {0}")]
    Geometry(String),
    #[error("point ({x}, {y}) is not covered by any region and no default is set")]
    NotCovered { x: f64, y: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("no trial records")]
    Empty,
    #[error("type index {index} outside confusion matrix of size {size}")]
    TypeOutOfRange { index: usize, size: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("run {run}: {source}")]
    Run { run: u64, source: FusionError },
}
