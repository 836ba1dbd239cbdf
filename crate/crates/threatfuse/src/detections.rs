//! Detection files: CSV with header `sensor,confidence,predicted_type`.
//! `predicted_type` is left empty for indicative sensors. A file with no
//! rows (or no bytes at all) is an empty detection set.

use std::path::Path;

use serde::Deserialize;
use threatfuse_core::{Detection, DetectionSet, EvidenceLevel, Scenario, ScenarioError};

use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct Row {
    sensor: String,
    confidence: f64,
    #[serde(default)]
    predicted_type: Option<String>,
}

fn row_error(line: usize, field: &str, message: impl Into<String>) -> Error {
    Error::Scenario(ScenarioError::Invalid {
        field: format!("detections row {line}: {field}"),
        message: message.into(),
    })
}

pub fn parse_detections<R: std::io::Read>(reader: R, scenario: &Scenario) -> Result<DetectionSet> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut set = DetectionSet::empty();
    for (i, row) in rdr.deserialize::<Row>().enumerate() {
        let line = i + 1;
        let row = row?;
        let id = scenario.sensor_id(&row.sensor).ok_or_else(|| {
            let valid: Vec<&str> = scenario.sensors().iter().map(|s| s.id()).collect();
            row_error(line, "sensor", format!("unknown sensor {:?}, expected one of {valid:?}", row.sensor))
        })?;
        if !(0.0..=1.0).contains(&row.confidence) {
            return Err(row_error(line, "confidence", format!("{} outside [0, 1]", row.confidence)));
        }
        let predicted = row.predicted_type.filter(|t| !t.is_empty());
        let detection = match (scenario.sensors()[id.0].level(), predicted) {
            (EvidenceLevel::Direct, Some(label)) => {
                let t = scenario.threat_type(&label).ok_or_else(|| {
                    row_error(
                        line,
                        "predicted_type",
                        format!("unknown type {label:?}, expected one of {:?}", scenario.type_labels()),
                    )
                })?;
                Detection::direct(id, row.confidence, t)
            }
            (EvidenceLevel::Direct, None) => {
                return Err(row_error(line, "predicted_type", format!("direct sensor {} needs a predicted type", row.sensor)))
            }
            (EvidenceLevel::Indicative, None) => Detection::indicative(id, row.confidence),
            (EvidenceLevel::Indicative, Some(_)) => {
                return Err(row_error(
                    line,
                    "predicted_type",
                    format!("indicative sensor {} cannot predict a type", row.sensor),
                ))
            }
        };
        set.push(detection)
            .map_err(|_| row_error(line, "sensor", format!("second detection from {}", row.sensor)))?;
    }
    Ok(set)
}

pub fn load_detections(path: &Path, scenario: &Scenario) -> Result<DetectionSet> {
    let file = std::fs::File::open(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_detections(file, scenario)
}
