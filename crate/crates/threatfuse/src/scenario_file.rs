//! TOML scenario files.
//!
//! ```toml
//! name = "basic"
//!
//! [types]
//! labels = ["A", "B", "C"]
//!
//! [regions]
//! labels = ["R1", "R2", "R3"]
//!
//! [[sensor]]
//! id = "S1"
//! level = "indicative"          # or "direct"
//! detection_prior = { A = 0.9, B = 0.4, C = 0.0 }
//!
//! [prior.R1]                    # one table per region, keyed by type
//! A = 0.6
//! B = 0.3
//! C = 0.1
//!
//! [confidence.strong]           # named Beta parameter sets
//! true = { alpha = 8.0, beta = 2.5 }
//! clutter = { alpha = 2.5, beta = 8.0 }
//!
//! [aliases]                     # optional region-label rewrites
//! meadow = "grassland"
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use threatfuse_core::region::AliasMap;
use threatfuse_core::sim::ConfidenceModel;
use threatfuse_core::{builtin, EvidenceLevel, Scenario, ScenarioError, SensorModel};

use crate::error::{Error, Result};

/// Name of the confidence set used when none is requested.
pub const DEFAULT_CONFIDENCE: &str = "strong";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelList {
    labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SensorEntry {
    id: String,
    level: String,
    detection_prior: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BetaParams {
    alpha: f64,
    beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfidenceEntry {
    #[serde(rename = "true")]
    true_detection: BetaParams,
    clutter: BetaParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    name: String,
    types: LabelList,
    regions: LabelList,
    #[serde(default, rename = "sensor")]
    sensors: Vec<SensorEntry>,
    prior: BTreeMap<String, BTreeMap<String, f64>>,
    #[serde(default)]
    confidence: BTreeMap<String, ConfidenceEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    aliases: BTreeMap<String, String>,
}

/// A scenario together with the confidence models and region aliases its
/// file declares.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDocument {
    pub scenario: Scenario,
    pub confidence: BTreeMap<String, ConfidenceModel>,
    pub aliases: AliasMap,
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Scenario(ScenarioError::Invalid {
        field: field.into(),
        message: message.into(),
    })
}

/// Orders a label-keyed table by `labels`, rejecting unknown and missing keys.
fn keyed_row(field: &str, row: &BTreeMap<String, f64>, labels: &[String]) -> Result<Vec<f64>> {
    if let Some(unknown) = row.keys().find(|k| !labels.contains(k)) {
        return Err(ScenarioError::UnknownLabel {
            field: field.to_string(),
            label: unknown.clone(),
            valid: labels.to_vec(),
        }
        .into());
    }
    labels
        .iter()
        .map(|l| {
            row.get(l)
                .copied()
                .ok_or_else(|| invalid(field, format!("missing entry for type {l:?}")))
        })
        .collect()
}

impl ScenarioDocument {
    /// Document for a built-in scenario, with both confidence sets.
    pub fn builtin(name: &str) -> Option<Self> {
        let scenario = builtin::by_name(name)?;
        let aliases = if name == "cbrne" {
            AliasMap::new(builtin::cbrne_aliases()).expect("acyclic")
        } else {
            AliasMap::default()
        };
        Some(Self {
            scenario,
            confidence: standard_confidence(),
            aliases,
        })
    }

    pub fn parse(text: &str, origin: &Path) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| Error::parse(origin, e.message()))?;
        Self::from_file(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    /// A built-in name or a path to a scenario file.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        if let Some(doc) = Self::builtin(name_or_path) {
            return Ok(doc);
        }
        let path = Path::new(name_or_path);
        if !path.exists() {
            return Err(Error::Usage(format!(
                "unknown scenario {name_or_path:?}: not a built-in ({}) and no such file",
                builtin::NAMES.join(", ")
            )));
        }
        Self::load(path)
    }

    fn from_file(file: ScenarioFile) -> Result<Self> {
        let types = file.types.labels;
        let regions = file.regions.labels;

        let sensors = file
            .sensors
            .iter()
            .map(|s| {
                let level: EvidenceLevel = s.level.parse().map_err(|_| {
                    invalid(
                        format!("sensor.{}.level", s.id),
                        format!("expected \"direct\" or \"indicative\", found {:?}", s.level),
                    )
                })?;
                let prior = keyed_row(&format!("sensor.{}.detection_prior", s.id), &s.detection_prior, &types)?;
                Ok(SensorModel::new(s.id.clone(), level, prior))
            })
            .collect::<Result<Vec<_>>>()?;

        if let Some(unknown) = file.prior.keys().find(|k| !regions.contains(k)) {
            return Err(ScenarioError::UnknownLabel {
                field: "prior".into(),
                label: unknown.clone(),
                valid: regions.clone(),
            }
            .into());
        }
        let rows = regions
            .iter()
            .map(|r| {
                let field = format!("prior.{r}");
                let row = file
                    .prior
                    .get(r)
                    .ok_or_else(|| invalid(&field, "missing prior row"))?;
                keyed_row(&field, row, &types)
            })
            .collect::<Result<Vec<_>>>()?;

        let scenario = Scenario::new(file.name, types, regions, sensors, rows)?;

        let confidence = file
            .confidence
            .into_iter()
            .map(|(name, c)| {
                let model = ConfidenceModel {
                    true_alpha: c.true_detection.alpha,
                    true_beta: c.true_detection.beta,
                    clutter_alpha: c.clutter.alpha,
                    clutter_beta: c.clutter.beta,
                };
                model
                    .validate()
                    .map_err(|e| invalid(format!("confidence.{name}"), e.to_string()))?;
                Ok((name, model))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;

        let aliases = AliasMap::new(file.aliases)?;
        for (alias, target) in aliases.iter() {
            let canonical = aliases.resolve(target)?;
            if scenario.region(canonical).is_none() {
                return Err(ScenarioError::UnknownLabel {
                    field: format!("aliases.{alias}"),
                    label: canonical.to_string(),
                    valid: scenario.region_labels().to_vec(),
                }
                .into());
            }
        }

        Ok(Self {
            scenario,
            confidence,
            aliases,
        })
    }

    /// Named confidence set; falls back to the standard strong/weak sets when
    /// the file declares none.
    pub fn confidence_model(&self, name: &str) -> Result<ConfidenceModel> {
        if let Some(m) = self.confidence.get(name) {
            return Ok(*m);
        }
        if self.confidence.is_empty() {
            if let Some(m) = standard_confidence().get(name) {
                return Ok(*m);
            }
        }
        Err(Error::Usage(format!(
            "scenario {:?} has no confidence set {name:?}",
            self.scenario.name()
        )))
    }

    pub fn to_toml(&self) -> String {
        let s = &self.scenario;
        let types = s.type_labels();
        let keyed = |row: &[f64]| -> BTreeMap<String, f64> { types.iter().cloned().zip(row.iter().copied()).collect() };
        let file = ScenarioFile {
            name: s.name().to_string(),
            types: LabelList { labels: types.to_vec() },
            regions: LabelList {
                labels: s.region_labels().to_vec(),
            },
            sensors: s
                .sensors()
                .iter()
                .map(|x| SensorEntry {
                    id: x.id().to_string(),
                    level: x.level().as_str().to_string(),
                    detection_prior: keyed(x.detection_prior()),
                })
                .collect(),
            prior: s
                .region_labels()
                .iter()
                .zip(s.regional_prior().rows())
                .map(|(r, row)| (r.clone(), keyed(row)))
                .collect(),
            confidence: self
                .confidence
                .iter()
                .map(|(name, m)| {
                    let entry = ConfidenceEntry {
                        true_detection: BetaParams {
                            alpha: m.true_alpha,
                            beta: m.true_beta,
                        },
                        clutter: BetaParams {
                            alpha: m.clutter_alpha,
                            beta: m.clutter_beta,
                        },
                    };
                    (name.clone(), entry)
                })
                .collect(),
            aliases: self
                .aliases
                .iter()
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .collect(),
        };
        toml::to_string(&file).expect("scenario serializes")
    }
}

pub fn standard_confidence() -> BTreeMap<String, ConfidenceModel> {
    BTreeMap::from([
        ("strong".to_string(), ConfidenceModel::STRONG),
        ("weak".to_string(), ConfidenceModel::WEAK),
    ])
}
