//! Scenario model: threat types, region types, sensor models and the
//! regional type prior, plus the detections sensors emit.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::{FusionError, ScenarioError};

/// Row-sum tolerance accepted when a scenario is constructed. Rows are
/// renormalized to sum to one afterwards.
pub const ROW_SUM_TOLERANCE: f64 = 1e-6;

const EXACT_SUM_SLACK: f64 = 1e-12;

/// Index of a threat type within its scenario's type list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThreatType(pub usize);

impl ThreatType {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Index of a region type within its scenario's region list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RegionType(pub usize);

impl RegionType {
    pub fn index(self) -> usize {
        self.0
    }
}

/// Index of a sensor within its scenario's sensor list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SensorId(pub usize);

impl SensorId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EvidenceLevel {
    /// Returns carry a predicted type.
    Direct,
    /// Returns carry a confidence only.
    Indicative,
}

impl EvidenceLevel {
    pub fn as_str(self) -> &'static str {
        match self {
            EvidenceLevel::Direct => "direct",
            EvidenceLevel::Indicative => "indicative",
        }
    }
}

impl core::str::FromStr for EvidenceLevel {
    type Err = ScenarioError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "direct" => Ok(EvidenceLevel::Direct),
            "indicative" => Ok(EvidenceLevel::Indicative),
            other => Err(ScenarioError::invalid(
                "level",
                format!("expected \"direct\" or \"indicative\", found {other:?}"),
            )),
        }
    }
}

/// One sensor: its evidence level and the per-type probability
/// `P_D(s, t) = P(D = 1 | t)` that a return is caused by a true object.
///
/// The detection prior is not a distribution over types; entries are
/// independent probabilities and need not sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SensorModel {
    id: String,
    index: SensorId,
    level: EvidenceLevel,
    detection_prior: Vec<f64>,
}

impl SensorModel {
    /// The sensor index is assigned when the model is placed in a [`Scenario`].
    pub fn new(id: impl Into<String>, level: EvidenceLevel, detection_prior: Vec<f64>) -> Self {
        Self {
            id: id.into(),
            index: SensorId(0),
            level,
            detection_prior,
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn index(&self) -> SensorId {
        self.index
    }

    pub fn level(&self) -> EvidenceLevel {
        self.level
    }

    pub fn detection_prior(&self) -> &[f64] {
        &self.detection_prior
    }

    pub fn detection_prob(&self, t: ThreatType) -> Result<f64, FusionError> {
        self.detection_prior
            .get(t.0)
            .copied()
            .ok_or(FusionError::UnknownType(t.0))
    }

    /// Same sensor with a different evidence level.
    pub fn with_level(&self, level: EvidenceLevel) -> Self {
        Self {
            level,
            ..self.clone()
        }
    }

    /// Same sensor with replaced detection probabilities. Values are not
    /// revalidated; callers keep them in `[0, 1]`.
    pub(crate) fn with_detection_prior(&self, detection_prior: Vec<f64>) -> Self {
        Self {
            detection_prior,
            ..self.clone()
        }
    }
}

/// A single sensor return.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Detection {
    pub sensor: SensorId,
    /// Probability `π` that the return stems from a true object.
    pub confidence: f64,
    /// Present iff the emitting sensor provides direct evidence.
    pub predicted_type: Option<ThreatType>,
}

impl Detection {
    pub fn indicative(sensor: SensorId, confidence: f64) -> Self {
        Self {
            sensor,
            confidence,
            predicted_type: None,
        }
    }

    pub fn direct(sensor: SensorId, confidence: f64, predicted_type: ThreatType) -> Self {
        Self {
            sensor,
            confidence,
            predicted_type: Some(predicted_type),
        }
    }
}

/// All returns associated with one object, at most one per sensor.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DetectionSet {
    detections: Vec<Detection>,
}

impl DetectionSet {
    pub fn new(detections: Vec<Detection>) -> Result<Self, FusionError> {
        let mut set = Self::default();
        for d in detections {
            set.push(d)?;
        }
        Ok(set)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn push(&mut self, detection: Detection) -> Result<(), FusionError> {
        if !(0.0..=1.0).contains(&detection.confidence) {
            return Err(FusionError::Confidence(detection.confidence));
        }
        if self.detections.iter().any(|d| d.sensor == detection.sensor) {
            return Err(FusionError::DuplicateSensor(detection.sensor.0));
        }
        self.detections.push(detection);
        Ok(())
    }

    pub fn iter(&self) -> core::slice::Iter<'_, Detection> {
        self.detections.iter()
    }

    pub fn len(&self) -> usize {
        self.detections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detections.is_empty()
    }

    pub fn as_slice(&self) -> &[Detection] {
        &self.detections
    }
}

impl<'a> IntoIterator for &'a DetectionSet {
    type Item = &'a Detection;
    type IntoIter = core::slice::Iter<'a, Detection>;

    fn into_iter(self) -> Self::IntoIter {
        self.detections.iter()
    }
}

/// `P(t | r)`: one probability vector over threat types per region type.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionalPrior {
    rows: Vec<Vec<f64>>,
}

impl RegionalPrior {
    /// Validates every row (entries in `[0, 1]`, sum within
    /// [`ROW_SUM_TOLERANCE`] of one). Rows off by more than rounding error
    /// are renormalized; the rest are kept as written.
    pub fn new(rows: Vec<Vec<f64>>, region_labels: &[String]) -> Result<Self, ScenarioError> {
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                let name = region_labels
                    .get(i)
                    .map(String::as_str)
                    .unwrap_or("?");
                let field = format!("prior.{name}");
                for &p in &row {
                    if !(0.0..=1.0).contains(&p) {
                        return Err(ScenarioError::OutOfRange { field, value: p });
                    }
                }
                let sum: f64 = row.iter().sum();
                if (sum - 1.0).abs() > ROW_SUM_TOLERANCE {
                    return Err(ScenarioError::RowSum { field, sum });
                }
                if (sum - 1.0).abs() <= EXACT_SUM_SLACK {
                    return Ok(row);
                }
                Ok(row.into_iter().map(|p| p / sum).collect())
            })
            .collect::<Result<Vec<Vec<f64>>, _>>()?;
        Ok(Self { rows })
    }

    /// Rows that are already exact distributions (used by the perturbation
    /// code, whose convex combinations stay normalized).
    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<f64>>) -> Self {
        Self { rows }
    }

    pub fn row(&self, r: RegionType) -> Result<&[f64], FusionError> {
        self.rows
            .get(r.0)
            .map(Vec::as_slice)
            .ok_or(FusionError::UnknownRegion(r.0))
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }
}

/// Threat types, region types, sensors and regional prior of one setting.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    name: String,
    types: Vec<String>,
    regions: Vec<String>,
    sensors: Vec<SensorModel>,
    prior: RegionalPrior,
}

fn check_unique(field: &str, labels: &[String]) -> Result<(), ScenarioError> {
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() {
            return Err(ScenarioError::invalid(field, "empty label"));
        }
        if labels[..i].contains(l) {
            return Err(ScenarioError::DuplicateLabel {
                field: field.to_string(),
                label: l.clone(),
            });
        }
    }
    Ok(())
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        types: Vec<String>,
        regions: Vec<String>,
        sensors: Vec<SensorModel>,
        prior_rows: Vec<Vec<f64>>,
    ) -> Result<Self, ScenarioError> {
        if types.is_empty() {
            return Err(ScenarioError::invalid("types", "at least one threat type is required"));
        }
        if regions.is_empty() {
            return Err(ScenarioError::invalid("regions", "at least one region type is required"));
        }
        check_unique("types", &types)?;
        check_unique("regions", &regions)?;
        let ids: Vec<String> = sensors.iter().map(|s| s.id.clone()).collect();
        check_unique("sensor.id", &ids)?;

        let sensors = sensors
            .into_iter()
            .enumerate()
            .map(|(i, mut s)| {
                let field = format!("sensor.{}.detection_prior", s.id);
                if s.detection_prior.len() != types.len() {
                    return Err(ScenarioError::Dimension {
                        field,
                        expected: types.len(),
                        found: s.detection_prior.len(),
                    });
                }
                if let Some(&p) = s.detection_prior.iter().find(|p| !(0.0..=1.0).contains(*p)) {
                    return Err(ScenarioError::OutOfRange { field, value: p });
                }
                s.index = SensorId(i);
                Ok(s)
            })
            .collect::<Result<Vec<_>, _>>()?;

        if prior_rows.len() != regions.len() {
            return Err(ScenarioError::Dimension {
                field: "prior".into(),
                expected: regions.len(),
                found: prior_rows.len(),
            });
        }
        for (row, label) in prior_rows.iter().zip(&regions) {
            if row.len() != types.len() {
                return Err(ScenarioError::Dimension {
                    field: format!("prior.{label}"),
                    expected: types.len(),
                    found: row.len(),
                });
            }
        }
        let prior = RegionalPrior::new(prior_rows, &regions)?;

        Ok(Self {
            name: name.into(),
            types,
            regions,
            sensors,
            prior,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn type_labels(&self) -> &[String] {
        &self.types
    }

    pub fn region_labels(&self) -> &[String] {
        &self.regions
    }

    pub fn num_types(&self) -> usize {
        self.types.len()
    }

    pub fn num_regions(&self) -> usize {
        self.regions.len()
    }

    pub fn sensors(&self) -> &[SensorModel] {
        &self.sensors
    }

    pub fn regional_prior(&self) -> &RegionalPrior {
        &self.prior
    }

    pub fn threat_types(&self) -> impl Iterator<Item = ThreatType> + '_ {
        (0..self.types.len()).map(ThreatType)
    }

    pub fn threat_type(&self, label: &str) -> Option<ThreatType> {
        self.types.iter().position(|l| l == label).map(ThreatType)
    }

    pub fn region(&self, label: &str) -> Option<RegionType> {
        self.regions.iter().position(|l| l == label).map(RegionType)
    }

    pub fn sensor_id(&self, id: &str) -> Option<SensorId> {
        self.sensors.iter().position(|s| s.id == id).map(SensorId)
    }

    pub fn sensor(&self, id: SensorId) -> Result<&SensorModel, FusionError> {
        self.sensors
            .get(id.0)
            .ok_or(FusionError::UnknownSensor(id.0))
    }

    /// Panics if `t` is not a type of this scenario.
    pub fn type_label(&self, t: ThreatType) -> &str {
        &self.types[t.0]
    }

    /// Panics if `r` is not a region of this scenario.
    pub fn region_label(&self, r: RegionType) -> &str {
        &self.regions[r.0]
    }

    /// Copy with every direct sensor turned into an indicative one that keeps
    /// its detection prior.
    pub fn without_direct_evidence(&self) -> Self {
        let mut out = self.clone();
        for s in &mut out.sensors {
            s.level = EvidenceLevel::Indicative;
        }
        out
    }

    pub(crate) fn with_parts(&self, sensors: Option<Vec<SensorModel>>, prior: Option<RegionalPrior>) -> Self {
        Self {
            name: self.name.clone(),
            types: self.types.clone(),
            regions: self.regions.clone(),
            sensors: sensors.unwrap_or_else(|| self.sensors.clone()),
            prior: prior.unwrap_or_else(|| self.prior.clone()),
        }
    }
}
