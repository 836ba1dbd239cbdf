//! Generative model: random threat objects and the detection sets the
//! selected sensors produce for them.

use alloc::vec;

use rand::seq::index;
use rand::Rng;
use rand_distr::{Beta, Distribution};

use super::sampling::sample_categorical;
use crate::error::SimError;
use crate::scenario::{Detection, DetectionSet, EvidenceLevel, RegionType, Scenario, SensorId, ThreatType};

/// Beta shape parameters for true-detection and clutter confidences.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConfidenceModel {
    pub true_alpha: f64,
    pub true_beta: f64,
    pub clutter_alpha: f64,
    pub clutter_beta: f64,
}

impl ConfidenceModel {
    /// True `Beta(8, 2.5)`, clutter `Beta(2.5, 8)`.
    pub const STRONG: Self = Self {
        true_alpha: 8.0,
        true_beta: 2.5,
        clutter_alpha: 2.5,
        clutter_beta: 8.0,
    };

    /// True `Beta(5, 4)`, clutter `Beta(4, 5)`.
    pub const WEAK: Self = Self {
        true_alpha: 5.0,
        true_beta: 4.0,
        clutter_alpha: 4.0,
        clutter_beta: 5.0,
    };

    pub fn validate(&self) -> Result<(), SimError> {
        for (name, v) in [
            ("true_alpha", self.true_alpha),
            ("true_beta", self.true_beta),
            ("clutter_alpha", self.clutter_alpha),
            ("clutter_beta", self.clutter_beta),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SimError::Config(alloc::format!(
                    "confidence {name} = {v} must be positive"
                )));
            }
        }
        Ok(())
    }

    pub fn true_mean(&self) -> f64 {
        self.true_alpha / (self.true_alpha + self.true_beta)
    }

    pub fn clutter_mean(&self) -> f64 {
        self.clutter_alpha / (self.clutter_alpha + self.clutter_beta)
    }
}

impl Default for ConfidenceModel {
    fn default() -> Self {
        Self::STRONG
    }
}

/// Ready-to-use Beta samplers for a [`ConfidenceModel`].
#[derive(Debug, Clone, Copy)]
pub struct ConfidenceSampler {
    true_conf: Beta<f64>,
    clutter_conf: Beta<f64>,
}

impl ConfidenceSampler {
    pub fn new(model: &ConfidenceModel) -> Result<Self, SimError> {
        model.validate()?;
        let beta = |a, b| Beta::new(a, b).map_err(|e| SimError::Config(alloc::format!("{e}")));
        Ok(Self {
            true_conf: beta(model.true_alpha, model.true_beta)?,
            clutter_conf: beta(model.clutter_alpha, model.clutter_beta)?,
        })
    }

    pub fn true_confidence<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.true_conf.sample(rng)
    }

    pub fn clutter_confidence<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        self.clutter_conf.sample(rng)
    }
}

/// Which sensors return something for a true object.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Emission {
    /// Every selected sensor returns exactly one detection.
    #[default]
    OnePerSensor,
    /// A sensor that is not cluttered returns a true detection with
    /// probability `P_D(s, t)` and stays silent otherwise.
    BernoulliPd,
}

impl Emission {
    pub fn as_str(self) -> &'static str {
        match self {
            Emission::OnePerSensor => "one-per-sensor",
            Emission::BernoulliPd => "bernoulli-pd",
        }
    }
}

impl core::str::FromStr for Emission {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "one-per-sensor" => Ok(Emission::OnePerSensor),
            "bernoulli-pd" => Ok(Emission::BernoulliPd),
            other => Err(SimError::Config(alloc::format!(
                "unknown emission model {other:?}, expected one-per-sensor or bernoulli-pd"
            ))),
        }
    }
}

/// Draws a region uniformly, then the object's type from `P(t | region)`.
pub fn generate_object<R: Rng + ?Sized>(scenario: &Scenario, rng: &mut R) -> (RegionType, ThreatType) {
    let region = RegionType(rng.random_range(0..scenario.num_regions()));
    (region, generate_type(scenario, region, rng))
}

/// Draws a type from the region's row of the regional prior.
pub fn generate_type<R: Rng + ?Sized>(scenario: &Scenario, region: RegionType, rng: &mut R) -> ThreatType {
    let row = &scenario.regional_prior().rows()[region.0];
    ThreatType(sample_categorical(row, rng))
}

/// Detections of `truth` by the sensors in `subset`.
///
/// `n_clutter` of them, picked without replacement, return clutter: a
/// confidence from the clutter Beta and, for direct sensors, a predicted type
/// drawn uniformly over all types. The rest return true detections with a
/// confidence from the true Beta; direct sensors predict `truth`.
///
/// Panics if `n_clutter > subset.len()`.
pub fn generate_detection_set<R: Rng + ?Sized>(
    scenario: &Scenario,
    truth: ThreatType,
    subset: &[SensorId],
    n_clutter: usize,
    confidence: &ConfidenceSampler,
    emission: Emission,
    rng: &mut R,
) -> DetectionSet {
    assert!(n_clutter <= subset.len(), "more clutter returns than sensors");
    let mut cluttered = vec![false; subset.len()];
    if n_clutter > 0 {
        for i in index::sample(rng, subset.len(), n_clutter) {
            cluttered[i] = true;
        }
    }
    let mut z = DetectionSet::empty();
    for (&id, clutter) in subset.iter().zip(cluttered) {
        let sensor = &scenario.sensors()[id.0];
        let detection = if clutter {
            let pi = confidence.clutter_confidence(rng);
            match sensor.level() {
                EvidenceLevel::Direct => {
                    Detection::direct(id, pi, ThreatType(rng.random_range(0..scenario.num_types())))
                }
                EvidenceLevel::Indicative => Detection::indicative(id, pi),
            }
        } else {
            if emission == Emission::BernoulliPd {
                let pd = sensor.detection_prior()[truth.0];
                if rng.random::<f64>() >= pd {
                    continue;
                }
            }
            let pi = confidence.true_confidence(rng);
            match sensor.level() {
                EvidenceLevel::Direct => Detection::direct(id, pi, truth),
                EvidenceLevel::Indicative => Detection::indicative(id, pi),
            }
        };
        z.push(detection).expect("subset holds distinct sensors");
    }
    z
}
