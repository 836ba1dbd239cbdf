//! Bayesian threat-type posterior and MAP classification.
//!
//! For an object in region `r` with detection set `Z` the posterior is
//!
//! ```text
//! P(t | Z, r) ∝ P(t | r) · Π_{s ∈ Z} Λ_s(Z_s, t)
//! ```
//!
//! where each per-sensor likelihood marginalizes whether the return is a true
//! detection (`D = 1`, probability `P_D(s, t)`) or clutter:
//!
//! ```text
//! direct, t = t̂:   π·P_D + (1 − π)·(1 − P_D)
//! direct, t ≠ t̂:   (1 − π)·(1 − P_D)
//! indicative:      π·P_D + (1 − π)·(1 − P_D)
//! ```
//!
//! Proportionality constants are dropped; the posterior is normalized once
//! over all types.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::FusionError;
use crate::scenario::{Detection, DetectionSet, EvidenceLevel, RegionType, Scenario, SensorModel, ThreatType};

/// Normalized probability vector over the scenario's threat types.
#[derive(Debug, Clone, PartialEq)]
pub struct Posterior {
    probs: Vec<f64>,
}

impl Posterior {
    /// Normalizes nonnegative scores. Fails when they sum to zero.
    pub fn from_scores(scores: Vec<f64>) -> Result<Self, FusionError> {
        let total: f64 = scores.iter().sum();
        if total <= 0.0 || !total.is_finite() {
            return Err(FusionError::DegenerateEvidence);
        }
        Ok(Self {
            probs: scores.into_iter().map(|s| s / total).collect(),
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, t: ThreatType) -> f64 {
        self.probs[t.0]
    }

    /// Most probable type; the lowest index wins ties.
    pub fn map(&self) -> ThreatType {
        ThreatType(argmax(&self.probs))
    }

    pub fn max_prob(&self) -> f64 {
        self.probs[argmax(&self.probs)]
    }
}

/// Index of the first maximal element.
pub(crate) fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate().skip(1) {
        if x > xs[best] {
            best = i;
        }
    }
    best
}

#[inline]
fn marginal(pi: f64, pd: f64) -> f64 {
    pi * pd + (1.0 - pi) * (1.0 - pd)
}

fn check_source(detection: &Detection, sensor: &SensorModel) -> Result<(), FusionError> {
    if detection.sensor != sensor.index() {
        return Err(FusionError::SensorMismatch {
            detection: detection.sensor.0,
            sensor: sensor.index().0,
        });
    }
    if !(0.0..=1.0).contains(&detection.confidence) {
        return Err(FusionError::Confidence(detection.confidence));
    }
    Ok(())
}

/// `Λ_D(Z_s, t)` for a detection from a direct-evidence sensor.
pub fn direct_likelihood(
    detection: &Detection,
    sensor: &SensorModel,
    t: ThreatType,
) -> Result<f64, FusionError> {
    check_source(detection, sensor)?;
    if sensor.level() != EvidenceLevel::Direct {
        return Err(FusionError::NotDirect(sensor.index().0));
    }
    let predicted = detection
        .predicted_type
        .ok_or(FusionError::MissingPredictedType(sensor.index().0))?;
    if predicted.0 >= sensor.detection_prior().len() {
        return Err(FusionError::UnknownType(predicted.0));
    }
    let pd = sensor.detection_prob(t)?;
    let pi = detection.confidence;
    Ok(if t == predicted {
        marginal(pi, pd)
    } else {
        (1.0 - pi) * (1.0 - pd)
    })
}

/// `Λ_I(Z_s, t)` for a detection from an indicative-evidence sensor.
pub fn indicative_likelihood(
    detection: &Detection,
    sensor: &SensorModel,
    t: ThreatType,
) -> Result<f64, FusionError> {
    check_source(detection, sensor)?;
    if sensor.level() != EvidenceLevel::Indicative {
        return Err(FusionError::NotIndicative(sensor.index().0));
    }
    if detection.predicted_type.is_some() {
        return Err(FusionError::UnexpectedPredictedType(sensor.index().0));
    }
    Ok(marginal(detection.confidence, sensor.detection_prob(t)?))
}

/// Per-sensor likelihood, dispatched on the sensor's evidence level.
pub fn sensor_likelihood(
    detection: &Detection,
    scenario: &Scenario,
    t: ThreatType,
) -> Result<f64, FusionError> {
    let sensor = scenario.sensor(detection.sensor)?;
    match sensor.level() {
        EvidenceLevel::Direct => direct_likelihood(detection, sensor, t),
        EvidenceLevel::Indicative => indicative_likelihood(detection, sensor, t),
    }
}

/// `P(Z | t)`: product of the per-sensor likelihoods, 1 for an empty set.
pub fn joint_likelihood(z: &DetectionSet, t: ThreatType, scenario: &Scenario) -> Result<f64, FusionError> {
    if t.0 >= scenario.num_types() {
        return Err(FusionError::UnknownType(t.0));
    }
    z.iter()
        .try_fold(1.0, |acc, d| Ok(acc * sensor_likelihood(d, scenario, t)?))
}

/// Unnormalized `P(t | r) · P(Z | t)` for every type.
fn scores<'a>(
    detections: impl IntoIterator<Item = &'a Detection> + Clone,
    r: RegionType,
    scenario: &Scenario,
) -> Result<Vec<f64>, FusionError> {
    let prior = scenario.regional_prior().row(r)?;
    let mut out = prior.to_vec();
    for d in detections {
        for t in scenario.threat_types() {
            out[t.0] *= sensor_likelihood(d, scenario, t)?;
        }
    }
    Ok(out)
}

/// Full threat-type posterior `P(t | Z, r)`.
pub fn posterior(z: &DetectionSet, r: RegionType, scenario: &Scenario) -> Result<Posterior, FusionError> {
    Posterior::from_scores(scores(z, r, scenario)?)
}

/// MAP type together with the posterior it was taken from.
pub fn map_classify(
    z: &DetectionSet,
    r: RegionType,
    scenario: &Scenario,
) -> Result<(ThreatType, Posterior), FusionError> {
    let p = posterior(z, r, scenario)?;
    Ok((p.map(), p))
}

/// Late-fusion baseline: each detection is classified on its own against the
/// regional prior, then the per-sensor MAP types are put to a majority vote.
///
/// A tied vote goes to the candidate whose supporting sensor reached the
/// highest single-sensor posterior; a remaining tie goes to the lowest type
/// index. Without detections the prior-only MAP is returned.
pub fn baseline_classify(z: &DetectionSet, r: RegionType, scenario: &Scenario) -> Result<ThreatType, FusionError> {
    if z.is_empty() {
        let prior = scenario.regional_prior().row(r)?;
        return Ok(ThreatType(argmax(prior)));
    }
    let n = scenario.num_types();
    let mut votes = vec![0usize; n];
    let mut best = vec![f64::NEG_INFINITY; n];
    for d in z {
        let p = Posterior::from_scores(scores(core::iter::once(d), r, scenario)?)?;
        let t = p.map();
        votes[t.0] += 1;
        best[t.0] = best[t.0].max(p.max_prob());
    }
    Ok(ThreatType(resolve_vote(&votes, &best)))
}

/// Winner of a vote given counts and the best supporting posterior per type.
pub(crate) fn resolve_vote(votes: &[usize], best: &[f64]) -> usize {
    let top = votes.iter().copied().max().unwrap_or(0);
    let mut winner: Option<usize> = None;
    for (i, &v) in votes.iter().enumerate() {
        if v != top {
            continue;
        }
        match winner {
            Some(w) if best[i] <= best[w] => {}
            _ => winner = Some(i),
        }
    }
    winner.unwrap_or(0)
}

/// The two classifiers under evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classifier {
    /// Early fusion of all evidence into one posterior.
    Proposed,
    /// Per-sensor MAP followed by a majority vote.
    Baseline,
}

impl Classifier {
    pub fn classify(self, z: &DetectionSet, r: RegionType, scenario: &Scenario) -> Result<ThreatType, FusionError> {
        match self {
            Classifier::Proposed => Ok(map_classify(z, r, scenario)?.0),
            Classifier::Baseline => baseline_classify(z, r, scenario),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Classifier::Proposed => "Proposed",
            Classifier::Baseline => "Baseline",
        }
    }
}
