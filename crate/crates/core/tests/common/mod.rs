#![allow(dead_code)]

use proptest::prelude::*;
use threatfuse_core::{Detection, DetectionSet, EvidenceLevel, Scenario, SensorId, ThreatType};

/// Likelihood by explicit enumeration of every true/clutter assignment of the
/// returns. Each return contributes `P(Z | D = d, t) · P(D = d | t)` with the
/// Bayes-inverted, constant-free conditionals:
///
/// - direct, `d = 1`: `π` if `t` equals the predicted type, else 0
/// - direct, `d = 0`: `1 − π`
/// - indicative, `d = 1`: `π`; `d = 0`: `1 − π`
///
/// and `P(D = 1 | t) = P_D(s, t)`.
pub fn brute_force_likelihood(z: &[Detection], t: usize, scenario: &Scenario) -> f64 {
    let n = z.len();
    let mut total = 0.0;
    for mask in 0u32..(1 << n) {
        let mut term = 1.0;
        for (i, det) in z.iter().enumerate() {
            let sensor = &scenario.sensors()[det.sensor.0];
            let pd = sensor.detection_prior()[t];
            let pi = det.confidence;
            let is_true = mask & (1 << i) != 0;
            let conditional = match (sensor.level(), is_true) {
                (EvidenceLevel::Direct, true) => {
                    if det.predicted_type == Some(ThreatType(t)) {
                        pi
                    } else {
                        0.0
                    }
                }
                (_, true) => pi,
                (_, false) => 1.0 - pi,
            };
            let prior = if is_true { pd } else { 1.0 - pd };
            term *= conditional * prior;
        }
        total += term;
    }
    total
}

pub fn brute_force_posterior(z: &[Detection], r: usize, scenario: &Scenario) -> Vec<f64> {
    let row = &scenario.regional_prior().rows()[r];
    let un: Vec<f64> = (0..scenario.num_types())
        .map(|t| row[t] * brute_force_likelihood(z, t, scenario))
        .collect();
    let s: f64 = un.iter().sum();
    un.into_iter().map(|x| x / s).collect()
}

/// Up to `max` detections from distinct sensors of `scenario`, each with a
/// confidence in [0, 1] and, for direct sensors, a predicted type.
pub fn detection_sets(scenario: Scenario, max: usize) -> impl Strategy<Value = Vec<Detection>> {
    let n_sensors = scenario.sensors().len();
    let n_types = scenario.num_types();
    let levels: Vec<EvidenceLevel> = scenario.sensors().iter().map(|s| s.level()).collect();
    (
        Just((0..n_sensors).collect::<Vec<_>>()).prop_shuffle(),
        0..=max.min(n_sensors),
        prop::collection::vec((0.0f64..=1.0, 0..n_types), max),
    )
        .prop_map(move |(order, k, draws)| {
            order[..k]
                .iter()
                .zip(draws)
                .map(|(&s, (pi, t))| match levels[s] {
                    EvidenceLevel::Direct => Detection::direct(SensorId(s), pi, ThreatType(t)),
                    EvidenceLevel::Indicative => Detection::indicative(SensorId(s), pi),
                })
                .collect()
        })
}

pub fn set(z: &[Detection]) -> DetectionSet {
    DetectionSet::new(z.to_vec()).unwrap()
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}
