//! Seeded Monte Carlo evaluation of the classifiers.
//!
//! Each run draws a threat object, the detection set the selected sensors
//! produce for it, and classifies the set. Run `i` of a configuration with
//! seed `s` draws from two ChaCha8 streams keyed by `s`: stream `i` feeds the
//! generative model and stream `i | 2^63` feeds the classifier-prior
//! perturbation. Records therefore depend only on `(config, seed, i)` and not
//! on how runs are scheduled, and perturbing the classifier never changes
//! what is generated.

mod generate;
mod sampling;
mod sweep;

pub use generate::{
    generate_detection_set, generate_object, generate_type, ConfidenceModel, ConfidenceSampler, Emission,
};
pub use sampling::{
    draw_clutter_count, perturb_detection_prob, perturb_regional_prior, perturb_sensor_prior, sample_categorical,
    sample_flat_dirichlet,
};
pub use sweep::{sweep, sweep_with, SweepKind, SweepRow, SweepTable};

use alloc::borrow::Cow;
use alloc::format;
use alloc::vec::Vec;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::SimError;
use crate::fusion::{self, Classifier};
use crate::metrics::{ConfusionMatrix, MetricsReport};
use crate::scenario::{DetectionSet, RegionType, RegionalPrior, Scenario, SensorId, ThreatType};

/// Default number of Monte Carlo runs per experiment.
pub const DEFAULT_RUNS: u64 = 10_000;
pub const DEFAULT_SEED: u64 = 42;

const PERTURBATION_STREAM: u64 = 1 << 63;

/// Which classifier priors are perturbed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PerturbationTarget {
    #[default]
    None,
    /// Sensor detection priors and regional priors.
    All,
    /// Sensor detection priors only.
    Sensor,
    /// Regional priors only.
    Contextual,
}

impl PerturbationTarget {
    fn sensors(self) -> bool {
        matches!(self, Self::All | Self::Sensor)
    }

    fn regions(self) -> bool {
        matches!(self, Self::All | Self::Contextual)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Perturbation {
    pub mu: f64,
    pub target: PerturbationTarget,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialConfig {
    pub scenario: Scenario,
    /// Sensors drawn without replacement per run; all sensors when `None`.
    pub sensor_subset_size: Option<usize>,
    /// Poisson rate of clutter returns per run.
    pub clutter_rate: f64,
    pub perturbation: Perturbation,
    pub confidence: ConfidenceModel,
    pub classifier: Classifier,
    pub emission: Emission,
    pub runs: u64,
    pub seed: u64,
}

impl TrialConfig {
    pub fn new(scenario: Scenario) -> Self {
        Self {
            scenario,
            sensor_subset_size: None,
            clutter_rate: 0.0,
            perturbation: Perturbation::default(),
            confidence: ConfidenceModel::STRONG,
            classifier: Classifier::Proposed,
            emission: Emission::OnePerSensor,
            runs: DEFAULT_RUNS,
            seed: DEFAULT_SEED,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let n = self.scenario.sensors().len();
        if let Some(k) = self.sensor_subset_size {
            if k > n {
                return Err(SimError::Config(format!(
                    "sensor subset size {k} exceeds the {n} sensors of the scenario"
                )));
            }
        }
        if !(self.clutter_rate >= 0.0 && self.clutter_rate.is_finite()) {
            return Err(SimError::Config(format!("clutter rate {} must be >= 0", self.clutter_rate)));
        }
        if !(0.0..=1.0).contains(&self.perturbation.mu) {
            return Err(SimError::Config(format!(
                "perturbation factor {} outside [0, 1]",
                self.perturbation.mu
            )));
        }
        if self.runs == 0 {
            return Err(SimError::Config("runs must be positive".into()));
        }
        self.confidence.validate()
    }
}

/// Outcome of one Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub true_type: ThreatType,
    pub region: RegionType,
    pub predicted_type: ThreatType,
    /// Fused posterior mass on the true type; `None` for the baseline, which
    /// produces no fused posterior.
    pub posterior_of_truth: Option<f64>,
}

/// A validated configuration with its samplers, ready to execute runs in
/// any order.
#[derive(Debug, Clone)]
pub struct Experiment {
    config: TrialConfig,
    confidence: ConfidenceSampler,
    key: [u8; 32],
}

impl Experiment {
    pub fn new(config: TrialConfig) -> Result<Self, SimError> {
        config.validate()?;
        let confidence = ConfidenceSampler::new(&config.confidence)?;
        let key = ChaCha8Rng::seed_from_u64(config.seed).get_seed();
        Ok(Self {
            config,
            confidence,
            key,
        })
    }

    pub fn config(&self) -> &TrialConfig {
        &self.config
    }

    pub fn runs(&self) -> u64 {
        self.config.runs
    }

    fn stream(&self, id: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(id);
        rng
    }

    /// Classifier view of the scenario for run `run`.
    pub fn classifier_scenario(&self, run: u64) -> Cow<'_, Scenario> {
        let scenario = &self.config.scenario;
        let Perturbation { mu, target } = self.config.perturbation;
        if target == PerturbationTarget::None {
            return Cow::Borrowed(scenario);
        }
        let mut rng = self.stream(run | PERTURBATION_STREAM);
        let sensors = target.sensors().then(|| {
            scenario
                .sensors()
                .iter()
                .map(|s| {
                    let pd = s
                        .detection_prior()
                        .iter()
                        .map(|&p| perturb_sensor_prior(p, mu, &mut rng))
                        .collect();
                    s.with_detection_prior(pd)
                })
                .collect()
        });
        let prior = target.regions().then(|| {
            RegionalPrior::from_rows_unchecked(perturb_regional_prior(
                scenario.regional_prior().rows(),
                mu,
                &mut rng,
            ))
        });
        Cow::Owned(scenario.with_parts(sensors, prior))
    }

    /// Generative half of run `run`: the sensor subset, the object and its
    /// detection set.
    pub fn generate(&self, run: u64) -> GeneratedRun {
        let cfg = &self.config;
        let scenario = &cfg.scenario;
        let mut rng = self.stream(run);

        let n = scenario.sensors().len();
        let subset: Vec<SensorId> = match cfg.sensor_subset_size {
            Some(k) => {
                let mut picked = index::sample(&mut rng, n, k).into_vec();
                picked.sort_unstable();
                picked.into_iter().map(SensorId).collect()
            }
            None => (0..n).map(SensorId).collect(),
        };
        let (region, truth) = generate_object(scenario, &mut rng);
        let n_clutter = draw_clutter_count(cfg.clutter_rate, subset.len(), &mut rng);
        let detections = generate_detection_set(
            scenario,
            truth,
            &subset,
            n_clutter,
            &self.confidence,
            cfg.emission,
            &mut rng,
        );
        GeneratedRun {
            subset,
            region,
            truth,
            n_clutter,
            detections,
        }
    }

    /// Executes run `run` (`0 ≤ run < runs`).
    pub fn run(&self, run: u64) -> Result<TrialRecord, SimError> {
        let GeneratedRun {
            region,
            truth,
            detections: z,
            ..
        } = self.generate(run);
        let view = self.classifier_scenario(run);
        let err = |source| SimError::Run { run, source };
        let (predicted, posterior_of_truth) = match self.config.classifier {
            Classifier::Proposed => {
                let (t, p) = fusion::map_classify(&z, region, &view).map_err(err)?;
                (t, Some(p.prob(truth)))
            }
            Classifier::Baseline => (fusion::baseline_classify(&z, region, &view).map_err(err)?, None),
        };
        Ok(TrialRecord {
            true_type: truth,
            region,
            predicted_type: predicted,
            posterior_of_truth,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedRun {
    pub subset: Vec<SensorId>,
    pub region: RegionType,
    pub truth: ThreatType,
    pub n_clutter: usize,
    pub detections: DetectionSet,
}

/// All runs of `config`, in run order.
pub fn run_trials(config: &TrialConfig) -> Result<Vec<TrialRecord>, SimError> {
    let exp = Experiment::new(config.clone())?;
    (0..exp.runs()).map(|i| exp.run(i)).collect()
}

pub fn confusion(records: &[TrialRecord], n_types: usize) -> Result<ConfusionMatrix, crate::MetricsError> {
    ConfusionMatrix::from_pairs(n_types, records.iter().map(|r| (r.true_type, r.predicted_type)))
}

pub fn evaluate(records: &[TrialRecord], n_types: usize) -> Result<MetricsReport, crate::MetricsError> {
    Ok(confusion(records, n_types)?.report())
}

/// Fraction of records whose prediction matches the truth.
pub fn accuracy(records: &[TrialRecord]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    records.iter().filter(|r| r.true_type == r.predicted_type).count() as f64 / records.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;

    fn config(runs: u64) -> TrialConfig {
        TrialConfig {
            runs,
            ..TrialConfig::new(builtin::basic())
        }
    }

    #[test]
    fn validation() {
        let mut c = config(10);
        c.sensor_subset_size = Some(8);
        assert!(c.validate().is_err());
        c.sensor_subset_size = Some(7);
        c.perturbation.mu = 1.5;
        assert!(c.validate().is_err());
        c.perturbation.mu = 1.0;
        c.clutter_rate = -1.0;
        assert!(c.validate().is_err());
        c.clutter_rate = 0.0;
        c.runs = 0;
        assert!(c.validate().is_err());
        c.runs = 1;
        assert!(c.validate().is_ok());
    }

    #[test]
    fn runs_are_independent_of_order() {
        let exp = Experiment::new(config(50)).unwrap();
        let forward: Vec<_> = (0..50).map(|i| exp.run(i).unwrap()).collect();
        let mut backward: Vec<_> = (0..50).rev().map(|i| exp.run(i).unwrap()).collect();
        backward.reverse();
        assert_eq!(forward, backward);
        assert_eq!(run_trials(&config(50)).unwrap(), forward);
    }

    #[test]
    fn seed_changes_records() {
        let a = run_trials(&config(200)).unwrap();
        let mut c = config(200);
        c.seed = 7;
        assert_ne!(a, run_trials(&c).unwrap());
    }

    #[test]
    fn perturbation_does_not_touch_generation() {
        let base = Experiment::new(config(500)).unwrap();
        for target in [PerturbationTarget::All, PerturbationTarget::Sensor, PerturbationTarget::Contextual] {
            let mut c = config(500);
            c.perturbation = Perturbation { mu: 0.8, target };
            let pert = Experiment::new(c).unwrap();
            for run in 0..500 {
                assert_eq!(base.generate(run), pert.generate(run));
            }
        }
    }

    #[test]
    fn zero_mu_perturbation_is_identity() {
        let base = run_trials(&config(300)).unwrap();
        let mut c = config(300);
        c.perturbation = Perturbation {
            mu: 0.0,
            target: PerturbationTarget::All,
        };
        assert_eq!(run_trials(&c).unwrap(), base);
    }

    #[test]
    fn perturbed_view_keeps_valid_priors() {
        let mut c = config(20);
        c.perturbation = Perturbation {
            mu: 1.0,
            target: PerturbationTarget::All,
        };
        let exp = Experiment::new(c).unwrap();
        for run in 0..20 {
            let view = exp.classifier_scenario(run);
            for row in view.regional_prior().rows() {
                assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            }
            for s in view.sensors() {
                assert!(s.detection_prior().iter().all(|p| (0.0..=1.0).contains(p)));
            }
        }
        let view = exp.classifier_scenario(3);
        assert_ne!(&*view, &exp.config().scenario);
        assert_eq!(exp.classifier_scenario(3), view);
    }

    #[test]
    fn sensor_subsets_are_uniform() {
        let mut c = config(1);
        c.sensor_subset_size = Some(3);
        let exp = Experiment::new(c).unwrap();
        let n = 100_000u64;
        let mut counts = [0usize; 7];
        for run in 0..n {
            let g = exp.generate(run);
            assert_eq!(g.subset.len(), 3);
            for id in g.subset {
                counts[id.0] += 1;
            }
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 3.0 / 7.0).abs() < 0.01);
        }
    }

    #[test]
    fn baseline_records_have_no_posterior() {
        let mut c = config(10);
        c.classifier = Classifier::Baseline;
        assert!(run_trials(&c).unwrap().iter().all(|r| r.posterior_of_truth.is_none()));
        c.classifier = Classifier::Proposed;
        assert!(run_trials(&c).unwrap().iter().all(|r| r.posterior_of_truth.is_some()));
    }
}
