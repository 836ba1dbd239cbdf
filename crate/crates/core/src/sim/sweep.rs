//! Ablation sweeps over sensor count, clutter rate and prior perturbation.

use alloc::format;
use alloc::vec::Vec;

use super::{accuracy, run_trials, ConfidenceModel, Perturbation, PerturbationTarget, TrialConfig, TrialRecord};
use crate::error::SimError;
use crate::fusion::Classifier;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    /// Number of randomly selected sensors per run.
    Sensors,
    /// Poisson clutter rate, under strong and weak confidence separation.
    Clutter,
    /// Classifier prior perturbation factor.
    Prior,
}

impl SweepKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepKind::Sensors => "sensors",
            SweepKind::Clutter => "clutter",
            SweepKind::Prior => "prior",
        }
    }

    /// CSV header: the grid variable followed by one column per variant.
    pub fn columns(self) -> [&'static str; 5] {
        match self {
            SweepKind::Sensors => ["n_sensors", "baseline_no_direct", "baseline", "proposed_no_direct", "proposed"],
            SweepKind::Clutter => ["lambda", "baseline_strong", "proposed_strong", "baseline_weak", "proposed_weak"],
            SweepKind::Prior => ["mu", "baseline_all", "proposed_contextual", "proposed_sensor", "proposed_all"],
        }
    }

    /// Default grid: every sensor count, and log-spaced clutter rates and
    /// perturbation factors.
    pub fn default_grid(self, n_sensors: usize) -> Vec<f64> {
        match self {
            SweepKind::Sensors => (0..=n_sensors).map(|n| n as f64).collect(),
            SweepKind::Clutter => alloc::vec![0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0],
            SweepKind::Prior => alloc::vec![0.0, 0.001, 0.003, 0.01, 0.03, 0.1, 0.3, 0.6, 1.0],
        }
    }

    fn check_grid(self, grid: &[f64], n_sensors: usize) -> Result<(), SimError> {
        if grid.is_empty() {
            return Err(SimError::Config("empty sweep grid".into()));
        }
        for &x in grid {
            let ok = match self {
                SweepKind::Sensors => x >= 0.0 && x <= n_sensors as f64 && libm::trunc(x) == x,
                SweepKind::Clutter => (0.001..=10.0).contains(&x),
                SweepKind::Prior => (0.0..=1.0).contains(&x),
            };
            if !ok {
                let range = match self {
                    SweepKind::Sensors => format!("an integer in [0, {n_sensors}]"),
                    SweepKind::Clutter => "in [0.001, 10]".into(),
                    SweepKind::Prior => "in [0, 1]".into(),
                };
                return Err(SimError::Config(format!(
                    "{} grid value {x} must be {range}",
                    self.as_str()
                )));
            }
        }
        Ok(())
    }

    /// Configurations of every variant at grid point `x`, in column order.
    pub fn variants(self, base: &TrialConfig, x: f64) -> [TrialConfig; 4] {
        let with = |f: &dyn Fn(&mut TrialConfig)| {
            let mut c = base.clone();
            f(&mut c);
            c
        };
        match self {
            SweepKind::Sensors => {
                let k = x as usize;
                let indirect = base.scenario.without_direct_evidence();
                let variant = |classifier, no_direct: bool| {
                    with(&|c: &mut TrialConfig| {
                        c.sensor_subset_size = Some(k);
                        c.classifier = classifier;
                        if no_direct {
                            c.scenario = indirect.clone();
                        }
                    })
                };
                [
                    variant(Classifier::Baseline, true),
                    variant(Classifier::Baseline, false),
                    variant(Classifier::Proposed, true),
                    variant(Classifier::Proposed, false),
                ]
            }
            SweepKind::Clutter => {
                let variant = |classifier, confidence: ConfidenceModel| {
                    with(&|c: &mut TrialConfig| {
                        c.clutter_rate = x;
                        c.classifier = classifier;
                        c.confidence = confidence;
                    })
                };
                [
                    variant(Classifier::Baseline, ConfidenceModel::STRONG),
                    variant(Classifier::Proposed, ConfidenceModel::STRONG),
                    variant(Classifier::Baseline, ConfidenceModel::WEAK),
                    variant(Classifier::Proposed, ConfidenceModel::WEAK),
                ]
            }
            SweepKind::Prior => {
                let variant = |classifier, target| {
                    with(&|c: &mut TrialConfig| {
                        c.perturbation = Perturbation { mu: x, target };
                        c.classifier = classifier;
                    })
                };
                [
                    variant(Classifier::Baseline, PerturbationTarget::All),
                    variant(Classifier::Proposed, PerturbationTarget::Contextual),
                    variant(Classifier::Proposed, PerturbationTarget::Sensor),
                    variant(Classifier::Proposed, PerturbationTarget::All),
                ]
            }
        }
    }
}

impl core::str::FromStr for SweepKind {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sensors" => Ok(SweepKind::Sensors),
            "clutter" => Ok(SweepKind::Clutter),
            "prior" => Ok(SweepKind::Prior),
            other => Err(SimError::Config(format!(
                "unknown sweep {other:?}, expected sensors, clutter or prior"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    /// Accuracy per variant, in [`SweepKind::columns`] order.
    pub accuracy: [f64; 4],
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub kind: SweepKind,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Accuracies of the named variant column, one per grid point.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.kind.columns()[1..].iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.accuracy[idx]).collect())
    }
}

/// Runs every variant at every grid point with `runner`. All points share the
/// base seed, so variants and neighbouring points see common random numbers.
pub fn sweep_with<F>(kind: SweepKind, base: &TrialConfig, grid: &[f64], mut runner: F) -> Result<SweepTable, SimError>
where
    F: FnMut(&TrialConfig) -> Result<Vec<TrialRecord>, SimError>,
{
    base.validate()?;
    kind.check_grid(grid, base.scenario.sensors().len())?;
    let mut rows = Vec::with_capacity(grid.len());
    for &x in grid {
        let mut acc = [0.0; 4];
        for (slot, cfg) in acc.iter_mut().zip(kind.variants(base, x)) {
            *slot = accuracy(&runner(&cfg)?);
        }
        rows.push(SweepRow { x, accuracy: acc });
    }
    Ok(SweepTable { kind, rows })
}

/// [`sweep_with`] using sequential [`run_trials`].
pub fn sweep(kind: SweepKind, base: &TrialConfig, grid: &[f64]) -> Result<SweepTable, SimError> {
    sweep_with(kind, base, grid, run_trials)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use crate::scenario::EvidenceLevel;

    fn base(runs: u64) -> TrialConfig {
        TrialConfig {
            runs,
            ..TrialConfig::new(builtin::basic())
        }
    }

    #[test]
    fn grid_bounds() {
        let b = base(10);
        assert!(sweep(SweepKind::Sensors, &b, &[8.0]).is_err());
        assert!(sweep(SweepKind::Sensors, &b, &[1.5]).is_err());
        assert!(sweep(SweepKind::Clutter, &b, &[0.0]).is_err());
        assert!(sweep(SweepKind::Clutter, &b, &[11.0]).is_err());
        assert!(sweep(SweepKind::Prior, &b, &[-0.1]).is_err());
        assert!(sweep(SweepKind::Prior, &b, &[]).is_err());
    }

    #[test]
    fn sensor_sweep_shape() {
        let t = sweep(SweepKind::Sensors, &base(20), &SweepKind::Sensors.default_grid(7)).unwrap();
        assert_eq!(t.rows.len(), 8);
        assert_eq!(t.column("proposed").unwrap().len(), 8);
        assert!(t.column("nonexistent").is_none());
    }

    #[test]
    fn default_grids_are_in_bounds() {
        for kind in [SweepKind::Sensors, SweepKind::Clutter, SweepKind::Prior] {
            assert!(kind.check_grid(&kind.default_grid(7), 7).is_ok());
        }
    }

    #[test]
    fn variants_configure_the_right_knobs() {
        let b = base(10);
        let [bnd, bl, pnd, p] = SweepKind::Sensors.variants(&b, 3.0);
        assert_eq!(bnd.classifier, Classifier::Baseline);
        assert!(bnd.scenario.sensors().iter().all(|s| s.level() == EvidenceLevel::Indicative));
        assert_eq!(bl.scenario, b.scenario);
        assert_eq!(pnd.classifier, Classifier::Proposed);
        assert_eq!(p.sensor_subset_size, Some(3));

        let [_, ps, _, pw] = SweepKind::Clutter.variants(&b, 2.0);
        assert_eq!(ps.confidence, ConfidenceModel::STRONG);
        assert_eq!(pw.confidence, ConfidenceModel::WEAK);
        assert_eq!(pw.clutter_rate, 2.0);

        let [ba, pc, psn, pa] = SweepKind::Prior.variants(&b, 0.5);
        assert_eq!(ba.perturbation.target, PerturbationTarget::All);
        assert_eq!(ba.classifier, Classifier::Baseline);
        assert_eq!(pc.perturbation.target, PerturbationTarget::Contextual);
        assert_eq!(psn.perturbation.target, PerturbationTarget::Sensor);
        assert_eq!(pa.perturbation, Perturbation { mu: 0.5, target: PerturbationTarget::All });
    }
}
