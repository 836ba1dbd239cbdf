//! Context-aware Bayesian threat-type classification.
//!
//! Objects are classified from three kinds of evidence:
//!
//! - **direct** evidence: a sensor reports a predicted threat type and a
//!   confidence that the return is a true detection,
//! - **indicative** evidence: a sensor reports only the confidence,
//! - **contextual** evidence: the region an object lies in supplies a
//!   type prior `P(t | r)`.
//!
//! The [`fusion`] module combines all three into a normalized posterior and a
//! MAP decision, and also provides a late-fusion majority-vote baseline.
//! [`region`] resolves positions to region types through labeled polygons,
//! [`sim`] is a seeded Monte Carlo engine for evaluating the classifier, and
//! [`metrics`] turns trial records into accuracy and F1 scores.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! execution and the command line live in the `threatfuse` crate.
//!
//! ```
//! use threatfuse_core::{builtin, fusion, Detection, DetectionSet};
//!
//! let scenario = builtin::basic();
//! let s1 = scenario.sensor_id("S1").unwrap();
//! let r1 = scenario.region("R1").unwrap();
//! let z = DetectionSet::new(vec![Detection::indicative(s1, 0.9)]).unwrap();
//!
//! let (map, posterior) = fusion::map_classify(&z, r1, &scenario).unwrap();
//! assert_eq!(scenario.type_label(map), "A");
//! assert!((posterior.prob(map) - 0.492 / 0.628).abs() < 1e-12);
//! ```

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod builtin;
pub mod error;
pub mod fusion;
pub mod metrics;
pub mod region;
pub mod scenario;
pub mod sim;

pub use error::{FusionError, MetricsError, RegionError, ScenarioError, SimError};
pub use fusion::{Classifier, Posterior};
pub use scenario::{
    Detection, DetectionSet, EvidenceLevel, RegionType, RegionalPrior, Scenario, SensorId,
    SensorModel, ThreatType,
};
