//! The two reference scenarios: a symmetric three-type "basic" setting used
//! for ablations and a four-type "cbrne" setting with map-derived regions.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::scenario::{EvidenceLevel, Scenario, SensorModel};

use EvidenceLevel::{Direct, Indicative};

pub const NAMES: [&str; 2] = ["basic", "cbrne"];

fn labels(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn sensors(rows: &[(&str, [f64; 4], EvidenceLevel)], n_types: usize) -> Vec<SensorModel> {
    rows.iter()
        .map(|(id, pd, level)| SensorModel::new(*id, *level, pd[..n_types].to_vec()))
        .collect()
}

pub fn basic() -> Scenario {
    let s = sensors(
        &[
            ("S1", [0.9, 0.4, 0.0, 0.0], Indicative),
            ("S2", [0.0, 0.9, 0.4, 0.0], Indicative),
            ("S3", [0.4, 0.0, 0.9, 0.0], Indicative),
            ("S4", [0.7, 0.5, 0.2, 0.0], Direct),
            ("S5", [0.2, 0.7, 0.5, 0.0], Direct),
            ("S6", [0.5, 0.2, 0.7, 0.0], Direct),
            ("S7", [0.8, 0.8, 0.8, 0.0], Indicative),
        ],
        3,
    );
    Scenario::new(
        "basic",
        labels(&["A", "B", "C"]),
        labels(&["R1", "R2", "R3"]),
        s,
        vec![
            vec![0.6, 0.3, 0.1],
            vec![0.1, 0.6, 0.3],
            vec![0.3, 0.1, 0.6],
        ],
    )
    .expect("basic scenario is valid")
}

pub const CBRNE_REGIONS: [&str; 6] = [
    "grassland",
    "road",
    "road junction",
    "road bend",
    "road overpass",
    "roadside marker",
];

pub fn cbrne() -> Scenario {
    let s = sensors(
        &[
            ("S1", [0.9, 0.2, 0.6, 0.6], Indicative),
            ("S2", [0.0, 0.0, 0.6, 0.0], Indicative),
            ("S3", [0.0, 0.0, 0.6, 0.4], Indicative),
            ("S4", [0.3, 0.7, 0.5, 0.5], Direct),
            ("S5", [0.4, 0.6, 0.5, 0.5], Indicative),
            ("S6", [0.3, 0.3, 0.4, 0.7], Indicative),
        ],
        4,
    );
    Scenario::new(
        "cbrne",
        labels(&["A", "B", "C", "D"]),
        labels(&CBRNE_REGIONS),
        s,
        vec![
            vec![0.5, 0.5, 0.0, 0.0],
            vec![0.4, 0.4, 0.1, 0.1],
            vec![0.05, 0.05, 0.6, 0.3],
            vec![0.3, 0.3, 0.1, 0.3],
            vec![0.05, 0.05, 0.6, 0.3],
            vec![0.025, 0.025, 0.9, 0.05],
        ],
    )
    .expect("cbrne scenario is valid")
}

/// Map-feature labels folded into a CBRNE region type.
pub fn cbrne_aliases() -> Vec<(String, String)> {
    ["grass", "meadow", "scrub"]
        .iter()
        .map(|a| (a.to_string(), "grassland".to_string()))
        .collect()
}

pub fn by_name(name: &str) -> Option<Scenario> {
    match name {
        "basic" => Some(basic()),
        "cbrne" => Some(cbrne()),
        _ => None,
    }
}
