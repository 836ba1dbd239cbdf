//! GeoJSON region files.
//!
//! A `FeatureCollection` whose features carry `Polygon` or `MultiPolygon`
//! geometries and a string property `region_type`. An optional integer
//! property `precedence` overrides the default overlap rank of the label.

use std::path::Path;

use serde::Deserialize;
use serde_json::Value;
use threatfuse_core::region::{AliasMap, Point, RegionIndex, RegionIndexBuilder};
use threatfuse_core::RegionError;

use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct FeatureCollection {
    #[serde(rename = "type")]
    kind: String,
    features: Vec<Feature>,
}

#[derive(Debug, Deserialize)]
struct Feature {
    geometry: Option<Geometry>,
    #[serde(default)]
    properties: Option<serde_json::Map<String, Value>>,
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", content = "coordinates")]
enum Geometry {
    Polygon(Vec<Vec<Vec<f64>>>),
    MultiPolygon(Vec<Vec<Vec<Vec<f64>>>>),
}

fn geometry_error(i: usize, msg: impl std::fmt::Display) -> Error {
    Error::Region(RegionError::Geometry(format!("feature {i}: {msg}")))
}

fn ring(i: usize, coords: &[Vec<f64>]) -> Result<Vec<Point>> {
    coords
        .iter()
        .map(|c| match c.as_slice() {
            [x, y, ..] => Ok(Point::new(*x, *y)),
            _ => Err(geometry_error(i, "position with fewer than two coordinates")),
        })
        .collect()
}

/// Parses GeoJSON text into a region index over `regions`.
pub fn parse_region_file(
    text: &str,
    origin: &Path,
    regions: &[String],
    aliases: &AliasMap,
    default_region: Option<&str>,
) -> Result<RegionIndex> {
    let fc: FeatureCollection = serde_json::from_str(text).map_err(|e| Error::parse(origin, e))?;
    if fc.kind != "FeatureCollection" {
        return Err(Error::parse(
            origin,
            format!("expected a FeatureCollection, found {:?}", fc.kind),
        ));
    }
    let mut builder = RegionIndexBuilder::new(regions, aliases.clone());
    for (i, feature) in fc.features.into_iter().enumerate() {
        let props = feature.properties.unwrap_or_default();
        let label = props
            .get("region_type")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse(origin, format!("feature {i}: missing string property region_type")))?;
        let precedence = match props.get("precedence") {
            None | Some(Value::Null) => None,
            Some(v) => Some(
                v.as_i64()
                    .and_then(|p| i32::try_from(p).ok())
                    .ok_or_else(|| Error::parse(origin, format!("feature {i}: precedence must be an integer")))?,
            ),
        };
        let polygons = match feature.geometry {
            Some(Geometry::Polygon(rings)) => vec![rings],
            Some(Geometry::MultiPolygon(polys)) => polys,
            None => return Err(geometry_error(i, "missing geometry")),
        };
        for rings in polygons {
            let rings = rings.iter().map(|r| ring(i, r)).collect::<Result<Vec<_>>>()?;
            builder.add(label, rings, precedence).map_err(|e| match e {
                RegionError::Geometry(m) => geometry_error(i, m),
                other => Error::Region(other),
            })?;
        }
    }
    Ok(builder.build(default_region)?)
}

pub fn load_region_file(
    path: &Path,
    regions: &[String],
    aliases: &AliasMap,
    default_region: Option<&str>,
) -> Result<RegionIndex> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_region_file(&text, path, regions, aliases, default_region)
}
