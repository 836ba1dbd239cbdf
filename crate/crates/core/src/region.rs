//! Contextual evidence: maps an estimated object position to a region type
//! using labeled polygons.
//!
//! Coordinates are treated as planar. A point belongs to a polygon when the
//! even-odd rule puts it inside any of the polygon's rings combined, or when
//! it lies on a ring's boundary. Where polygons overlap, the one with the
//! highest precedence wins; equal precedence falls back to insertion order.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::RegionError;
use crate::scenario::RegionType;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Default overlap precedence for a canonical region label. More specific
/// road features sit on top of general ones; unlisted labels rank lowest.
pub fn default_precedence(label: &str) -> i32 {
    match label {
        "roadside marker" => 5,
        "road overpass" => 4,
        "road junction" => 3,
        "road bend" => 2,
        "road" => 1,
        _ => 0,
    }
}

/// Label rewrites applied before a label is matched against the scenario's
/// region types. Chains are followed; cycles are rejected.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasMap {
    map: BTreeMap<String, String>,
}

impl AliasMap {
    pub fn new<I, K, V>(pairs: I) -> Result<Self, RegionError>
    where
        I: IntoIterator<Item = (K, V)>,
        K: Into<String>,
        V: Into<String>,
    {
        let map: BTreeMap<String, String> = pairs
            .into_iter()
            .map(|(k, v)| (k.into(), v.into()))
            .filter(|(k, v)| k != v)
            .collect();
        let out = Self { map };
        for key in out.map.keys() {
            out.resolve(key)?;
        }
        Ok(out)
    }

    pub fn resolve<'a>(&'a self, label: &'a str) -> Result<&'a str, RegionError> {
        let mut current = label;
        for _ in 0..=self.map.len() {
            match self.map.get(current) {
                Some(next) => current = next,
                None => return Ok(current),
            }
        }
        Err(RegionError::AliasCycle(label.to_string()))
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.map.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }
}

/// A labeled area made of one or more closed rings.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionPolygon {
    region: RegionType,
    rings: Vec<Vec<Point>>,
    precedence: i32,
}

impl RegionPolygon {
    /// Rings may be given open or closed; they are stored closed. Every ring
    /// needs at least three distinct vertices.
    pub fn new(region: RegionType, rings: Vec<Vec<Point>>, precedence: i32) -> Result<Self, RegionError> {
        if rings.is_empty() {
            return Err(RegionError::Geometry("polygon without rings".into()));
        }
        let rings = rings
            .into_iter()
            .map(|mut ring| {
                if ring.iter().any(|p| !p.x.is_finite() || !p.y.is_finite()) {
                    return Err(RegionError::Geometry("non-finite coordinate".into()));
                }
                if ring.len() >= 2 && ring.first() == ring.last() {
                    ring.pop();
                }
                if ring.len() < 3 {
                    return Err(RegionError::Geometry(format!(
                        "ring with {} distinct vertices, need at least 3",
                        ring.len()
                    )));
                }
                let first = ring[0];
                ring.push(first);
                Ok(ring)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            region,
            rings,
            precedence,
        })
    }

    pub fn region(&self) -> RegionType {
        self.region
    }

    pub fn precedence(&self) -> i32 {
        self.precedence
    }

    pub fn rings(&self) -> &[Vec<Point>] {
        &self.rings
    }

    /// Even-odd containment over all rings; boundary points count as inside.
    pub fn contains(&self, p: Point) -> bool {
        let mut inside = false;
        for ring in &self.rings {
            for w in ring.windows(2) {
                let (a, b) = (w[0], w[1]);
                if on_segment(p, a, b) {
                    return true;
                }
                if (a.y > p.y) != (b.y > p.y) {
                    let x_cross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                    if p.x < x_cross {
                        inside = !inside;
                    }
                }
            }
        }
        inside
    }
}

fn on_segment(p: Point, a: Point, b: Point) -> bool {
    let cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    let len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
    // relative collinearity tolerance, exact for vertices and axis-aligned edges
    if cross.abs() > 1e-12 * len2.max(f64::MIN_POSITIVE) {
        return false;
    }
    let (lo_x, hi_x) = if a.x <= b.x { (a.x, b.x) } else { (b.x, a.x) };
    let (lo_y, hi_y) = if a.y <= b.y { (a.y, b.y) } else { (b.y, a.y) };
    p.x >= lo_x && p.x <= hi_x && p.y >= lo_y && p.y <= hi_y
}

/// Collection of region polygons with an optional fallback region.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionIndex {
    // sorted by descending precedence, insertion order within equal ranks
    polygons: Vec<RegionPolygon>,
    default_region: Option<RegionType>,
}

impl RegionIndex {
    pub fn new(polygons: Vec<RegionPolygon>, default_region: Option<RegionType>) -> Self {
        let mut polygons = polygons;
        // stable sort keeps insertion order for equal precedence
        polygons.sort_by_key(|p| core::cmp::Reverse(p.precedence));
        Self {
            polygons,
            default_region,
        }
    }

    pub fn polygons(&self) -> &[RegionPolygon] {
        &self.polygons
    }

    pub fn default_region(&self) -> Option<RegionType> {
        self.default_region
    }

    pub fn lookup(&self, p: Point) -> Result<RegionType, RegionError> {
        self.polygons
            .iter()
            .find(|poly| poly.contains(p))
            .map(RegionPolygon::region)
            .or(self.default_region)
            .ok_or(RegionError::NotCovered { x: p.x, y: p.y })
    }
}

/// Builds a [`RegionIndex`] from raw labels, resolving aliases and checking
/// labels against the scenario's region types.
#[derive(Debug, Clone)]
pub struct RegionIndexBuilder<'a> {
    regions: &'a [String],
    aliases: AliasMap,
    polygons: Vec<RegionPolygon>,
}

impl<'a> RegionIndexBuilder<'a> {
    pub fn new(regions: &'a [String], aliases: AliasMap) -> Self {
        Self {
            regions,
            aliases,
            polygons: Vec::new(),
        }
    }

    pub fn canonical(&self, label: &str) -> Result<RegionType, RegionError> {
        let canonical = self.aliases.resolve(label)?;
        self.regions
            .iter()
            .position(|r| r == canonical)
            .map(RegionType)
            .ok_or_else(|| RegionError::UnknownRegion {
                label: label.to_string(),
                valid: self.regions.to_vec(),
            })
    }

    /// Adds a polygon. `precedence` overrides the label's default rank.
    pub fn add(&mut self, label: &str, rings: Vec<Vec<Point>>, precedence: Option<i32>) -> Result<RegionType, RegionError> {
        let region = self.canonical(label)?;
        let rank = precedence.unwrap_or_else(|| default_precedence(&self.regions[region.0]));
        self.polygons.push(RegionPolygon::new(region, rings, rank)?);
        Ok(region)
    }

    pub fn build(self, default_region: Option<&str>) -> Result<RegionIndex, RegionError> {
        let default_region = default_region.map(|l| self.canonical(l)).transpose()?;
        Ok(RegionIndex::new(self.polygons, default_region))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin;
    use alloc::vec;

    fn rect(x0: f64, y0: f64, x1: f64, y1: f64) -> Vec<Point> {
        vec![
            Point::new(x0, y0),
            Point::new(x1, y0),
            Point::new(x1, y1),
            Point::new(x0, y1),
        ]
    }

    fn cbrne_builder(regions: &[String]) -> RegionIndexBuilder<'_> {
        RegionIndexBuilder::new(regions, AliasMap::new(builtin::cbrne_aliases()).unwrap())
    }

    #[test]
    fn aliases_fold_into_grassland() {
        let s = builtin::cbrne();
        let b = cbrne_builder(s.region_labels());
        assert_eq!(b.canonical("meadow").unwrap(), s.region("grassland").unwrap());
        assert_eq!(b.canonical("scrub").unwrap(), s.region("grassland").unwrap());
        assert_eq!(b.canonical("road bend").unwrap(), s.region("road bend").unwrap());
    }

    #[test]
    fn unknown_label_lists_valid_ones() {
        let s = builtin::cbrne();
        let mut b = cbrne_builder(s.region_labels());
        let err = b.add("runway", vec![rect(0.0, 0.0, 1.0, 1.0)], None).unwrap_err();
        match err {
            RegionError::UnknownRegion { label, valid } => {
                assert_eq!(label, "runway");
                assert_eq!(valid.len(), 6);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn alias_cycles_are_rejected() {
        assert!(matches!(
            AliasMap::new([("a", "b"), ("b", "c"), ("c", "a")]),
            Err(RegionError::AliasCycle(_))
        ));
        let chain = AliasMap::new([("a", "b"), ("b", "c")]).unwrap();
        assert_eq!(chain.resolve("a").unwrap(), "c");
    }

    #[test]
    fn empty_index_with_default() {
        let s = builtin::cbrne();
        let idx = cbrne_builder(s.region_labels()).build(Some("grassland")).unwrap();
        for p in [Point::new(0.0, 0.0), Point::new(-1e6, 3.5)] {
            assert_eq!(idx.lookup(p).unwrap(), s.region("grassland").unwrap());
        }
        let bare = cbrne_builder(s.region_labels()).build(None).unwrap();
        assert!(matches!(bare.lookup(Point::new(1.0, 2.0)), Err(RegionError::NotCovered { .. })));
    }

    #[test]
    fn marker_overrides_road() {
        let s = builtin::cbrne();
        let mut b = cbrne_builder(s.region_labels());
        b.add("road", vec![rect(0.0, 0.0, 100.0, 10.0)], None).unwrap();
        b.add("roadside marker", vec![rect(40.0, 8.0, 45.0, 12.0)], None).unwrap();
        let idx = b.build(Some("grassland")).unwrap();
        assert_eq!(idx.lookup(Point::new(42.0, 9.0)).unwrap(), s.region("roadside marker").unwrap());
        assert_eq!(idx.lookup(Point::new(20.0, 5.0)).unwrap(), s.region("road").unwrap());
        assert_eq!(idx.lookup(Point::new(20.0, 50.0)).unwrap(), s.region("grassland").unwrap());
    }

    #[test]
    fn explicit_precedence_overrides_default() {
        let s = builtin::cbrne();
        let mut b = cbrne_builder(s.region_labels());
        b.add("road", vec![rect(0.0, 0.0, 10.0, 10.0)], Some(9)).unwrap();
        b.add("roadside marker", vec![rect(0.0, 0.0, 10.0, 10.0)], None).unwrap();
        let idx = b.build(None).unwrap();
        assert_eq!(idx.lookup(Point::new(5.0, 5.0)).unwrap(), s.region("road").unwrap());
    }

    #[test]
    fn equal_precedence_uses_insertion_order() {
        let s = builtin::cbrne();
        let mut b = cbrne_builder(s.region_labels());
        b.add("road bend", vec![rect(0.0, 0.0, 10.0, 10.0)], Some(1)).unwrap();
        b.add("road", vec![rect(0.0, 0.0, 10.0, 10.0)], Some(1)).unwrap();
        let idx = b.build(None).unwrap();
        assert_eq!(idx.lookup(Point::new(5.0, 5.0)).unwrap(), s.region("road bend").unwrap());
    }

    #[test]
    fn vertices_and_edges_are_inside() {
        let poly = RegionPolygon::new(
            RegionType(0),
            vec![vec![Point::new(0.0, 0.0), Point::new(4.0, 0.0), Point::new(0.0, 3.0)]],
            0,
        )
        .unwrap();
        for p in [(0.0, 0.0), (4.0, 0.0), (0.0, 3.0), (2.0, 0.0), (2.0, 1.5), (0.0, 1.0)] {
            assert!(poly.contains(Point::new(p.0, p.1)), "{p:?}");
        }
        assert!(!poly.contains(Point::new(2.1, 1.5)));
        assert!(!poly.contains(Point::new(-0.1, 0.0)));
    }

    #[test]
    fn holes_are_excluded() {
        let poly = RegionPolygon::new(
            RegionType(0),
            vec![rect(0.0, 0.0, 10.0, 10.0), rect(3.0, 3.0, 6.0, 6.0)],
            0,
        )
        .unwrap();
        assert!(poly.contains(Point::new(1.0, 1.0)));
        assert!(!poly.contains(Point::new(4.0, 4.0)));
        assert!(poly.contains(Point::new(3.0, 4.0)));
    }

    #[test]
    fn malformed_rings() {
        assert!(RegionPolygon::new(RegionType(0), vec![vec![Point::new(0.0, 0.0), Point::new(1.0, 0.0)]], 0).is_err());
        let closed_triangle = vec![
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(0.0, 0.0),
        ];
        let poly = RegionPolygon::new(RegionType(0), vec![closed_triangle], 0).unwrap();
        assert_eq!(poly.rings()[0].len(), 4);
        assert!(RegionPolygon::new(RegionType(0), vec![], 0).is_err());
        assert!(RegionPolygon::new(RegionType(0), vec![vec![Point::new(f64::NAN, 0.0); 3]], 0).is_err());
    }
}
