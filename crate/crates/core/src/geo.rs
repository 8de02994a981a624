//! Geodesic distances, contact counts and neighbour flags.
//!
//! Distances are great-circle kilometers from the haversine formula on a
//! sphere of radius 6371.0088 km. The contact count of a pair (a, b) is the
//! number of third languages lying strictly inside both circles of radius
//! `geodesic_km(a, b)` centered on a and on b; a pair is neighbouring when
//! that count is below the configured threshold.

use rayon::prelude::*;
use thiserror::Error;

use crate::ingest::{LanguageTable, PairValueTable};

pub const EARTH_RADIUS_KM: f64 = 6371.0088;

const DEG2RAD: f64 = std::f64::consts::PI / 180.0;
/// Kilometers per degree of latitude on the sphere.
const KM_PER_DEG_LAT: f64 = EARTH_RADIUS_KM * DEG2RAD;
/// Above this many coordinates the all-pairs path recomputes distances on
/// the fly instead of caching the full matrix.
const MATRIX_CACHE_MAX: usize = 4000;

#[derive(Debug, Error, PartialEq)]
pub enum GeoError {
    #[error("latitude {lat} / longitude {lon} out of range")]
    InvalidCoordinate { lat: f64, lon: f64 },
    #[error("language `{0}` has no coordinates")]
    MissingCoordinates(String),
    #[error("language `{0}` is not in the table")]
    UnknownLanguage(String),
    #[error("contact count requires two distinct languages, got `{0}` twice")]
    SameLanguage(String),
    #[error("cannot rescale an empty table")]
    EmptyTable,
    #[error("neighbour threshold must be at least 1")]
    InvalidThreshold,
}

/// A validated coordinate pair in degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    latitude: f64,
    longitude: f64,
}

impl GeoPoint {
    pub fn new(latitude: f64, longitude: f64) -> Result<Self, GeoError> {
        if !(-90.0..=90.0).contains(&latitude) || !(-180.0..=180.0).contains(&longitude) {
            return Err(GeoError::InvalidCoordinate {
                lat: latitude,
                lon: longitude,
            });
        }
        Ok(Self {
            latitude,
            longitude,
        })
    }

    pub fn latitude(&self) -> f64 {
        self.latitude
    }

    pub fn longitude(&self) -> f64 {
        self.longitude
    }
}

/// Great-circle distance in kilometers (haversine). Structurally symmetric:
/// both deltas are taken as absolute values before any trigonometry.
pub fn geodesic_km(a: &GeoPoint, b: &GeoPoint) -> f64 {
    let lat_a = a.latitude * DEG2RAD;
    let lat_b = b.latitude * DEG2RAD;
    let half_dlat = (lat_a - lat_b).abs() / 2.0;
    let half_dlon = ((a.longitude - b.longitude) * DEG2RAD).abs() / 2.0;
    let h = half_dlat.sin().powi(2) + lat_a.cos() * lat_b.cos() * half_dlon.sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

/// Contact configuration; the default threshold of 10 makes a pair
/// neighbours when fewer than 10 languages lie in between.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ContactConfig {
    pub neighbour_threshold: u64,
}

impl ContactConfig {
    pub fn new(neighbour_threshold: u64) -> Result<Self, GeoError> {
        if neighbour_threshold == 0 {
            return Err(GeoError::InvalidThreshold);
        }
        Ok(Self {
            neighbour_threshold,
        })
    }
}

impl Default for ContactConfig {
    fn default() -> Self {
        Self {
            neighbour_threshold: 10,
        }
    }
}

/// 1 when the in-between count is strictly below the threshold, else 0.
pub fn neighbour_flag(count: u64, config: &ContactConfig) -> bool {
    count < config.neighbour_threshold
}

fn point_of(table: &LanguageTable, id: &str) -> Result<GeoPoint, GeoError> {
    let rec = table
        .get(id)
        .ok_or_else(|| GeoError::UnknownLanguage(id.to_string()))?;
    match (rec.latitude, rec.longitude) {
        (Some(lat), Some(lon)) => GeoPoint::new(lat, lon),
        _ => Err(GeoError::MissingCoordinates(id.to_string())),
    }
}

/// Number of third languages strictly inside both circles of radius
/// `geodesic_km(a, b)` around a and b. Only languages with coordinates are
/// considered; a and b never count themselves.
pub fn contact_count(table: &LanguageTable, a: &str, b: &str) -> Result<u64, GeoError> {
    if a == b {
        return Err(GeoError::SameLanguage(a.to_string()));
    }
    let pa = point_of(table, a)?;
    let pb = point_of(table, b)?;
    let d = geodesic_km(&pa, &pb);
    let mut count = 0;
    for rec in table.records() {
        if rec.id == a || rec.id == b || !rec.has_coordinates() {
            continue;
        }
        let pm = GeoPoint::new(rec.latitude.unwrap(), rec.longitude.unwrap())
            .expect("validated on ingest");
        if geodesic_km(&pa, &pm) < d && geodesic_km(&pb, &pm) < d {
            count += 1;
        }
    }
    Ok(count)
}

/// Geodesic distances for every pair of languages with coordinates, in raw
/// kilometers.
pub fn geodesic_table(table: &LanguageTable) -> PairValueTable {
    let coords = coordinated(table);
    let pairs = index_pairs(coords.len());
    let values: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| geodesic_km(&coords[i].1, &coords[j].1))
        .collect();
    let mut out = PairValueTable::new(None);
    for (&(i, j), v) in pairs.iter().zip(values) {
        out.insert(&coords[i].0, &coords[j].0, v)
            .expect("unique canonical pairs");
    }
    out
}

/// All-pairs contact counts for the languages with coordinates.
///
/// Candidates are prefiltered to the latitude band that can possibly lie
/// within `geodesic_km(a, b)` of both endpoints (distance on the sphere is
/// at least the radius times the latitude delta), then checked exactly, so
/// the result equals the naive per-pair scan while doing O(pairs * band)
/// work.
pub fn contact_count_table(table: &LanguageTable) -> PairValueTable {
    let coords = coordinated(table);
    let n = coords.len();
    let pairs = index_pairs(n);

    // Distance matrix cache; falls back to recomputation for huge inputs.
    let matrix: Option<Vec<f64>> = if n > 1 && n <= MATRIX_CACHE_MAX {
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = geodesic_km(&coords[i].1, &coords[j].1);
                m[i * n + j] = d;
                m[j * n + i] = d;
            }
        }
        Some(m)
    } else {
        None
    };
    let dist = |i: usize, j: usize| -> f64 {
        match &matrix {
            Some(m) => m[i * n + j],
            None => geodesic_km(&coords[i].1, &coords[j].1),
        }
    };

    // Candidate order sorted by latitude for band lookups.
    let mut by_lat: Vec<usize> = (0..n).collect();
    by_lat.sort_by(|&x, &y| {
        coords[x]
            .1
            .latitude
            .total_cmp(&coords[y].1.latitude)
            .then(x.cmp(&y))
    });
    let lats: Vec<f64> = by_lat.iter().map(|&i| coords[i].1.latitude).collect();

    let counts: Vec<u64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = dist(i, j);
            // Conservative margin: anything farther than d in latitude alone
            // cannot be inside either circle. The slack keeps borderline
            // candidates in; the exact check below decides.
            let margin = d / KM_PER_DEG_LAT * (1.0 + 1e-9) + 1e-9;
            let lat_i = coords[i].1.latitude;
            let lat_j = coords[j].1.latitude;
            let lo = (lat_i - margin).max(lat_j - margin);
            let hi = (lat_i + margin).min(lat_j + margin);
            let start = lats.partition_point(|&l| l < lo);
            let end = lats.partition_point(|&l| l <= hi);
            let mut count = 0u64;
            for &m in &by_lat[start..end] {
                if m == i || m == j {
                    continue;
                }
                if dist(i, m) < d && dist(j, m) < d {
                    count += 1;
                }
            }
            count
        })
        .collect();

    let mut out = PairValueTable::new(None);
    for (&(i, j), c) in pairs.iter().zip(counts) {
        out.insert(&coords[i].0, &coords[j].0, c as f64)
            .expect("unique canonical pairs");
    }
    out
}

/// Min-max rescale all values into `[0, 1]`; a constant table maps to all
/// zeros.
pub fn rescale_unit(table: &PairValueTable) -> Result<PairValueTable, GeoError> {
    if table.is_empty() {
        return Err(GeoError::EmptyTable);
    }
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for v in table.values() {
        min = min.min(v);
        max = max.max(v);
    }
    let span = max - min;
    let mut out = PairValueTable::unit_range();
    for ((a, b), v) in table.iter() {
        let scaled = if span == 0.0 { 0.0 } else { ((v - min) / span).clamp(0.0, 1.0) };
        out.insert(a, b, scaled).expect("canonical pairs preserved");
    }
    Ok(out)
}

/// Ids with coordinates, sorted by id; the canonical order for all-pairs
/// computations.
fn coordinated(table: &LanguageTable) -> Vec<(String, GeoPoint)> {
    let mut out: Vec<(String, GeoPoint)> = table
        .records()
        .iter()
        .filter(|r| r.has_coordinates())
        .map(|r| {
            (
                r.id.clone(),
                GeoPoint::new(r.latitude.unwrap(), r.longitude.unwrap())
                    .expect("validated on ingest"),
            )
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

fn index_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            pairs.push((i, j));
        }
    }
    pairs
}
