//! Planar lon/lat primitives shared by the contour, boundary and size-field modules.

use serde::{Deserialize, Serialize};

/// A longitude/latitude pair in degrees (WGS84 axis order: lon first).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lon: f64,
    pub lat: f64,
}

impl GeoPoint {
    pub const fn new(lon: f64, lat: f64) -> Self {
        Self { lon, lat }
    }

    pub fn is_finite(&self) -> bool {
        self.lon.is_finite() && self.lat.is_finite()
    }

    /// Largest absolute coordinate difference.
    pub fn max_diff(&self, other: &GeoPoint) -> f64 {
        (self.lon - other.lon).abs().max((self.lat - other.lat).abs())
    }

    pub(crate) fn sub(self, o: GeoPoint) -> (f64, f64) {
        (self.lon - o.lon, self.lat - o.lat)
    }

    pub(crate) fn lerp(self, o: GeoPoint, t: f64) -> GeoPoint {
        GeoPoint::new(
            self.lon + t * (o.lon - self.lon),
            self.lat + t * (o.lat - self.lat),
        )
    }
}

impl From<(f64, f64)> for GeoPoint {
    fn from((lon, lat): (f64, f64)) -> Self {
        Self { lon, lat }
    }
}

#[inline]
pub(crate) fn cross(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

/// Proper or touching intersection of segments `p0→p1` and `q0→q1`.
///
/// Returns the fractional positions `(s, t)` along each segment, both in
/// `[0, 1]`. Parallel and collinear segments yield `None`.
pub(crate) fn segment_intersection(
    p0: GeoPoint,
    p1: GeoPoint,
    q0: GeoPoint,
    q1: GeoPoint,
) -> Option<(f64, f64)> {
    let r = p1.sub(p0);
    let d = q1.sub(q0);
    let denom = cross(r, d);
    if denom == 0.0 {
        return None;
    }
    let w = q0.sub(p0);
    let s = cross(w, d) / denom;
    let t = cross(w, r) / denom;
    if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&t) {
        Some((s, t))
    } else {
        None
    }
}

/// Shoelace signed area; positive for counterclockwise rings. The ring is
/// implicitly closed.
pub fn signed_area(ring: &[GeoPoint]) -> f64 {
    let n = ring.len();
    if n < 3 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        acc += a.lon * b.lat - b.lon * a.lat;
    }
    0.5 * acc
}

/// Even-odd point-in-polygon test on an implicitly closed ring.
pub fn point_in_ring(pt: GeoPoint, ring: &[GeoPoint]) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n.wrapping_sub(1);
    for i in 0..n {
        let (a, b) = (ring[i], ring[j]);
        if (a.lat > pt.lat) != (b.lat > pt.lat) {
            let x = a.lon + (pt.lat - a.lat) / (b.lat - a.lat) * (b.lon - a.lon);
            if pt.lon < x {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}
