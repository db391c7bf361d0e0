//! Rhumb lines (loxodromes) and their linear blending.
//!
//! A rhumb line is straight in spherical Mercator coordinates
//! `x = λ`, `y = ln tan(π/4 + φ/2)` (radians), with `dx/dy = tan(bearing)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_4;

use super::BoundaryError;
use crate::geom::GeoPoint;

/// Latitudes beyond this are rejected; the Mercator ordinate diverges at the poles.
pub const MAX_ABS_LATITUDE: f64 = 89.0;

pub const DEFAULT_SAMPLES: usize = 200;

/// Where a loxodrome stops.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopLimit {
    /// Stop on this parallel (degrees north).
    Lat(f64),
    /// Stop on this meridian (degrees east).
    Lon(f64),
}

/// A constant-bearing line from `start`. Bearings are degrees clockwise from
/// north; westward bearings are negative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LoxodromeSpec {
    pub start: GeoPoint,
    pub bearing: f64,
    pub stop: StopLimit,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

/// Mercator ordinate of a latitude in degrees.
pub fn mercator_y(lat_deg: f64) -> f64 {
    (FRAC_PI_4 + lat_deg.to_radians() / 2.0).tan().ln()
}

/// Latitude in degrees of a Mercator ordinate.
pub fn inverse_mercator_y(y: f64) -> f64 {
    (2.0 * y.exp().atan() - std::f64::consts::FRAC_PI_2).to_degrees()
}

/// `(sin, cos)` of an angle in degrees, exact at multiples of 90°.
fn sin_cos_deg(deg: f64) -> (f64, f64) {
    let r = deg.rem_euclid(360.0);
    if r == 0.0 {
        (0.0, 1.0)
    } else if r == 90.0 {
        (1.0, 0.0)
    } else if r == 180.0 {
        (0.0, -1.0)
    } else if r == 270.0 {
        (-1.0, 0.0)
    } else {
        deg.to_radians().sin_cos()
    }
}

fn check_lat(lat: f64) -> Result<(), BoundaryError> {
    if !lat.is_finite() || lat.abs() > MAX_ABS_LATITUDE {
        return Err(BoundaryError::PoleProximity { lat });
    }
    Ok(())
}

/// Samples a loxodrome from its start to its stop limit.
///
/// Samples are uniform in Mercator `y` for a latitude stop and in longitude
/// for a longitude stop. The first sample is `start` and the last sample
/// lies exactly on the stop limit.
pub fn sample_loxodrome(spec: &LoxodromeSpec) -> Result<Vec<GeoPoint>, BoundaryError> {
    let n = spec.samples;
    if n < 2 {
        return Err(BoundaryError::InvalidSpec(format!("{n} samples; need at least 2")));
    }
    if !spec.start.is_finite() || !spec.bearing.is_finite() {
        return Err(BoundaryError::InvalidSpec("non-finite start or bearing".into()));
    }
    check_lat(spec.start.lat)?;
    let (sin_b, cos_b) = sin_cos_deg(spec.bearing);
    let start = spec.start;
    let last = (n - 1) as f64;

    match spec.stop {
        StopLimit::Lat(stop_lat) => {
            check_lat(stop_lat)?;
            let delta = stop_lat - start.lat;
            if cos_b == 0.0 || delta == 0.0 || (delta > 0.0) != (cos_b > 0.0) {
                return Err(BoundaryError::Unreachable(format!(
                    "bearing {}° never reaches latitude {stop_lat}° from {}°",
                    spec.bearing, start.lat
                )));
            }
            let y0 = mercator_y(start.lat);
            let y1 = mercator_y(stop_lat);
            // degrees of longitude per unit of Mercator y
            let slope = sin_b / cos_b * 180.0 / std::f64::consts::PI;
            Ok((0..n)
                .map(|i| {
                    if i == 0 {
                        return start;
                    }
                    let dy = (y1 - y0) * i as f64 / last;
                    let lat = if i == n - 1 {
                        stop_lat
                    } else {
                        inverse_mercator_y(y0 + dy)
                    };
                    GeoPoint::new(start.lon + dy * slope, lat)
                })
                .collect())
        }
        StopLimit::Lon(stop_lon) => {
            if !stop_lon.is_finite() {
                return Err(BoundaryError::InvalidSpec("non-finite longitude limit".into()));
            }
            let delta = stop_lon - start.lon;
            if sin_b == 0.0 || delta == 0.0 || (delta > 0.0) != (sin_b > 0.0) {
                return Err(BoundaryError::Unreachable(format!(
                    "bearing {}° never reaches longitude {stop_lon}° from {}°",
                    spec.bearing, start.lon
                )));
            }
            let y0 = mercator_y(start.lat);
            let cot = cos_b / sin_b;
            let mut out = Vec::with_capacity(n);
            for i in 0..n {
                if i == 0 {
                    out.push(start);
                    continue;
                }
                let lon = if i == n - 1 {
                    stop_lon
                } else {
                    start.lon + delta * i as f64 / last
                };
                let lat = if cot == 0.0 {
                    start.lat
                } else {
                    inverse_mercator_y(y0 + (lon - start.lon).to_radians() * cot)
                };
                check_lat(lat)?;
                out.push(GeoPoint::new(lon, lat));
            }
            Ok(out)
        }
    }
}

/// Point at normalized parameter `t ∈ [0, 1]` along a polyline's sample index.
fn at_parameter(line: &[GeoPoint], num: usize, den: usize) -> GeoPoint {
    // position = num/den · (len − 1), kept in integers so sample hits are exact
    let scaled = num * (line.len() - 1);
    let i = scaled / den;
    let rem = scaled % den;
    if rem == 0 {
        line[i]
    } else {
        line[i].lerp(line[i + 1], rem as f64 / den as f64)
    }
}

/// Linear blend of two loxodromes whose starting points become the blend's ends.
///
/// With `t ∈ [0, 1]`, `result(t) = (1 − t)·a(t) + t·b(1 − t)`, where each
/// line is parameterized from its start (`t = 0`). So `result(0)` is `a`'s
/// start and `result(1)` is `b`'s start.
pub fn blend_loxodromes(
    a: &[GeoPoint],
    b: &[GeoPoint],
    samples: usize,
) -> Result<Vec<GeoPoint>, BoundaryError> {
    if a.len() != b.len() {
        return Err(BoundaryError::InvalidSpec(format!(
            "cannot blend lines with {} and {} samples",
            a.len(),
            b.len()
        )));
    }
    if a.len() < 2 || samples < 2 {
        return Err(BoundaryError::InvalidSpec(
            "blending needs at least 2 input and output samples".into(),
        ));
    }
    let den = samples - 1;
    Ok((0..samples)
        .map(|i| {
            let t = i as f64 / den as f64;
            let pa = at_parameter(a, i, den);
            let pb = at_parameter(b, den - i, den);
            GeoPoint::new(
                (1.0 - t) * pa.lon + t * pb.lon,
                (1.0 - t) * pa.lat + t * pb.lat,
            )
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(lon: f64, lat: f64, bearing: f64, stop: StopLimit) -> LoxodromeSpec {
        LoxodromeSpec {
            start: GeoPoint::new(lon, lat),
            bearing,
            stop,
            samples: 50,
        }
    }

    #[test]
    fn due_north_keeps_longitude() {
        let pts = sample_loxodrome(&spec(5.45, 62.0, 0.0, StopLimit::Lat(70.0))).unwrap();
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|p| p.lon == 5.45));
        assert_eq!(pts[0].lat, 62.0);
        assert_eq!(pts[49].lat, 70.0);
        assert!(pts.windows(2).all(|w| w[1].lat > w[0].lat));
    }

    #[test]
    fn due_east_follows_parallel() {
        let pts = sample_loxodrome(&spec(-3.0, 50.0, 90.0, StopLimit::Lon(4.0))).unwrap();
        assert!(pts.iter().all(|p| p.lat == 50.0));
        assert_eq!(pts.last().unwrap().lon, 4.0);
    }

    #[test]
    fn unreachable_limits() {
        let err = |s| matches!(sample_loxodrome(&s), Err(BoundaryError::Unreachable(_)));
        assert!(err(spec(0.0, 10.0, 90.0, StopLimit::Lat(20.0))));
        assert!(err(spec(0.0, 10.0, 0.0, StopLimit::Lon(20.0))));
        assert!(err(spec(0.0, 10.0, 10.0, StopLimit::Lat(5.0))));
        assert!(err(spec(0.0, 10.0, -110.0, StopLimit::Lon(25.0))));
    }

    #[test]
    fn pole_proximity_rejected() {
        assert!(matches!(
            sample_loxodrome(&spec(0.0, 80.0, 0.0, StopLimit::Lat(89.5))),
            Err(BoundaryError::PoleProximity { .. })
        ));
        assert!(matches!(
            sample_loxodrome(&spec(0.0, 80.0, 1.0, StopLimit::Lon(90.0))),
            Err(BoundaryError::PoleProximity { .. })
        ));
    }

    #[test]
    fn mercator_round_trip() {
        for lat in [-80.0, -33.3, 0.0, 12.5, 62.0, 88.9] {
            assert!((inverse_mercator_y(mercator_y(lat)) - lat).abs() < 1e-12);
        }
    }

    #[test]
    fn blend_identical_lines() {
        let a = sample_loxodrome(&spec(0.0, 0.0, 30.0, StopLimit::Lat(10.0))).unwrap();
        let out = blend_loxodromes(&a, &a.iter().rev().copied().collect::<Vec<_>>(), 50).unwrap();
        for (o, p) in out.iter().zip(&a) {
            assert!(o.max_diff(p) < 1e-12);
        }
    }

    #[test]
    fn blend_meridians() {
        // a runs north along 0°E, b runs south along 10°E over the same latitudes
        let a: Vec<GeoPoint> = (0..11).map(|i| GeoPoint::new(0.0, i as f64)).collect();
        let b: Vec<GeoPoint> = (0..11).map(|i| GeoPoint::new(10.0, 10.0 - i as f64)).collect();
        let out = blend_loxodromes(&a, &b, 11).unwrap();
        for (i, p) in out.iter().enumerate() {
            let t = i as f64 / 10.0;
            assert!((p.lon - 10.0 * t).abs() < 1e-12);
            assert!((p.lat - a[i].lat).abs() < 1e-12);
        }
    }

    #[test]
    fn blend_endpoints_are_starts() {
        let a = sample_loxodrome(&spec(-15.0, 57.0, -20.0, StopLimit::Lat(70.0))).unwrap();
        let b = sample_loxodrome(&spec(5.45, 62.0, 0.0, StopLimit::Lat(70.0))).unwrap();
        let out = blend_loxodromes(&a, &b, 80).unwrap();
        assert_eq!(out[0], a[0]);
        assert_eq!(out[79], b[0]);
        assert!(matches!(
            blend_loxodromes(&a, &b[..10], 80),
            Err(BoundaryError::InvalidSpec(_))
        ));
    }
}
