//! Distance-graded mesh edge-length rules.
//!
//! Each rule ties a shoreline class to a target size: `h_min` up to
//! `plateau` degrees from the nearest shoreline of that class, then a linear
//! rise to `h_max` over the next `ramp` degrees. Several rules combine by
//! pointwise minimum. Distances are great-circle central angles in degrees.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::Contour;
use crate::geom::GeoPoint;

/// Largest edge length used by the reference meshes, degrees.
pub const DEFAULT_MAX_SIZE: f64 = 1.5;
/// Default ramp width, degrees.
pub const DEFAULT_RAMP: f64 = 1.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SizeFieldError {
    #[error("no gradation rules given")]
    NoRules,
    #[error("invalid gradation rule for class {class}: {reason}")]
    InvalidRule { class: String, reason: String },
    #[error("gradation rule for class {0} has no contours")]
    NoContours(String),
    #[error("query point is not finite")]
    NonFinitePoint,
}

/// Edge-length rule for one shoreline class. All lengths in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradationRule {
    pub class: String,
    pub h_min: f64,
    #[serde(default)]
    pub plateau: f64,
    #[serde(default = "default_ramp")]
    pub ramp: f64,
    #[serde(default = "default_max_size")]
    pub h_max: f64,
}

fn default_ramp() -> f64 {
    DEFAULT_RAMP
}

fn default_max_size() -> f64 {
    DEFAULT_MAX_SIZE
}

impl GradationRule {
    pub fn new(
        class: impl Into<String>,
        h_min: f64,
        plateau: f64,
        ramp: f64,
        h_max: f64,
    ) -> Result<Self, SizeFieldError> {
        let rule = Self {
            class: class.into(),
            h_min,
            plateau,
            ramp,
            h_max,
        };
        rule.validate()?;
        Ok(rule)
    }

    pub fn validate(&self) -> Result<(), SizeFieldError> {
        let bad = |reason: &str| SizeFieldError::InvalidRule {
            class: self.class.clone(),
            reason: reason.to_string(),
        };
        let vals = [self.h_min, self.plateau, self.ramp, self.h_max];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(bad("non-finite parameter"));
        }
        if !(self.h_min > 0.0 && self.h_min <= self.h_max) {
            return Err(bad("need 0 < h_min <= h_max"));
        }
        if self.plateau < 0.0 {
            return Err(bad("plateau must be non-negative"));
        }
        if self.ramp <= 0.0 {
            return Err(bad("ramp must be positive"));
        }
        Ok(())
    }

    /// Target edge length at distance `d` (degrees) from the rule's shorelines.
    pub fn size_at(&self, d: f64) -> f64 {
        if d <= self.plateau {
            self.h_min
        } else if d < self.plateau + self.ramp {
            self.h_min + (d - self.plateau) / self.ramp * (self.h_max - self.h_min)
        } else {
            self.h_max
        }
    }
}

/// Great-circle central angle between two points, degrees (haversine).
pub fn central_angle(a: GeoPoint, b: GeoPoint) -> f64 {
    let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
    let dphi = p2 - p1;
    let dlambda = (b.lon - a.lon).to_radians();
    let h = (dphi / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dlambda / 2.0).sin().powi(2);
    (2.0 * h.sqrt().atan2((1.0 - h).max(0.0).sqrt())).to_degrees()
}

/// Azimuthal-equidistant coordinates of `q` around `origin`, degrees.
fn project(origin: GeoPoint, q: GeoPoint) -> (f64, f64) {
    let c = central_angle(origin, q);
    if c == 0.0 {
        return (0.0, 0.0);
    }
    let (p1, p2) = (origin.lat.to_radians(), q.lat.to_radians());
    let dl = (q.lon - origin.lon).to_radians();
    let az = (dl.sin() * p2.cos()).atan2(p1.cos() * p2.sin() - p1.sin() * p2.cos() * dl.cos());
    (c * az.sin(), c * az.cos())
}

/// Distance from `pt` to segment `a–b`, degrees.
///
/// Both endpoints are projected onto the azimuthal-equidistant plane
/// centred on `pt` and the planar point-to-segment distance is taken there.
/// Distances to the endpoints themselves are exact central angles; in
/// between the error grows with segment length and is small below ~1°.
pub fn distance_to_segment(pt: GeoPoint, a: GeoPoint, b: GeoPoint) -> f64 {
    let pa = project(pt, a);
    let pb = project(pt, b);
    let (dx, dy) = (pb.0 - pa.0, pb.1 - pa.1);
    let len2 = dx * dx + dy * dy;
    let t = if len2 == 0.0 {
        0.0
    } else {
        (-(pa.0 * dx + pa.1 * dy) / len2).clamp(0.0, 1.0)
    };
    let (x, y) = (pa.0 + t * dx, pa.1 + t * dy);
    x.hypot(y)
}

/// Distance from `pt` to the nearest segment of any contour, degrees.
pub fn distance_to_contours<'a>(pt: GeoPoint, contours: impl IntoIterator<Item = &'a Contour>) -> f64 {
    let mut best = f64::INFINITY;
    for c in contours {
        for i in 0..c.segment_count() {
            let (a, b) = c.segment(i);
            best = best.min(distance_to_segment(pt, a, b));
        }
    }
    best
}

/// Target edge length at `pt`: the minimum over all rules of each rule's
/// size at the distance to its own contours.
pub fn evaluate_size(pt: GeoPoint, rules: &[(&GradationRule, &[Contour])]) -> Result<f64, SizeFieldError> {
    if rules.is_empty() {
        return Err(SizeFieldError::NoRules);
    }
    if !pt.is_finite() {
        return Err(SizeFieldError::NonFinitePoint);
    }
    let mut h = f64::INFINITY;
    for (rule, contours) in rules {
        rule.validate()?;
        if contours.is_empty() {
            return Err(SizeFieldError::NoContours(rule.class.clone()));
        }
        h = h.min(rule.size_at(distance_to_contours(pt, contours.iter())));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule() -> GradationRule {
        GradationRule::new("red", 0.01, 0.02, 1.0, 1.5).unwrap()
    }

    #[test]
    fn piecewise_rule() {
        let r = rule();
        assert_eq!(r.size_at(0.0), 0.01);
        assert_eq!(r.size_at(0.02), 0.01);
        assert!((r.size_at(0.52) - 0.755).abs() < 1e-12);
        assert_eq!(r.size_at(1.02), 1.5);
        assert_eq!(r.size_at(40.0), 1.5);
    }

    #[test]
    fn rule_validation() {
        assert!(GradationRule::new("a", 0.0, 0.0, 1.0, 1.5).is_err());
        assert!(GradationRule::new("a", 2.0, 0.0, 1.0, 1.5).is_err());
        assert!(GradationRule::new("a", 0.1, -1.0, 1.0, 1.5).is_err());
        assert!(GradationRule::new("a", 0.1, 0.0, 0.0, 1.5).is_err());
        assert!(GradationRule::new("a", 0.1, 0.0, 1.0, 1.5).is_ok());
    }

    #[test]
    fn central_angles() {
        let a = GeoPoint::new(0.0, 0.0);
        assert!((central_angle(a, GeoPoint::new(0.0, 1.0)) - 1.0).abs() < 1e-12);
        assert!((central_angle(a, GeoPoint::new(90.0, 0.0)) - 90.0).abs() < 1e-12);
        assert!((central_angle(GeoPoint::new(10.0, 60.0), GeoPoint::new(11.0, 60.0)) - 0.49995).abs() < 1e-4);
    }

    #[test]
    fn on_contour_and_far_away() {
        let coast = Contour::new(
            "c",
            vec![GeoPoint::new(-3.0, 58.0), GeoPoint::new(-2.0, 58.0), GeoPoint::new(-2.0, 59.0)],
            false,
        )
        .unwrap();
        let r = rule();
        let binding = [(&r, std::slice::from_ref(&coast))];
        assert_eq!(evaluate_size(GeoPoint::new(-2.0, 58.0), &binding).unwrap(), 0.01);
        assert_eq!(evaluate_size(GeoPoint::new(10.0, 40.0), &binding).unwrap(), 1.5);
        assert!(matches!(evaluate_size(GeoPoint::new(0.0, 0.0), &[]), Err(SizeFieldError::NoRules)));
    }
}
