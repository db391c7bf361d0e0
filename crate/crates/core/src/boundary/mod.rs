//! Open-boundary construction: loxodromes, blending, and trimming against
//! shorelines into closed domain loops.

mod loxodrome;
mod trim;

pub use loxodrome::{
    blend_loxodromes, inverse_mercator_y, mercator_y, sample_loxodrome, LoxodromeSpec, StopLimit,
    DEFAULT_SAMPLES, MAX_ABS_LATITUDE,
};
pub use trim::{trim_to_domain, TrimOutcome};

use serde::Serialize;
use thiserror::Error;

use crate::geom::{signed_area, GeoPoint};

/// Loop closure and segment continuity tolerance, degrees.
pub const CLOSURE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundaryError {
    #[error("invalid boundary specification: {0}")]
    InvalidSpec(String),
    #[error("stop limit is unreachable: {0}")]
    Unreachable(String),
    #[error("latitude {lat} is too close to a pole (limit ±{MAX_ABS_LATITUDE}°)")]
    PoleProximity { lat: f64 },
    #[error("open line {line} cannot close the domain: {reason}")]
    UnclosableDomain { line: usize, reason: String },
    #[error("degenerate geometry: {0}")]
    Degenerate(String),
}

/// Where a boundary segment came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SegmentOrigin {
    Shoreline { id: String, class: Option<String> },
    OpenBoundary { index: usize },
}

impl SegmentOrigin {
    pub fn class(&self) -> Option<&str> {
        match self {
            SegmentOrigin::Shoreline { class, .. } => class.as_deref(),
            SegmentOrigin::OpenBoundary { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundarySegment {
    pub origin: SegmentOrigin,
    pub points: Vec<GeoPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LoopKind {
    /// Outer domain boundary, counterclockwise.
    Outer,
    /// Interior island, clockwise.
    Island,
}

/// An ordered chain of segments. Consecutive segments share endpoints and a
/// closed loop ends where it started.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryLoop {
    pub segments: Vec<BoundarySegment>,
    pub closed: bool,
    pub kind: LoopKind,
}

impl BoundaryLoop {
    /// Checks segment continuity and closure within [`CLOSURE_TOLERANCE`].
    pub fn check_closure(&self) -> Result<(), BoundaryError> {
        if self.segments.is_empty() || self.segments.iter().any(|s| s.points.is_empty()) {
            return Err(BoundaryError::Degenerate("loop has an empty segment".into()));
        }
        for (i, w) in self.segments.windows(2).enumerate() {
            let end = w[0].points.last().unwrap();
            let start = w[1].points.first().unwrap();
            let gap = end.max_diff(start);
            if gap > CLOSURE_TOLERANCE {
                return Err(BoundaryError::Degenerate(format!(
                    "segments {i} and {} are {gap:e}° apart",
                    i + 1
                )));
            }
        }
        if self.closed {
            let first = self.segments[0].points[0];
            let last = *self.segments.last().unwrap().points.last().unwrap();
            let gap = first.max_diff(&last);
            if gap > CLOSURE_TOLERANCE {
                return Err(BoundaryError::Degenerate(format!("loop does not close ({gap:e}°)")));
            }
        }
        Ok(())
    }

    /// Distinct vertices in order: shared segment endpoints appear once and
    /// the closing point is not repeated.
    pub fn vertices(&self) -> Vec<GeoPoint> {
        let mut out: Vec<GeoPoint> = Vec::new();
        for seg in &self.segments {
            for p in &seg.points {
                if out.last().is_some_and(|q| q.max_diff(p) <= CLOSURE_TOLERANCE) {
                    continue;
                }
                out.push(*p);
            }
        }
        if self.closed && out.len() > 1 && out[0].max_diff(out.last().unwrap()) <= CLOSURE_TOLERANCE {
            out.pop();
        }
        out
    }

    pub fn signed_area(&self) -> f64 {
        signed_area(&self.vertices())
    }

    /// Reverses traversal direction in place.
    pub fn reverse(&mut self) {
        self.segments.reverse();
        for s in &mut self.segments {
            s.points.reverse();
        }
    }

    /// Orients outer loops counterclockwise and islands clockwise.
    pub fn normalize_orientation(&mut self) {
        let area = self.signed_area();
        let want_ccw = self.kind == LoopKind::Outer;
        if (area > 0.0) != want_ccw && area != 0.0 {
            self.reverse();
        }
    }
}
