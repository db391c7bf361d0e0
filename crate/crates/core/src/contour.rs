//! Shoreline simplification by windowed PCA.
//!
//! A contour is cut into overlapping windows of `P` consecutive points, one
//! window starting at every point (stride 1). Window `j` becomes column `j`
//! of two observation matrices, one for longitudes and one for latitudes,
//! which are decomposed independently. After truncated synthesis each point
//! takes the mean of its value over every window that covers it.
//!
//! Closed contours wrap around, so every point is covered by exactly `P`
//! windows. Open contours do not wrap; points near the ends get fewer votes.
//! Contours with fewer than `P` points cannot be windowed and are dropped by
//! [`simplify_contour_set`], which removes small islands.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::GeoPoint;
use crate::matrix::Matrix;
use crate::pca::{Decomposition, PcaError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("contour {id}: {points} points is fewer than the partition length {partition}")]
    TooSmall {
        id: String,
        points: usize,
        partition: usize,
    },
    #[error("partition length must be at least 2, got {0}")]
    PartitionLength(usize),
    #[error("mode count {k} out of range 1..={p}")]
    ModeCount { k: usize, p: usize },
    #[error("invalid contour {id}: {reason}")]
    Invalid { id: String, reason: String },
    #[error("reconstruction does not conform to layout: {0}")]
    Layout(String),
    #[error("contour {id}: {source}")]
    Numerical {
        id: String,
        #[source]
        source: PcaError,
    },
}

/// Ordered lon/lat point list. Closed contours do not repeat the first point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub id: String,
    /// Caller-assigned class tag (e.g. which simplification or gradation rule applies).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    pub points: Vec<GeoPoint>,
    pub closed: bool,
}

impl Contour {
    /// Builds and validates a contour.
    pub fn new(
        id: impl Into<String>,
        points: Vec<GeoPoint>,
        closed: bool,
    ) -> Result<Self, ContourError> {
        let c = Self {
            id: id.into(),
            class: None,
            points,
            closed,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn with_class(mut self, class: impl Into<String>) -> Self {
        self.class = Some(class.into());
        self
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn validate(&self) -> Result<(), ContourError> {
        let invalid = |reason: String| ContourError::Invalid {
            id: self.id.clone(),
            reason,
        };
        let min = if self.closed { 3 } else { 2 };
        if self.points.len() < min {
            return Err(invalid(format!(
                "{} points, need at least {min}",
                self.points.len()
            )));
        }
        if self.closed && self.points.first() == self.points.last() {
            return Err(invalid("closed contour repeats its first point".into()));
        }
        for (i, p) in self.points.iter().enumerate() {
            if !p.is_finite() {
                return Err(invalid(format!("non-finite coordinate at point {i}")));
            }
            if !(-90.0..=90.0).contains(&p.lat) {
                return Err(invalid(format!("latitude {} out of range at point {i}", p.lat)));
            }
        }
        Ok(())
    }

    /// Number of edges: `len` for closed contours, `len - 1` for open ones.
    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.points.len()
        } else {
            self.points.len().saturating_sub(1)
        }
    }

    /// Endpoints of edge `i`.
    pub fn segment(&self, i: usize) -> (GeoPoint, GeoPoint) {
        let n = self.points.len();
        (self.points[i], self.points[(i + 1) % n])
    }
}

/// Window placement over a contour.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionLayout {
    pub partition_length: usize,
    pub starts: Vec<usize>,
    pub wraparound: bool,
    pub point_count: usize,
}

impl PartitionLayout {
    pub fn for_contour(point_count: usize, partition_length: usize, closed: bool) -> Self {
        let count = if closed {
            point_count
        } else {
            point_count + 1 - partition_length
        };
        Self {
            partition_length,
            starts: (0..count).collect(),
            wraparound: closed,
            point_count,
        }
    }

    pub fn partition_count(&self) -> usize {
        self.starts.len()
    }

    /// Point index held at row `offset` of window `j`.
    #[inline]
    pub fn point_index(&self, j: usize, offset: usize) -> usize {
        let i = self.starts[j] + offset;
        if self.wraparound {
            i % self.point_count
        } else {
            i
        }
    }

    /// Number of windows covering point `i`.
    pub fn coverage(&self, i: usize) -> usize {
        let p = self.partition_length;
        if self.wraparound {
            p
        } else {
            let m = self.partition_count();
            (i + 1).min(p).min(m).min(self.point_count - i)
        }
    }
}

/// Longitude and latitude observation matrices (`P × M`) for one contour.
#[derive(Debug, Clone)]
pub struct ContourWindows {
    pub x: Matrix,
    pub y: Matrix,
    pub layout: PartitionLayout,
}

pub fn partition_contour(c: &Contour, p: usize) -> Result<ContourWindows, ContourError> {
    if p < 2 {
        return Err(ContourError::PartitionLength(p));
    }
    let n = c.points.len();
    if n < p {
        return Err(ContourError::TooSmall {
            id: c.id.clone(),
            points: n,
            partition: p,
        });
    }
    let layout = PartitionLayout::for_contour(n, p, c.closed);
    let m = layout.partition_count();
    let x = Matrix::from_fn(p, m, |o, j| c.points[layout.point_index(j, o)].lon);
    let y = Matrix::from_fn(p, m, |o, j| c.points[layout.point_index(j, o)].lat);
    Ok(ContourWindows { x, y, layout })
}

/// Overlap-averages reconstructed windows back into a point list.
///
/// Contributions to each point are summed in ascending window order.
pub fn assemble_contour(
    recon_x: &Matrix,
    recon_y: &Matrix,
    layout: &PartitionLayout,
) -> Result<Vec<GeoPoint>, ContourError> {
    let (p, m) = (layout.partition_length, layout.partition_count());
    for (name, r) in [("x", recon_x), ("y", recon_y)] {
        if r.rows() != p || r.cols() != m {
            return Err(ContourError::Layout(format!(
                "{name} is {}x{}, layout expects {p}x{m}",
                r.rows(),
                r.cols()
            )));
        }
    }
    let n = layout.point_count;
    let mut sx = vec![0.0; n];
    let mut sy = vec![0.0; n];
    for j in 0..m {
        for o in 0..p {
            let i = layout.point_index(j, o);
            sx[i] += recon_x[(o, j)];
            sy[i] += recon_y[(o, j)];
        }
    }
    Ok((0..n)
        .map(|i| {
            let votes = layout.coverage(i) as f64;
            GeoPoint::new(sx[i] / votes, sy[i] / votes)
        })
        .collect())
}

/// Share of variance retained along each coordinate axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisVariance {
    pub x: f64,
    pub y: f64,
}

fn check_params(p: usize, k: usize) -> Result<(), ContourError> {
    if p < 2 {
        return Err(ContourError::PartitionLength(p));
    }
    if k < 1 || k > p {
        return Err(ContourError::ModeCount { k, p });
    }
    Ok(())
}

/// Simplifies one contour, keeping its point count, closure flag, id and class.
pub fn simplify_contour(c: &Contour, p: usize, k: usize) -> Result<Contour, ContourError> {
    simplify_contour_with_variance(c, p, k).map(|(c, _)| c)
}

/// [`simplify_contour`] that also reports the retained variance fractions.
pub fn simplify_contour_with_variance(
    c: &Contour,
    p: usize,
    k: usize,
) -> Result<(Contour, AxisVariance), ContourError> {
    check_params(p, k)?;
    c.validate()?;
    let windows = partition_contour(c, p)?;
    let numerical = |source| ContourError::Numerical {
        id: c.id.clone(),
        source,
    };
    let dx = Decomposition::new(&windows.x).map_err(numerical)?;
    let dy = Decomposition::new(&windows.y).map_err(numerical)?;
    let rx = dx.reconstruct(k).map_err(numerical)?;
    let ry = dy.reconstruct(k).map_err(numerical)?;
    let points = assemble_contour(&rx, &ry, &windows.layout)?;
    let variance = AxisVariance {
        x: dx.variance_fraction(k),
        y: dy.variance_fraction(k),
    };
    Ok((
        Contour {
            id: c.id.clone(),
            class: c.class.clone(),
            points,
            closed: c.closed,
        },
        variance,
    ))
}

/// Outcome of simplifying a set of contours.
#[derive(Debug, Clone, Default)]
pub struct SimplifiedSet {
    /// Surviving contours, in input order.
    pub contours: Vec<Contour>,
    /// Retained variance per surviving contour, parallel to `contours`.
    pub variance: Vec<AxisVariance>,
    /// Ids of contours with fewer points than the partition length.
    pub dropped: Vec<String>,
    /// Ids and errors of contours that failed to simplify.
    pub failed: Vec<(String, ContourError)>,
}

/// Simplifies every contour, dropping those too small to window.
///
/// Per-contour failures are collected rather than aborting the batch. Only
/// invalid `p`/`k` is an error.
pub fn simplify_contour_set(
    contours: &[Contour],
    p: usize,
    k: usize,
) -> Result<SimplifiedSet, ContourError> {
    check_params(p, k)?;
    let results: Vec<Result<(Contour, AxisVariance), ContourError>> = contours
        .par_iter()
        .map(|c| simplify_contour_with_variance(c, p, k))
        .collect();

    let mut out = SimplifiedSet::default();
    for (c, r) in contours.iter().zip(results) {
        match r {
            Ok((simplified, v)) => {
                out.contours.push(simplified);
                out.variance.push(v);
            }
            Err(ContourError::TooSmall { .. }) => out.dropped.push(c.id.clone()),
            Err(e) => {
                log::warn!("contour {} not simplified: {e}", c.id);
                out.failed.push((c.id.clone(), e));
            }
        }
    }
    Ok(out)
}
