//! Trimming open boundaries against shorelines and stitching closed loops.
//!
//! Every open line is cut at its first and last crossing with any other
//! curve (shoreline or another open line). Each cut end is a *junction*: a
//! point on the trimmed piece that also lies on a *host* curve.
//!
//! Loops are traced with the domain on the left of every open line, in the
//! line's own direction. Starting on an unused piece, the walk runs to the
//! piece's far junction, turns onto the host curve in the direction that is
//! a left turn, and follows the host until it meets the next junction. A
//! junction hosted on the curve being followed hands the walk over to its
//! piece; reaching the end of a piece hands it over to the piece's host.
//! The loop closes when the walk returns to the starting piece.
//!
//! Intersections are computed in planar lon/lat.

use super::{BoundaryError, BoundaryLoop, BoundarySegment, LoopKind, SegmentOrigin};
use crate::contour::Contour;
use crate::geom::{cross, point_in_ring, segment_intersection, GeoPoint};

/// Tolerance on curve parameters (segment index + fraction).
const PARAM_EPS: f64 = 1e-9;
/// Parameter offset used to estimate curve tangents.
const TANGENT_STEP: f64 = 1e-6;

/// Loops plus any degeneracy warnings raised while trimming.
#[derive(Debug, Clone, Default)]
pub struct TrimOutcome {
    pub loops: Vec<BoundaryLoop>,
    pub warnings: Vec<String>,
}

struct Curve<'a> {
    points: &'a [GeoPoint],
    closed: bool,
    origin: SegmentOrigin,
}

impl Curve<'_> {
    fn segment_count(&self) -> usize {
        if self.closed {
            self.points.len()
        } else {
            self.points.len() - 1
        }
    }

    fn span(&self) -> f64 {
        self.segment_count() as f64
    }

    fn segment(&self, i: usize) -> (GeoPoint, GeoPoint) {
        (self.points[i], self.points[(i + 1) % self.points.len()])
    }

    fn point_at(&self, t: f64) -> GeoPoint {
        let span = self.span();
        let t = if self.closed {
            t.rem_euclid(span)
        } else {
            t.clamp(0.0, span)
        };
        let i = (t.floor() as usize).min(self.segment_count() - 1);
        let (a, b) = self.segment(i);
        a.lerp(b, t - i as f64)
    }

    /// Direction of travel through parameter `t` when moving with `dir`.
    fn tangent(&self, t: f64, dir: f64) -> (f64, f64) {
        let ahead = self.point_at(t + dir * TANGENT_STEP);
        let behind = self.point_at(t - dir * TANGENT_STEP);
        ahead.sub(behind)
    }

    /// Parameter distance from `from` to `to` moving with `dir`.
    fn distance(&self, from: f64, to: f64, dir: f64) -> f64 {
        let d = (to - from) * dir;
        if self.closed {
            d.rem_euclid(self.span())
        } else {
            d
        }
    }

    /// Vertices strictly between `from` and `from + dir·dist`.
    fn vertices_between(&self, from: f64, dist: f64, dir: f64) -> Vec<GeoPoint> {
        let n = self.points.len() as i64;
        let mut out = Vec::new();
        let mut v = if dir > 0.0 {
            from.floor() as i64 + 1
        } else {
            from.ceil() as i64 - 1
        };
        loop {
            let d = (v as f64 - from) * dir;
            if d >= dist - PARAM_EPS {
                break;
            }
            if d > PARAM_EPS {
                let idx = if self.closed { v.rem_euclid(n) } else { v };
                out.push(self.points[idx as usize]);
            }
            v += if dir > 0.0 { 1 } else { -1 };
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum End {
    Start,
    Finish,
}

#[derive(Debug, Clone, Copy)]
struct Junction {
    piece: usize,
    end: End,
    t: f64,
    host: usize,
    host_t: f64,
    point: GeoPoint,
}

#[derive(Debug, Clone, Copy)]
enum Entry {
    /// Another piece's junction lying on this curve.
    Hosted(usize),
    /// This piece's own cut end.
    Own(usize),
}

#[derive(Debug, Clone, Copy)]
struct Hit {
    t: f64,
    host: usize,
    host_t: f64,
    point: GeoPoint,
}

fn find_hits(curves: &[Curve], line: usize, warnings: &mut Vec<String>) -> Vec<Hit> {
    let c = &curves[line];
    let mut hits = Vec::new();
    for (h, host) in curves.iter().enumerate() {
        if h == line {
            continue;
        }
        for i in 0..c.segment_count() {
            let (p0, p1) = c.segment(i);
            let (lo_lon, hi_lon) = (p0.lon.min(p1.lon), p0.lon.max(p1.lon));
            let (lo_lat, hi_lat) = (p0.lat.min(p1.lat), p0.lat.max(p1.lat));
            for k in 0..host.segment_count() {
                let (q0, q1) = host.segment(k);
                if q0.lon.max(q1.lon) < lo_lon
                    || q0.lon.min(q1.lon) > hi_lon
                    || q0.lat.max(q1.lat) < lo_lat
                    || q0.lat.min(q1.lat) > hi_lat
                {
                    continue;
                }
                let Some((mut s, mut u)) = segment_intersection(p0, p1, q0, q1) else {
                    continue;
                };
                let mut point = p0.lerp(p1, s);
                let snap = |x: f64| {
                    if x < PARAM_EPS {
                        Some(0.0)
                    } else if x > 1.0 - PARAM_EPS {
                        Some(1.0)
                    } else {
                        None
                    }
                };
                if let Some(su) = snap(u) {
                    u = su;
                    point = if su == 0.0 { q0 } else { q1 };
                    warnings.push(format!(
                        "open line {} meets a vertex of curve {h} at ({}, {}); snapped to the vertex",
                        line, point.lon, point.lat
                    ));
                }
                if let Some(ss) = snap(s) {
                    s = ss;
                    if snap(u).is_none() {
                        point = if ss == 0.0 { p0 } else { p1 };
                        warnings.push(format!(
                            "open line {} crosses curve {h} at its own vertex ({}, {}); snapped to the vertex",
                            line, point.lon, point.lat
                        ));
                    }
                }
                let mut host_t = k as f64 + u;
                if host.closed && host_t >= host.span() {
                    host_t -= host.span();
                }
                hits.push(Hit {
                    t: i as f64 + s,
                    host: h,
                    host_t,
                    point,
                });
            }
        }
    }
    hits.sort_by(|a, b| {
        a.t.total_cmp(&b.t)
            .then(a.host.cmp(&b.host))
            .then(a.host_t.total_cmp(&b.host_t))
    });
    // a crossing through a shared vertex shows up on both adjacent segments
    hits.dedup_by(|b, a| b.host == a.host && (b.t - a.t).abs() <= PARAM_EPS);
    hits
}

/// Trims open lines against shorelines and stitches closed domain loops.
///
/// Open lines are traced with the domain on their left. Closed shorelines
/// that no open line touches become island loops when they lie inside an
/// outer loop. With no open lines at all, outermost closed shorelines become
/// outer loops and the ones nested inside them become islands.
pub fn trim_to_domain(
    shorelines: &[Contour],
    open_lines: &[Vec<GeoPoint>],
) -> Result<TrimOutcome, BoundaryError> {
    for c in shorelines {
        c.validate()
            .map_err(|e| BoundaryError::InvalidSpec(e.to_string()))?;
    }
    for (i, l) in open_lines.iter().enumerate() {
        if l.len() < 2 || l.iter().any(|p| !p.is_finite()) {
            return Err(BoundaryError::InvalidSpec(format!(
                "open line {i} needs at least 2 finite points"
            )));
        }
    }

    let nshore = shorelines.len();
    let mut curves: Vec<Curve> = shorelines
        .iter()
        .map(|c| Curve {
            points: &c.points,
            closed: c.closed,
            origin: SegmentOrigin::Shoreline {
                id: c.id.clone(),
                class: c.class.clone(),
            },
        })
        .collect();
    curves.extend(open_lines.iter().enumerate().map(|(i, l)| Curve {
        points: l,
        closed: false,
        origin: SegmentOrigin::OpenBoundary { index: i },
    }));

    let mut warnings = Vec::new();
    let mut junctions: Vec<Junction> = Vec::new();
    for line in 0..open_lines.len() {
        let ci = nshore + line;
        let hits = find_hits(&curves, ci, &mut warnings);
        if hits.len() < 2 || hits.last().unwrap().t - hits[0].t <= PARAM_EPS {
            return Err(BoundaryError::UnclosableDomain {
                line,
                reason: format!("{} crossing(s) found, need at least 2", hits.len()),
            });
        }
        if hits.len() > 2 {
            warnings.push(format!(
                "open line {line} has {} crossings; only the first and last are used",
                hits.len()
            ));
        }
        for (hit, end) in [(hits[0], End::Start), (*hits.last().unwrap(), End::Finish)] {
            junctions.push(Junction {
                piece: ci,
                end,
                t: hit.t,
                host: hit.host,
                host_t: hit.host_t,
                point: hit.point,
            });
        }
    }

    let mut entries: Vec<Vec<(f64, Entry)>> = vec![Vec::new(); curves.len()];
    for (j, jn) in junctions.iter().enumerate() {
        entries[jn.host].push((jn.host_t, Entry::Hosted(j)));
        entries[jn.piece].push((jn.t, Entry::Own(j)));
    }

    let next_entry = |curve: usize, t: f64, dir: f64| -> Option<(f64, Entry)> {
        let c = &curves[curve];
        let mut best: Option<(f64, u8, Entry)> = None;
        for &(et, entry) in &entries[curve] {
            let d = c.distance(t, et, dir);
            if d <= PARAM_EPS || (c.closed && c.span() - d <= PARAM_EPS) {
                continue;
            }
            let rank = match entry {
                Entry::Hosted(_) => 0,
                Entry::Own(_) => 1,
            };
            let better = match best {
                None => true,
                Some((bd, br, _)) => {
                    d < bd - PARAM_EPS || ((d - bd).abs() <= PARAM_EPS && rank < br)
                }
            };
            if better {
                best = Some((d, rank, entry));
            }
        }
        best.map(|(d, _, e)| (d, e))
    };

    let mut used = vec![false; open_lines.len()];
    let mut loops = Vec::new();
    let cap = 4 * junctions.len() + 4;

    for line in 0..open_lines.len() {
        if used[line] {
            continue;
        }
        let start = junctions[2 * line];
        let origin_curve = nshore + line;
        let (mut curve, mut t, mut dir, mut here) = (origin_curve, start.t, 1.0, start.point);
        let mut segments = Vec::new();
        let mut closed = false;

        for step in 0..cap {
            if step > 0 && curve == origin_curve && dir > 0.0 && (t - start.t).abs() <= PARAM_EPS {
                closed = true;
                break;
            }
            if curve >= nshore {
                used[curve - nshore] = true;
            }
            let c = &curves[curve];
            let (dist, entry) = next_entry(curve, t, dir).ok_or_else(|| {
                BoundaryError::UnclosableDomain {
                    line,
                    reason: format!(
                        "walk along curve {curve} from parameter {t} found no junction"
                    ),
                }
            })?;
            let jn = match entry {
                Entry::Hosted(j) | Entry::Own(j) => junctions[j],
            };
            let mut points = vec![here];
            points.extend(c.vertices_between(t, dist, dir));
            points.push(jn.point);
            segments.push(BoundarySegment {
                origin: c.origin.clone(),
                points,
            });

            let arrived_t = t + dir * dist;
            match entry {
                Entry::Hosted(_) => {
                    curve = jn.piece;
                    t = jn.t;
                    dir = if jn.end == End::Start { 1.0 } else { -1.0 };
                }
                Entry::Own(_) => {
                    let incoming = c.tangent(arrived_t, dir);
                    let host = &curves[jn.host];
                    let turn = cross(incoming, host.tangent(jn.host_t, 1.0));
                    if turn == 0.0 {
                        return Err(BoundaryError::Degenerate(format!(
                            "open line {} meets curve {} tangentially at ({}, {})",
                            jn.piece - nshore,
                            jn.host,
                            jn.point.lon,
                            jn.point.lat
                        )));
                    }
                    curve = jn.host;
                    t = jn.host_t;
                    dir = turn.signum();
                }
            }
            here = jn.point;
        }
        if !closed {
            return Err(BoundaryError::UnclosableDomain {
                line,
                reason: "walk did not return to its starting line".into(),
            });
        }
        let mut lp = BoundaryLoop {
            segments,
            closed: true,
            kind: LoopKind::Outer,
        };
        lp.check_closure()?;
        lp.normalize_orientation();
        loops.push(lp);
    }

    let untouched: Vec<&Contour> = shorelines
        .iter()
        .enumerate()
        .filter(|(i, c)| c.closed && entries[*i].is_empty())
        .map(|(_, c)| c)
        .collect();

    if open_lines.is_empty() {
        let rings: Vec<&[GeoPoint]> = untouched.iter().map(|c| c.points.as_slice()).collect();
        for (i, c) in untouched.iter().enumerate() {
            let nested = rings
                .iter()
                .enumerate()
                .any(|(k, r)| k != i && point_in_ring(c.points[0], r));
            let kind = if nested {
                LoopKind::Island
            } else {
                LoopKind::Outer
            };
            loops.push(contour_loop(c, kind));
        }
    } else {
        let outer: Vec<Vec<GeoPoint>> = loops.iter().map(|l| l.vertices()).collect();
        for c in untouched {
            if outer.iter().any(|r| point_in_ring(c.points[0], r)) {
                loops.push(contour_loop(c, LoopKind::Island));
            }
        }
    }

    for lp in &loops {
        lp.check_closure()?;
    }
    Ok(TrimOutcome { loops, warnings })
}

fn contour_loop(c: &Contour, kind: LoopKind) -> BoundaryLoop {
    let mut points = c.points.clone();
    points.push(c.points[0]);
    let mut lp = BoundaryLoop {
        segments: vec![BoundarySegment {
            origin: SegmentOrigin::Shoreline {
                id: c.id.clone(),
                class: c.class.clone(),
            },
            points,
        }],
        closed: true,
        kind,
    };
    lp.normalize_orientation();
    lp
}
