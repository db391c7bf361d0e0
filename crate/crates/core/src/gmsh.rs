//! Gmsh `.geo` (version 2 syntax) writer and a reader for the same subset.
//!
//! Every loop vertex becomes a `Point`, every edge a `Line`, every outer loop
//! a `Plane Surface` with its islands as holes. Each gradation rule becomes a
//! `Distance` field over the lines of its shoreline class feeding a
//! `Threshold` field; a `Min` field over all thresholds is the background
//! size field.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use thiserror::Error;

use crate::boundary::{BoundaryError, BoundaryLoop, LoopKind};
use crate::geom::{point_in_ring, GeoPoint};
use crate::io::format_f64;
use crate::sizefield::{GradationRule, SizeFieldError};

#[derive(Debug, Error)]
pub enum GmshError {
    #[error("loop {index} is not closed: {source}")]
    Unclosed {
        index: usize,
        #[source]
        source: BoundaryError,
    },
    #[error("loop {0} has a non-finite coordinate")]
    NonFinite(usize),
    #[error("loop {0} has fewer than 3 distinct vertices")]
    Degenerate(usize),
    #[error("island loop {0} lies inside no outer loop")]
    OrphanIsland(usize),
    #[error("no boundary lines carry class {0}")]
    NoCurves(String),
    #[error("maximum size must be positive and finite, got {0}")]
    MaxSize(f64),
    #[error(transparent)]
    Rule(#[from] SizeFieldError),
    #[error("geo parse error in statement {statement}: {message}")]
    Parse { statement: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

struct Edge<'a> {
    a: usize,
    b: usize,
    class: Option<&'a str>,
}

/// Loop vertices with the shoreline class of each outgoing edge.
fn edges_of(lp: &BoundaryLoop) -> (Vec<GeoPoint>, Vec<Option<&str>>) {
    let verts = lp.vertices();
    let mut classes = Vec::with_capacity(verts.len());
    let mut k = 0usize;
    for seg in &lp.segments {
        for p in &seg.points {
            if k < verts.len() && verts[k] == *p {
                if k > 0 {
                    classes.push(seg.origin.class());
                }
                k += 1;
            }
        }
    }
    let last = lp.segments.last().and_then(|s| s.origin.class());
    classes.resize(verts.len(), last);
    (verts, classes)
}

/// Renders loops and rules as `.geo` text.
///
/// `h_max` caps the mesh size; with no rules it is also the constant target
/// size.
pub fn write_geo(loops: &[BoundaryLoop], rules: &[GradationRule], h_max: f64) -> Result<String, GmshError> {
    if !(h_max.is_finite() && h_max > 0.0) {
        return Err(GmshError::MaxSize(h_max));
    }
    for rule in rules {
        rule.validate()?;
    }

    let mut rings = Vec::with_capacity(loops.len());
    for (i, lp) in loops.iter().enumerate() {
        if !lp.closed {
            return Err(GmshError::Unclosed {
                index: i,
                source: BoundaryError::Degenerate("loop is flagged open".into()),
            });
        }
        lp.check_closure()
            .map_err(|source| GmshError::Unclosed { index: i, source })?;
        let (verts, classes) = edges_of(lp);
        if verts.iter().any(|p| !p.is_finite()) {
            return Err(GmshError::NonFinite(i));
        }
        if verts.len() < 3 {
            return Err(GmshError::Degenerate(i));
        }
        rings.push((verts, classes));
    }

    let mut holes: BTreeMap<usize, Vec<usize>> = loops
        .iter()
        .enumerate()
        .filter(|(_, l)| l.kind == LoopKind::Outer)
        .map(|(i, _)| (i, Vec::new()))
        .collect();
    for (i, lp) in loops.iter().enumerate() {
        if lp.kind != LoopKind::Island {
            continue;
        }
        let probe = rings[i].0[0];
        let host = holes
            .keys()
            .copied()
            .find(|&o| point_in_ring(probe, &rings[o].0))
            .ok_or(GmshError::OrphanIsland(i))?;
        holes.get_mut(&host).unwrap().push(i);
    }

    let mut out = String::new();
    let mut edges: Vec<Edge> = Vec::new();
    let mut loop_lines: Vec<Vec<usize>> = Vec::with_capacity(rings.len());
    let mut next_point = 1usize;
    for (verts, classes) in &rings {
        let first = next_point;
        for p in verts {
            writeln!(out, "Point({next_point}) = {{{}, {}, 0}};", format_f64(p.lon), format_f64(p.lat)).unwrap();
            next_point += 1;
        }
        let n = verts.len();
        let mut ids = Vec::with_capacity(n);
        for (j, &class) in classes.iter().enumerate().take(n) {
            edges.push(Edge {
                a: first + j,
                b: first + (j + 1) % n,
                class,
            });
            ids.push(edges.len());
        }
        loop_lines.push(ids);
    }
    for (i, e) in edges.iter().enumerate() {
        writeln!(out, "Line({}) = {{{}, {}}};", i + 1, e.a, e.b).unwrap();
    }
    for (i, ids) in loop_lines.iter().enumerate() {
        writeln!(out, "Line Loop({}) = {{{}}};", i + 1, join(ids.iter())).unwrap();
    }
    for (s, (outer, islands)) in holes.iter().enumerate() {
        let ids = std::iter::once(outer + 1).chain(islands.iter().map(|h| h + 1));
        writeln!(out, "Plane Surface({}) = {{{}}};", s + 1, join(ids)).unwrap();
    }

    if rules.is_empty() {
        writeln!(out, "Mesh.CharacteristicLengthMin = {};", format_f64(h_max)).unwrap();
        writeln!(out, "Mesh.CharacteristicLengthMax = {};", format_f64(h_max)).unwrap();
        return Ok(out);
    }

    let mut field = 1usize;
    let mut thresholds = Vec::with_capacity(rules.len());
    for rule in rules {
        let lines: Vec<usize> = edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.class == Some(rule.class.as_str()))
            .map(|(i, _)| i + 1)
            .collect();
        if lines.is_empty() {
            return Err(GmshError::NoCurves(rule.class.clone()));
        }
        writeln!(out, "// class {}", rule.class).unwrap();
        writeln!(out, "Field[{field}] = Distance;").unwrap();
        writeln!(out, "Field[{field}].EdgesList = {{{}}};", join(lines.iter())).unwrap();
        let t = field + 1;
        writeln!(out, "Field[{t}] = Threshold;").unwrap();
        writeln!(out, "Field[{t}].IField = {field};").unwrap();
        writeln!(out, "Field[{t}].LcMin = {};", format_f64(rule.h_min)).unwrap();
        writeln!(out, "Field[{t}].LcMax = {};", format_f64(rule.h_max)).unwrap();
        writeln!(out, "Field[{t}].DistMin = {};", format_f64(rule.plateau)).unwrap();
        writeln!(out, "Field[{t}].DistMax = {};", format_f64(rule.plateau + rule.ramp)).unwrap();
        thresholds.push(t);
        field += 2;
    }
    writeln!(out, "Field[{field}] = Min;").unwrap();
    writeln!(out, "Field[{field}].FieldsList = {{{}}};", join(thresholds.iter())).unwrap();
    writeln!(out, "Background Field = {field};").unwrap();
    writeln!(out, "Mesh.CharacteristicLengthMax = {};", format_f64(h_max)).unwrap();
    Ok(out)
}

fn join<T: ToString>(items: impl Iterator<Item = T>) -> String {
    items.map(|v| v.to_string()).collect::<Vec<_>>().join(", ")
}

pub fn export_geo(
    loops: &[BoundaryLoop],
    rules: &[GradationRule],
    h_max: f64,
    path: impl AsRef<Path>,
) -> Result<(), GmshError> {
    fs::write(path, write_geo(loops, rules, h_max)?)?;
    Ok(())
}

/// A field definition: its type and option assignments as written.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GeoField {
    pub kind: String,
    pub options: BTreeMap<String, String>,
}

/// Entities recovered from a `.geo` file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GeoModel {
    pub points: BTreeMap<usize, [f64; 3]>,
    pub lines: BTreeMap<usize, (usize, usize)>,
    pub line_loops: BTreeMap<usize, Vec<i64>>,
    pub surfaces: BTreeMap<usize, Vec<usize>>,
    pub fields: BTreeMap<usize, GeoField>,
    pub background_field: Option<usize>,
    pub mesh_options: BTreeMap<String, String>,
}

impl GeoModel {
    pub fn fields_of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = (&'a usize, &'a GeoField)> + 'a {
        self.fields.iter().filter(move |(_, f)| f.kind == kind)
    }

    /// Vertices of a line loop in traversal order, without the closing repeat.
    pub fn loop_vertices(&self, id: usize) -> Option<Vec<GeoPoint>> {
        let lines = self.line_loops.get(&id)?;
        let mut out = Vec::with_capacity(lines.len());
        for &l in lines {
            let &(a, b) = self.lines.get(&(l.unsigned_abs() as usize))?;
            let start = if l < 0 { b } else { a };
            let p = self.points.get(&start)?;
            out.push(GeoPoint::new(p[0], p[1]));
        }
        Some(out)
    }
}

fn parse_list(text: &str) -> Option<Vec<String>> {
    let inner = text.trim().strip_prefix('{')?.strip_suffix('}')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    Some(inner.split(',').map(|s| s.trim().to_string()).collect())
}

fn entity(lhs: &str, name: &str) -> Option<usize> {
    let rest = lhs.strip_prefix(name)?.trim_start();
    rest.strip_prefix('(')?.strip_suffix(')')?.trim().parse().ok()
}

/// Parses the statement subset emitted by [`write_geo`].
pub fn parse_geo(text: &str) -> Result<GeoModel, GmshError> {
    let stripped: String = text
        .lines()
        .map(|l| l.split("//").next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");
    let mut model = GeoModel::default();
    for (statement, raw) in stripped.split(';').enumerate() {
        let stmt = raw.trim();
        if stmt.is_empty() {
            continue;
        }
        let err = |message: &str| GmshError::Parse {
            statement,
            message: format!("{message}: {stmt:?}"),
        };
        let (lhs, rhs) = stmt.split_once('=').ok_or_else(|| err("missing '='"))?;
        let (lhs, rhs) = (lhs.trim(), rhs.trim());
        let nums = |n: usize| -> Result<Vec<f64>, GmshError> {
            let items = parse_list(rhs).ok_or_else(|| err("expected a braced list"))?;
            let vals: Result<Vec<f64>, _> = items.iter().map(|s| s.parse::<f64>()).collect();
            let vals = vals.map_err(|_| err("bad number"))?;
            if n > 0 && vals.len() != n {
                return Err(err("wrong number of entries"));
            }
            Ok(vals)
        };
        let ints = || -> Result<Vec<i64>, GmshError> {
            let items = parse_list(rhs).ok_or_else(|| err("expected a braced list"))?;
            items.iter().map(|s| s.parse::<i64>().map_err(|_| err("bad integer"))).collect()
        };

        if let Some(i) = entity(lhs, "Point") {
            let v = nums(3)?;
            model.points.insert(i, [v[0], v[1], v[2]]);
        } else if let Some(i) = entity(lhs, "Line Loop") {
            model.line_loops.insert(i, ints()?);
        } else if let Some(i) = entity(lhs, "Line") {
            let v = ints()?;
            if v.len() != 2 || v.iter().any(|&x| x <= 0) {
                return Err(err("line needs two point ids"));
            }
            model.lines.insert(i, (v[0] as usize, v[1] as usize));
        } else if let Some(i) = entity(lhs, "Plane Surface") {
            let v = ints()?;
            model.surfaces.insert(i, v.into_iter().map(|x| x.unsigned_abs() as usize).collect());
        } else if let Some(rest) = lhs.strip_prefix("Field[") {
            let (idx, tail) = rest.split_once(']').ok_or_else(|| err("unterminated field index"))?;
            let idx: usize = idx.trim().parse().map_err(|_| err("bad field index"))?;
            let tail = tail.trim();
            if tail.is_empty() {
                model.fields.entry(idx).or_default().kind = rhs.to_string();
            } else {
                let key = tail.strip_prefix('.').ok_or_else(|| err("bad field option"))?;
                let f = model.fields.get_mut(&idx).ok_or_else(|| err("option for undefined field"))?;
                f.options.insert(key.trim().to_string(), rhs.to_string());
            }
        } else if lhs == "Background Field" {
            model.background_field = Some(rhs.parse().map_err(|_| err("bad field id"))?);
        } else if let Some(key) = lhs.strip_prefix("Mesh.") {
            model.mesh_options.insert(key.to_string(), rhs.to_string());
        } else {
            return Err(err("unsupported statement"));
        }
    }
    Ok(model)
}

pub fn read_geo(path: impl AsRef<Path>) -> Result<GeoModel, GmshError> {
    parse_geo(&fs::read_to_string(path)?)
}
