//! GeoJSON FeatureCollection reader/writer for contour sets.
//!
//! Polygon and MultiPolygon rings become closed contours with the repeated
//! terminal coordinate removed; LineStrings become open contours. Feature
//! `id` and `class` come from `properties` (a top-level feature `id` is used
//! when the property is absent). A feature that yields several rings gets
//! ids `"{id}/0"`, `"{id}/1"`, ...

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::GeoIoError;
use crate::contour::Contour;
use crate::geom::GeoPoint;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ContourDocument {
    pub contours: Vec<Contour>,
}

impl ContourDocument {
    pub fn new(contours: Vec<Contour>) -> Self {
        Self { contours }
    }

    pub fn len(&self) -> usize {
        self.contours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contours.is_empty()
    }

    /// Contours tagged with `class`.
    pub fn of_class<'a>(&'a self, class: &'a str) -> impl Iterator<Item = &'a Contour> + 'a {
        self.contours
            .iter()
            .filter(move |c| c.class.as_deref() == Some(class))
    }
}

fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    if line == 0 {
        return 0;
    }
    let mut offset = 0;
    for (i, l) in text.split_inclusive('\n').enumerate() {
        if i + 1 == line {
            return offset + column.saturating_sub(1).min(l.len());
        }
        offset += l.len();
    }
    text.len()
}

fn schema(msg: impl Into<String>) -> GeoIoError {
    GeoIoError::Schema(msg.into())
}

fn id_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        _ => None,
    }
}

fn parse_position(v: &Value, feature: &str) -> Result<GeoPoint, GeoIoError> {
    let arr = v
        .as_array()
        .filter(|a| a.len() >= 2)
        .ok_or_else(|| schema(format!("feature {feature}: position must be [lon, lat]")))?;
    let lon = arr[0].as_f64();
    let lat = arr[1].as_f64();
    match (lon, lat) {
        (Some(lon), Some(lat)) if lon.is_finite() && lat.is_finite() => Ok(GeoPoint::new(lon, lat)),
        (Some(_), Some(_)) => Err(GeoIoError::NonFinite {
            feature: feature.to_string(),
        }),
        _ => Err(schema(format!("feature {feature}: coordinates must be numbers"))),
    }
}

fn parse_line(v: &Value, feature: &str) -> Result<Vec<GeoPoint>, GeoIoError> {
    v.as_array()
        .ok_or_else(|| schema(format!("feature {feature}: expected a coordinate array")))?
        .iter()
        .map(|p| parse_position(p, feature))
        .collect()
}

fn parse_rings(v: &Value, feature: &str) -> Result<Vec<Vec<GeoPoint>>, GeoIoError> {
    let rings = v
        .as_array()
        .ok_or_else(|| schema(format!("feature {feature}: polygon must be an array of rings")))?;
    let mut out = Vec::with_capacity(rings.len());
    for ring in rings {
        let mut pts = parse_line(ring, feature)?;
        if pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        out.push(pts);
    }
    Ok(out)
}

/// Parses a FeatureCollection, returning the document and any warnings
/// about skipped features.
pub fn parse_contours_with_warnings(text: &str) -> Result<(ContourDocument, Vec<String>), GeoIoError> {
    let root: Value = serde_json::from_str(text).map_err(|e| GeoIoError::Json {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })?;
    if root.get("type").and_then(Value::as_str) != Some("FeatureCollection") {
        return Err(schema("top-level object must be a FeatureCollection"));
    }
    let features = root
        .get("features")
        .and_then(Value::as_array)
        .ok_or_else(|| schema("FeatureCollection has no features array"))?;

    let mut contours = Vec::new();
    let mut warnings = Vec::new();
    let mut seen = HashSet::new();
    for (index, feature) in features.iter().enumerate() {
        let props = feature.get("properties").and_then(Value::as_object);
        let id = props
            .and_then(|p| p.get("id"))
            .and_then(id_text)
            .or_else(|| feature.get("id").and_then(id_text))
            .unwrap_or_else(|| index.to_string());
        let class = props
            .and_then(|p| p.get("class"))
            .and_then(Value::as_str)
            .map(str::to_string);
        let geometry = feature
            .get("geometry")
            .filter(|g| !g.is_null())
            .ok_or_else(|| schema(format!("feature {id}: missing geometry")))?;
        let kind = geometry.get("type").and_then(Value::as_str).unwrap_or("");
        let coords = geometry.get("coordinates");
        let parts: Vec<(Vec<GeoPoint>, bool)> = match (kind, coords) {
            ("LineString", Some(c)) => vec![(parse_line(c, &id)?, false)],
            ("Polygon", Some(c)) => parse_rings(c, &id)?.into_iter().map(|r| (r, true)).collect(),
            ("MultiPolygon", Some(c)) => {
                let polys = c
                    .as_array()
                    .ok_or_else(|| schema(format!("feature {id}: MultiPolygon must be an array")))?;
                let mut all = Vec::new();
                for poly in polys {
                    all.extend(parse_rings(poly, &id)?.into_iter().map(|r| (r, true)));
                }
                all
            }
            (_, None) if !kind.is_empty() => {
                return Err(schema(format!("feature {id}: {kind} has no coordinates")));
            }
            _ => {
                let msg = format!("feature {id}: skipping unsupported geometry type {kind:?}");
                log::warn!("{msg}");
                warnings.push(msg);
                continue;
            }
        };
        let multi = parts.len() > 1;
        for (n, (points, closed)) in parts.into_iter().enumerate() {
            let cid = if multi { format!("{id}/{n}") } else { id.clone() };
            let mut contour = Contour::new(cid.clone(), points, closed)
                .map_err(|e| schema(format!("feature {id}: {e}")))?;
            contour.class = class.clone();
            if !seen.insert(cid.clone()) {
                return Err(schema(format!("duplicate contour id {cid}")));
            }
            contours.push(contour);
        }
    }
    Ok((ContourDocument { contours }, warnings))
}

pub fn parse_contours(text: &str) -> Result<ContourDocument, GeoIoError> {
    parse_contours_with_warnings(text).map(|(doc, _)| doc)
}

pub fn read_contours(path: impl AsRef<Path>) -> Result<ContourDocument, GeoIoError> {
    parse_contours(&fs::read_to_string(path)?)
}

fn position(p: &GeoPoint) -> Value {
    json!([p.lon, p.lat])
}

fn feature(c: &Contour) -> Result<Value, GeoIoError> {
    if c.points.iter().any(|p| !p.is_finite()) {
        return Err(GeoIoError::NonFinite {
            feature: c.id.clone(),
        });
    }
    let mut coords: Vec<Value> = c.points.iter().map(position).collect();
    let geometry = if c.closed {
        coords.push(position(&c.points[0]));
        json!({ "type": "Polygon", "coordinates": [coords] })
    } else {
        json!({ "type": "LineString", "coordinates": coords })
    };
    let mut props = Map::new();
    props.insert("id".into(), Value::String(c.id.clone()));
    if let Some(class) = &c.class {
        props.insert("class".into(), Value::String(class.clone()));
    }
    Ok(json!({ "type": "Feature", "properties": props, "geometry": geometry }))
}

/// Serializes a document, one feature per line.
pub fn contours_to_string(doc: &ContourDocument) -> Result<String, GeoIoError> {
    let mut out = String::from("{\"type\":\"FeatureCollection\",\"features\":[");
    for (i, c) in doc.contours.iter().enumerate() {
        out.push_str(if i == 0 { "\n" } else { ",\n" });
        out.push_str(&feature(c)?.to_string());
    }
    out.push_str("\n]}\n");
    Ok(out)
}

pub fn write_contours(doc: &ContourDocument, path: impl AsRef<Path>) -> Result<(), GeoIoError> {
    fs::write(path, contours_to_string(doc)?)?;
    Ok(())
}
