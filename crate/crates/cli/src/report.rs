//! Machine-readable run report printed on stdout.
//!
//! Every field is always present; inapplicable sections are `null`.

use std::collections::BTreeMap;

use coastpca::contour::SimplifiedSet;
use serde::Serialize;

pub const TOOL: &str = "coastpca";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub classes: BTreeMap<String, ClassReport>,
    pub boundary: Option<BoundaryReport>,
    pub raster: Option<RasterReport>,
    pub outputs: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            command,
            classes: BTreeMap::new(),
            boundary: None,
            raster: None,
            outputs: Vec::new(),
        }
    }

    pub fn print(&self) {
        println!("{}", serde_json::to_string(self).expect("report serializes"));
    }
}

#[derive(Debug, Serialize)]
pub struct VarianceSummary {
    pub mean: f64,
    pub min: f64,
}

#[derive(Debug, Serialize)]
pub struct ClassReport {
    /// `null` when the class is passed through unsimplified.
    pub partition: Option<usize>,
    pub modes: Option<usize>,
    pub input: usize,
    pub kept: usize,
    pub dropped: Vec<String>,
    /// Retained variance over both axes of every kept contour.
    pub variance_fraction: Option<VarianceSummary>,
}

impl ClassReport {
    pub fn passthrough(count: usize) -> Self {
        Self {
            partition: None,
            modes: None,
            input: count,
            kept: count,
            dropped: Vec::new(),
            variance_fraction: None,
        }
    }

    pub fn simplified(input: usize, p: usize, k: usize, set: &SimplifiedSet) -> Self {
        let fractions: Vec<f64> = set.variance.iter().flat_map(|v| [v.x, v.y]).collect();
        let variance_fraction = (!fractions.is_empty()).then(|| VarianceSummary {
            mean: fractions.iter().sum::<f64>() / fractions.len() as f64,
            min: fractions.iter().copied().fold(f64::INFINITY, f64::min),
        });
        Self {
            partition: Some(p),
            modes: Some(k),
            input,
            kept: set.contours.len(),
            dropped: set.dropped.clone(),
            variance_fraction,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct BoundaryReport {
    pub open_lines: usize,
    pub outer_loops: usize,
    pub island_loops: usize,
    pub vertices: usize,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct RasterReport {
    pub nrows: usize,
    pub ncols: usize,
    pub block: [usize; 2],
    pub modes: usize,
    pub blocks: usize,
    pub filled_nodata: usize,
    pub variance_fraction: f64,
}
