//! Pipeline configuration file.
//!
//! Relative paths are resolved against the directory holding the config.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use coastpca::boundary::{blend_loxodromes, sample_loxodrome, LoxodromeSpec, DEFAULT_SAMPLES};
use coastpca::sizefield::{GradationRule, DEFAULT_MAX_SIZE, DEFAULT_RAMP};
use coastpca::GeoPoint;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    /// GeoJSON shoreline document.
    pub shorelines: PathBuf,
    /// Simplification settings per shoreline class. Contours of other
    /// classes are used as given.
    #[serde(default)]
    pub classes: BTreeMap<String, ClassSettings>,
    #[serde(default)]
    pub open_boundaries: Vec<OpenBoundary>,
    #[serde(default)]
    pub gradation: Gradation,
    #[serde(default)]
    pub raster: Option<RasterSettings>,
    #[serde(default)]
    pub outputs: Outputs,
    #[serde(skip)]
    base_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSettings {
    pub partition: usize,
    pub modes: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OpenLine {
    Loxodrome(LoxodromeSpec),
    Blend {
        a: LoxodromeSpec,
        b: LoxodromeSpec,
        #[serde(default = "default_samples")]
        samples: usize,
    },
    Polyline(Vec<[f64; 2]>),
}

fn default_samples() -> usize {
    DEFAULT_SAMPLES
}

#[derive(Debug, Clone, Deserialize)]
pub struct OpenBoundary {
    #[serde(flatten)]
    pub line: OpenLine,
    /// Traverse the line end to start. The domain lies to the left of the
    /// direction of travel.
    #[serde(default)]
    pub reverse: bool,
}

impl OpenBoundary {
    pub fn sample(&self) -> Result<Vec<GeoPoint>, CliError> {
        let mut pts = match &self.line {
            OpenLine::Loxodrome(spec) => sample_loxodrome(spec)?,
            OpenLine::Blend { a, b, samples } => {
                blend_loxodromes(&sample_loxodrome(a)?, &sample_loxodrome(b)?, *samples)?
            }
            OpenLine::Polyline(pts) => pts.iter().map(|&[lon, lat]| GeoPoint::new(lon, lat)).collect(),
        };
        if self.reverse {
            pts.reverse();
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RuleSettings {
    pub class: String,
    pub h_min: f64,
    #[serde(default)]
    pub plateau: f64,
    #[serde(default = "default_ramp")]
    pub ramp: f64,
    pub h_max: Option<f64>,
}

fn default_ramp() -> f64 {
    DEFAULT_RAMP
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Gradation {
    #[serde(default = "default_h_max")]
    pub h_max: f64,
    #[serde(default)]
    pub rules: Vec<RuleSettings>,
}

fn default_h_max() -> f64 {
    DEFAULT_MAX_SIZE
}

impl Default for Gradation {
    fn default() -> Self {
        Self {
            h_max: DEFAULT_MAX_SIZE,
            rules: Vec::new(),
        }
    }
}

impl Gradation {
    pub fn rules(&self) -> Result<Vec<GradationRule>, CliError> {
        self.rules
            .iter()
            .map(|r| {
                GradationRule::new(&r.class, r.h_min, r.plateau, r.ramp, r.h_max.unwrap_or(self.h_max))
                    .map_err(CliError::from)
            })
            .collect()
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RasterSettings {
    pub input: PathBuf,
    pub block: [usize; 2],
    pub modes: usize,
    #[serde(default)]
    pub fill_nodata: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub simplified: Option<PathBuf>,
    pub boundary: Option<PathBuf>,
    pub geo: Option<PathBuf>,
    pub raster: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let mut cfg: PipelineConfig = serde_json::from_str(&text)
            .map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        for (class, s) in &self.classes {
            if s.partition < 2 {
                return Err(CliError::Validation(format!(
                    "class {class}: partition must be at least 2, got {}",
                    s.partition
                )));
            }
            if s.modes < 1 || s.modes > s.partition {
                return Err(CliError::Validation(format!(
                    "class {class}: modes must be in 1..={}, got {}",
                    s.partition, s.modes
                )));
            }
        }
        if let Some(r) = &self.raster {
            let n = r.block[0] * r.block[1];
            if r.block.contains(&0) || r.modes > n {
                return Err(CliError::Validation(format!(
                    "raster: need positive block sizes and modes in 0..={n}"
                )));
            }
        }
        self.gradation.rules()?;
        if !(self.gradation.h_max.is_finite() && self.gradation.h_max > 0.0) {
            return Err(CliError::Validation("gradation.h_max must be positive".into()));
        }
        Ok(())
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn shoreline_path(&self) -> PathBuf {
        self.resolve(&self.shorelines)
    }

    pub fn open_lines(&self) -> Result<Vec<Vec<GeoPoint>>, CliError> {
        self.open_boundaries.iter().map(OpenBoundary::sample).collect()
    }
}
