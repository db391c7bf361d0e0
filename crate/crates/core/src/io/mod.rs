//! Text interchange formats: GeoJSON contours and ESRI ASCII grids.

mod ascii_grid;
mod geojson;

pub use ascii_grid::{raster_to_string, read_raster, parse_raster, write_raster};
pub use geojson::{
    contours_to_string, parse_contours, parse_contours_with_warnings, read_contours, write_contours,
    ContourDocument,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeoIoError {
    #[error("malformed JSON at byte {offset}: {message}")]
    Json { offset: usize, message: String },
    #[error("invalid GeoJSON: {0}")]
    Schema(String),
    #[error("feature {feature}: non-finite coordinate")]
    NonFinite { feature: String },
    #[error("raster header: {0}")]
    RasterHeader(String),
    #[error("raster row {row}: {message}")]
    RasterRow { row: usize, message: String },
    #[error(transparent)]
    Raster(#[from] crate::raster::RasterError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Shortest decimal text that parses back to the identical `f64`.
///
/// Plain notation for moderate magnitudes, exponent notation otherwise.
/// Never more than 17 significant digits.
pub fn format_f64(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}
