//! PCA-based simplification of shoreline contours and bathymetry rasters,
//! plus the preprocessing needed to turn simplified shorelines into a
//! graded-resolution mesh domain.
//!
//! - [`pca`]: centering, covariance, Jacobi eigensolver, truncated synthesis.
//! - [`contour`]: windowed PCA over contour points with overlap averaging.
//! - [`raster`]: the same over overlapping p×q raster blocks.
//! - [`boundary`]: loxodromes, blending, trimming into closed loops.
//! - [`sizefield`]: distance-graded edge-length rules.
//! - [`gmsh`]: `.geo` export and a reader for round-trip checks.
//! - [`io`]: GeoJSON contours and ESRI ASCII grids.
//!
//! All longitudes and latitudes are in degrees.

pub mod boundary;
pub mod contour;
pub mod geom;
pub mod gmsh;
pub mod io;
pub mod matrix;
pub mod pca;
pub mod raster;
pub mod sizefield;

pub use boundary::{BoundaryError, BoundaryLoop, LoopKind};
pub use contour::{simplify_contour, simplify_contour_set, Contour, ContourError};
pub use geom::GeoPoint;
pub use matrix::Matrix;
pub use pca::{Decomposition, PcaError};
pub use raster::{simplify_raster, RasterError, RasterGrid};
pub use sizefield::{evaluate_size, GradationRule, SizeFieldError};
