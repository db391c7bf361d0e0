use coastpca::boundary::BoundaryError;
use coastpca::contour::ContourError;
use coastpca::gmsh::GmshError;
use coastpca::io::GeoIoError;
use coastpca::pca::PcaError;
use coastpca::raster::RasterError;
use coastpca::sizefield::SizeFieldError;
use thiserror::Error;

/// Failure classes, each with its own process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Numerical(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn context(self, what: &str) -> Self {
        match self {
            CliError::Validation(m) => CliError::Validation(format!("{what}: {m}")),
            CliError::Numerical(m) => CliError::Numerical(format!("{what}: {m}")),
            CliError::Io(m) => CliError::Io(format!("{what}: {m}")),
        }
    }
}

impl From<GeoIoError> for CliError {
    fn from(e: GeoIoError) -> Self {
        match e {
            GeoIoError::Io(_) => CliError::Io(e.to_string()),
            GeoIoError::Raster(r) => r.into(),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<PcaError> for CliError {
    fn from(e: PcaError) -> Self {
        CliError::Numerical(e.to_string())
    }
}

impl From<ContourError> for CliError {
    fn from(e: ContourError) -> Self {
        match e {
            ContourError::Numerical { .. } | ContourError::Layout(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<RasterError> for CliError {
    fn from(e: RasterError) -> Self {
        match e {
            RasterError::Numerical(_) | RasterError::Layout(_) => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

impl From<BoundaryError> for CliError {
    fn from(e: BoundaryError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<SizeFieldError> for CliError {
    fn from(e: SizeFieldError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<GmshError> for CliError {
    fn from(e: GmshError) -> Self {
        match e {
            GmshError::Io(_) => CliError::Io(e.to_string()),
            GmshError::Parse { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
