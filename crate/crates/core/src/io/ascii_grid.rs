//! ESRI ASCII grid reader/writer.
//!
//! ```text
//! ncols 2
//! nrows 2
//! xllcorner 0
//! yllcorner 0
//! cellsize 1
//! NODATA_value -9999
//! 1 2
//! 3 4
//! ```
//!
//! Rows run north to south. Header keys are case-insensitive and may come in
//! any order; `NODATA_value` defaults to -9999 when absent.

use std::fs;
use std::path::Path;

use super::{format_f64, GeoIoError};
use crate::raster::RasterGrid;

const DEFAULT_NODATA: f64 = -9999.0;

pub fn parse_raster(text: &str) -> Result<RasterGrid, GeoIoError> {
    let mut lines = text.lines().enumerate().peekable();
    let mut ncols = None;
    let mut nrows = None;
    let mut xll = None;
    let mut yll = None;
    let mut cellsize = None;
    let mut nodata = None;

    while let Some((_, line)) = lines.peek() {
        let mut parts = line.split_whitespace();
        let Some(key) = parts.next() else {
            lines.next();
            continue;
        };
        if !key.starts_with(|c: char| c.is_ascii_alphabetic()) {
            break;
        }
        let value = parts
            .next()
            .ok_or_else(|| GeoIoError::RasterHeader(format!("key {key} has no value")))?;
        let num = || {
            value
                .parse::<f64>()
                .map_err(|_| GeoIoError::RasterHeader(format!("{key}: cannot parse {value:?}")))
        };
        let count = || {
            value
                .parse::<usize>()
                .map_err(|_| GeoIoError::RasterHeader(format!("{key}: cannot parse {value:?}")))
        };
        let slot = match key.to_ascii_lowercase().as_str() {
            "ncols" => {
                ncols = Some(count()?);
                true
            }
            "nrows" => {
                nrows = Some(count()?);
                true
            }
            "xllcorner" => {
                xll = Some(num()?);
                true
            }
            "yllcorner" => {
                yll = Some(num()?);
                true
            }
            "cellsize" => {
                cellsize = Some(num()?);
                true
            }
            "nodata_value" => {
                nodata = Some(num()?);
                true
            }
            _ => false,
        };
        if !slot {
            return Err(GeoIoError::RasterHeader(format!("unknown key {key}")));
        }
        lines.next();
    }

    let missing = |k: &str| GeoIoError::RasterHeader(format!("missing key {k}"));
    let ncols = ncols.ok_or_else(|| missing("ncols"))?;
    let nrows = nrows.ok_or_else(|| missing("nrows"))?;
    let xll = xll.ok_or_else(|| missing("xllcorner"))?;
    let yll = yll.ok_or_else(|| missing("yllcorner"))?;
    let cellsize = cellsize.ok_or_else(|| missing("cellsize"))?;
    let nodata = nodata.unwrap_or(DEFAULT_NODATA);

    let mut values = Vec::with_capacity(nrows * ncols);
    let mut row = 0;
    for (_, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        if row == nrows {
            return Err(GeoIoError::RasterRow {
                row,
                message: format!("more than {nrows} data rows"),
            });
        }
        let before = values.len();
        for tok in line.split_whitespace() {
            let v = tok.parse::<f64>().map_err(|_| GeoIoError::RasterRow {
                row,
                message: format!("cannot parse {tok:?}"),
            })?;
            values.push(v);
        }
        let got = values.len() - before;
        if got != ncols {
            return Err(GeoIoError::RasterRow {
                row,
                message: format!("{got} values, expected {ncols}"),
            });
        }
        row += 1;
    }
    if row != nrows {
        return Err(GeoIoError::RasterRow {
            row,
            message: format!("found {row} data rows, expected {nrows}"),
        });
    }
    Ok(RasterGrid::new(nrows, ncols, xll, yll, cellsize, nodata, values)?)
}

pub fn raster_to_string(g: &RasterGrid) -> String {
    let mut out = String::with_capacity(64 + g.nrows * g.ncols * 8);
    out.push_str(&format!("ncols {}\n", g.ncols));
    out.push_str(&format!("nrows {}\n", g.nrows));
    out.push_str(&format!("xllcorner {}\n", format_f64(g.xll)));
    out.push_str(&format!("yllcorner {}\n", format_f64(g.yll)));
    out.push_str(&format!("cellsize {}\n", format_f64(g.cellsize)));
    out.push_str(&format!("NODATA_value {}\n", format_f64(g.nodata)));
    for r in 0..g.nrows {
        let row = &g.values()[r * g.ncols..(r + 1) * g.ncols];
        let cells: Vec<String> = row.iter().map(|&v| format_f64(v)).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

pub fn read_raster(path: impl AsRef<Path>) -> Result<RasterGrid, GeoIoError> {
    parse_raster(&fs::read_to_string(path)?)
}

pub fn write_raster(g: &RasterGrid, path: impl AsRef<Path>) -> Result<(), GeoIoError> {
    fs::write(path, raster_to_string(g))?;
    Ok(())
}
