//! Raster (bathymetry) simplification by block PCA.
//!
//! Every `p × q` block anchored at a grid cell that keeps the block inside
//! the grid becomes one observation column (flattened row-major). Blocks
//! never wrap or pad. After truncated synthesis each cell takes the mean of
//! all block reconstructions covering it.

use rayon::prelude::*;
use std::collections::VecDeque;
use thiserror::Error;

use crate::matrix::Matrix;
use crate::pca::{Decomposition, PcaError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RasterError {
    #[error("invalid raster: {0}")]
    Invalid(String),
    #[error("raster {nrows}x{ncols} is smaller than the {p}x{q} block")]
    TooSmall {
        nrows: usize,
        ncols: usize,
        p: usize,
        q: usize,
    },
    #[error("block size must be at least 1x1, got {p}x{q}")]
    BlockSize { p: usize, q: usize },
    #[error("nodata cell at row {row}, column {col} lies inside block coverage; fill nodata first")]
    NodataUnsupported { row: usize, col: usize },
    #[error("mode count {k} out of range 0..={n}")]
    ModeCount { k: usize, n: usize },
    #[error("reconstruction does not conform to layout: {0}")]
    Layout(String),
    #[error("raster contains only nodata cells")]
    AllNodata,
    #[error(transparent)]
    Numerical(#[from] PcaError),
}

/// Georeferenced grid. Row 0 is the northernmost row.
#[derive(Debug, Clone, PartialEq)]
pub struct RasterGrid {
    pub nrows: usize,
    pub ncols: usize,
    pub xll: f64,
    pub yll: f64,
    pub cellsize: f64,
    pub nodata: f64,
    values: Vec<f64>,
}

impl RasterGrid {
    pub fn new(
        nrows: usize,
        ncols: usize,
        xll: f64,
        yll: f64,
        cellsize: f64,
        nodata: f64,
        values: Vec<f64>,
    ) -> Result<Self, RasterError> {
        let g = Self {
            nrows,
            ncols,
            xll,
            yll,
            cellsize,
            nodata,
            values,
        };
        g.validate()?;
        Ok(g)
    }

    /// A grid with unit cells anchored at the origin, built from `f(row, col)`.
    pub fn from_fn(nrows: usize, ncols: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let values = (0..nrows * ncols).map(|i| f(i / ncols, i % ncols)).collect();
        Self {
            nrows,
            ncols,
            xll: 0.0,
            yll: 0.0,
            cellsize: 1.0,
            nodata: -9999.0,
            values,
        }
    }

    pub fn validate(&self) -> Result<(), RasterError> {
        if self.nrows == 0 || self.ncols == 0 {
            return Err(RasterError::Invalid(format!(
                "dimensions {}x{} must be positive",
                self.nrows, self.ncols
            )));
        }
        if !(self.cellsize > 0.0 && self.cellsize.is_finite()) {
            return Err(RasterError::Invalid(format!("cellsize {} must be positive", self.cellsize)));
        }
        if !self.xll.is_finite() || !self.yll.is_finite() {
            return Err(RasterError::Invalid("lower-left corner must be finite".into()));
        }
        if self.values.len() != self.nrows * self.ncols {
            return Err(RasterError::Invalid(format!(
                "{} values for a {}x{} grid",
                self.values.len(),
                self.nrows,
                self.ncols
            )));
        }
        if let Some(i) = self
            .values
            .iter()
            .position(|&v| !self.is_nodata(v) && !v.is_finite())
        {
            return Err(RasterError::Invalid(format!(
                "non-finite value at row {}, column {}",
                i / self.ncols,
                i % self.ncols
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn is_nodata(&self, v: f64) -> bool {
        v == self.nodata || (self.nodata.is_nan() && v.is_nan())
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.ncols + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, v: f64) {
        self.values[row * self.ncols + col] = v;
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// True when every georeferencing field matches `other` bit for bit.
    pub fn same_header(&self, other: &RasterGrid) -> bool {
        self.nrows == other.nrows
            && self.ncols == other.ncols
            && self.xll.to_bits() == other.xll.to_bits()
            && self.yll.to_bits() == other.yll.to_bits()
            && self.cellsize.to_bits() == other.cellsize.to_bits()
            && self.nodata.to_bits() == other.nodata.to_bits()
    }

    fn with_values(&self, values: Vec<f64>) -> RasterGrid {
        RasterGrid {
            values,
            ..self.clone()
        }
    }
}

/// Anchors of all stride-1 blocks, in row-major anchor order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    pub block_rows: usize,
    pub block_cols: usize,
    pub nrows: usize,
    pub ncols: usize,
    pub anchors: Vec<(usize, usize)>,
}

impl BlockLayout {
    pub fn new(nrows: usize, ncols: usize, p: usize, q: usize) -> Self {
        let mut anchors = Vec::with_capacity((nrows + 1 - p) * (ncols + 1 - q));
        for r in 0..=nrows - p {
            for c in 0..=ncols - q {
                anchors.push((r, c));
            }
        }
        Self {
            block_rows: p,
            block_cols: q,
            nrows,
            ncols,
            anchors,
        }
    }

    pub fn block_len(&self) -> usize {
        self.block_rows * self.block_cols
    }

    /// Number of blocks covering cell `(row, col)`.
    pub fn coverage(&self, row: usize, col: usize) -> usize {
        axis_coverage(row, self.block_rows, self.nrows) * axis_coverage(col, self.block_cols, self.ncols)
    }
}

fn axis_coverage(i: usize, p: usize, n: usize) -> usize {
    let lo = (i + 1).saturating_sub(p);
    let hi = i.min(n - p);
    hi + 1 - lo
}

fn check_block(g: &RasterGrid, p: usize, q: usize) -> Result<(), RasterError> {
    if p == 0 || q == 0 {
        return Err(RasterError::BlockSize { p, q });
    }
    if p > g.nrows || q > g.ncols {
        return Err(RasterError::TooSmall {
            nrows: g.nrows,
            ncols: g.ncols,
            p,
            q,
        });
    }
    Ok(())
}

/// Observation matrix of all blocks: `(p·q) × M`, column `j` = block at `anchors[j]`.
pub fn partition_raster(
    g: &RasterGrid,
    p: usize,
    q: usize,
) -> Result<(Matrix, BlockLayout), RasterError> {
    check_block(g, p, q)?;
    // Every cell is covered by at least one block, so any nodata cell blocks the decomposition.
    if let Some(i) = g.values.iter().position(|&v| g.is_nodata(v)) {
        return Err(RasterError::NodataUnsupported {
            row: i / g.ncols,
            col: i % g.ncols,
        });
    }
    let layout = BlockLayout::new(g.nrows, g.ncols, p, q);
    let m = layout.anchors.len();
    let windows = Matrix::from_fn(p * q, m, |o, j| {
        let (r, c) = layout.anchors[j];
        g.get(r + o / q, c + o % q)
    });
    Ok((windows, layout))
}

/// Overlap-averages block reconstructions onto a grid with `header`'s georeferencing.
///
/// Cells accumulate contributions in ascending anchor order.
pub fn assemble_raster(
    recon: &Matrix,
    layout: &BlockLayout,
    header: &RasterGrid,
) -> Result<RasterGrid, RasterError> {
    let n = layout.block_len();
    if recon.rows() != n || recon.cols() != layout.anchors.len() {
        return Err(RasterError::Layout(format!(
            "reconstruction is {}x{}, layout expects {}x{}",
            recon.rows(),
            recon.cols(),
            n,
            layout.anchors.len()
        )));
    }
    if header.nrows != layout.nrows || header.ncols != layout.ncols {
        return Err(RasterError::Layout(format!(
            "header is {}x{}, layout covers {}x{}",
            header.nrows, header.ncols, layout.nrows, layout.ncols
        )));
    }
    let (p, q, ncols) = (layout.block_rows, layout.block_cols, layout.ncols);

    // Anchors with the same row are contiguous, so each output row sums its
    // contributions independently, still in ascending anchor order.
    let per_anchor_row = ncols + 1 - q;
    let mut sums = vec![0.0; layout.nrows * ncols];
    sums.par_chunks_mut(ncols).enumerate().for_each(|(row, out)| {
        let r_lo = (row + 1).saturating_sub(p);
        let r_hi = row.min(layout.nrows - p);
        for r in r_lo..=r_hi {
            let dr = row - r;
            for c in 0..per_anchor_row {
                let j = r * per_anchor_row + c;
                for dc in 0..q {
                    out[c + dc] += recon[(dr * q + dc, j)];
                }
            }
        }
    });

    let values = sums
        .iter()
        .enumerate()
        .map(|(i, s)| s / layout.coverage(i / ncols, i % ncols) as f64)
        .collect();
    Ok(header.with_values(values))
}

/// Simplified grid plus the retained variance fraction.
#[derive(Debug, Clone)]
pub struct RasterSimplification {
    pub grid: RasterGrid,
    pub variance_fraction: f64,
    pub block_count: usize,
}

pub fn simplify_raster(g: &RasterGrid, p: usize, q: usize, k: usize) -> Result<RasterGrid, RasterError> {
    simplify_raster_detailed(g, p, q, k).map(|s| s.grid)
}

pub fn simplify_raster_detailed(
    g: &RasterGrid,
    p: usize,
    q: usize,
    k: usize,
) -> Result<RasterSimplification, RasterError> {
    g.validate()?;
    check_block(g, p, q)?;
    if k > p * q {
        return Err(RasterError::ModeCount { k, n: p * q });
    }
    let (windows, layout) = partition_raster(g, p, q)?;
    let d = Decomposition::new(&windows)?;
    let recon = d.reconstruct(k)?;
    Ok(RasterSimplification {
        grid: assemble_raster(&recon, &layout, g)?,
        variance_fraction: d.variance_fraction(k),
        block_count: layout.anchors.len(),
    })
}

/// Replaces nodata cells with the value of the nearest valid cell.
///
/// Distance is measured in 4-connected grid steps (breadth-first from all
/// valid cells at once). Ties go to the neighbour discovered first, scanning
/// sources in row-major order and neighbours as up, down, left, right.
pub fn fill_nodata_nearest(g: &RasterGrid) -> Result<RasterGrid, RasterError> {
    let (nr, nc) = (g.nrows, g.ncols);
    let mut values = g.values.clone();
    let mut filled: Vec<bool> = values.iter().map(|&v| !g.is_nodata(v)).collect();
    let mut queue: VecDeque<usize> = (0..values.len()).filter(|&i| filled[i]).collect();
    if queue.is_empty() {
        return Err(RasterError::AllNodata);
    }
    while let Some(i) = queue.pop_front() {
        let (r, c) = (i / nc, i % nc);
        let neighbours = [
            (r > 0).then(|| i - nc),
            (r + 1 < nr).then(|| i + nc),
            (c > 0).then(|| i - 1),
            (c + 1 < nc).then(|| i + 1),
        ];
        for nb in neighbours.into_iter().flatten() {
            if !filled[nb] {
                filled[nb] = true;
                values[nb] = values[i];
                queue.push_back(nb);
            }
        }
    }
    Ok(g.with_values(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid3() -> RasterGrid {
        RasterGrid::from_fn(3, 3, |r, c| (r * 3 + c) as f64)
    }

    #[test]
    fn three_by_three_blocks() {
        let (w, layout) = partition_raster(&grid3(), 2, 2).unwrap();
        assert_eq!(layout.anchors, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        assert_eq!(w.rows(), 4);
        assert_eq!(w.column(0), vec![0.0, 1.0, 3.0, 4.0]);
        assert_eq!(w.column(3), vec![4.0, 5.0, 7.0, 8.0]);
        assert_eq!(layout.coverage(1, 1), 4);
        assert_eq!(layout.coverage(0, 0), 1);
        assert_eq!(layout.coverage(0, 1), 2);
    }

    #[test]
    fn single_block() {
        let g = grid3();
        let (w, layout) = partition_raster(&g, 3, 3).unwrap();
        assert_eq!(layout.anchors.len(), 1);
        assert_eq!(w.column(0), g.values().to_vec());
    }

    #[test]
    fn eight_by_eight_gives_64_modes() {
        let g = RasterGrid::from_fn(10, 12, |r, c| (r * c) as f64);
        let (w, layout) = partition_raster(&g, 8, 8).unwrap();
        assert_eq!(w.rows(), 64);
        assert_eq!(layout.anchors.len(), 3 * 5);
    }

    #[test]
    fn errors() {
        let g = grid3();
        assert!(matches!(partition_raster(&g, 4, 2), Err(RasterError::TooSmall { .. })));
        assert!(matches!(partition_raster(&g, 0, 2), Err(RasterError::BlockSize { .. })));
        let mut holes = g.clone();
        holes.set(2, 1, -9999.0);
        assert!(matches!(
            partition_raster(&holes, 2, 2),
            Err(RasterError::NodataUnsupported { row: 2, col: 1 })
        ));
        assert!(matches!(simplify_raster(&g, 2, 2, 5), Err(RasterError::ModeCount { .. })));
    }

    #[test]
    fn constant_grid_is_fixed_point() {
        let g = RasterGrid::from_fn(6, 5, |_, _| 42.5);
        for k in [0, 1, 4] {
            let out = simplify_raster(&g, 2, 2, k).unwrap();
            assert!(out.values().iter().all(|v| (v - 42.5).abs() < 1e-9));
        }
    }

    #[test]
    fn assemble_means() {
        let header = RasterGrid::from_fn(1, 2, |_, _| 0.0);
        let layout = BlockLayout::new(1, 2, 1, 1);
        let recon = Matrix::from_rows(&[[10.0, 20.0]]);
        let out = assemble_raster(&recon, &layout, &header).unwrap();
        assert_eq!(out.values(), &[10.0, 20.0]);

        // two blocks over a 1x3 grid, both covering the middle cell
        let header = RasterGrid::from_fn(1, 3, |_, _| 0.0);
        let layout = BlockLayout::new(1, 3, 1, 2);
        let recon = Matrix::from_rows(&[[1.0, 10.0], [10.0, 20.0]]);
        let out = assemble_raster(&recon, &layout, &header).unwrap();
        assert_eq!(out.values(), &[1.0, 10.0, 20.0]);

        let recon = Matrix::from_rows(&[[1.0, 20.0], [10.0, 5.0]]);
        let out = assemble_raster(&recon, &layout, &header).unwrap();
        assert_eq!(out.values(), &[1.0, 15.0, 5.0]);

        assert!(matches!(
            assemble_raster(&Matrix::zeros(3, 2), &layout, &header),
            Err(RasterError::Layout(_))
        ));
    }

    #[test]
    fn nearest_fill() {
        let mut g = RasterGrid::from_fn(3, 3, |r, c| (r * 3 + c) as f64);
        g.set(0, 0, -9999.0);
        g.set(1, 1, -9999.0);
        let f = fill_nodata_nearest(&g).unwrap();
        assert_eq!(f.get(0, 0), 1.0);
        assert_eq!(f.get(1, 1), 1.0);
        assert!(f.same_header(&g));

        let empty = RasterGrid::from_fn(2, 2, |_, _| -9999.0);
        assert!(matches!(fill_nodata_nearest(&empty), Err(RasterError::AllNodata)));
    }
}
