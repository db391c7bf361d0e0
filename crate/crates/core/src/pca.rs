//! Principal component analysis kernel.
//!
//! Observations are the columns of an `N × M` matrix: `N` values per
//! observation, `M` observations. The pipeline is
//!
//! ```text
//! raw ──center_columns──▶ S ──covariance──▶ C = S·Sᵀ/M
//!                         │                  │
//!                         │        eigendecompose_symmetric (Jacobi)
//!                         │                  ▼
//!                         └──compute_modes──▶ Φ = Sᵀ·A
//!
//! reconstruct(k) = A_k·Φ_kᵀ + column means
//! ```
//!
//! Every stage is deterministic. Parallel stages compute each output entry
//! with a fixed serial summation order, so results are bitwise identical for
//! any rayon worker count.

use rayon::prelude::*;
use thiserror::Error;

use crate::matrix::Matrix;

/// Convergence threshold on the off-diagonal Frobenius norm, relative to ‖C‖_F.
pub const JACOBI_TOLERANCE: f64 = 1e-12;
/// Maximum number of cyclic Jacobi sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PcaError {
    #[error("input matrix is empty ({rows}x{cols})")]
    Empty { rows: usize, cols: usize },
    #[error("non-finite entry {value} at row {row}, column {col}")]
    NonFinite { row: usize, col: usize, value: f64 },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("mode count {k} out of range 0..={n}")]
    ModeCount { k: usize, n: usize },
    #[error("Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NotConverged { sweeps: usize, off_norm: f64 },
}

/// Column-centred observation matrix together with the removed column means.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleMatrix {
    data: Matrix,
    means: Vec<f64>,
}

impl SampleMatrix {
    /// Partition length `N`.
    pub fn n(&self) -> usize {
        self.data.rows()
    }

    /// Observation count `M`.
    pub fn m(&self) -> usize {
        self.data.cols()
    }

    pub fn data(&self) -> &Matrix {
        &self.data
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }
}

/// Eigenpairs of a symmetric matrix, sorted by descending eigenvalue.
///
/// Column `k` of `eigenvectors` pairs with `eigenvalues[k]`. Each eigenvector
/// is signed so that its largest-magnitude entry is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    eigenvalues: Vec<f64>,
    eigenvectors: Matrix,
}

impl EigenSystem {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvectors(&self) -> &Matrix {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Mode coefficients: row `j` holds partition `j`'s projection on every eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    modes: Matrix,
}

impl ModeSet {
    pub fn modes(&self) -> &Matrix {
        &self.modes
    }
}

/// Removes the arithmetic mean from every column of `raw`.
pub fn center_columns(raw: &Matrix) -> Result<SampleMatrix, PcaError> {
    let (n, m) = (raw.rows(), raw.cols());
    if n == 0 || m == 0 {
        return Err(PcaError::Empty { rows: n, cols: m });
    }
    for i in 0..n {
        for (j, &v) in raw.row(i).iter().enumerate() {
            if !v.is_finite() {
                return Err(PcaError::NonFinite {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
    }

    let mut sums = vec![0.0; m];
    for i in 0..n {
        for (s, v) in sums.iter_mut().zip(raw.row(i)) {
            *s += v;
        }
    }
    let means: Vec<f64> = sums.into_iter().map(|s| s / n as f64).collect();

    let mut data = raw.clone();
    data.as_mut_slice()
        .par_chunks_mut(m)
        .for_each(|row| row.iter_mut().zip(&means).for_each(|(v, mu)| *v -= mu));

    Ok(SampleMatrix { data, means })
}

/// Covariance `C = S·Sᵀ / M`. The result is exactly symmetric.
pub fn covariance(s: &SampleMatrix) -> Matrix {
    let (n, m) = (s.n(), s.m());
    let scale = 1.0 / m as f64;
    let data = s.data();

    // Upper triangle, one row per task; each entry is a serial dot product.
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let ri = data.row(i);
            (i..n).map(|j| dot(ri, data.row(j)) * scale).collect()
        })
        .collect();

    let mut c = Matrix::zeros(n, n);
    for (i, row) in upper.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            let j = i + off;
            c[(i, j)] = v;
            c[(j, i)] = v;
        }
    }
    c
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// The input is symmetrized as `(C + Cᵀ)/2` first. Iteration stops once the
/// off-diagonal Frobenius norm is at most `JACOBI_TOLERANCE · ‖C‖_F`.
pub fn eigendecompose_symmetric(c: &Matrix) -> Result<EigenSystem, PcaError> {
    let n = c.rows();
    if n != c.cols() {
        return Err(PcaError::NotSquare {
            rows: c.rows(),
            cols: c.cols(),
        });
    }
    if n == 0 {
        return Err(PcaError::Empty { rows: 0, cols: 0 });
    }
    for i in 0..n {
        for j in 0..n {
            let v = c[(i, j)];
            if !v.is_finite() {
                return Err(PcaError::NonFinite {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
    }

    let mut a = Matrix::from_fn(n, n, |i, j| 0.5 * (c[(i, j)] + c[(j, i)]));
    let mut v = Matrix::identity(n);
    let threshold = JACOBI_TOLERANCE * a.frobenius_norm();

    let mut converged = false;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        let off_norm = off_diagonal_norm(&a);
        if off_norm > threshold {
            return Err(PcaError::NotConverged {
                sweeps: JACOBI_MAX_SWEEPS,
                off_norm,
            });
        }
    }

    let raw_values: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable: ties keep the Jacobi output order.
    order.sort_by(|&x, &y| raw_values[y].total_cmp(&raw_values[x]));

    let eigenvalues = order.iter().map(|&i| raw_values[i]).collect();
    let mut eigenvectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut pivot = 0;
        for i in 1..n {
            if v[(i, src)].abs() > v[(pivot, src)].abs() {
                pivot = i;
            }
        }
        let sign = if v[(pivot, src)] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..n {
            eigenvectors[(i, dst)] = sign * v[(i, src)];
        }
    }

    Ok(EigenSystem {
        eigenvalues,
        eigenvectors,
    })
}

/// One Jacobi rotation annihilating `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    if apq == 0.0 {
        return;
    }
    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta < 0.0 { -1.0 } else { 1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let cos = 1.0 / (t * t + 1.0).sqrt();
    let sin = t * cos;
    let n = a.rows();

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = cos * akp - sin * akq;
        a[(k, q)] = sin * akp + cos * akq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = cos * apk - sin * aqk;
        a[(q, k)] = sin * apk + cos * aqk;
    }
    a[(p, q)] = 0.0;
    a[(q, p)] = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = cos * vkp - sin * vkq;
        v[(k, q)] = sin * vkp + cos * vkq;
    }
}

fn off_diagonal_norm(a: &Matrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)] * a[(i, j)];
            }
        }
    }
    sum.sqrt()
}

/// Mode coefficients `Φ = Sᵀ·A` (an `M × N` matrix).
pub fn compute_modes(s: &SampleMatrix, e: &EigenSystem) -> Result<ModeSet, PcaError> {
    let n = s.n();
    if e.dim() != n || e.eigenvectors.rows() != n {
        return Err(PcaError::DimensionMismatch(format!(
            "sample length {} vs eigensystem of order {}",
            n,
            e.dim()
        )));
    }
    let st = s.data().transpose();
    let at = e.eigenvectors.transpose();
    let m = s.m();

    let mut modes = Matrix::zeros(m, n);
    modes
        .as_mut_slice()
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(j, out)| {
            let sj = st.row(j);
            for (l, o) in out.iter_mut().enumerate() {
                *o = dot(sj, at.row(l));
            }
        });
    Ok(ModeSet { modes })
}

/// Truncated synthesis `A_k·Φ_kᵀ` with column means added back.
///
/// `k = 0` returns the means broadcast down each column; `k = N` reproduces
/// the raw input up to round-off.
pub fn reconstruct(
    s: &SampleMatrix,
    e: &EigenSystem,
    phi: &ModeSet,
    k: usize,
) -> Result<Matrix, PcaError> {
    let (n, m) = (s.n(), s.m());
    if k > n {
        return Err(PcaError::ModeCount { k, n });
    }
    if e.dim() != n || phi.modes.rows() != m || phi.modes.cols() != n {
        return Err(PcaError::DimensionMismatch(format!(
            "samples {}x{}, eigensystem order {}, modes {}x{}",
            n,
            m,
            e.dim(),
            phi.modes.rows(),
            phi.modes.cols()
        )));
    }
    let a = &e.eigenvectors;
    let means = s.means();

    let mut out = Matrix::zeros(n, m);
    out.as_mut_slice()
        .par_chunks_mut(m)
        .enumerate()
        .for_each(|(i, row)| {
            let ai = &a.row(i)[..k];
            for (j, o) in row.iter_mut().enumerate() {
                *o = dot(ai, &phi.modes.row(j)[..k]) + means[j];
            }
        });
    Ok(out)
}

/// Share of total variance carried by the first `k` eigenpairs, clamped to `[0, 1]`.
///
/// Negative round-off eigenvalues count as zero. A zero trace yields 1.
pub fn variance_fraction(e: &EigenSystem, k: usize) -> f64 {
    let k = k.min(e.dim());
    let total: f64 = e.eigenvalues.iter().map(|l| l.max(0.0)).sum();
    if total <= 0.0 {
        return 1.0;
    }
    let head: f64 = e.eigenvalues[..k].iter().map(|l| l.max(0.0)).sum();
    (head / total).clamp(0.0, 1.0)
}

/// Full decomposition of one observation matrix, ready for truncated synthesis.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub samples: SampleMatrix,
    pub eigen: EigenSystem,
    pub modes: ModeSet,
}

impl Decomposition {
    pub fn new(raw: &Matrix) -> Result<Self, PcaError> {
        let samples = center_columns(raw)?;
        let eigen = eigendecompose_symmetric(&covariance(&samples))?;
        let modes = compute_modes(&samples, &eigen)?;
        Ok(Self {
            samples,
            eigen,
            modes,
        })
    }

    pub fn reconstruct(&self, k: usize) -> Result<Matrix, PcaError> {
        reconstruct(&self.samples, &self.eigen, &self.modes, k)
    }

    pub fn variance_fraction(&self, k: usize) -> f64 {
        variance_fraction(&self.eigen, k)
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
