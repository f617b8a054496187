//! Dense row-major storage and the handful of kernels the solvers share.

use crate::error::{Error, Result};

/// An `n x d` dense matrix of finite reals stored row-major. Rows are
/// observations.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DataMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                values.len()
            )));
        }
        if let Some(pos) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!(
                "non-finite entry at ({}, {})",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let d = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(n * d);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != d {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {d}",
                    r.len()
                )));
            }
            values.extend_from_slice(r);
        }
        Self::new(n, d, values)
    }

    pub(crate) fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub(crate) fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.values[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.values.chunks_exact(self.cols)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }

    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut values = Vec::with_capacity(indices.len() * self.cols);
        for &i in indices {
            values.extend_from_slice(self.row(i));
        }
        Self {
            rows: indices.len(),
            cols: self.cols,
            values,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// `self * other`, both row-major.
    pub fn matmul(&self, other: &DataMatrix) -> Result<DataMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = DataMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.values[i * other.cols..(i + 1) * other.cols];
            for (l, &a) in self.row(i).iter().enumerate() {
                if a == 0.0 {
                    continue;
                }
                axpy(a, other.row(l), dst);
            }
        }
        Ok(out)
    }
}

/// Squared Euclidean distance between two equal-length vectors.
pub fn sq_euclidean(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::Dimension(format!(
            "vectors of length {} and {}",
            x.len(),
            y.len()
        )));
    }
    Ok(sq_dist(x, y))
}

#[inline]
pub(crate) fn sq_dist(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let t = a - b;
            t * t
        })
        .sum()
}

#[inline]
pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[inline]
pub(crate) fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// In-place Cholesky factorisation of a symmetric `n x n` row-major matrix.
/// Only the lower triangle is read and written. Returns `false` on a
/// non-positive pivot.
pub(crate) fn cholesky_in_place(a: &mut [f64], n: usize) -> bool {
    for j in 0..n {
        let mut diag = a[j * n + j];
        for l in 0..j {
            diag -= a[j * n + l] * a[j * n + l];
        }
        if !diag.is_finite() || diag <= 0.0 {
            return false;
        }
        let diag = diag.sqrt();
        a[j * n + j] = diag;
        for i in j + 1..n {
            let mut s = a[i * n + j];
            for l in 0..j {
                s -= a[i * n + l] * a[j * n + l];
            }
            a[i * n + j] = s / diag;
        }
    }
    true
}

/// Solve `L L^T x = b` in place given the factor from [`cholesky_in_place`].
pub(crate) fn cholesky_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Least squares over the columns `set` of a column-major `m`-row matrix by
/// Householder QR. The solution is written to `out`, ordered like `set`.
/// Returns false when a column lies within `rank_tol * ||column||` of the
/// span of the columns before it.
pub(crate) fn householder_lstsq(
    cols: &[f64],
    m: usize,
    y: &[f64],
    set: &[usize],
    rank_tol: f64,
    work: &mut Vec<f64>,
    out: &mut Vec<f64>,
) -> bool {
    let s = set.len();
    if s > m {
        return false;
    }
    work.clear();
    for &j in set {
        work.extend_from_slice(&cols[j * m..(j + 1) * m]);
    }
    let mut b = y.to_vec();
    let mut diag = vec![0.0; s];
    for j in 0..s {
        let (done, rest) = work.split_at_mut((j + 1) * m);
        let v = &mut done[j * m..];
        let full = dot(v, v).sqrt();
        let norm = dot(&v[j..], &v[j..]).sqrt();
        if norm.is_nan() || norm <= rank_tol * full {
            return false;
        }
        let alpha = if v[j] > 0.0 { -norm } else { norm };
        v[j] -= alpha;
        let beta = dot(&v[j..], &v[j..]);
        diag[j] = alpha;
        if beta == 0.0 {
            continue;
        }
        for c in rest.chunks_exact_mut(m) {
            let f = 2.0 * dot(&v[j..], &c[j..]) / beta;
            axpy(-f, &v[j..], &mut c[j..]);
        }
        let f = 2.0 * dot(&v[j..], &b[j..]) / beta;
        axpy(-f, &v[j..], &mut b[j..]);
    }
    out.clear();
    out.resize(s, 0.0);
    for i in (0..s).rev() {
        let mut t = b[i];
        for k in i + 1..s {
            t -= work[k * m + i] * out[k];
        }
        out[i] = t / diag[i];
    }
    true
}

/// Factor a symmetric positive semi-definite system, adding diagonal jitter
/// (starting at `jitter_scale * trace`) until the factorisation succeeds.
/// `gram` is overwritten by the factor. Returns the jitter that was applied.
pub(crate) fn factor_with_jitter(gram: &mut [f64], n: usize, jitter_scale: f64) -> Result<f64> {
    let trace: f64 = (0..n).map(|i| gram[i * n + i]).sum();
    let original = gram.to_vec();
    if cholesky_in_place(gram, n) {
        return Ok(0.0);
    }
    let mut jitter = jitter_scale * trace.max(f64::MIN_POSITIVE);
    for _ in 0..12 {
        gram.copy_from_slice(&original);
        for i in 0..n {
            gram[i * n + i] += jitter;
        }
        if cholesky_in_place(gram, n) {
            return Ok(jitter);
        }
        jitter *= 100.0;
    }
    Err(Error::Degenerate(format!(
        "{n}x{n} normal equations could not be factored"
    )))
}
