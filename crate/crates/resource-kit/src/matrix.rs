//! Dense complex linear algebra substrate.
//!
//! Everything downstream (states, channels, monotones, the coding
//! simulations) runs on [`ComplexMatrix`]: a row-major dense matrix of
//! `Complex64` entries.  Tensor-product index convention is big-endian:
//! the first factor is the most significant index, so a composite index
//! is `i1 * dim2 + i2`.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Hermiticity tolerance used by the eigensolver entry check.
pub const TOL_HERM: f64 = 1e-9;
/// Per-dimension reconstruction tolerance for the eigensolver.
pub const TOL_RECON: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(rows, cols, data.len(), 1));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn diag(values: &[C64]) -> Self {
        let n = values.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn real_diag(values: &[f64]) -> Self {
        Self::diag(&values.iter().map(|&v| C64::new(v, 0.0)).collect::<Vec<_>>())
    }

    /// Column vector |i> of the given dimension.
    pub fn basis_vector(dim: usize, i: usize) -> Self {
        let mut m = Self::zeros(dim, 1);
        m[(i, 0)] = C64::new(1.0, 0.0);
        m
    }

    /// Projector |i><i| of the given dimension.
    pub fn basis_projector(dim: usize, i: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        m[(i, i)] = C64::new(1.0, 0.0);
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NonSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(C64, C64) -> C64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(Self { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_re(&self, s: f64) -> Self {
        self.scale(C64::new(s, 0.0))
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let row = k * other.cols;
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[row + j];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        let n = self.rows.min(self.cols);
        (0..n).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Max entry deviation from Hermiticity, |M - M†|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols.min(self.rows) {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                dev = dev.max(d);
            }
        }
        dev
    }

    /// Kronecker product, first factor most significant.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self[(i1, j1)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        out[(i1 * other.rows + i2, j1 * other.cols + j2)] = a * other[(i2, j2)];
                    }
                }
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Self {
        Self::from_fn(self.rows, 1, |i, _| self[(i, j)])
    }

    pub fn set_column(&mut self, j: usize, col: &Self) {
        assert_eq!(col.rows, self.rows);
        for i in 0..self.rows {
            self[(i, j)] = col[(i, 0)];
        }
    }

    /// <self|other> for column vectors.
    pub fn inner(&self, other: &Self) -> C64 {
        debug_assert_eq!(self.cols, 1);
        debug_assert_eq!(other.cols, 1);
        self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum()
    }

    /// |self><other| for column vectors.
    pub fn outer(&self, other: &Self) -> Self {
        Self::from_fn(self.rows, other.rows, |i, j| self[(i, 0)] * other[(j, 0)].conj())
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Ordered list of local dimensions annotating a tensor-product space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subsystems {
    dims: Vec<usize>,
}

impl Subsystems {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::BadSubsystems { dims, dim: 0 });
        }
        Ok(Self { dims })
    }

    pub fn single(dim: usize) -> Self {
        Self { dims: vec![dim] }
    }

    pub fn uniform(local_dim: usize, parties: usize) -> Self {
        Self { dims: vec![local_dim; parties] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn check_matches(&self, m: &ComplexMatrix) -> Result<()> {
        let dim = m.require_square()?;
        if self.total_dim() != dim {
            return Err(Error::BadSubsystems { dims: self.dims.clone(), dim });
        }
        Ok(())
    }

    /// Split a composite index into per-factor indices (big-endian).
    pub fn unravel(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for k in (0..self.dims.len()).rev() {
            out[k] = idx % self.dims[k];
            idx /= self.dims[k];
        }
        out
    }

    pub fn ravel(&self, parts: &[usize]) -> usize {
        parts.iter().zip(&self.dims).fold(0, |acc, (&p, &d)| acc * d + p)
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, matching `values` order.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    /// V diag(values) V†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_eigenvalues(|v| v)
    }

    /// V f(diag) V† for a scalar function of the eigenvalues.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let d = ComplexMatrix::real_diag(&mapped);
        let vd = self.vectors.matmul(&d).unwrap();
        vd.matmul(&self.vectors.adjoint()).unwrap()
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Unconditionally stable for the small dense matrices used here.
pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    hermitian_eig_tol(m, TOL_HERM)
}

pub fn hermitian_eig_tol(m: &ComplexMatrix, tol_herm: f64) -> Result<HermitianEig> {
    let n = m.require_square()?;
    let dev = m.hermiticity_deviation();
    if dev > tol_herm {
        return Err(Error::NotHermitian { max_dev: dev, tol: tol_herm });
    }
    // Purely real input (e.g. same-type Gram matrices) takes the cheaper
    // real-rotation path; roughly a 4x saving on large Grams.
    if m.data().iter().all(|z| z.im == 0.0) {
        return Ok(real_symmetric_eig(m));
    }
    // Work on the exactly Hermitian average (M + M†)/2.
    let mut a = ComplexMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    let scale = a.max_abs_entry().max(1e-300);
    let stop = scale * 1e-15 * (n as f64);
    let max_sweeps = 60;

    for _ in 0..max_sweeps {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let beta = apq.norm();
                if beta <= stop * 1e-2 {
                    continue;
                }
                let alpha = a[(p, p)].re;
                let gamma = a[(q, q)].re;
                let phase = apq / beta; // e^{i phi}
                // Strip the phase with D = diag(1, e^{-i phi}); the block of
                // D† A D is real symmetric with off-diagonal |beta|, then a
                // real rotation R = [[c, -s], [s, c]] annihilates it.
                let tau = (alpha - gamma) / (2.0 * beta);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // U = D * R, applied as A <- U† A U.
                let u00 = C64::new(c, 0.0);
                let u10 = phase.conj() * s;
                let u01 = C64::new(-s, 0.0);
                let u11 = phase.conj() * c;
                // A <- U† A U, touching rows/cols p and q only.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * u00 + aiq * u10;
                    a[(i, q)] = aip * u01 + aiq * u11;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = u00.conj() * apj + u10.conj() * aqj;
                    a[(q, j)] = u01.conj() * apj + u11.conj() * aqj;
                }
                // Clean the rotated pivot.
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * u00 + viq * u10;
                    v[(i, q)] = vip * u01 + viq * u11;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEig { values, vectors })
}

/// Cyclic Jacobi for real symmetric input, on flat f64 buffers.
fn real_symmetric_eig(m: &ComplexMatrix) -> HermitianEig {
    let n = m.rows();
    let mut a: Vec<f64> = m.data().iter().map(|z| z.re).collect();
    // symmetrize exactly
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = avg;
            a[j * n + i] = avg;
        }
    }
    let mut v: Vec<f64> = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = a.iter().fold(0.0_f64, |acc, x| acc.max(x.abs())).max(1e-300);
    let stop = scale * 1e-15 * (n as f64);
    for _ in 0..60 {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[p * n + q].abs());
            }
        }
        if off <= stop {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() <= stop * 1e-2 {
                    continue;
                }
                let tau = (a[p * n + p] - a[q * n + q]) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip + s * aiq;
                    a[i * n + q] = -s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = c * apj + s * aqj;
                    a[q * n + j] = -s * apj + c * aqj;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip + s * viq;
                    v[i * n + q] = -s * vip + c * viq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| C64::new(v[i * n + order[j]], 0.0));
    HermitianEig { values, vectors }
}

/// Trace norm Tr sqrt(M†M).
///
/// Hermitian inputs take the accurate |eigenvalue| path; general square
/// matrices fall back to singular values via M†M.
pub fn trace_norm(m: &ComplexMatrix) -> Result<f64> {
    m.require_square()?;
    if m.hermiticity_deviation() <= 1e-10 * m.max_abs_entry().max(1.0) {
        let eig = hermitian_eig_tol(m, f64::INFINITY)?;
        Ok(eig.values.iter().map(|v| v.abs()).sum())
    } else {
        let mtm = m.adjoint().matmul(m)?;
        let eig = hermitian_eig_tol(&mtm, 1e-8 * mtm.max_abs_entry().max(1.0))?;
        Ok(eig.values.iter().map(|&v| v.max(0.0).sqrt()).sum())
    }
}

pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Err(Error::ShapeMismatch(a.rows(), a.cols(), b.rows(), b.cols()));
    }
    trace_norm(&a.sub(b)?)
}

/// True iff ||A - B||_1 < eps.
pub fn trace_distance_ok(a: &ComplexMatrix, b: &ComplexMatrix, eps: f64) -> Result<bool> {
    Ok(trace_distance(a, b)? < eps)
}

pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Partial trace keeping the factors listed in `keep` (in their original order).
pub fn partial_trace(
    m: &ComplexMatrix,
    subs: &Subsystems,
    keep: &[usize],
) -> Result<ComplexMatrix> {
    subs.check_matches(m)?;
    let nfac = subs.len();
    if keep.iter().any(|&k| k >= nfac) {
        return Err(Error::BadSubsystems { dims: subs.dims().to_vec(), dim: m.rows() });
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let kept_subs = Subsystems::new(
        keep_sorted.iter().map(|&k| subs.dims()[k]).collect(),
    )?;
    let out_dim = kept_subs.total_dim();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    let dim = m.rows();
    for row in 0..dim {
        let ri = subs.unravel(row);
        for col in 0..dim {
            let ci = subs.unravel(col);
            // Discarded factors must match.
            if (0..nfac)
                .filter(|f| !keep_sorted.contains(f))
                .any(|f| ri[f] != ci[f])
            {
                continue;
            }
            let ro: Vec<usize> = keep_sorted.iter().map(|&k| ri[k]).collect();
            let co: Vec<usize> = keep_sorted.iter().map(|&k| ci[k]).collect();
            let e = m[(row, col)];
            out[(kept_subs.ravel(&ro), kept_subs.ravel(&co))] += e;
        }
    }
    Ok(out)
}

/// Transpose applied on the chosen tensor factor only.
pub fn partial_transpose(
    m: &ComplexMatrix,
    subs: &Subsystems,
    party: usize,
) -> Result<ComplexMatrix> {
    subs.check_matches(m)?;
    if party >= subs.len() {
        return Err(Error::BadSubsystems { dims: subs.dims().to_vec(), dim: m.rows() });
    }
    let dim = m.rows();
    let mut out = ComplexMatrix::zeros(dim, dim);
    for row in 0..dim {
        let mut ri = subs.unravel(row);
        for col in 0..dim {
            let mut ci = subs.unravel(col);
            std::mem::swap(&mut ri[party], &mut ci[party]);
            let r2 = subs.ravel(&ri);
            let c2 = subs.ravel(&ci);
            out[(r2, c2)] = m[(row, col)];
            std::mem::swap(&mut ri[party], &mut ci[party]);
        }
    }
    Ok(out)
}

/// Check unitarity; returns max |U†U - I| entry.
pub fn unitarity_deviation(u: &ComplexMatrix) -> Result<f64> {
    u.require_square()?;
    let utu = u.adjoint().matmul(u)?;
    let id = ComplexMatrix::identity(u.rows());
    Ok(utu.sub(&id)?.max_abs_entry())
}
