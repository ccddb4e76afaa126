//! Dense complex linear algebra for the small Hermitian matrices that show up
//! as Gram matrices, density matrices and multiplier matrices.
//!
//! Everything here is deliberately tiny: matrices are stored row-major in a
//! flat `Vec`, the eigensolver is a cyclic complex Jacobi iteration and no
//! routine allocates more than a couple of `n × n` buffers.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;
use num_traits::{Float, Zero};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Eigenvalues in `[-CLAMP_TOL, 0)` are treated as zero; anything more negative
/// is a positivity violation.
pub const CLAMP_TOL: f64 = 1e-10;

/// Largest `|a_ij - conj(a_ji)|` accepted when building a [`HermitianMatrix`].
pub const HERMITIAN_TOL: f64 = 1e-9;

/// Off-diagonal Frobenius norm at which the Jacobi sweep stops (relative to
/// `max(1, ‖A‖_F)`).
const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("matrix is not Hermitian: |a[{row}][{col}] - conj(a[{col}][{row}])| = {deviation:e}")]
    NonHermitianInput { row: usize, col: usize, deviation: f64 },
    #[error("matrix is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("ragged rows: row {row} has length {found}, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
}

/// `⟨a|b⟩ = Σ conj(a_i) b_i`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(C64::zero(), |acc, (x, y)| acc + x.conj() * y)
}

pub fn norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
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
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self, NumericsError> {
        let cols = rows.first().map_or(0, Vec::len);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(NumericsError::Ragged {
                    row: i,
                    expected: cols,
                    found: r.len(),
                });
            }
        }
        Ok(Matrix::from_fn(rows.len(), cols, |i, j| rows[i][j]))
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self, NumericsError> {
        let rows = columns.first().map_or(0, Vec::len);
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(NumericsError::Ragged {
                    row: j,
                    expected: rows,
                    found: c.len(),
                });
            }
        }
        Ok(Matrix::from_fn(rows, columns.len(), |i, j| columns[j][i]))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Matrix::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<C64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(C64::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Square Hermitian matrix.
///
/// Construction checks symmetry to [`HERMITIAN_TOL`] and then stores the
/// exactly symmetrized matrix `(A + A†) / 2`, so the stored entries satisfy
/// `a_ji = conj(a_ij)` bit for bit and the diagonal is real.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix(Matrix);

impl HermitianMatrix {
    pub fn new(m: Matrix) -> Result<Self, NumericsError> {
        if !m.is_square() {
            return Err(NumericsError::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        let n = m.rows;
        for i in 0..n {
            for j in 0..n {
                let z = m[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(NumericsError::NonFinite { row: i, col: j });
                }
            }
        }
        for i in 0..n {
            for j in i..n {
                let deviation = (m[(i, j)] - m[(j, i)].conj()).norm();
                if deviation > HERMITIAN_TOL {
                    return Err(NumericsError::NonHermitianInput {
                        row: i,
                        col: j,
                        deviation,
                    });
                }
            }
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrizes without checking; callers guarantee the input is Hermitian
    /// up to rounding.
    pub(crate) fn symmetrized(mut m: Matrix) -> Self {
        let n = m.rows;
        for i in 0..n {
            m[(i, i)] = C64::new(m[(i, i)].re, 0.0);
            for j in i + 1..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        HermitianMatrix(m)
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        HermitianMatrix(Matrix::from_real_diagonal(diag))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(Matrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    pub fn scale(&self, s: f64) -> HermitianMatrix {
        HermitianMatrix(self.0.scale(s))
    }

    /// Entrywise complex conjugate (equivalently, the transpose).
    pub fn conj(&self) -> HermitianMatrix {
        HermitianMatrix(self.0.transpose())
    }

    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        self.0.max_abs_diff(&other.0)
    }

    pub fn trace(&self) -> f64 {
        trace_power(self, 1)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh(self)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().last().copied().unwrap_or(0.0)
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

/// Eigenvalues in descending order, optionally with the unitary whose columns
/// are the matching eigenvectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Option<Matrix>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(λ) V†`; `None` when eigenvectors were not requested.
    pub fn reconstruct(&self) -> Option<Matrix> {
        let v = self.eigenvectors.as_ref()?;
        let n = self.dim();
        Some(Matrix::from_fn(n, n, |i, j| {
            (0..n).fold(C64::zero(), |acc, k| {
                acc + v[(i, k)] * self.eigenvalues[k] * v[(j, k)].conj()
            })
        }))
    }

    /// Eigenvalues with entries in `[-CLAMP_TOL, 0)` replaced by zero.
    pub fn clamped(&self) -> Result<Vec<f64>, NumericsError> {
        clamp_nonnegative(&self.eigenvalues)
    }
}

pub(crate) fn clamp_nonnegative(values: &[f64]) -> Result<Vec<f64>, NumericsError> {
    values
        .iter()
        .map(|&l| {
            if l >= 0.0 {
                Ok(l)
            } else if l >= -CLAMP_TOL {
                Ok(0.0)
            } else {
                Err(NumericsError::NotPositive { min_eigenvalue: l })
            }
        })
        .collect()
}

/// Full eigendecomposition of a Hermitian matrix.
pub fn eigh(h: &HermitianMatrix) -> Spectrum {
    jacobi(h, true)
}

/// Eigenvalues only, descending.
pub fn eigvalsh(h: &HermitianMatrix) -> Vec<f64> {
    jacobi(h, false).eigenvalues
}

fn off_diagonal_norm(a: &[C64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

// Cyclic complex Jacobi. Each (p, q) rotation is J = diag(1, e^{-iφ}) R with R
// the real symmetric Jacobi rotation of the phase-stripped 2x2 block, so that
// J† A J zeroes a_pq.
fn jacobi(h: &HermitianMatrix, want_vectors: bool) -> Spectrum {
    let n = h.dim();
    let mut a: Vec<C64> = h.0.data.clone();
    let mut v = if want_vectors {
        Some(Matrix::identity(n))
    } else {
        None
    };
    let threshold = JACOBI_TOL * h.0.frobenius_norm().max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a, n) < threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let g = apq.norm();
                if g <= f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / g;
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let e = phase.conj();
                let j_pp = C64::new(c, 0.0);
                let j_pq = C64::new(s, 0.0);
                let j_qp = e * (-s);
                let j_qq = e * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * j_pp + akq * j_qp;
                    a[k * n + q] = akp * j_pq + akq * j_qq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = j_pp.conj() * apk + j_qp.conj() * aqk;
                    a[q * n + k] = j_pq.conj() * apk + j_qq.conj() * aqk;
                }
                a[p * n + q] = C64::zero();
                a[q * n + p] = C64::zero();
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * j_pp + vkq * j_qp;
                        v[(k, q)] = vkp * j_pq + vkq * j_qq;
                    }
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (li, lj) = (a[i * n + i].re, a[j * n + j].re);
        lj.partial_cmp(&li).unwrap_or(Ordering::Equal).then(i.cmp(&j))
    });
    let eigenvalues = order.iter().map(|&i| a[i * n + i].re).collect();
    let eigenvectors = v.map(|v| Matrix::from_fn(n, n, |i, k| v[(i, order[k])]));
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// Hermitian square root of a positive semidefinite matrix.
pub fn psd_sqrt(a: &HermitianMatrix) -> Result<HermitianMatrix, NumericsError> {
    let spec = eigh(a);
    let lambdas = spec.clamped()?;
    let v = spec.eigenvectors.expect("eigenvectors requested");
    let n = a.dim();
    let roots: Vec<f64> = lambdas.iter().map(|l| l.sqrt()).collect();
    let b = Matrix::from_fn(n, n, |i, j| {
        (0..n).fold(C64::zero(), |acc, k| acc + v[(i, k)] * roots[k] * v[(j, k)].conj())
    });
    Ok(HermitianMatrix::symmetrized(b))
}

/// Determinant of a 3×3 Hermitian matrix by cofactor expansion.
pub fn det3(h: &HermitianMatrix) -> Result<f64, NumericsError> {
    if h.dim() != 3 {
        return Err(NumericsError::DimensionMismatch {
            expected: 3,
            found: h.dim(),
        });
    }
    let m = |i, j| h[(i, j)];
    let det = m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1))
        - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0))
        + m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    let scale = h.0.frobenius_norm().max(1.0);
    debug_assert!(
        det.im.abs() <= 1e-10 * scale * scale * scale,
        "imaginary determinant residue {}",
        det.im
    );
    Ok(det.re)
}

/// `Tr Hᵏ` from entry sums; no eigendecomposition.
///
/// Powers 1 to 3 are the explicit sums `Σ h_ii`, `Σ h_ij h_ji` and
/// `Σ h_ij h_jk h_ki`; higher powers go through repeated products.
pub fn trace_power(h: &HermitianMatrix, k: u32) -> f64 {
    let n = h.dim();
    let total = match k {
        0 => return n as f64,
        1 => (0..n).fold(C64::zero(), |acc, i| acc + h[(i, i)]),
        2 => {
            let mut acc = C64::zero();
            for i in 0..n {
                for j in 0..n {
                    acc += h[(i, j)] * h[(j, i)];
                }
            }
            acc
        }
        3 => {
            let mut acc = C64::zero();
            for i in 0..n {
                for j in 0..n {
                    let hij = h[(i, j)];
                    for l in 0..n {
                        acc += hij * h[(j, l)] * h[(l, i)];
                    }
                }
            }
            acc
        }
        _ => {
            let mut p = h.0.clone();
            for _ in 1..k {
                p = p.matmul(&h.0);
            }
            (0..n).fold(C64::zero(), |acc, i| acc + p[(i, i)])
        }
    };
    let scale = h.0.frobenius_norm().max(1.0).powi(k as i32);
    debug_assert!(
        total.im.abs() <= 1e-10 * scale,
        "imaginary trace residue {}",
        total.im
    );
    total.re
}

/// Real square matrix, used for overlap tables.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        RealMatrix { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).take(self.n).collect()
    }

    /// `self - other`, entrywise.
    pub fn sub(&self, other: &RealMatrix) -> RealMatrix {
        assert_eq!(self.n, other.n);
        RealMatrix::from_fn(self.n, |i, j| self.get(i, j) - other.get(i, j))
    }

    /// Off-diagonal entries `(i, j)` with `i < j`, row by row.
    pub fn upper_pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }
}
