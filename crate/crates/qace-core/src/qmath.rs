//! Dense complex linear algebra for 2x2 and 4x4 operators: products, tensor
//! products, adjoints, traces, the partial trace over the first qubit, and the
//! closed-form 2x2 Hermitian eigendecomposition.
//!
//! Basis convention throughout the crate: |00>, |01>, |10>, |11> with Alice's
//! qubit as the left tensor factor.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense complex matrix in row-major order. All uses in this crate are 2x2 or
/// 4x4; the type itself only requires entries to be finite.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting NaN/Inf.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for (k, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex::new(T::one(), T::zero()));
        }
        m
    }

    pub fn from_diag(diag: &[Complex<T>]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, z) in diag.iter().enumerate() {
            m.set(i, i, *z);
        }
        m
    }

    /// Pauli sigma_x.
    pub fn pauli_x() -> Self {
        let o = Complex::new(T::one(), T::zero());
        let z = Complex::new(T::zero(), T::zero());
        Self::new(2, 2, vec![z, o, o, z]).expect("static entries")
    }

    /// Pauli sigma_y.
    pub fn pauli_y() -> Self {
        let i = Complex::new(T::zero(), T::one());
        let z = Complex::new(T::zero(), T::zero());
        Self::new(2, 2, vec![z, -i, i, z]).expect("static entries")
    }

    /// Pauli sigma_z.
    pub fn pauli_z() -> Self {
        let o = Complex::new(T::one(), T::zero());
        let z = Complex::new(T::zero(), T::zero());
        Self::new(2, 2, vec![o, z, z, -o]).expect("static entries")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, row: usize, col: usize) -> Complex<T> {
        self.entries[row * self.cols + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.entries[row * self.cols + col] = value;
    }

    /// Standard matrix product.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..self.cols {
                    acc = acc + self.at(i, k) * other.at(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Kronecker product of two 2x2 matrices, left factor index-major:
    /// out[(2i+k), (2j+l)] = a[i,j] * b[k,l].
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if self.rows != 2 || self.cols != 2 || other.rows != 2 || other.cols != 2 {
            return Err(Error::DimensionMismatch(format!(
                "tensor expects 2x2 operands, got {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(4, 4);
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        out.set(2 * i + k, 2 * j + l, self.at(i, j) * other.at(k, l));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sum of the diagonal entries.
    pub fn trace(&self) -> Result<Complex<T>> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.rows {
            acc = acc + self.at(i, i);
        }
        Ok(acc)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).conj());
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>,
    ) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot combine {}x{} with {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(*a, *b))
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn scale_re(&self, factor: T) -> Self {
        self.scale(Complex::new(factor, T::zero()))
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let d = self.at(i, j) - self.at(j, i).conj();
                if d.norm_sqr() > tol * tol {
                    return false;
                }
            }
        }
        true
    }

    /// Largest entrywise absolute difference. Panics on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut worst = T::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            worst = worst.max((*a - *b).norm());
        }
        worst
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        (self.rows, self.cols) == (other.rows, other.cols) && self.max_abs_diff(other) <= tol
    }
}

/// Traces out the first (Alice's) qubit of a 4x4 operator:
/// out[k,l] = sum_i m[(2i+k), (2i+l)].
pub fn partial_trace_a<T: Scalar>(m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if m.rows() != 4 || m.cols() != 4 {
        return Err(Error::DimensionMismatch(format!(
            "partial trace expects a 4x4 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let mut out = ComplexMatrix::zeros(2, 2);
    for k in 0..2 {
        for l in 0..2 {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 0..2 {
                acc = acc + m.at(2 * i + k, 2 * i + l);
            }
            out.set(k, l, acc);
        }
    }
    Ok(out)
}

/// Closed-form spectral decomposition of a 2x2 Hermitian matrix.
#[derive(Clone, Debug)]
pub struct Eigen2<T> {
    pub low: T,
    pub high: T,
    pub proj_low: ComplexMatrix<T>,
    pub proj_high: ComplexMatrix<T>,
}

/// Eigenvalues and spectral projectors of a 2x2 Hermitian matrix,
/// `low <= high`. For a (numerically) degenerate spectrum the projectors are
/// the halves of the identity.
pub fn hermitian_eigen2<T: Scalar>(m: &ComplexMatrix<T>) -> Result<Eigen2<T>> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "eigendecomposition expects a 2x2 matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_hermitian(T::atol()) {
        return Err(Error::InvalidState("matrix is not Hermitian".into()));
    }
    let a = m.at(0, 0).re;
    let c = m.at(1, 1).re;
    let b = m.at(0, 1);
    let half = T::lit(0.5);
    let mean = (a + c) * half;
    let r = (((a - c) * half).powi(2) + b.norm_sqr()).sqrt();
    let low = mean - r;
    let high = mean + r;
    let id = ComplexMatrix::identity(2);
    if r <= T::atol() {
        let h = id.scale_re(half);
        return Ok(Eigen2 {
            low,
            high,
            proj_low: h.clone(),
            proj_high: h,
        });
    }
    // P_high = (M - low I) / (high - low), P_low = I - P_high.
    let proj_high = m.sub(&id.scale_re(low))?.scale_re((high - low).recip());
    let proj_low = id.sub(&proj_high)?;
    Ok(Eigen2 {
        low,
        high,
        proj_low,
        proj_high,
    })
}
