use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![ONE; n])
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be a perfect square.
    pub fn from_row_major(n: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(Self { n, data: entries })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "row {i} has wrong length");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = Complex64::new(x, 0.0);
            }
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// `self + s·I`
    pub fn shift(&self, s: Complex64) -> Self {
        let mut m = self.clone();
        for i in 0..self.n {
            m[(i, i)] += s;
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, i)]).collect()
    }

    /// Frobenius norm; the default matrix norm for every tolerance in the crate.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        assert_eq!(self.n, rhs.n, "matmul dimension mismatch");
        let n = self.n;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let row = &self.data[i * n..(i + 1) * n];
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &a) in row.iter().enumerate() {
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Self { n, data: out }
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// x*·M·x
    pub fn quadratic_form(&self, x: &[Complex64]) -> Complex64 {
        let mx = self.mul_vec(x);
        x.iter().zip(&mx).map(|(a, b)| a.conj() * b).sum()
    }

    /// (M + M*)/2
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Hermitian part of e^{-iθ}·M, whose top eigenvalue is the support of W(M) at θ.
    pub fn rotated_hermitian_part(&self, theta: f64) -> Self {
        let w = Complex64::from_polar(1.0, -theta);
        Self::from_fn(self.n, |i, j| {
            (w * self[(i, j)] + (w * self[(j, i)]).conj()) * 0.5
        })
    }

    /// U*·M·U
    pub fn conjugate_by(&self, u: &Self) -> Self {
        u.adjoint().matmul(self).matmul(u)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.n + other.n;
        let mut m = Self::zeros(n);
        m.set_block(0, 0, self);
        m.set_block(self.n, self.n, other);
        m
    }

    /// Direct sum of a list of blocks (empty list gives the 0×0 matrix).
    pub fn block_diag<'a>(blocks: impl IntoIterator<Item = &'a ComplexMatrix>) -> Self {
        let blocks: Vec<&ComplexMatrix> = blocks.into_iter().collect();
        let n = blocks.iter().map(|b| b.n).sum();
        let mut m = Self::zeros(n);
        let mut at = 0;
        for b in blocks {
            m.set_block(at, at, b);
            at += b.n;
        }
        m
    }

    /// Assembles a k×k grid of equally sized square blocks; `None` marks a zero block.
    pub fn from_blocks(grid: &[Vec<Option<&ComplexMatrix>>]) -> Self {
        let k = grid.len();
        let bn = grid
            .iter()
            .flatten()
            .flatten()
            .map(|b| b.n)
            .next()
            .unwrap_or(0);
        let mut m = Self::zeros(k * bn);
        for (bi, row) in grid.iter().enumerate() {
            assert_eq!(row.len(), k, "block grid must be square");
            for (bj, blk) in row.iter().enumerate() {
                if let Some(b) = blk {
                    assert_eq!(b.n, bn, "blocks must share one size");
                    m.set_block(bi * bn, bj * bn, b);
                }
            }
        }
        m
    }

    fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.n {
            for j in 0..b.n {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// The `size`×`size` principal block starting at `start`.
    pub fn principal_block(&self, start: usize, size: usize) -> Self {
        assert!(start + size <= self.n);
        Self::from_fn(size, |i, j| self[(start + i, start + j)])
    }

    pub fn hermitian_residual(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_residual() <= tol
    }

    /// ‖M² − M‖ and ‖M − M*‖ both within `tol`.
    pub fn is_projection(&self, tol: f64) -> bool {
        self.is_hermitian(tol) && (&self.matmul(self) - self).norm() <= tol
    }

    /// Hermitian with every eigenvalue in [−tol, 1+tol].
    pub fn is_positive_contraction(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        match super::herm_eig(&self.hermitian_part()) {
            Ok(eig) => eig
                .eigenvalues
                .iter()
                .all(|&l| l >= -tol && l <= 1.0 + tol),
            Err(_) => false,
        }
    }

    /// ‖M − (tr M/n)·I‖ within `tol`.
    pub fn is_scalar(&self, tol: f64) -> bool {
        if self.n == 0 {
            return true;
        }
        let mean = self.trace() / self.n as f64;
        self.shift(-mean).norm() <= tol
    }

    /// ‖MM* − M*M‖ within `tol`.
    pub fn is_normal(&self, tol: f64) -> bool {
        let a = self.adjoint();
        (&self.matmul(&a) - &a.matmul(self)).norm() <= tol
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n);
        ComplexMatrix {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}
