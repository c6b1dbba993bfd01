//! Hermitian eigensolver (cyclic complex Jacobi) and the spectral helpers built on it.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Operand, Result};
use crate::STRUCTURAL_TOL;

/// Off-diagonal Frobenius mass, relative to ‖H‖, at which Jacobi stops.
const CONVERGENCE: f64 = 1e-12;
/// Inputs further than this (relative) from Hermitian are rejected.
const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues below this are an error in `sqrt_psd`; between it and zero they are clipped.
const PSD_CLIP: f64 = 1e-8;

/// Spectral decomposition H = V·diag(λ)·V* with λ sorted descending.
#[derive(Debug, Clone)]
pub struct HermEigResult {
    pub eigenvalues: Vec<f64>,
    /// Column k pairs with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermEigResult {
    pub fn max(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn min(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        let n = self.eigenvectors.dim();
        (0..n).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// V·diag(f(λ))·V*
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.dim();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|k| v[(i, k)] * v[(j, k)].conj() * fl[k])
                .sum()
        })
    }
}

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `h_pq` with a diagonal unitary and
/// then applies a real plane rotation, so the working matrix stays Hermitian throughout.
/// The rotation budget is 30·n²; exceeding it means a kernel bug, not bad input.
pub fn herm_eig(h: &ComplexMatrix) -> Result<HermEigResult> {
    let n = h.dim();
    let scale = h.norm();
    let residual = h.hermitian_residual();
    if residual > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian { residual });
    }

    let mut a = h.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let threshold = CONVERGENCE * scale;
    let budget = (30 * n * n).max(30);
    let mut rotations = 0usize;
    let skip_below = if n > 1 { 1e-3 * threshold / n as f64 } else { 0.0 };

    loop {
        let off = off_diagonal_mass(&a);
        if off <= threshold {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= skip_below {
                    continue;
                }
                if rotations >= budget {
                    return Err(Error::NoConvergence {
                        rotations,
                        off_diagonal: off_diagonal_mass(&a),
                    });
                }
                rotate(&mut a, &mut v, p, q, apq, g);
                rotations += 1;
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].total_cmp(&diag[i]).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, k| v[(i, order[k])]);
    Ok(HermEigResult {
        eigenvalues,
        eigenvectors,
    })
}

fn off_diagonal_mass(a: &ComplexMatrix) -> f64 {
    let n = a.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, apq: Complex64, g: f64) {
    let n = a.dim();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = (apq / g).conj();

    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G = diag(1, phase)·[[c, s], [-s, c]]
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = phase * (-s);
    let g_qq = phase * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(app - t * g, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * g, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// Hermitian PSD square root; eigenvalue dust down to −1e-8 is clipped to zero.
pub fn sqrt_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = herm_eig(a)?;
    if a.dim() > 0 && eig.min() < -PSD_CLIP {
        return Err(Error::NotPsd {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig.map(|l| l.max(0.0).sqrt()))
}

/// σ(AB) for positive contractions, via the Hermitian similarity σ(√A·B·√A).
///
/// Sorted descending.
pub fn spectrum_of_product_pos(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Vec<f64>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    if !a.is_positive_contraction(STRUCTURAL_TOL) {
        return Err(Error::NotPositiveContraction(Operand::First));
    }
    if !b.is_positive_contraction(STRUCTURAL_TOL) {
        return Err(Error::NotPositiveContraction(Operand::Second));
    }
    let root = sqrt_psd(a)?;
    let m = root.matmul(b).matmul(&root).hermitian_part();
    Ok(herm_eig(&m)?.eigenvalues)
}

/// A unit vector attaining λ_max of a Hermitian matrix, and that eigenvalue.
pub fn top_eigenpair(h: &ComplexMatrix) -> Result<(f64, Vec<Complex64>)> {
    let eig = herm_eig(h)?;
    Ok((eig.max(), eig.vector(0)))
}
