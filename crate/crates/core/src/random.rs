//! Seeded random instances: Gaussian matrices, Haar-like unitaries, positive contractions.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matkernel::ComplexMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im)
}

/// Uniform unit vector in ℂⁿ (normalized complex Gaussian).
pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-300 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

pub fn random_gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| complex_gaussian(rng))
}

pub fn random_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    random_gaussian_matrix(n, rng).hermitian_part()
}

/// Unitary from Gram–Schmidt QR of a complex Gaussian matrix (positive diagonal R).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_gaussian_matrix(n, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|i| g[(i, j)]).collect();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, |i, j| cols[j][i])
}

/// U·diag(u)·U* with u uniform in [0, 1].
pub fn random_positive_contraction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let u = random_unitary(n, rng);
    let d: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=1.0)).collect();
    ComplexMatrix::from_real_diag(&d).conjugate_by(&u.adjoint()).hermitian_part()
}

/// Uniform point in the complex square [-r, r]².
pub fn complex_in_box<R: Rng + ?Sized>(r: f64, rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-r..r), rng.random_range(-r..r))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unitary_is_unitary() {
        let mut r = rng(3);
        for n in [1, 2, 5, 16] {
            let u = random_unitary(n, &mut r);
            let e = (&u.adjoint().matmul(&u) - &ComplexMatrix::identity(n)).norm();
            assert!(e < 1e-12, "n={n} err={e}");
        }
    }

    #[test]
    fn contraction_is_contraction() {
        let mut r = rng(4);
        let a = random_positive_contraction(6, &mut r);
        assert!(a.is_positive_contraction(1e-10));
    }

    #[test]
    fn deterministic_for_seed() {
        let a = random_hermitian(4, &mut rng(9));
        let b = random_hermitian(4, &mut rng(9));
        assert_eq!(a, b);
    }
}
