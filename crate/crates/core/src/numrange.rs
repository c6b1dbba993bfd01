//! W(A) by support-function sweeps, and the elliptical range theorem for 2×2 matrices.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matkernel::{top_eigenpair, ComplexMatrix};
use crate::regions::{check_grid, grid_angle, ConvexRegion, EllipseDisk, Generator, GeneratorKind, SupportSample};

/// h(θ) = λ_max((e^{−iθ}A + e^{iθ}A*)/2), with x*Ax for a top unit eigenvector x.
pub fn support(a: &ComplexMatrix, theta: f64) -> Result<SupportSample> {
    let h = a.rotated_hermitian_part(theta);
    let (value, x) = top_eigenpair(&h)?;
    Ok(SupportSample {
        theta,
        value,
        boundary_point: a.quadratic_form(&x),
    })
}

/// W(A) sampled at θ_k = 2πk/m. Angles are evaluated in parallel.
pub fn range_polygon(a: &ComplexMatrix, m: usize) -> Result<ConvexRegion> {
    check_grid(m)?;
    let samples = (0..m)
        .into_par_iter()
        .map(|k| support(a, grid_angle(k, m)))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvexRegion {
        grid_size: m,
        samples,
        generators: vec![Generator {
            label: format!("W(A), n={}", a.dim()),
            kind: GeneratorKind::MatrixRange { dim: a.dim() },
        }],
    })
}

/// W(C) for a 2×2 matrix: foci at the eigenvalues, minor axis √(tr(C*C) − |λ₁|² − |λ₂|²).
pub fn ellipse_from_2x2(c: &ComplexMatrix) -> Result<EllipseDisk> {
    if c.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: c.dim(),
        });
    }
    let (a, b, cc, d) = (c[(0, 0)], c[(0, 1)], c[(1, 0)], c[(1, 1)]);
    let tr = a + d;
    let det = a * d - b * cc;
    let disc = (tr * tr - det * 4.0).sqrt();
    let l1 = (tr + disc) * 0.5;
    let l2 = (tr - disc) * 0.5;
    Ok(EllipseDisk::from_foci(l1, l2, schur_offdiagonal(c, l1)))
}

/// |t₁₂| of the Schur form Q*CQ, which equals √(tr(C*C) − |λ₁|² − |λ₂|²) without the
/// cancellation of the trace formula.
fn schur_offdiagonal(c: &ComplexMatrix, l1: Complex64) -> f64 {
    let (a, b, cc, d) = (c[(0, 0)], c[(0, 1)], c[(1, 0)], c[(1, 1)]);
    let from_row0 = [b, l1 - a];
    let from_row1 = [l1 - d, cc];
    let n0 = from_row0[0].norm_sqr() + from_row0[1].norm_sqr();
    let n1 = from_row1[0].norm_sqr() + from_row1[1].norm_sqr();
    let (v, nv) = if n0 >= n1 { (from_row0, n0) } else { (from_row1, n1) };
    if nv == 0.0 {
        // C = λI
        return 0.0;
    }
    let nv = nv.sqrt();
    let x1 = [v[0] / nv, v[1] / nv];
    let x2 = [-x1[1].conj(), x1[0].conj()];
    let cx2 = [a * x2[0] + b * x2[1], cc * x2[0] + d * x2[1]];
    (x1[0].conj() * cx2[0] + x1[1].conj() * cx2[1]).norm()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_gaussian_matrix, rng, unit_vector};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn nilpotent() -> ComplexMatrix {
        ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    #[test]
    fn support_examples() {
        for t in [0.0, 0.7, 2.0, 4.5] {
            assert!((support(&nilpotent(), t).unwrap().value - 0.5).abs() < 1e-14);
        }
        let a = ComplexMatrix::from_real_diag(&[1.0, 0.5]);
        let ab = a.matmul(&a);
        assert!((support(&ab, 0.0).unwrap().value - 1.0).abs() < 1e-14);
        assert!((support(&ab, PI).unwrap().value + 0.25).abs() < 1e-14);
        let seg = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        assert!(support(&seg, FRAC_PI_2).unwrap().value.abs() < 1e-14);
    }

    #[test]
    fn boundary_point_attains_support() {
        let mut r = rng(31);
        let a = random_gaussian_matrix(5, &mut r);
        for k in 0..32 {
            let s = support(&a, grid_angle(k, 32)).unwrap();
            let along = (Complex64::from_polar(1.0, -s.theta) * s.boundary_point).re;
            assert!((along - s.value).abs() < 1e-9);
        }
    }

    #[test]
    fn polygon_examples() {
        let seg = range_polygon(&ComplexMatrix::from_real_diag(&[0.0, 1.0]), 360).unwrap();
        for p in seg.boundary_points() {
            assert!(p.im.abs() < 1e-9 && p.re > -1e-9 && p.re < 1.0 + 1e-9);
        }
        let disk = range_polygon(&nilpotent(), 360).unwrap();
        for p in disk.boundary_points() {
            assert!((p.norm() - 0.5).abs() < 1e-9);
        }
        assert!(disk.is_consistent(1e-8));
        assert!(matches!(range_polygon(&nilpotent(), 7), Err(Error::GridTooCoarse(7))));
    }

    #[test]
    fn ellipse_examples() {
        let l = 0.64f64;
        let m = ComplexMatrix::from_real_rows(&[&[l, 0.0], &[(l - l * l).sqrt(), 0.0]]);
        let e = ellipse_from_2x2(&m).unwrap();
        assert!((e.minor_axis() - 0.48).abs() < 1e-12);
        let mut f = e.foci;
        f.sort_by(|a, b| a.re.total_cmp(&b.re));
        assert!(f[0].norm() < 1e-15 && (f[1] - c(0.64, 0.0)).norm() < 1e-15);

        let e = ellipse_from_2x2(&ComplexMatrix::from_real_diag(&[1.0, 3.0])).unwrap();
        assert_eq!(e.minor_axis(), 0.0);
        assert!((e.center - c(2.0, 0.0)).norm() < 1e-15 && (e.semi_major - 1.0).abs() < 1e-15);

        let e = ellipse_from_2x2(&nilpotent()).unwrap();
        assert!(e.center.norm() < 1e-15);
        assert!((e.semi_major - 0.5).abs() < 1e-15 && (e.semi_minor - 0.5).abs() < 1e-15);

        assert!(ellipse_from_2x2(&ComplexMatrix::identity(3)).is_err());
        let s = ellipse_from_2x2(&ComplexMatrix::identity(2).scale(c(2.0, 1.0))).unwrap();
        assert_eq!(s.semi_major, 0.0);
    }

    #[test]
    fn elliptical_range_theorem_both_directions() {
        let mut r = rng(32);
        for _ in 0..50 {
            let m = random_gaussian_matrix(2, &mut r);
            let e = ellipse_from_2x2(&m).unwrap();
            let poly = range_polygon(&m, 720).unwrap();
            for s in &poly.samples {
                assert!((s.value - e.support(s.theta)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn monte_carlo_points_respect_support() {
        let mut r = rng(33);
        let a = random_gaussian_matrix(4, &mut r);
        let poly = range_polygon(&a, 90).unwrap();
        for _ in 0..2000 {
            let x = unit_vector(4, &mut r);
            assert!(poly.contains_point(a.quadratic_form(&x), 1e-9));
        }
        // h(θ) ≥ Re(e^{−iθ}·tr(A)/n)
        let mean = a.trace() / 4.0;
        for s in &poly.samples {
            assert!(s.value + 1e-12 >= (Complex64::from_polar(1.0, -s.theta) * mean).re);
        }
    }
}
