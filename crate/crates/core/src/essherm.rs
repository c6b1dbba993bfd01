//! Essentially Hermitian matrices (normal with collinear eigenvalues), products of
//! normal matrices with two-point spectra, and the dilation containment for products of
//! essentially Hermitian matrices.

use num_complex::Complex64;

use crate::contractions::{column_dilation, row_dilation};
use crate::error::{EssHermRejection, Error, Operand, Result};
use crate::matkernel::{format_complex, herm_eig, ComplexMatrix};
use crate::numrange::range_polygon;
use crate::projpairs::{decompose_pair, ProjPairCanonicalForm};
use crate::regions::{
    ellipse_general, hull_region_labeled, region_contains, region_equal, ConvexRegion, Primitive,
};
use crate::report::VerifyReport;
use crate::{EQUALITY_TOL, STRUCTURAL_TOL};

/// A = a2·I + (a1 − a2)·A1 with A1 a positive contraction and e^{it}(A − (tr A/n)I)
/// Hermitian.
#[derive(Debug, Clone)]
pub struct EssHermForm {
    pub a1: Complex64,
    pub a2: Complex64,
    pub a1_matrix: ComplexMatrix,
    /// In [0, 2π). The segment points along e^{−it}.
    pub t: f64,
}

impl EssHermForm {
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.a1_matrix.scale(self.a1 - self.a2).shift(self.a2)
    }

    /// σ(A1) has two clusters near 0 and 1, i.e. A1 is a projection up to `tol`.
    pub fn is_two_point(&self, tol: f64) -> Result<bool> {
        Ok(two_clusters(&herm_eig(&self.a1_matrix)?.eigenvalues, tol).is_some())
    }
}

/// Detects an essentially Hermitian matrix and returns its segment form.
///
/// The line direction comes from tr N² with N = A − (tr A/n)I: for eigenvalues on a line
/// through the centroid it is e^{2iφ}·Σ|ν|², and −arg(tr N²)/2 is the total least
/// squares line in general. The residual is the spectral radius of the anti-Hermitian part
/// of e^{it}N, i.e. the largest eigenvalue distance from the line.
pub fn detect_essentially_hermitian(a: &ComplexMatrix, tol: f64) -> Result<EssHermForm> {
    let n = a.dim();
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    let scale = a.norm();
    if a.is_scalar(tol * scale.max(1.0)) {
        return Err(Error::NotEssHerm(EssHermRejection::Scalar));
    }
    let commutator = &a.matmul(&a.adjoint()) - &a.adjoint().matmul(a);
    if commutator.norm() > tol * scale * scale {
        return Err(Error::NotEssHerm(EssHermRejection::NonNormal));
    }

    let mean = a.trace() / n as f64;
    let centered = a.shift(-mean);
    let phi = centered.matmul(&centered).trace().arg() / 2.0;
    let along = Complex64::from_polar(1.0, phi);
    let k = centered.scale(along.conj());
    let real_part = herm_eig(&k.hermitian_part())?;
    let imag_part = herm_eig(&k.scale(Complex64::new(0.0, -1.0)).hermitian_part())?;
    let spread = real_part.max() - real_part.min();
    let residual = imag_part.max().abs().max(imag_part.min().abs());
    if spread <= 0.0 || residual > tol * spread {
        return Err(Error::NotEssHerm(EssHermRejection::NotCollinear));
    }

    let a1 = mean + along * real_part.max();
    let a2 = mean + along * real_part.min();
    let a1_matrix = a.shift(-a2).scale((a1 - a2).inv()).hermitian_part();
    Ok(EssHermForm {
        a1,
        a2,
        a1_matrix,
        t: (-phi).rem_euclid(std::f64::consts::TAU),
    })
}

/// Optimal 1-D 2-means split of descending values; `Some(split)` when both clusters are
/// tighter than `tol` and separated by at least 10·tol.
fn two_clusters(sorted_desc: &[f64], tol: f64) -> Option<usize> {
    let n = sorted_desc.len();
    let sse = |xs: &[f64]| {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>()
    };
    let split = (1..n).min_by(|&i, &j| {
        let ci = sse(&sorted_desc[..i]) + sse(&sorted_desc[i..]);
        let cj = sse(&sorted_desc[..j]) + sse(&sorted_desc[j..]);
        ci.total_cmp(&cj)
    })?;
    let (hi, lo) = sorted_desc.split_at(split);
    let width = |xs: &[f64]| xs[0] - xs[xs.len() - 1];
    let gap = hi[hi.len() - 1] - lo[0];
    (width(hi) <= tol && width(lo) <= tol && gap >= 10.0 * tol).then_some(split)
}

/// Endpoints (a1, a2, b1, b2) of a product of two-point normals.
pub type Endpoints = [Complex64; 4];

fn two_point_form(m: &ComplexMatrix, which: Operand) -> Result<EssHermForm> {
    let form = match detect_essentially_hermitian(m, STRUCTURAL_TOL) {
        Err(Error::NotEssHerm(EssHermRejection::Scalar)) => return Err(Error::ScalarInput(which)),
        Err(Error::NotEssHerm(_)) => return Err(Error::NotTwoPoint(which)),
        other => other?,
    };
    if form.is_two_point(STRUCTURAL_TOL)? {
        Ok(form)
    } else {
        Err(Error::NotTwoPoint(which))
    }
}

/// W(AB) for normal A, B with two-point spectra, endpoints detected from the matrices.
pub fn two_point_product_region(a: &ComplexMatrix, b: &ComplexMatrix, m: usize) -> Result<ConvexRegion> {
    let fa = two_point_form(a, Operand::First)?;
    let fb = two_point_form(b, Operand::Second)?;
    region_from_projections(&fa.a1_matrix, &fb.a1_matrix, [fa.a1, fa.a2, fb.a1, fb.a2], m)
}

/// As [`two_point_product_region`] with the endpoints supplied: P = (A − a2)/(a1 − a2) and
/// Q = (B − b2)/(b1 − b2) must be projections.
pub fn two_point_product_region_with_endpoints(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    ends: Endpoints,
    m: usize,
) -> Result<ConvexRegion> {
    let [a1, a2, b1, b2] = ends;
    if a1 == a2 || b1 == b2 {
        return Err(Error::DegenerateParameters("segment endpoints coincide"));
    }
    let p = a.shift(-a2).scale((a1 - a2).inv());
    let q = b.shift(-b2).scale((b1 - b2).inv());
    if !p.is_projection(STRUCTURAL_TOL) {
        return Err(Error::NotTwoPoint(Operand::First));
    }
    if !q.is_projection(STRUCTURAL_TOL) {
        return Err(Error::NotTwoPoint(Operand::Second));
    }
    region_from_projections(&p.hermitian_part(), &q.hermitian_part(), ends, m)
}

fn region_from_projections(p: &ComplexMatrix, q: &ComplexMatrix, ends: Endpoints, m: usize) -> Result<ConvexRegion> {
    let form = decompose_pair(p, q).map_err(|e| match e {
        Error::ScalarProjection(which) => Error::ScalarInput(which),
        other => other,
    })?;
    region_for_two_point_form(&form, ends, m)
}

/// conv of E(a1,a2,b1,b2;γ_j) over the generic blocks and the products a_i b_j the scalar
/// blocks contribute.
pub fn region_for_two_point_form(form: &ProjPairCanonicalForm, ends: Endpoints, m: usize) -> Result<ConvexRegion> {
    let [a1, a2, b1, b2] = ends;
    let mut primitives = Vec::new();
    for &c in &form.angles {
        let disk = ellipse_general(a1, a2, b1, b2, c)?;
        let gamma = disk.foci[0] + disk.foci[1];
        primitives.push((
            format!("E(a1,a2,b1,b2;{})", short_complex(gamma)),
            Primitive::Ellipse(disk),
        ));
    }
    for (count, z, label) in [
        (form.p, a1 * b1, "a1b1"),
        (form.q, a1 * b2, "a1b2"),
        (form.r, a2 * b1, "a2b1"),
        (form.s, a2 * b2, "a2b2"),
    ] {
        if count > 0 {
            primitives.push((format!("{label}={}", short_complex(z)), Primitive::Point(z)));
        }
    }
    hull_region_labeled(&primitives, m)
}

fn short_complex(z: Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

/// Everything the dilation containment produces.
#[derive(Debug, Clone)]
pub struct EssHermDilation {
    pub region: ConvexRegion,
    /// W(AB) ⊆ W(ÃB̃) on the grid.
    pub containment: VerifyReport,
    /// W(AB) = W(ÃB̃) on the grid; the expected verdict is `true` when A1 and B1 are
    /// projections, where equality is asserted in the literature.
    pub equality: VerifyReport,
    pub a_form: EssHermForm,
    pub b_form: EssHermForm,
    pub a_tilde: ComplexMatrix,
    pub b_tilde: ComplexMatrix,
}

/// Ã = a2 + (a1 − a2)P and B̃ = b2 + (b1 − b2)Q on ℂ³ⁿ, and W(ÃB̃) from their two-point
/// structure, compared with the sweep of W(AB).
pub fn essherm_dilation_region(a: &ComplexMatrix, b: &ComplexMatrix, m: usize) -> Result<EssHermDilation> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let a_form = detect_essentially_hermitian(a, STRUCTURAL_TOL)?;
    let b_form = detect_essentially_hermitian(b, STRUCTURAL_TOL)?;
    dilation_from_forms(a, b, a_form, b_form, m)
}

/// As [`essherm_dilation_region`] with user-supplied segment endpoints; A1 = (A − a2)/(a1 − a2)
/// and B1 = (B − b2)/(b1 − b2) must be positive contractions.
pub fn essherm_dilation_region_with_endpoints(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    ends: Endpoints,
    m: usize,
) -> Result<EssHermDilation> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let [a1, a2, b1, b2] = ends;
    let a_form = form_from_endpoints(a, a1, a2)?;
    let b_form = form_from_endpoints(b, b1, b2)?;
    dilation_from_forms(a, b, a_form, b_form, m)
}

fn form_from_endpoints(m: &ComplexMatrix, e1: Complex64, e2: Complex64) -> Result<EssHermForm> {
    if e1 == e2 {
        return Err(Error::DegenerateParameters("segment endpoints coincide"));
    }
    let raw = m.shift(-e2).scale((e1 - e2).inv());
    if !raw.is_positive_contraction(STRUCTURAL_TOL) {
        return Err(Error::NotEssHerm(EssHermRejection::NotCollinear));
    }
    Ok(EssHermForm {
        a1: e1,
        a2: e2,
        a1_matrix: raw.hermitian_part(),
        t: (-(e1 - e2).arg()).rem_euclid(std::f64::consts::TAU),
    })
}

fn dilation_from_forms(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    a_form: EssHermForm,
    b_form: EssHermForm,
    m: usize,
) -> Result<EssHermDilation> {
    let p = row_dilation(&a_form.a1_matrix)?;
    let q = column_dilation(&b_form.a1_matrix)?;
    let ends = [a_form.a1, a_form.a2, b_form.a1, b_form.a2];
    let region = region_from_projections(&p, &q, ends, m)?;

    let sweep = range_polygon(&a.matmul(b), m)?;
    let containment = region_contains(&region, &sweep, EQUALITY_TOL)?.renamed("thm34_containment");
    let mut equality = region_equal(&sweep, &region, EQUALITY_TOL)?.renamed("thm34_equality");
    if a_form.is_two_point(STRUCTURAL_TOL)? && b_form.is_two_point(STRUCTURAL_TOL)? {
        equality = equality.expecting(true);
    }
    let a_tilde = p.scale(a_form.a1 - a_form.a2).shift(a_form.a2);
    let b_tilde = q.scale(b_form.a1 - b_form.a2).shift(b_form.a2);
    Ok(EssHermDilation {
        region,
        containment,
        equality,
        a_form,
        b_form,
        a_tilde,
        b_tilde,
    })
}

/// λ̂ with λ·λ̂ = a1a2b1b2, and λ̂ = 0 when that product vanishes.
pub fn lambda_pairing(lambda: Complex64, a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> Result<Complex64> {
    let product = a1 * a2 * b1 * b2;
    if product == Complex64::new(0.0, 0.0) {
        return Ok(product);
    }
    if lambda == Complex64::new(0.0, 0.0) {
        return Err(Error::DivisionByZero);
    }
    Ok(product / lambda)
}

/// The cosine c ∈ (0, 1) whose block has trace γ, i.e. the solution of
/// γ = (a1b1 + a2b2)c² + (a1b2 + a2b1)(1 − c²).
pub fn cosine_for_gamma(gamma: Complex64, ends: Endpoints) -> Result<f64> {
    let [a1, a2, b1, b2] = ends;
    let far = a1 * b1 + a2 * b2;
    let near = a1 * b2 + a2 * b1;
    if far == near {
        return Err(Error::DegenerateParameters("segment endpoints coincide"));
    }
    let c2 = (gamma - near) / (far - near);
    if c2.im.abs() > 1e-9 * c2.norm().max(1.0) {
        return Err(Error::Consistency(format!("γ = {} is off the segment", format_complex(gamma))));
    }
    if !(c2.re > 0.0 && c2.re < 1.0) {
        return Err(Error::OutOfRange(c2.re));
    }
    Ok(c2.re.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projpairs::{build_pair, region_for_form};
    use crate::random::{complex_in_box, random_hermitian, random_positive_contraction, random_unitary, rng};
    use proptest::prelude::*;
    use rand::Rng;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_point(form: &ProjPairCanonicalForm, ends: Endpoints, u: Option<&ComplexMatrix>) -> (ComplexMatrix, ComplexMatrix) {
        let pair = build_pair(form, u).unwrap();
        let [a1, a2, b1, b2] = ends;
        (pair.p.scale(a1 - a2).shift(a2), pair.q.scale(b1 - b2).shift(b2))
    }

    fn distance_to_segment(z: Complex64, s0: Complex64, s1: Complex64) -> f64 {
        let d = s1 - s0;
        let t = (((z - s0) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
        (z - (s0 + d * t)).norm()
    }

    #[test]
    fn detection_examples() {
        let h = ComplexMatrix::from_real_diag(&[0.0, 0.5, 1.0]);
        let f = detect_essentially_hermitian(&h, 1e-8).unwrap();
        assert!((f.a1 - c(1.0, 0.0)).norm() < 1e-14 && f.a2.norm() < 1e-14);
        assert!((&f.a1_matrix - &h).norm() < 1e-14);
        assert_eq!(f.t, 0.0);

        let d = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0)]);
        let f = detect_essentially_hermitian(&d, 1e-8).unwrap();
        assert!((f.a1 - c(1.0, 0.0)).norm() < 1e-14 && (f.a2 - c(0.0, 1.0)).norm() < 1e-14);
        assert!((f.t - FRAC_PI_4).abs() < 1e-14);
        // e^{iπ/4}(A − tr A/2) is Hermitian
        let rotated = d.shift(-d.trace() / 2.0).scale(Complex64::from_polar(1.0, FRAC_PI_4));
        assert!(rotated.hermitian_residual() < 1e-14);
        assert!(f.is_two_point(1e-8).unwrap());

        let nil = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        assert!(matches!(
            detect_essentially_hermitian(&nil, 1e-8),
            Err(Error::NotEssHerm(EssHermRejection::NonNormal))
        ));
        let tri = ComplexMatrix::from_diag(&[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0)]);
        assert!(matches!(
            detect_essentially_hermitian(&tri, 1e-8),
            Err(Error::NotEssHerm(EssHermRejection::NotCollinear))
        ));
        let scalar = ComplexMatrix::identity(3).scale(c(2.0, -1.0));
        assert!(matches!(
            detect_essentially_hermitian(&scalar, 1e-8),
            Err(Error::NotEssHerm(EssHermRejection::Scalar))
        ));
    }

    #[test]
    fn vertical_segment_prefers_larger_imaginary_part() {
        let d = ComplexMatrix::from_diag(&[c(2.0, -1.0), c(2.0, 3.0), c(2.0, 0.5)]);
        let f = detect_essentially_hermitian(&d, 1e-8).unwrap();
        assert!((f.a1 - c(2.0, 3.0)).norm() < 1e-13 && (f.a2 - c(2.0, -1.0)).norm() < 1e-13);
    }

    #[test]
    fn detection_recovers_rotated_shifted_hermitian() {
        let mut r = rng(61);
        for _ in 0..30 {
            let n = r.random_range(2..7);
            let h = random_hermitian(n, &mut r);
            let spectrum = herm_eig(&h).unwrap();
            let dir = Complex64::from_polar(1.0, r.random_range(0.0..2.0 * PI));
            let shift = complex_in_box(2.0, &mut r);
            let a = h.scale(dir).shift(shift);
            let f = detect_essentially_hermitian(&a, 1e-8).unwrap();
            let top = shift + dir * spectrum.max();
            let bottom = shift + dir * spectrum.min();
            let same = (f.a1 - top).norm() + (f.a2 - bottom).norm();
            let swapped = (f.a1 - bottom).norm() + (f.a2 - top).norm();
            assert!(same.min(swapped) < 1e-9);
            assert!((&f.reconstruct() - &a).norm() < 1e-8);
            let k = a.shift(-a.trace() / n as f64).scale(Complex64::from_polar(1.0, f.t));
            assert!(k.hermitian_residual() < 1e-8 * a.norm());
            assert!(f.a1_matrix.is_positive_contraction(1e-8));
        }
    }

    #[test]
    fn clustering() {
        assert_eq!(two_clusters(&[1.0, 1.0, 0.0], 1e-8), Some(2));
        assert_eq!(two_clusters(&[1.0, 0.5, 0.0], 1e-8), None);
        assert_eq!(two_clusters(&[1.0, 1e-10, 0.0], 1e-8), Some(1));
        assert_eq!(two_clusters(&[1.0], 1e-8), None);
    }

    #[test]
    fn reduces_to_projection_products() {
        let form = ProjPairCanonicalForm::new(1, 1, 0, 2, vec![0.3, 0.8]).unwrap();
        let ends = [c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let general = region_for_two_point_form(&form, ends, 720).unwrap();
        let special = region_for_form(&form, 720).unwrap();
        assert!(region_equal(&general, &special, 1e-12).unwrap().pass);
    }

    #[test]
    fn reflections_give_the_imaginary_segment() {
        let form = ProjPairCanonicalForm::new(0, 0, 0, 0, vec![0.5f64.sqrt()]).unwrap();
        let ends = [c(1.0, 0.0), c(-1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)];
        let (a, b) = two_point(&form, ends, None);
        let region = two_point_product_region(&a, &b, 720).unwrap();
        for s in &region.samples {
            assert!((s.value - s.theta.sin().abs()).abs() < 1e-12);
        }
        let sweep = range_polygon(&a.matmul(&b), 720).unwrap();
        assert!(region_equal(&sweep, &region, 1e-9).unwrap().pass);
    }

    #[test]
    fn random_endpoints_match_the_sweep() {
        let mut r = rng(62);
        let form = ProjPairCanonicalForm::new(0, 1, 0, 0, vec![0.3, 0.7]).unwrap();
        for _ in 0..10 {
            let ends = [0; 4].map(|_| complex_in_box(2.0, &mut r));
            let u = random_unitary(form.dim(), &mut r);
            let (a, b) = two_point(&form, ends, Some(&u));
            let region = two_point_product_region(&a, &b, 720).unwrap();
            let sweep = range_polygon(&a.matmul(&b), 720).unwrap();
            let rep = region_equal(&sweep, &region, 1e-6).unwrap();
            assert!(rep.pass, "{}", rep.max_gap);
            let explicit = two_point_product_region_with_endpoints(&a, &b, ends, 720).unwrap();
            assert!(region_equal(&explicit, &region, 1e-9).unwrap().pass);
        }
    }

    #[test]
    fn generators_satisfy_center_and_pairing_identities() {
        let mut r = rng(63);
        for _ in 0..50 {
            let ends = [0; 4].map(|_| complex_in_box(2.0, &mut r));
            let [a1, a2, b1, b2] = ends;
            let cs: Vec<f64> = (0..3).map(|_| r.random_range(0.05..0.95)).collect();
            let form = ProjPairCanonicalForm::new(0, 0, 0, 0, cs.clone()).unwrap();
            let region = region_for_two_point_form(&form, ends, 64).unwrap();
            for (g, &cj) in region.generators.iter().zip(&cs) {
                let Some(Primitive::Ellipse(e)) = g.primitive() else { panic!() };
                // the trace 2·center is what lies on the segment
                assert!(distance_to_segment(e.center * 2.0, a1 * b1 + a2 * b2, a1 * b2 + a2 * b1) < 1e-9);
                let product = a1 * a2 * b1 * b2;
                let gamma = (a1 * b1 + a2 * b2) * cj * cj + (a1 * b2 + a2 * b1) * (1.0 - cj * cj);
                assert!((e.foci[0] * e.foci[1] - product).norm() < 1e-9);
                assert!((e.foci[0] + e.foci[1] - gamma).norm() < 1e-9);
                // the foci pair up through λ̂ and recover the cosine
                if e.foci[0].norm() > 1e-6 {
                    let hat = lambda_pairing(e.foci[0], a1, a2, b1, b2).unwrap();
                    assert!((hat - e.foci[1]).norm() < 1e-8);
                    let back = cosine_for_gamma(e.foci[0] + hat, ends).unwrap();
                    assert!((back - cj).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn center_itself_is_off_the_trace_segment() {
        // a = (1, i), b = (2, 1): the trace segment runs from 2 + i to 1 + 2i, the centers
        // run along its half-scale copy
        let ends = [c(1.0, 0.0), c(0.0, 1.0), c(2.0, 0.0), c(1.0, 0.0)];
        let e = ellipse_general(ends[0], ends[1], ends[2], ends[3], 0.6).unwrap();
        let [a1, a2, b1, b2] = ends;
        assert!(distance_to_segment(e.center, a1 * b1 + a2 * b2, a1 * b2 + a2 * b1) > 0.5);
        assert!(distance_to_segment(e.center, (a1 * b1 + a2 * b2) / 2.0, (a1 * b2 + a2 * b1) / 2.0) < 1e-12);
    }

    #[test]
    fn two_point_errors() {
        let h = ComplexMatrix::from_real_diag(&[0.0, 0.5, 1.0]);
        let p = ComplexMatrix::from_real_diag(&[0.0, 1.0, 1.0]);
        assert!(matches!(
            two_point_product_region(&h, &p, 64),
            Err(Error::NotTwoPoint(Operand::First))
        ));
        let scalar = ComplexMatrix::identity(3);
        assert!(matches!(
            two_point_product_region(&p, &scalar, 64),
            Err(Error::ScalarInput(Operand::Second))
        ));
    }

    #[test]
    fn lambda_pairing_examples() {
        let one = c(1.0, 0.0);
        assert_eq!(lambda_pairing(c(0.3, 0.0), one, c(0.0, 0.0), one, c(0.5, 0.0)).unwrap(), c(0.0, 0.0));
        let hat = lambda_pairing(c(0.0, 1.0), one, -one, one, -one).unwrap();
        assert!((hat - c(0.0, -1.0)).norm() < 1e-15);
        assert!(matches!(
            lambda_pairing(c(0.0, 0.0), one, -one, one, -one),
            Err(Error::DivisionByZero)
        ));
        let mut r = rng(64);
        for _ in 0..100 {
            let [a1, a2, b1, b2, l] = [0; 5].map(|_| complex_in_box(3.0, &mut r));
            let hat = lambda_pairing(l, a1, a2, b1, b2).unwrap();
            assert!((l * hat - a1 * a2 * b1 * b2).norm() < 1e-12 * (a1 * a2 * b1 * b2).norm().max(1.0));
        }
    }

    #[test]
    fn dilation_examples() {
        let a = ComplexMatrix::from_real_diag(&[1.0, 0.5]);
        let d = essherm_dilation_region(&a, &a, 720).unwrap();
        assert!(d.containment.pass);
        assert!(d.equality.pass, "{}", d.equality.max_gap);
        assert!(d.equality.ok());
        assert!(d.a_tilde.is_normal(1e-12));

        let a = ComplexMatrix::from_real_diag(&[0.0, 0.5, 1.0]);
        let b = ComplexMatrix::from_real_diag(&[1.0, 0.5, 0.0]);
        let d = essherm_dilation_region(&a, &b, 720).unwrap();
        assert!(d.containment.pass);
        assert!(!d.equality.pass && d.equality.max_gap > 1e-3);
        assert_eq!(d.equality.expected_pass, None);
    }

    #[test]
    fn explicit_endpoints_match_detection() {
        let a = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0), c(0.5, 0.5)]);
        let b = ComplexMatrix::from_real_diag(&[2.0, -1.0, 0.0]);
        let auto = essherm_dilation_region(&a, &b, 360).unwrap();
        let ends = [auto.a_form.a1, auto.a_form.a2, auto.b_form.a1, auto.b_form.a2];
        let given = essherm_dilation_region_with_endpoints(&a, &b, ends, 360).unwrap();
        assert!(region_equal(&auto.region, &given.region, 1e-12).unwrap().pass);
        // swapping the labels of a segment describes the same matrices
        let swapped = [ends[1], ends[0], ends[2], ends[3]];
        let given = essherm_dilation_region_with_endpoints(&a, &b, swapped, 360).unwrap();
        assert!(given.containment.pass);
        assert!(matches!(
            essherm_dilation_region_with_endpoints(&a, &b, [c(2.0, 0.0), c(0.0, 0.0), ends[2], ends[3]], 360),
            Err(Error::NotEssHerm(_))
        ));
    }

    #[test]
    fn dilation_spectra_are_two_point() {
        let mut r = rng(65);
        let a = random_positive_contraction(3, &mut r).scale(c(1.0, 2.0)).shift(c(-0.5, 0.0));
        let b = random_positive_contraction(3, &mut r).scale(c(0.0, -1.0)).shift(c(1.0, 1.0));
        let d = essherm_dilation_region(&a, &b, 360).unwrap();
        assert!(d.containment.pass, "{}", d.containment.max_gap);
        for (tilde, form) in [(&d.a_tilde, &d.a_form), (&d.b_tilde, &d.b_form)] {
            let f = detect_essentially_hermitian(tilde, 1e-8).unwrap();
            assert!(f.is_two_point(1e-8).unwrap());
            let same = (f.a1 - form.a1).norm() + (f.a2 - form.a2).norm();
            assert!(same < 1e-9);
            // the leading block of the dilation is the original matrix
            assert!((&tilde.principal_block(0, 3) - &form.reconstruct()).norm() < 1e-12);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn dilation_contains_the_product(seed in any::<u64>(), n in 2usize..5) {
            let mut r = rng(seed);
            let dir_a = Complex64::from_polar(1.0, r.random_range(0.0..2.0 * PI));
            let dir_b = Complex64::from_polar(1.0, r.random_range(0.0..2.0 * PI));
            let a = random_hermitian(n, &mut r).scale(dir_a).shift(complex_in_box(1.0, &mut r));
            let b = random_hermitian(n, &mut r).scale(dir_b).shift(complex_in_box(1.0, &mut r));
            let d = essherm_dilation_region(&a, &b, 180).unwrap();
            prop_assert!(d.containment.pass, "{}", d.containment.max_gap);
        }
    }
}
