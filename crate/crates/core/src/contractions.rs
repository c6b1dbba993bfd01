//! Products of positive contractions: the 3n projection dilation, the elliptical
//! containment region conv ∪ E(λ) over σ(AB), a numeric equality test, and the strip
//! −1/8 ≤ Re z ≤ 1, |Im z| ≤ 1/4 that W(AB) always lies in.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Operand, Result};
use crate::matkernel::{herm_eig, spectrum_of_product_pos, ComplexMatrix};
use crate::numrange::{range_polygon, support};
use crate::regions::{dedup_sorted, e_label, ellipse_e, hull_region_labeled, region_equal, ConvexRegion, Primitive};
use crate::report::{GapRow, VerifyReport};
use crate::STRUCTURAL_TOL;

/// Â, B̂ (orthogonal projections on ℂ³ⁿ) and T = ÂB̂, whose leading n×n block is AB.
#[derive(Debug, Clone)]
pub struct DilationTriple {
    pub a_hat: ComplexMatrix,
    pub b_hat: ComplexMatrix,
    pub t: ComplexMatrix,
}

fn require_positive_contraction(m: &ComplexMatrix, which: Operand) -> Result<()> {
    if m.is_positive_contraction(STRUCTURAL_TOL) {
        Ok(())
    } else {
        Err(Error::NotPositiveContraction(which))
    }
}

fn require_same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        })
    }
}

/// √(A − A²) through the spectral decomposition of A, so it commutes with A to rounding.
pub(crate) fn defect_root(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(herm_eig(a)?.map(|l| {
        let l = l.clamp(0.0, 1.0);
        (l * (1.0 - l)).sqrt()
    }))
}

/// [[A, √(A−A²), 0], [√(A−A²), I−A, 0], [0, 0, 0]]
pub(crate) fn row_dilation(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let a = a.hermitian_part();
    let root = defect_root(&a)?;
    let comp = &ComplexMatrix::identity(a.dim()) - &a;
    Ok(ComplexMatrix::from_blocks(&[
        vec![Some(&a), Some(&root), None],
        vec![Some(&root), Some(&comp), None],
        vec![None, None, None],
    ]))
}

/// [[B, 0, √(B−B²)], [0, 0, 0], [√(B−B²), 0, I−B]]
pub(crate) fn column_dilation(b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let b = b.hermitian_part();
    let root = defect_root(&b)?;
    let comp = &ComplexMatrix::identity(b.dim()) - &b;
    Ok(ComplexMatrix::from_blocks(&[
        vec![Some(&b), None, Some(&root)],
        vec![None, None, None],
        vec![Some(&root), None, Some(&comp)],
    ]))
}

/// Builds the dilation and checks σ(T) = σ(AB) ∪ {0} (2n extra zeros) to 1e-8.
pub fn dilate_pair(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<DilationTriple> {
    require_same_dim(a, b)?;
    require_positive_contraction(a, Operand::First)?;
    require_positive_contraction(b, Operand::Second)?;
    let a_hat = row_dilation(a)?;
    let b_hat = column_dilation(b)?;
    let t = a_hat.matmul(&b_hat);

    let mut expected = spectrum_of_product_pos(a, b)?;
    expected.resize(3 * a.dim(), 0.0);
    expected.sort_by(|x, y| y.total_cmp(x));
    let dilated = spectrum_of_product_pos(&a_hat, &b_hat)?;
    if let Some((x, y)) = dilated
        .iter()
        .zip(&expected)
        .find(|(x, y)| (*x - *y).abs() > 1e-8)
    {
        return Err(Error::Consistency(format!(
            "dilated spectrum value {x} does not match {y}"
        )));
    }
    Ok(DilationTriple { a_hat, b_hat, t })
}

/// σ(AB) clipped into [0, 1] and deduplicated to 1e-9, after range checks.
pub fn product_spectrum_values(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Vec<f64>> {
    require_same_dim(a, b)?;
    let spectrum = spectrum_of_product_pos(a, b)?;
    if let Some(&bad) = spectrum
        .iter()
        .find(|&&l| !(-STRUCTURAL_TOL..=1.0 + STRUCTURAL_TOL).contains(&l))
    {
        return Err(Error::SpectrumOutOfRange(bad));
    }
    let clipped: Vec<f64> = spectrum.iter().map(|l| l.clamp(0.0, 1.0)).collect();
    Ok(dedup_sorted(&clipped, 1e-9))
}

/// conv ∪ E(λ), λ ∈ σ(AB), which contains W(AB) for non-scalar positive contractions.
pub fn containment_region(a: &ComplexMatrix, b: &ComplexMatrix, m: usize) -> Result<ConvexRegion> {
    require_same_dim(a, b)?;
    require_positive_contraction(a, Operand::First)?;
    require_positive_contraction(b, Operand::Second)?;
    if a.is_scalar(STRUCTURAL_TOL) {
        return Err(Error::ScalarInput(Operand::First));
    }
    if b.is_scalar(STRUCTURAL_TOL) {
        return Err(Error::ScalarInput(Operand::Second));
    }
    let primitives = product_spectrum_values(a, b)?
        .into_iter()
        .map(|l| Ok((e_label(l), Primitive::Ellipse(ellipse_e(l)?))))
        .collect::<Result<Vec<_>>>()?;
    hull_region_labeled(&primitives, m)
}

/// Numeric verdict on W(AB) = conv ∪ E(λ): max over the grid of |h_W(AB) − h_region|.
///
/// When both inputs are projections the equality is a theorem, recorded as the expected
/// verdict so a disagreeing report can be flagged.
pub fn equality_check(a: &ComplexMatrix, b: &ComplexMatrix, m: usize, tol: f64) -> Result<VerifyReport> {
    let region = containment_region(a, b, m)?;
    let sweep = range_polygon(&a.matmul(b), m)?;
    let report = region_equal(&sweep, &region, tol)?.renamed("thm22_equality");
    if a.is_projection(STRUCTURAL_TOL) && b.is_projection(STRUCTURAL_TOL) {
        Ok(report.expecting(true))
    } else {
        Ok(report)
    }
}

/// Upper support bounds of the strip at θ = 0, π/2, π, 3π/2.
const STRIP: [(f64, f64); 4] = [(0.0, 1.0), (FRAC_PI_2, 0.25), (PI, 0.125), (3.0 * FRAC_PI_2, 0.25)];
/// Slack allowed on the strip bounds.
pub const STRIP_SLACK: f64 = 1e-9;

/// Checks −I/8 ≤ (AB+BA)/2 ≤ I and −I/4 ≤ (AB−BA)/(2i) ≤ I/4.
///
/// One row per strip edge: `h_lhs` is the bound, `h_rhs` the extreme eigenvalue facing it
/// (negated for lower bounds), so rows with negative gap are violations.
pub fn strip_bounds_check(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<VerifyReport> {
    require_same_dim(a, b)?;
    require_positive_contraction(a, Operand::First)?;
    require_positive_contraction(b, Operand::Second)?;
    let ab = a.matmul(b);
    let ba = b.matmul(a);
    let real_part = (&ab + &ba).scale_real(0.5).hermitian_part();
    let imag_part = (&ab - &ba)
        .scale(num_complex::Complex64::new(0.0, -0.5))
        .hermitian_part();
    let re = herm_eig(&real_part)?;
    let im = herm_eig(&imag_part)?;
    let extremes = [re.max(), im.max(), -re.min(), -im.min()];

    let mut rows = Vec::with_capacity(4);
    for ((theta, bound), extreme) in STRIP.into_iter().zip(extremes) {
        let swept = support(&ab, theta)?.value;
        if (swept - extreme).abs() > 1e-9 * ab.norm().max(1.0) {
            return Err(Error::Consistency(format!(
                "support of AB at {theta} is {swept}, Hermitian-part eigenvalue is {extreme}"
            )));
        }
        rows.push(GapRow {
            theta,
            h_lhs: bound,
            h_rhs: extreme,
            gap: bound - extreme,
        });
    }
    Ok(VerifyReport::containment("bounds", rows, STRIP_SLACK))
}
