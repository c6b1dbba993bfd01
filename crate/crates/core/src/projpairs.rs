//! Pairs of orthogonal projections in two-projection canonical form, and W(PQ) as the
//! convex hull of the disks E(λ), λ ∈ σ(PQ).
//!
//! A canonical pair is the direct sum of scalar blocks (P, Q) = (1, 1)·I_p ⊕ (1, 0)·I_q ⊕
//! (0, 1)·I_r ⊕ (0, 0)·I_s and 2×2 generic blocks
//! P_j = [[c², cs], [cs, s²]], Q_j = diag(1, 0) with c ∈ (0, 1), s = √(1 − c²).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Operand, Result};
use crate::matkernel::{herm_eig, ComplexMatrix};
use crate::regions::{dedup_sorted, e_label, ellipse_e, hull_region_labeled, ConvexRegion, Primitive};
use crate::STRUCTURAL_TOL;

/// Eigenvalues of QPQ within this distance of 0 or 1 belong to scalar blocks.
pub const ANGLE_CLUSTER_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct ProjPairCanonicalForm {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub s: usize,
    /// Cosines c_j of the generic blocks, with multiplicity.
    pub angles: Vec<f64>,
}

impl ProjPairCanonicalForm {
    pub fn new(p: usize, q: usize, r: usize, s: usize, angles: Vec<f64>) -> Result<Self> {
        let form = Self { p, q, r, s, angles };
        form.validate()?;
        Ok(form)
    }

    pub fn dim(&self) -> usize {
        self.p + self.q + self.r + self.s + 2 * self.angles.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim() == 0 {
            return Err(Error::InvalidForm("empty form".into()));
        }
        for &c in &self.angles {
            if !(c > STRUCTURAL_TOL && c < 1.0 - STRUCTURAL_TOL) {
                return Err(Error::InvalidForm(format!("cosine {c} is not inside (0, 1)")));
            }
        }
        Ok(())
    }

    /// P ≠ 0, I and Q ≠ 0, I.
    pub fn is_non_scalar(&self) -> bool {
        let k = self.angles.len();
        let rank_p = self.p + self.q + k;
        let rank_q = self.p + self.r + k;
        let n = self.dim();
        rank_p > 0 && rank_p < n && rank_q > 0 && rank_q < n
    }

    /// σ(PQ) as a set: 1 if p > 0, each c_j², and 0 whenever PQ is singular.
    pub fn product_spectrum(&self) -> Vec<f64> {
        let mut out = Vec::new();
        if self.p > 0 {
            out.push(1.0);
        }
        out.extend(self.angles.iter().map(|c| c * c));
        if self.q + self.r + self.s + self.angles.len() > 0 {
            out.push(0.0);
        }
        out
    }
}

impl fmt::Display for ProjPairCanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}:", self.p, self.q, self.r, self.s)?;
        let cs: Vec<String> = self.angles.iter().map(|c| c.to_string()).collect();
        f.write_str(&cs.join(","))
    }
}

/// `p,q,r,s:c1,c2,...` (the angle list may be empty).
impl FromStr for ProjPairCanonicalForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |column: usize, message: String| Error::Parse {
            line: 1,
            column,
            message,
        };
        let (counts, angles) = s.split_once(':').unwrap_or((s, ""));
        let nums: Vec<&str> = counts.split(',').collect();
        if nums.len() != 4 {
            return Err(bad(1, format!("expected p,q,r,s before `:`, found `{counts}`")));
        }
        let mut pqrs = [0usize; 4];
        let mut column = 1;
        for (slot, tok) in pqrs.iter_mut().zip(&nums) {
            *slot = tok
                .trim()
                .parse()
                .map_err(|_| bad(column, format!("expected a nonnegative integer, found `{tok}`")))?;
            column += tok.len() + 1;
        }
        let mut cs = Vec::new();
        column = counts.len() + 2;
        for tok in angles.split(',').filter(|t| !t.trim().is_empty()) {
            cs.push(
                tok.trim()
                    .parse::<f64>()
                    .map_err(|_| bad(column, format!("expected a cosine, found `{tok}`")))?,
            );
            column += tok.len() + 1;
        }
        Self::new(pqrs[0], pqrs[1], pqrs[2], pqrs[3], cs)
    }
}

/// A pair of projections (P, Q).
#[derive(Debug, Clone)]
pub struct ProjectionPair {
    pub p: ComplexMatrix,
    pub q: ComplexMatrix,
}

impl ProjectionPair {
    /// (U*PU, U*QU)
    pub fn conjugated(&self, u: &ComplexMatrix) -> Self {
        Self {
            p: self.p.conjugate_by(u).hermitian_part(),
            q: self.q.conjugate_by(u).hermitian_part(),
        }
    }

    pub fn product(&self) -> ComplexMatrix {
        self.p.matmul(&self.q)
    }
}

/// Realizes a canonical form; `mixing`, when given, conjugates both projections by it.
pub fn build_pair(form: &ProjPairCanonicalForm, mixing: Option<&ComplexMatrix>) -> Result<ProjectionPair> {
    form.validate()?;
    let mut p_diag = Vec::new();
    let mut q_diag = Vec::new();
    for (count, pv, qv) in [(form.p, 1.0, 1.0), (form.q, 1.0, 0.0), (form.r, 0.0, 1.0), (form.s, 0.0, 0.0)] {
        p_diag.extend(std::iter::repeat_n(pv, count));
        q_diag.extend(std::iter::repeat_n(qv, count));
    }
    let mut p_blocks = vec![ComplexMatrix::from_real_diag(&p_diag)];
    let mut q_blocks = vec![ComplexMatrix::from_real_diag(&q_diag)];
    for &c in &form.angles {
        let s = (1.0 - c * c).sqrt();
        p_blocks.push(ComplexMatrix::from_real_rows(&[&[c * c, c * s], &[c * s, s * s]]));
        q_blocks.push(ComplexMatrix::from_real_diag(&[1.0, 0.0]));
    }
    let pair = ProjectionPair {
        p: ComplexMatrix::block_diag(&p_blocks),
        q: ComplexMatrix::block_diag(&q_blocks),
    };
    if let Some(u) = mixing {
        if u.dim() != form.dim() {
            return Err(Error::DimensionMismatch {
                expected: form.dim(),
                found: u.dim(),
            });
        }
        return Ok(pair.conjugated(u));
    }
    Ok(pair)
}

fn rank_of_projection(m: &ComplexMatrix) -> usize {
    m.trace().re.round().max(0.0) as usize
}

/// Recovers the canonical form of a projection pair from the spectrum of QPQ.
pub fn decompose_pair(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<ProjPairCanonicalForm> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    for (m, which) in [(p, Operand::First), (q, Operand::Second)] {
        if !m.is_projection(STRUCTURAL_TOL) {
            return Err(Error::NotProjection(which));
        }
        let rank = rank_of_projection(m);
        if rank == 0 || rank == m.dim() {
            return Err(Error::ScalarProjection(which));
        }
    }
    let n = p.dim();
    let qpq = q.matmul(p).matmul(q).hermitian_part();
    let spectrum = herm_eig(&qpq)?.eigenvalues;
    let ones = spectrum.iter().filter(|&&l| l >= 1.0 - ANGLE_CLUSTER_TOL).count();
    let angles: Vec<f64> = spectrum
        .iter()
        .filter(|&&l| l > ANGLE_CLUSTER_TOL && l < 1.0 - ANGLE_CLUSTER_TOL)
        .map(|&l| l.sqrt())
        .collect();
    let k = angles.len();
    let (rank_p, rank_q) = (rank_of_projection(p), rank_of_projection(q));
    let q_count = rank_p
        .checked_sub(ones + k)
        .ok_or_else(|| Error::Consistency("rank P smaller than p + #angles".into()))?;
    let r_count = rank_q
        .checked_sub(ones + k)
        .ok_or_else(|| Error::Consistency("rank Q smaller than p + #angles".into()))?;
    let s_count = n
        .checked_sub(ones + q_count + r_count + 2 * k)
        .ok_or_else(|| Error::Consistency("block sizes exceed the dimension".into()))?;
    ProjPairCanonicalForm::new(ones, q_count, r_count, s_count, angles)
}

/// σ(QPQ) of two pairs agree as multisets to `tol`: the pairs are unitarily equivalent
/// exactly when this holds and the ranks agree.
pub fn spectra_match(a: &ProjectionPair, b: &ProjectionPair, tol: f64) -> Result<bool> {
    if a.p.dim() != b.p.dim()
        || rank_of_projection(&a.p) != rank_of_projection(&b.p)
        || rank_of_projection(&a.q) != rank_of_projection(&b.q)
    {
        return Ok(false);
    }
    let sa = herm_eig(&a.q.matmul(&a.p).matmul(&a.q).hermitian_part())?.eigenvalues;
    let sb = herm_eig(&b.q.matmul(&b.p).matmul(&b.q).hermitian_part())?.eigenvalues;
    Ok(sa.iter().zip(&sb).all(|(x, y)| (x - y).abs() <= tol))
}

/// W(PQ) = conv ∪ E(λ) over λ ∈ σ(PQ).
pub fn wpq_region(p: &ComplexMatrix, q: &ComplexMatrix, m: usize) -> Result<ConvexRegion> {
    let form = decompose_pair(p, q)?;
    region_for_form(&form, m)
}

pub fn region_for_form(form: &ProjPairCanonicalForm, m: usize) -> Result<ConvexRegion> {
    let lambdas = dedup_sorted(&form.product_spectrum(), 1e-9);
    let primitives = lambdas
        .iter()
        .map(|&l| Ok((e_label(l), Primitive::Ellipse(ellipse_e(l)?))))
        .collect::<Result<Vec<_>>>()?;
    hull_region_labeled(&primitives, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matkernel::spectrum_of_product_pos;
    use crate::numrange::range_polygon;
    use crate::random::{random_unitary, rng};
    use crate::regions::region_equal;
    use proptest::prelude::*;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| b.total_cmp(a));
        v
    }

    #[test]
    fn commuting_pair() {
        let form = ProjPairCanonicalForm::new(1, 0, 0, 1, vec![]).unwrap();
        let pair = build_pair(&form, None).unwrap();
        let expect = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert_eq!(pair.p, expect);
        assert_eq!(pair.q, expect);
    }

    #[test]
    fn single_generic_block() {
        let form = ProjPairCanonicalForm::new(0, 0, 0, 0, vec![0.8]).unwrap();
        let pair = build_pair(&form, None).unwrap();
        let p = ComplexMatrix::from_real_rows(&[&[0.64, 0.48], &[0.48, 0.36]]);
        assert!((&pair.p - &p).norm() < 1e-15);
        assert_eq!(pair.q, ComplexMatrix::from_real_diag(&[1.0, 0.0]));
        assert!(pair.p.is_projection(1e-12) && pair.q.is_projection(1e-12));
    }

    #[test]
    fn four_by_four_spectrum() {
        let form = ProjPairCanonicalForm::new(1, 0, 0, 1, vec![0.8]).unwrap();
        let pair = build_pair(&form, None).unwrap();
        let s = spectrum_of_product_pos(&pair.p, &pair.q).unwrap();
        let expect = [1.0, 0.64, 0.0, 0.0];
        for (x, y) in s.iter().zip(expect) {
            assert!((x - y).abs() < 1e-12, "{s:?}");
        }
    }

    #[test]
    fn decompose_examples() {
        let mut r = rng(41);
        let u = random_unitary(5, &mut r);
        let p = ComplexMatrix::from_real_diag(&[1.0, 1.0, 0.0, 0.0, 0.0]).conjugate_by(&u);
        let f = decompose_pair(&p, &p).unwrap();
        assert_eq!((f.p, f.q, f.r, f.s, f.angles.len()), (2, 0, 0, 3, 0));

        let pair = build_pair(&ProjPairCanonicalForm::new(0, 0, 0, 0, vec![0.8]).unwrap(), None).unwrap();
        let f = decompose_pair(&pair.p, &pair.q).unwrap();
        assert_eq!((f.p, f.q, f.r, f.s), (0, 0, 0, 0));
        assert!((f.angles[0] - 0.8).abs() < 1e-9);

        let p = ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0]);
        let q = ComplexMatrix::from_real_diag(&[0.0, 1.0, 0.0]);
        let f = decompose_pair(&p, &q).unwrap();
        assert_eq!((f.p, f.q, f.r, f.s, f.angles.len()), (0, 1, 1, 1, 0));
    }

    #[test]
    fn decompose_errors() {
        let id = ComplexMatrix::identity(2);
        let p = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(matches!(decompose_pair(&id, &p), Err(Error::ScalarProjection(Operand::First))));
        assert!(matches!(
            decompose_pair(&p, &ComplexMatrix::zeros(2)),
            Err(Error::ScalarProjection(Operand::Second))
        ));
        let half = ComplexMatrix::from_real_diag(&[0.5, 0.0]);
        assert!(matches!(decompose_pair(&half, &p), Err(Error::NotProjection(Operand::First))));
    }

    #[test]
    fn form_validation_and_parsing() {
        assert!(ProjPairCanonicalForm::new(0, 0, 0, 0, vec![1.0]).is_err());
        assert!(ProjPairCanonicalForm::new(0, 0, 0, 0, vec![]).is_err());
        let f: ProjPairCanonicalForm = "1,0,2,1:0.3,0.7".parse().unwrap();
        assert_eq!((f.p, f.q, f.r, f.s), (1, 0, 2, 1));
        assert_eq!(f.angles, vec![0.3, 0.7]);
        assert_eq!(f.dim(), 8);
        let g: ProjPairCanonicalForm = f.to_string().parse().unwrap();
        assert_eq!(g, f);
        let h: ProjPairCanonicalForm = "1,0,0,1:".parse().unwrap();
        assert!(h.angles.is_empty());
        assert!(matches!("1,0,0".parse::<ProjPairCanonicalForm>(), Err(Error::Parse { .. })));
        assert!(matches!("1,0,0,1:x".parse::<ProjPairCanonicalForm>(), Err(Error::Parse { .. })));
    }

    #[test]
    fn wpq_region_examples() {
        let pair = build_pair(&ProjPairCanonicalForm::new(0, 0, 0, 0, vec![0.8]).unwrap(), None).unwrap();
        let region = wpq_region(&pair.p, &pair.q, 720).unwrap();
        assert_eq!(region.generators.len(), 2);
        assert!((region.samples[0].value - 0.72).abs() < 1e-12);

        let p = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let seg = wpq_region(&p, &p, 720).unwrap();
        for s in &seg.samples {
            assert!((s.value - s.theta.cos().max(0.0)).abs() < 1e-12);
        }

        let form = ProjPairCanonicalForm::new(1, 0, 0, 0, vec![0.8]).unwrap();
        let pair = build_pair(&form, None).unwrap();
        let region = wpq_region(&pair.p, &pair.q, 720).unwrap();
        assert_eq!(region.generators.len(), 3);
        let sweep = range_polygon(&pair.product(), 720).unwrap();
        assert!(region_equal(&sweep, &region, 1e-9).unwrap().pass);
    }

    #[test]
    fn canonical_spectrum_agrees_with_similarity_route() {
        let mut r = rng(42);
        let form = ProjPairCanonicalForm::new(2, 1, 0, 1, vec![0.2, 0.55, 0.9]).unwrap();
        let u = random_unitary(form.dim(), &mut r);
        let pair = build_pair(&form, Some(&u)).unwrap();
        let via_qpq = {
            let mut v = vec![1.0, 1.0, 0.04, 0.3025, 0.81];
            v.resize(form.dim(), 0.0);
            sorted(v)
        };
        let via_similarity = spectrum_of_product_pos(&pair.p, &pair.q).unwrap();
        for (x, y) in via_qpq.iter().zip(&via_similarity) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn decompose_inverts_build(
            p in 0usize..3, q in 0usize..3, r in 0usize..3, s in 0usize..3,
            raw in proptest::collection::vec(0.05f64..0.95, 0..4),
            seed in 0u64..1000
        ) {
            // keep angles separated by at least 1e-4
            let mut angles = raw.clone();
            angles.sort_by(|a, b| b.total_cmp(a));
            angles.dedup_by(|a, b| (*a - *b).abs() < 1e-4);
            let form = ProjPairCanonicalForm::new(p, q, r, s, angles.clone());
            prop_assume!(form.is_ok());
            let form = form.unwrap();
            prop_assume!(form.is_non_scalar());
            let u = random_unitary(form.dim(), &mut rng(seed));
            let pair = build_pair(&form, Some(&u)).unwrap();
            let back = decompose_pair(&pair.p, &pair.q).unwrap();
            prop_assert_eq!((back.p, back.q, back.r, back.s), (p, q, r, s));
            prop_assert_eq!(back.angles.len(), angles.len());
            for (x, y) in back.angles.iter().zip(&angles) {
                prop_assert!((x - y).abs() < 1e-9);
            }
            let rebuilt = build_pair(&back, None).unwrap();
            prop_assert!(spectra_match(&pair, &rebuilt, 1e-8).unwrap());
        }
    }
}
