//! Randomized and fixture-based verification suites. Every trial compares a region built
//! from closed forms with an independent eigen-sweep or Monte Carlo sample.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::contractions::{containment_region, equality_check, strip_bounds_check};
use crate::error::{Error, Result};
use crate::essherm::{essherm_dilation_region, two_point_product_region};
use crate::matkernel::{format_real, ComplexMatrix};
use crate::numrange::{ellipse_from_2x2, range_polygon};
use crate::projpairs::{build_pair, wpq_region, ProjPairCanonicalForm};
use crate::random::{
    complex_in_box, random_hermitian, random_positive_contraction, random_unitary, rng, unit_vector, SeededRng,
};
use crate::regions::{region_contains, region_equal, ProductBlock};
use crate::report::VerifyReport;

/// Grid used by every suite.
const SUITE_GRID: usize = 720;
/// Monte Carlo points per containment trial and their slack.
const MC_POINTS: usize = 1000;
const MC_TOL: f64 = 1e-8;
/// Slack for algebraic identities of the 2×2 product block, relative to max(1, ‖C‖²).
const IDENTITY_TOL: f64 = 1e-9;

/// x*Mx for `count` unit vectors drawn from a generator seeded with `seed`.
pub fn mc_points(m: &ComplexMatrix, count: usize, seed: u64) -> Vec<Complex64> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| m.quadratic_form(&unit_vector(m.dim(), &mut r)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    #[value(name = "thm11")]
    Thm11,
    #[value(name = "thm22_contain")]
    Thm22Contain,
    #[value(name = "thm22_equality")]
    Thm22Equality,
    #[value(name = "thm33")]
    Thm33,
    #[value(name = "thm34")]
    Thm34,
    #[value(name = "bounds")]
    Bounds,
    #[value(name = "prop32")]
    Prop32,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Thm11,
        Suite::Thm22Contain,
        Suite::Thm22Equality,
        Suite::Thm33,
        Suite::Thm34,
        Suite::Bounds,
        Suite::Prop32,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Thm11 => "thm11",
            Suite::Thm22Contain => "thm22_contain",
            Suite::Thm22Equality => "thm22_equality",
            Suite::Thm33 => "thm33",
            Suite::Thm34 => "thm34",
            Suite::Bounds => "bounds",
            Suite::Prop32 => "prop32",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Random canonical form of dimension n whose projections are both non-scalar.
pub fn random_form<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ProjPairCanonicalForm {
    assert!(n >= 2);
    loop {
        let k = rng.random_range(0..=n / 2);
        let mut counts = [0usize; 4];
        for _ in 0..n - 2 * k {
            counts[rng.random_range(0..4)] += 1;
        }
        let angles = (0..k).map(|_| rng.random_range(0.05..0.95)).collect();
        let [p, q, r, s] = counts;
        let form = ProjPairCanonicalForm { p, q, r, s, angles };
        if form.is_non_scalar() {
            return form;
        }
    }
}

/// Essentially Hermitian matrix: a Hermitian matrix turned and shifted in the plane.
pub fn random_essentially_hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let dir = Complex64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    random_hermitian(n, rng).scale(dir).shift(complex_in_box(1.0, rng))
}

fn projection_pair(n: usize, r: &mut SeededRng) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let form = random_form(n, r);
    let u = random_unitary(n, r);
    let pair = build_pair(&form, Some(&u))?;
    Ok((pair.p, pair.q))
}

fn labeled(report: VerifyReport, suite: Suite, label: impl fmt::Display) -> VerifyReport {
    report.renamed(format!("{suite}[{label}]")).without_samples()
}

fn mc_excess(region: &crate::regions::ConvexRegion, m: &ComplexMatrix, seed: u64) -> f64 {
    mc_points(m, MC_POINTS, seed)
        .into_iter()
        .map(|z| region.point_excess(z))
        .fold(0.0, f64::max)
}

fn trial(suite: Suite, n: usize, seed: u64, tol: f64) -> Result<Vec<VerifyReport>> {
    let mut r = rng(seed);
    let one = |rep: VerifyReport| Ok(vec![labeled(rep, suite, seed)]);
    match suite {
        Suite::Thm11 => {
            let (p, q) = projection_pair(n, &mut r)?;
            let region = wpq_region(&p, &q, SUITE_GRID)?;
            let sweep = range_polygon(&p.matmul(&q), SUITE_GRID)?;
            one(region_equal(&sweep, &region, tol)?.expecting(true))
        }
        Suite::Thm22Contain => {
            let a = random_positive_contraction(n, &mut r);
            let b = random_positive_contraction(n, &mut r);
            let region = containment_region(&a, &b, SUITE_GRID)?;
            let ab = a.matmul(&b);
            let sweep = range_polygon(&ab, SUITE_GRID)?;
            let support = labeled(region_contains(&region, &sweep, tol)?, suite, seed);
            let sampled = VerifyReport::scalar("", mc_excess(&region, &ab, seed ^ 0x9e37_79b9), MC_TOL);
            Ok(vec![support, labeled(sampled, suite, format!("{seed}:mc"))])
        }
        Suite::Thm22Equality => {
            let (p, q) = projection_pair(n, &mut r)?;
            one(equality_check(&p, &q, SUITE_GRID, tol)?)
        }
        Suite::Thm33 => {
            let form = random_form(n, &mut r);
            let u = random_unitary(n, &mut r);
            let pair = build_pair(&form, Some(&u))?;
            let [a1, a2, b1, b2] = [0; 4].map(|_| complex_in_box(2.0, &mut r));
            let a = pair.p.scale(a1 - a2).shift(a2);
            let b = pair.q.scale(b1 - b2).shift(b2);
            let region = two_point_product_region(&a, &b, SUITE_GRID)?;
            let sweep = range_polygon(&a.matmul(&b), SUITE_GRID)?;
            one(region_equal(&sweep, &region, tol)?.expecting(true))
        }
        Suite::Thm34 => {
            let a = random_essentially_hermitian(n, &mut r);
            let b = random_essentially_hermitian(n, &mut r);
            let d = essherm_dilation_region(&a, &b, SUITE_GRID)?;
            one(d.containment.tolerance_override(tol))
        }
        Suite::Bounds => {
            let a = random_positive_contraction(n, &mut r);
            let b = random_positive_contraction(n, &mut r);
            one(strip_bounds_check(&a, &b)?)
        }
        Suite::Prop32 => {
            let [a1, a2, b1, b2] = [0; 4].map(|_| complex_in_box(2.0, &mut r));
            let c = r.random_range(0.01..0.99);
            one(prop32_report(a1, a2, b1, b2, c)?)
        }
    }
}

/// Closed-form minor axis against the trace formula with eigenvalues from the
/// characteristic polynomial, and the foci product and sum identities.
fn prop32_report(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64, c: f64) -> Result<VerifyReport> {
    let block = ProductBlock::new(a1, a2, b1, b2, c)?;
    let m = &block.matrix;
    let tr = m.trace();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let root = (tr * tr - det * 4.0).sqrt();
    let (l1, l2) = ((tr + root) / 2.0, (tr - root) / 2.0);
    let frob = m.norm().powi(2);
    let trace_formula = frob - l1.norm_sqr() - l2.norm_sqr();
    let disk = ellipse_from_2x2(m)?;
    let scale = frob.max(1.0);
    let discrepancy = [
        (block.closed_form_minor_sq() - trace_formula).abs() / scale,
        (disk.minor_axis().powi(2) - trace_formula).abs() / scale,
        (disk.foci[0] * disk.foci[1] - block.focal_product()).norm() / scale,
        (disk.foci[0] + disk.foci[1] - block.gamma).norm() / m.norm().max(1.0),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(VerifyReport::scalar("prop32", discrepancy, IDENTITY_TOL))
}

/// Fixed instances with mandated verdicts, run once per suite invocation.
fn fixtures(suite: Suite, tol: f64) -> Result<Vec<VerifyReport>> {
    let diag = ComplexMatrix::from_real_diag(&[1.0, 0.5]);
    let reports = match suite {
        Suite::Thm22Equality => {
            // W(AB) = [1/4, 1] is strictly smaller than conv{E(1), E(1/4)}
            let counterexample = equality_check(&diag, &diag, SUITE_GRID, tol)?.expecting(false);
            // the appended products 0.2 and 0.06 are already eigenvalues of PQ
            let form = ProjPairCanonicalForm::new(1, 0, 0, 1, vec![0.2f64.sqrt(), 0.06f64.sqrt()])?;
            let pair = build_pair(&form, None)?;
            let a = pair.p.direct_sum(&ComplexMatrix::from_real_diag(&[0.5, 0.3]));
            let b = pair.q.direct_sum(&ComplexMatrix::from_real_diag(&[0.4, 0.2]));
            let swallowed = equality_check(&a, &b, SUITE_GRID, tol)?.expecting(true);
            vec![
                labeled(counterexample, suite, "diag(1,1/2)"),
                labeled(swallowed, suite, "projections+diag"),
            ]
        }
        Suite::Thm34 => {
            let two_point = essherm_dilation_region(&diag, &diag, SUITE_GRID)?;
            let a = ComplexMatrix::from_real_diag(&[0.0, 0.5, 1.0]);
            let b = ComplexMatrix::from_real_diag(&[1.0, 0.5, 0.0]);
            let three_point = essherm_dilation_region(&a, &b, SUITE_GRID)?;
            vec![
                labeled(two_point.equality.tolerance_override(tol), suite, "diag(1,1/2):equality"),
                labeled(three_point.containment.tolerance_override(tol), suite, "three-point:containment"),
                labeled(
                    three_point.equality.tolerance_override(tol).expecting(false),
                    suite,
                    "three-point:equality",
                ),
            ]
        }
        Suite::Bounds => {
            // the pair with c² = 1/2 attains |Im| = 1/4
            let c = 0.5f64.sqrt();
            let pair = build_pair(&ProjPairCanonicalForm::new(0, 0, 0, 0, vec![c])?, None)?;
            let rep = strip_bounds_check(&pair.p, &pair.q)?;
            let attained = VerifyReport::scalar("", (rep.rows()[1].h_rhs - 0.25).abs(), 1e-9);
            vec![labeled(attained, suite, "c^2=1/2")]
        }
        _ => Vec::new(),
    };
    Ok(reports)
}

/// Runs `trials` independent trials seeded seed, seed+1, ... followed by the suite's
/// fixtures. Results do not depend on thread scheduling.
pub fn run_suite(suite: Suite, trials: usize, n: usize, seed: u64, tol: f64) -> Result<Vec<VerifyReport>> {
    if n < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: n });
    }
    let per_trial = (0..trials as u64)
        .into_par_iter()
        .map(|i| trial(suite, n, seed.wrapping_add(i), tol))
        .collect::<Result<Vec<_>>>()?;
    let mut reports: Vec<VerifyReport> = per_trial.into_iter().flatten().collect();
    reports.extend(fixtures(suite, tol)?);
    Ok(reports)
}

/// Every report passed or failed exactly as mandated.
pub fn all_as_expected(reports: &[VerifyReport]) -> bool {
    reports.iter().all(VerifyReport::as_expected)
}

/// One JSON object per line, fields in declaration order, samples dropped.
pub fn to_jsonl(reports: &[VerifyReport]) -> String {
    let mut out = String::new();
    for r in reports {
        let line = serde_json::to_string(&r.clone().without_samples()).expect("reports serialize");
        out.push_str(&line);
        out.push('\n');
    }
    out
}

pub fn summary_table(suite: Suite, reports: &[VerifyReport]) -> String {
    let expected = reports.iter().filter(|r| r.as_expected()).count();
    let expected_failures = reports.iter().filter(|r| !r.pass && r.as_expected()).count();
    let worst = reports
        .iter()
        .filter(|r| r.expected_pass != Some(false))
        .max_by(|a, b| (a.max_gap / a.tolerance).total_cmp(&(b.max_gap / b.tolerance)));
    let mut out = String::new();
    let _ = writeln!(out, "suite            reports  as-expected  expected-fail  unexpected");
    let _ = writeln!(
        out,
        "{:<16} {:>7}  {:>11}  {:>13}  {:>10}",
        suite.name(),
        reports.len(),
        expected,
        expected_failures,
        reports.len() - expected
    );
    if let Some(w) = worst {
        let _ = writeln!(out, "worst: {} max_gap={} tol={}", w.name, format_real(w.max_gap), format_real(w.tolerance));
    }
    let _ = writeln!(out, "{}", if all_as_expected(reports) { "OK" } else { "FAILED" });
    out
}
