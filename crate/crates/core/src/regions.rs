//! Elliptical disks, convex hulls of finitely many disks and points, and support-function
//! containment.
//!
//! Every region is carried by its support function h(θ) = max Re(e^{−iθ}z) sampled on the
//! uniform grid θ_k = 2πk/m. Containment and equality are support-dominance statements.

use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matkernel::{format_complex, format_real, ComplexMatrix};
use crate::numrange::ellipse_from_2x2;
use crate::report::{GapRow, VerifyReport};

/// Closed elliptical disk, possibly degenerate (segment or point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipseDisk {
    pub center: Complex64,
    pub semi_major: f64,
    pub semi_minor: f64,
    /// Direction of the major axis.
    pub axis_angle: f64,
    pub foci: [Complex64; 2],
}

impl EllipseDisk {
    /// Disk with the given foci and full minor-axis length.
    pub fn from_foci(f1: Complex64, f2: Complex64, minor_axis: f64) -> Self {
        let semi_minor = 0.5 * minor_axis.max(0.0);
        let half_focal = 0.5 * (f1 - f2).norm();
        let axis_angle = if half_focal > 0.0 { (f1 - f2).arg() } else { 0.0 };
        Self {
            center: (f1 + f2) * 0.5,
            semi_major: semi_minor.hypot(half_focal),
            semi_minor,
            axis_angle,
            foci: [f1, f2],
        }
    }

    pub fn point(z: Complex64) -> Self {
        Self::from_foci(z, z, 0.0)
    }

    /// s(θ) = Re(e^{−iθ}c) + √(a²cos²(θ−φ) + b²sin²(θ−φ))
    pub fn support(&self, theta: f64) -> f64 {
        let psi = theta - self.axis_angle;
        let (s, c) = psi.sin_cos();
        let radial = (self.semi_major * c).hypot(self.semi_minor * s);
        (Complex64::from_polar(1.0, -theta) * self.center).re + radial
    }

    /// A boundary point where the support at `theta` is attained.
    pub fn support_point(&self, theta: f64) -> Complex64 {
        let psi = theta - self.axis_angle;
        let (s, c) = psi.sin_cos();
        let (a, b) = (self.semi_major, self.semi_minor);
        let radial = (a * c).hypot(b * s);
        if radial == 0.0 {
            return self.center;
        }
        let local = Complex64::new(a * a * c, b * b * s) / radial;
        self.center + Complex64::from_polar(1.0, self.axis_angle) * local
    }

    /// Largest deviation of |focus − center| from √(a² − b²).
    pub fn focus_residual(&self) -> f64 {
        let c = (self.semi_major * self.semi_major - self.semi_minor * self.semi_minor)
            .max(0.0)
            .sqrt();
        self.foci
            .iter()
            .map(|f| ((f - self.center).norm() - c).abs())
            .fold(0.0, f64::max)
    }

    pub fn minor_axis(&self) -> f64 {
        2.0 * self.semi_minor
    }

    /// Boundary sampled at `count` points, for plotting.
    pub fn outline(&self, count: usize) -> Vec<Complex64> {
        let rot = Complex64::from_polar(1.0, self.axis_angle);
        (0..count)
            .map(|k| {
                let t = TAU * k as f64 / count as f64;
                self.center + rot * Complex64::new(self.semi_major * t.cos(), self.semi_minor * t.sin())
            })
            .collect()
    }
}

/// E(λ): foci 0 and λ, semi-major √λ/2, semi-minor √(λ(1−λ))/2.
pub fn ellipse_e(lambda: f64) -> Result<EllipseDisk> {
    if !(-1e-9..=1.0 + 1e-9).contains(&lambda) || lambda.is_nan() {
        return Err(Error::OutOfRange(lambda));
    }
    let l = lambda.clamp(0.0, 1.0);
    Ok(EllipseDisk {
        center: Complex64::new(l / 2.0, 0.0),
        semi_major: l.sqrt() / 2.0,
        semi_minor: (l * (1.0 - l)).sqrt() / 2.0,
        axis_angle: 0.0,
        foci: [Complex64::new(0.0, 0.0), Complex64::new(l, 0.0)],
    })
}

/// The 2×2 block [[a1c²+a2s², (a1−a2)cs], [(a1−a2)cs, a1s²+a2c²]]·diag(b1, b2) with its
/// trace γ and half diagonal difference γ̂.
#[derive(Debug, Clone)]
pub struct ProductBlock {
    pub matrix: ComplexMatrix,
    pub gamma: Complex64,
    pub gamma_hat: Complex64,
    pub a: [Complex64; 2],
    pub b: [Complex64; 2],
    pub c: f64,
}

impl ProductBlock {
    pub fn new(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64, c: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::OutOfRange(c));
        }
        let scale_a = a1.norm().max(a2.norm()).max(1.0);
        let scale_b = b1.norm().max(b2.norm()).max(1.0);
        if (a1 - a2).norm() <= 1e-14 * scale_a {
            return Err(Error::DegenerateParameters("a1 = a2"));
        }
        if (b1 - b2).norm() <= 1e-14 * scale_b {
            return Err(Error::DegenerateParameters("b1 = b2"));
        }
        let c2 = c * c;
        let s2 = 1.0 - c2;
        let cs = c * s2.sqrt();
        let m11 = a1 * c2 + a2 * s2;
        let m12 = (a1 - a2) * cs;
        let m22 = a1 * s2 + a2 * c2;
        let matrix = ComplexMatrix::from_row_major(2, vec![m11 * b1, m12 * b2, m12 * b1, m22 * b2])
            .expect("2x2");
        let gamma = (a1 * b1 + a2 * b2) * c2 + (a1 * b2 + a2 * b1) * s2;
        let gamma_hat = ((a1 * b1 - a2 * b2) * c2 + (a2 * b1 - a1 * b2) * s2) * 0.5;
        Ok(Self {
            matrix,
            gamma,
            gamma_hat,
            a: [a1, a2],
            b: [b1, b2],
            c,
        })
    }

    /// {2|γ̂|² + (|b1|²+|b2|²)|a1−a2|²c²s² − 2|γ̂² + b1b2(a1−a2)²c²s²|}^{1/2}
    pub fn closed_form_minor_sq(&self) -> f64 {
        let [a1, a2] = self.a;
        let [b1, b2] = self.b;
        let c2s2 = self.c * self.c * (1.0 - self.c * self.c);
        let da = a1 - a2;
        2.0 * self.gamma_hat.norm_sqr() + (b1.norm_sqr() + b2.norm_sqr()) * da.norm_sqr() * c2s2
            - 2.0 * (self.gamma_hat * self.gamma_hat + b1 * b2 * da * da * c2s2).norm()
    }

    pub fn closed_form_minor(&self) -> f64 {
        self.closed_form_minor_sq().max(0.0).sqrt()
    }

    /// a1·a2·b1·b2, the product of the two foci.
    pub fn focal_product(&self) -> Complex64 {
        self.a[0] * self.a[1] * self.b[0] * self.b[1]
    }
}

/// E(a1,a2,b1,b2;γ): the numerical range of the product block, cross-checked against
/// the closed-form minor axis.
pub fn ellipse_general(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64, c: f64) -> Result<EllipseDisk> {
    let block = ProductBlock::new(a1, a2, b1, b2, c)?;
    let disk = ellipse_from_2x2(&block.matrix)?;
    let scale = block.matrix.norm().max(1.0);
    let discrepancy = (block.closed_form_minor_sq() - disk.minor_axis().powi(2)).abs();
    if discrepancy > 1e-9 * scale * scale {
        return Err(Error::Consistency(format!(
            "closed-form minor axis disagrees with the trace formula by {discrepancy:.3e}"
        )));
    }
    Ok(disk)
}

/// Grid sample of a support function with a boundary point attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportSample {
    pub theta: f64,
    pub value: f64,
    pub boundary_point: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Primitive {
    Ellipse(EllipseDisk),
    Point(Complex64),
}

impl Primitive {
    pub fn support(&self, theta: f64) -> f64 {
        match self {
            Primitive::Ellipse(e) => e.support(theta),
            Primitive::Point(z) => (Complex64::from_polar(1.0, -theta) * z).re,
        }
    }

    pub fn support_point(&self, theta: f64) -> Complex64 {
        match self {
            Primitive::Ellipse(e) => e.support_point(theta),
            Primitive::Point(z) => *z,
        }
    }
}

impl fmt::Display for Primitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Primitive::Ellipse(e) => write!(
                f,
                "ellipse foci=({}, {}) minor={}",
                format_complex(e.foci[0]),
                format_complex(e.foci[1]),
                format_real(e.minor_axis())
            ),
            Primitive::Point(z) => write!(f, "point {}", format_complex(*z)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorKind {
    Primitive(Primitive),
    /// The numerical range of an n×n matrix, computed by eigen-sweep.
    MatrixRange { dim: usize },
}

/// A primitive a region was built from, kept for reporting and plotting.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub label: String,
    pub kind: GeneratorKind,
}

impl Generator {
    pub fn primitive(&self) -> Option<&Primitive> {
        match &self.kind {
            GeneratorKind::Primitive(p) => Some(p),
            GeneratorKind::MatrixRange { .. } => None,
        }
    }
}

/// Convex set represented by its support function on a uniform angle grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexRegion {
    pub grid_size: usize,
    pub samples: Vec<SupportSample>,
    pub generators: Vec<Generator>,
}

pub fn grid_angle(k: usize, m: usize) -> f64 {
    TAU * k as f64 / m as f64
}

pub(crate) fn check_grid(m: usize) -> Result<()> {
    if m < 8 {
        Err(Error::GridTooCoarse(m))
    } else {
        Ok(())
    }
}

impl ConvexRegion {
    pub fn support_values(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.value).collect()
    }

    /// Sample at the grid angle nearest to `theta`.
    pub fn sample_near(&self, theta: f64) -> &SupportSample {
        let m = self.grid_size as f64;
        let k = ((theta.rem_euclid(TAU) / TAU * m).round() as usize) % self.grid_size;
        &self.samples[k]
    }

    pub fn boundary_points(&self) -> Vec<Complex64> {
        self.samples.iter().map(|s| s.boundary_point).collect()
    }

    /// Largest Re(e^{−iθ}z) − h(θ) over the grid; ≤ 0 for points inside the sampled hull.
    pub fn point_excess(&self, z: Complex64) -> f64 {
        self.samples
            .iter()
            .map(|s| (Complex64::from_polar(1.0, -s.theta) * z).re - s.value)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains_point(&self, z: Complex64, tol: f64) -> bool {
        self.point_excess(z) <= tol
    }

    /// Every recorded boundary point lies under every sampled support line.
    pub fn is_consistent(&self, tol: f64) -> bool {
        self.samples.len() == self.grid_size
            && self
                .samples
                .iter()
                .enumerate()
                .all(|(k, s)| (s.theta - grid_angle(k, self.grid_size)).abs() < 1e-12)
            && self
                .samples
                .iter()
                .all(|s| self.point_excess(s.boundary_point) <= tol)
    }

    /// Rows `theta,h,re,im`, preceded by a header and one `# generator` comment per generator.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for g in &self.generators {
            out.push_str(&format!("# generator: {}\n", g.label));
        }
        out.push_str("theta,h,re,im\n");
        for s in &self.samples {
            out.push_str(&format!(
                "{},{},{},{}\n",
                format_real(s.theta),
                format_real(s.value),
                format_real(s.boundary_point.re),
                format_real(s.boundary_point.im)
            ));
        }
        out
    }

    /// Reads the CSV written by [`ConvexRegion::to_csv`]; generator comments come back as
    /// labels of matrix-range generators.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut samples = Vec::new();
        let mut generators = Vec::new();
        let mut seen_header = false;
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix('#') {
                if let Some(label) = rest.trim().strip_prefix("generator:") {
                    generators.push(Generator {
                        label: label.trim().to_string(),
                        kind: GeneratorKind::MatrixRange { dim: 0 },
                    });
                }
                continue;
            }
            if !seen_header {
                if trimmed != "theta,h,re,im" {
                    return Err(Error::Parse {
                        line: line_no,
                        column: 1,
                        message: "expected header `theta,h,re,im`".into(),
                    });
                }
                seen_header = true;
                continue;
            }
            let mut vals = [0.0; 4];
            let mut fields = trimmed.split(',');
            let mut column = 1;
            for v in vals.iter_mut() {
                let field = fields.next().ok_or(Error::Parse {
                    line: line_no,
                    column,
                    message: "expected 4 fields".into(),
                })?;
                *v = field.trim().parse().map_err(|_| Error::Parse {
                    line: line_no,
                    column,
                    message: format!("cannot parse number `{field}`"),
                })?;
                column += field.len() + 1;
            }
            if fields.next().is_some() {
                return Err(Error::Parse {
                    line: line_no,
                    column,
                    message: "expected 4 fields".into(),
                });
            }
            samples.push(SupportSample {
                theta: vals[0],
                value: vals[1],
                boundary_point: Complex64::new(vals[2], vals[3]),
            });
        }
        Ok(Self {
            grid_size: samples.len(),
            samples,
            generators,
        })
    }
}

/// Convex hull of ellipses and points: h(θ) is the max of the primitives' supports.
pub fn hull_region(primitives: &[Primitive], m: usize) -> Result<ConvexRegion> {
    let labeled: Vec<(String, Primitive)> = primitives.iter().map(|p| (p.to_string(), *p)).collect();
    hull_region_labeled(&labeled, m)
}

pub fn hull_region_labeled(primitives: &[(String, Primitive)], m: usize) -> Result<ConvexRegion> {
    if primitives.is_empty() {
        return Err(Error::EmptyInput);
    }
    check_grid(m)?;
    let samples = (0..m)
        .map(|k| {
            let theta = grid_angle(k, m);
            let (best, value) = primitives
                .iter()
                .map(|(_, p)| (p, p.support(theta)))
                .fold((&primitives[0].1, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
            SupportSample {
                theta,
                value,
                boundary_point: best.support_point(theta),
            }
        })
        .collect();
    let generators = primitives
        .iter()
        .map(|(label, p)| Generator {
            label: label.clone(),
            kind: GeneratorKind::Primitive(*p),
        })
        .collect();
    Ok(ConvexRegion {
        grid_size: m,
        samples,
        generators,
    })
}

fn compare(lhs: &ConvexRegion, rhs: &ConvexRegion) -> Result<Vec<GapRow>> {
    if lhs.grid_size != rhs.grid_size || lhs.samples.len() != rhs.samples.len() {
        return Err(Error::GridMismatch(lhs.grid_size, rhs.grid_size));
    }
    Ok(lhs
        .samples
        .iter()
        .zip(&rhs.samples)
        .map(|(a, b)| GapRow {
            theta: a.theta,
            h_lhs: a.value,
            h_rhs: b.value,
            gap: a.value - b.value,
        })
        .collect())
}

/// inner ⊆ outer as support dominance; `max_gap` is the largest violation.
pub fn region_contains(outer: &ConvexRegion, inner: &ConvexRegion, tol: f64) -> Result<VerifyReport> {
    Ok(VerifyReport::containment("contains", compare(outer, inner)?, tol))
}

/// lhs = rhs as equality of support functions; `max_gap` is max |h_lhs − h_rhs|.
pub fn region_equal(lhs: &ConvexRegion, rhs: &ConvexRegion, tol: f64) -> Result<VerifyReport> {
    Ok(VerifyReport::equality("equal", compare(lhs, rhs)?, tol))
}

/// "E(λ)" with λ rounded to 10 decimals and trailing zeros dropped.
pub fn e_label(lambda: f64) -> String {
    let s = format!("{lambda:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    format!("E({s})")
}

/// Unique λ values to within `tol`, sorted descending.
pub(crate) fn dedup_sorted(values: &[f64], tol: f64) -> Vec<f64> {
    let mut v: Vec<f64> = values.to_vec();
    v.sort_by(|a, b| b.total_cmp(a));
    v.dedup_by(|a, b| (*a - *b).abs() <= tol);
    v
}
