use std::f64::consts::TAU;
use std::fmt::Write as _;

use serde::Serialize;

use crate::matkernel::format_real;

/// One grid angle of a two-sided support comparison; `gap = h_lhs − h_rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapRow {
    pub theta: f64,
    pub h_lhs: f64,
    pub h_rhs: f64,
    pub gap: f64,
}

/// Outcome of a numerical check against a tolerance. `pass ⇔ max_gap ≤ tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub name: String,
    pub grid_size: usize,
    pub max_gap: f64,
    pub worst_theta: f64,
    pub pass: bool,
    pub tolerance: f64,
    /// Verdict a theorem or fixture mandates, when one applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_pass: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<GapRow>>,
}

impl VerifyReport {
    /// Containment of rhs in lhs: the measure is the largest amount by which rhs pokes out.
    pub fn containment(name: impl Into<String>, rows: Vec<GapRow>, tolerance: f64) -> Self {
        let (worst_theta, min_gap) = rows
            .iter()
            .map(|r| (r.theta, r.gap))
            .fold((0.0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        let max_gap = if rows.is_empty() { 0.0 } else { (-min_gap).max(0.0) };
        Self::build(name, rows, max_gap, worst_theta, tolerance)
    }

    /// Equality of the two support functions: the measure is max |gap|.
    pub fn equality(name: impl Into<String>, rows: Vec<GapRow>, tolerance: f64) -> Self {
        let (worst_theta, max_gap) = rows
            .iter()
            .map(|r| (r.theta, r.gap.abs()))
            .fold((0.0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        Self::build(name, rows, max_gap, worst_theta, tolerance)
    }

    /// A check with a single scalar discrepancy and no angle grid.
    pub fn scalar(name: impl Into<String>, discrepancy: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            grid_size: 0,
            max_gap: discrepancy,
            worst_theta: 0.0,
            pass: discrepancy <= tolerance,
            tolerance,
            expected_pass: None,
            samples: None,
        }
    }

    fn build(name: impl Into<String>, rows: Vec<GapRow>, max_gap: f64, worst_theta: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            grid_size: rows.len(),
            max_gap,
            worst_theta,
            pass: max_gap <= tolerance,
            tolerance,
            expected_pass: None,
            samples: Some(rows),
        }
    }

    pub fn expecting(mut self, pass: bool) -> Self {
        self.expected_pass = Some(pass);
        self
    }

    /// Re-judges the same measurement against another tolerance.
    pub fn tolerance_override(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.pass = self.max_gap <= tolerance;
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn without_samples(mut self) -> Self {
        self.samples = None;
        self
    }

    /// The verdict agrees with the mandated one (or none is mandated).
    pub fn ok(&self) -> bool {
        self.expected_pass.is_none_or(|e| e == self.pass)
    }

    /// Counts as a success in a suite: passes, or fails where failure is mandated.
    pub fn as_expected(&self) -> bool {
        self.pass == self.expected_pass.unwrap_or(true)
    }

    pub fn rows(&self) -> &[GapRow] {
        self.samples.as_deref().unwrap_or(&[])
    }

    /// Row at the grid angle nearest to `theta`.
    pub fn row_near(&self, theta: f64) -> Option<&GapRow> {
        let t = theta.rem_euclid(TAU);
        self.rows().iter().min_by(|a, b| {
            angle_distance(a.theta, t).total_cmp(&angle_distance(b.theta, t))
        })
    }

    pub fn min_gap(&self) -> f64 {
        self.rows().iter().map(|r| r.gap).fold(f64::INFINITY, f64::min)
    }

    pub fn max_abs_gap(&self) -> f64 {
        self.rows().iter().map(|r| r.gap.abs()).fold(0.0, f64::max)
    }

    pub fn verdict_line(&self) -> String {
        format!(
            "{} max_gap={}",
            if self.pass { "PASS" } else { "FAIL" },
            format_real(self.max_gap)
        )
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,h_lhs,h_rhs,gap\n");
        for r in self.rows() {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                format_real(r.theta),
                format_real(r.h_lhs),
                format_real(r.h_rhs),
                format_real(r.gap)
            );
        }
        out
    }
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}
