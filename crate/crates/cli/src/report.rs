//! The JSON report written by `solve`.

use num_complex::Complex64;
use serde::Serialize;

use cliff_rbvp::rbvp::SubproblemReport;
use cliff_rbvp::verify::VerificationReport;
use cliff_rbvp::{CliffordSolution, Status};

/// Rounds to 10 significant digits so reports compare byte for byte.
pub fn sig10(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.9e}").parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
}

impl From<Complex64> for ComplexOut {
    fn from(z: Complex64) -> Self {
        Self {
            re: sig10(z.re),
            im: sig10(z.im),
            abs: sig10(z.norm()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubproblemOut {
    pub label: String,
    pub index: Option<i64>,
    pub solvable: bool,
    pub tolerance: f64,
    pub free_constants: usize,
    pub residuals: Vec<ComplexOut>,
}

impl From<&SubproblemReport> for SubproblemOut {
    fn from(s: &SubproblemReport) -> Self {
        Self {
            label: s.label.to_string(),
            index: s.index,
            solvable: s.solvable,
            tolerance: sig10(s.tolerance),
            free_constants: s.free_constants,
            residuals: s.residuals.iter().map(|&z| z.into()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChecksOut {
    pub boundary: bool,
    pub dirac: bool,
    /// Absent when the problem does not ask for decay.
    pub decay: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdsOut {
    pub boundary: f64,
    pub dirac: f64,
    pub decay: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationOut {
    pub boundary_residual_max: f64,
    pub dirac_residual_max: f64,
    pub dirac_step: f64,
    pub dirac_points: usize,
    /// `[radius, max |Φ|]` pairs.
    pub decay_values: Vec<[f64; 2]>,
    pub thresholds: ThresholdsOut,
    pub passed: ChecksOut,
}

impl From<&VerificationReport> for VerificationOut {
    fn from(v: &VerificationReport) -> Self {
        Self {
            boundary_residual_max: sig10(v.boundary_residual_max),
            dirac_residual_max: sig10(v.dirac_residual_max),
            dirac_step: sig10(v.dirac_step),
            dirac_points: v.dirac_points,
            decay_values: v
                .decay_values
                .iter()
                .map(|&(r, m)| [sig10(r), sig10(m)])
                .collect(),
            thresholds: ThresholdsOut {
                boundary: v.thresholds.boundary,
                dirac: v.thresholds.dirac,
                decay: v.thresholds.decay,
            },
            passed: ChecksOut {
                boundary: v.boundary_passed(),
                dirac: v.dirac_passed(),
                decay: v.decay_passed(),
            },
        }
    }
}

/// Wall-clock figures, kept apart from the reproducible part.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub solve_seconds: f64,
    pub verify_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub nodes: usize,
    pub regime: String,
    pub index: Option<i64>,
    pub status: String,
    pub conformal_transport: bool,
    pub free_constant_count: usize,
    pub infinite_family: bool,
    pub subproblems: Vec<SubproblemOut>,
    /// Run with all free constants zero; absent when unsolvable.
    pub verification: Option<VerificationOut>,
    pub timing: Timing,
}

impl SolveReport {
    pub fn new(
        nodes: usize,
        conformal_transport: bool,
        solution: &CliffordSolution,
        verification: Option<&VerificationReport>,
        timing: Timing,
    ) -> Self {
        Self {
            nodes,
            regime: solution.regime.as_str().to_string(),
            index: solution.index,
            status: solution.status.as_str().to_string(),
            conformal_transport,
            free_constant_count: solution.free_constant_count(),
            infinite_family: solution.infinite_family,
            subproblems: solution
                .subproblems
                .iter()
                .map(SubproblemOut::from)
                .collect(),
            verification: verification.map(VerificationOut::from),
            timing,
        }
    }

    pub fn solved(&self) -> bool {
        self.status != Status::Unsolvable.as_str()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_keeps_ten_digits() {
        assert_eq!(sig10(1.234_567_890_123), 1.23456789);
        assert_eq!(sig10(-1.23456789012345e-17), -1.234567890e-17);
        assert_eq!(sig10(0.0), 0.0);
        assert!(sig10(f64::NAN).is_nan());
    }
}
