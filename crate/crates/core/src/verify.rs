//! Independent numerical checks of a computed solution.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::clifford::CliffordElement;
use crate::contour::Contour;
use crate::error::{near_boundary, Error, Result};
use crate::rbvp::{CliffordRbvp, CliffordSolution};

pub const DEFAULT_BOUNDARY_TOL: f64 = 1e-6;
pub const DEFAULT_DIRAC_TOL: f64 = 1e-5;
pub const DEFAULT_DIRAC_STEP: f64 = 1e-3;
pub const DEFAULT_DECAY_TOL: f64 = 1e-2;
pub const DEFAULT_DECAY_RADII: [f64; 2] = [1e2, 1e3];

const DECAY_DIRECTIONS: usize = 16;
const PROBE_POINTS_PER_CIRCLE: usize = 16;

/// Max norm of `e1 ∂Φ/∂x1 + e2 ∂Φ/∂x2` by central differences of step `h`.
/// Stencils closer than `2h` (plus the refusal band) to the curve are
/// rejected.
pub fn dirac_residual(
    contour: &Contour,
    phi: impl Fn(Complex64) -> Result<CliffordElement>,
    points: &[Complex64],
    h: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &z in points {
        let d = contour.distance(z);
        if d < 2.0 * h + contour.band() {
            return Err(near_boundary(z, d));
        }
        let dx = (phi(z + h)? - phi(z - h)?).scale(0.5 / h);
        let dy =
            (phi(z + Complex64::new(0.0, h))? - phi(z - Complex64::new(0.0, h))?).scale(0.5 / h);
        let r = CliffordElement::E1 * dx + CliffordElement::E2 * dy;
        worst = worst.max(r.norm());
    }
    Ok(worst)
}

/// `(r, max |Φ|)` over 16 directions around the origin for each radius.
pub fn decay_check(
    contour: &Contour,
    phi: impl Fn(Complex64) -> Result<CliffordElement>,
    radii: &[f64],
) -> Result<Vec<(f64, f64)>> {
    let reach = contour.nodes().iter().map(|t| t.norm()).fold(0.0, f64::max);
    radii
        .iter()
        .map(|&r| {
            if r <= 2.0 * reach {
                return Err(Error::Domain(format!(
                    "decay radius {r} must exceed twice the curve's extent {reach}"
                )));
            }
            let mut m = 0.0f64;
            for j in 0..DECAY_DIRECTIONS {
                let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / DECAY_DIRECTIONS as f64);
                m = m.max(phi(z)?.norm());
            }
            Ok((r, m))
        })
        .collect()
}

/// 64 points on two concentric circles on each side of the curve.
pub fn probe_points(contour: &Contour) -> Vec<Complex64> {
    let center = contour.centroid();
    let r = contour.circumradius();
    let mut out = Vec::with_capacity(4 * PROBE_POINTS_PER_CIRCLE);
    for scale in [0.3, 0.6, 1.5, 2.5] {
        for j in 0..PROBE_POINTS_PER_CIRCLE {
            // offset by half a step so probes avoid the symmetry axes
            let angle = 2.0 * PI * (j as f64 + 0.5) / PROBE_POINTS_PER_CIRCLE as f64;
            out.push(center + Complex64::from_polar(scale * r, angle));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub boundary: f64,
    pub dirac: f64,
    pub dirac_step: f64,
    pub decay: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self {
            boundary: DEFAULT_BOUNDARY_TOL,
            dirac: DEFAULT_DIRAC_TOL,
            dirac_step: DEFAULT_DIRAC_STEP,
            decay: DEFAULT_DECAY_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub dirac_residual_max: f64,
    pub dirac_step: f64,
    pub dirac_points: usize,
    pub boundary_residual_max: f64,
    /// Empty unless the problem asks for decay at infinity.
    pub decay_values: Vec<(f64, f64)>,
    pub thresholds: Thresholds,
}

impl VerificationReport {
    pub fn dirac_passed(&self) -> bool {
        self.dirac_residual_max < self.thresholds.dirac
    }

    pub fn boundary_passed(&self) -> bool {
        self.boundary_residual_max < self.thresholds.boundary
    }

    /// `None` when decay was not requested.
    pub fn decay_passed(&self) -> Option<bool> {
        self.decay_values
            .last()
            .map(|&(_, m)| m < self.thresholds.decay)
    }

    pub fn passed(&self) -> bool {
        self.dirac_passed() && self.boundary_passed() && self.decay_passed().unwrap_or(true)
    }
}

/// Runs all three checks for a solved problem with the given constants.
pub fn verify(
    problem: &CliffordRbvp,
    solution: &CliffordSolution,
    constants: &[Complex64],
    thresholds: Thresholds,
) -> Result<VerificationReport> {
    let contour = &problem.contour;
    // the nominal step is for curves of unit size; smaller curves get a
    // proportionally finer stencil
    let h = thresholds.dirac_step * contour.circumradius().min(1.0);
    let phi = |z: Complex64| solution.evaluate_at(z, constants);
    // probes in a closed form's pole or too near the curve are skipped
    let points: Vec<Complex64> = probe_points(contour)
        .into_iter()
        .filter(|&z| contour.distance(z) >= 2.0 * h + contour.band())
        .filter(|&z| phi(z).is_ok_and(|v| v.norm().is_finite() && v.norm() < 1e3))
        .collect();
    let dirac = dirac_residual(contour, phi, &points, h)?;
    let boundary = problem.boundary_residual(solution, constants)?;
    let decay_values = if problem.vanish_at_infinity {
        let reach = contour.nodes().iter().map(|t| t.norm()).fold(0.0, f64::max);
        let radii: Vec<f64> = DEFAULT_DECAY_RADII
            .iter()
            .map(|&r| r.max(4.0 * reach))
            .collect();
        decay_check(contour, phi, &radii)?
    } else {
        Vec::new()
    };
    Ok(VerificationReport {
        dirac_residual_max: dirac,
        dirac_step: h,
        dirac_points: points.len(),
        boundary_residual_max: boundary,
        decay_values,
        thresholds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    use crate::clifford::{alpha, from_hat};
    use crate::expr::parse;
    use crate::rbvp::{HatData, SolveOptions};
    use crate::sectional::SectionalFunction;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn far_points() -> Vec<Complex64> {
        vec![c(3.0, 0.0), c(0.0, 4.0), c(-5.0, 2.0)]
    }

    #[test]
    fn dirac_examples() {
        let k = Contour::unit_circle(64).unwrap();
        let h = 1e-3;
        let constant = |_z: Complex64| Ok(CliffordElement::new(1.0, 2.0, 3.0, 4.0));
        assert!(dirac_residual(&k, constant, &far_points(), h).unwrap() < 1e-12);
        let linear = |z: Complex64| Ok(-(CliffordElement::E1 * alpha(z)));
        assert!(dirac_residual(&k, linear, &far_points(), h).unwrap() < 1e-10);
        let scalar = |z: Complex64| Ok(CliffordElement::scalar(z.re));
        assert!((dirac_residual(&k, scalar, &far_points(), h).unwrap() - 1.0).abs() < 1e-8);
        assert!(dirac_residual(&k, constant, &[c(1.0005, 0.0)], h).is_err());
    }

    #[test]
    fn dirac_is_second_order() {
        // Φ̂ = (conj(1/z), 1/z) is monogenic off the origin
        let k = Contour::unit_circle(64).unwrap();
        let phi = |z: Complex64| Ok(from_hat((1.0 / z).conj(), 1.0 / z));
        let pts = [c(2.0, 0.5)];
        let r1 = dirac_residual(&k, phi, &pts, 1e-2).unwrap();
        let r2 = dirac_residual(&k, phi, &pts, 5e-3).unwrap();
        let r3 = dirac_residual(&k, phi, &pts, 2.5e-3).unwrap();
        assert!((r1 / r2 - 4.0).abs() < 0.1 && (r2 / r3 - 4.0).abs() < 0.1);
    }

    #[test]
    fn decay_examples() {
        let k = Contour::circle(c(0.5, 0.0), 1.0, 64).unwrap();
        let phi = |z: Complex64| {
            (-(CliffordElement::E1 * alpha(z)))
                .inverse()
                .map(|v| v.scale(-2.0))
        };
        let d = decay_check(&k, phi, &[1e3, 1e4]).unwrap();
        assert!((d[0].1 - 2e-3).abs() < 1e-12 && (d[1].1 - 2e-4).abs() < 1e-12);
        let one = |_z: Complex64| Ok(CliffordElement::ONE);
        assert_eq!(decay_check(&k, one, &[1e3]).unwrap()[0].1, 1.0);
        assert!(decay_check(&k, one, &[2.0]).is_err());
    }

    #[test]
    fn jump_problem_verifies_and_perturbation_is_detected() {
        let k = Arc::new(Contour::unit_circle(256).unwrap());
        let coefficient = HatData::constant(&k, c(1.0, 0.0), c(0.0, 0.0));
        let data = HatData::from_exprs(&k, &parse("1/(t-2)").unwrap(), &parse("t^2+1/t").unwrap())
            .unwrap();
        let p = CliffordRbvp::new(k.clone(), coefficient, data, true).unwrap();
        let s = p.solve(&SolveOptions::default()).unwrap();
        let report = verify(&p, &s, &[], Thresholds::default()).unwrap();
        assert!(report.boundary_residual_max < 1e-12, "{report:?}");
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.dirac_points, 64);

        let mut bumped = s.clone();
        let pair = bumped.particular.as_mut().unwrap();
        pair.upsilon1 =
            SectionalFunction::sided(pair.upsilon1.shifted(c(0.1, 0.0)), pair.upsilon1.clone());
        let r = p.boundary_residual(&bumped, &[]).unwrap();
        assert!(r >= 0.05);
    }
}
