//! The scalar Riemann problem `Φ⁺ = C·Φ⁻ + g` on a closed contour.
//!
//! The solution is assembled as `X(z)[Ψ(z) + P(z)]` where `X` is the
//! canonical function of `C`, `Ψ` the Cauchy integral of `g/X⁺` and `P` a
//! polynomial in `z - z0` whose coefficients are the free constants.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::boundary::BoundaryFunction;
use crate::contour::{winding_number, Contour, Region};
use crate::error::{Error, Result};
use crate::sectional::{SectionalFunction, Side};

/// Relative tolerance for declaring a solvability moment zero.
pub const DEFAULT_CONDITION_TOL: f64 = 1e-6;

/// Relative closure tolerance of the unwrapped logarithm, in turns.
const BRANCH_CLOSURE_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct ScalarRbvp {
    pub contour: Arc<Contour>,
    pub coefficient: BoundaryFunction,
    pub rhs: BoundaryFunction,
    pub vanish_at_infinity: bool,
    pub condition_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Unique,
    Family,
    Unsolvable,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Unique => "unique",
            Status::Family => "family",
            Status::Unsolvable => "unsolvable",
        }
    }
}

/// `X⁺ = e^Γ` inside and `X⁻ = (z - z0)^ℵ e^Γ` outside.
#[derive(Debug, Clone)]
pub struct Canonical {
    pub x: SectionalFunction,
    pub index: i64,
    pub z0: Complex64,
}

#[derive(Debug, Clone)]
pub struct ScalarSolution {
    pub status: Status,
    /// Absent when the problem is unsolvable.
    pub particular: Option<SectionalFunction>,
    /// `X(z)(z - z0)^j`, one per free complex constant.
    pub basis: Vec<SectionalFunction>,
    pub conditions: Vec<Complex64>,
    pub condition_tol: f64,
    pub index: i64,
    pub canonical: Canonical,
}

impl ScalarSolution {
    /// `particular + Σ c_j basis_j`.
    pub fn with_constants(&self, constants: &[Complex64]) -> Result<SectionalFunction> {
        let particular = self.particular.clone().ok_or(Error::ConstantCount {
            expected: 0,
            got: constants.len(),
        })?;
        if constants.len() != self.basis.len() {
            return Err(Error::ConstantCount {
                expected: self.basis.len(),
                got: constants.len(),
            });
        }
        let mut terms = vec![particular.clone()];
        for (b, &c) in self.basis.iter().zip(constants) {
            terms.push(b.scale(c));
        }
        Ok(SectionalFunction::sum(particular.contour().clone(), terms))
    }

    pub fn max_condition(&self) -> f64 {
        self.conditions.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// The Cauchy integral of `g`: `Φ⁺ - Φ⁻ = g`, `Φ⁻(∞) = 0`.
pub fn jump_solve(contour: Arc<Contour>, g: BoundaryFunction) -> Result<SectionalFunction> {
    SectionalFunction::cauchy(contour, g)
}

/// `ℵ` with the effective coefficient winding `-ℵ` around the origin.
pub fn index(coefficient: &BoundaryFunction) -> Result<i64> {
    Ok(-winding_number(coefficient.values())?.value)
}

/// Phase-unwrapped logarithm along the nodes, starting from the principal
/// value at node 0.
fn unwrapped_log(values: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = values.len();
    let mut out = Vec::with_capacity(n);
    let mut phase = values[0].arg();
    for k in 0..n {
        out.push(Complex64::new(values[k].norm().ln(), phase));
        phase += (values[(k + 1) % n] / values[k]).arg();
    }
    let mismatch = (phase - values[0].arg()).abs();
    if mismatch > BRANCH_CLOSURE_TOL * 2.0 * PI {
        return Err(Error::BranchNotClosed { mismatch });
    }
    Ok(out)
}

pub fn require_interior(contour: &Contour, z0: Complex64) -> Result<()> {
    if contour.locate(z0).tag != Region::Inside {
        return Err(Error::Domain(format!(
            "reference point {z0} is not strictly inside the contour"
        )));
    }
    Ok(())
}

/// The canonical function of `coefficient` with index `ℵ`.
pub fn canonical_function(
    contour: Arc<Contour>,
    coefficient: &BoundaryFunction,
    aleph: i64,
    z0: Complex64,
) -> Result<Canonical> {
    contour.check_samples(coefficient.values())?;
    require_interior(&contour, z0)?;
    let power =
        i32::try_from(aleph).map_err(|_| Error::Domain(format!("index {aleph} out of range")))?;
    let shifted: Vec<Complex64> = contour
        .nodes()
        .iter()
        .zip(coefficient.values())
        .map(|(&t, &c)| (t - z0).powi(power) * c)
        .collect();
    let log = unwrapped_log(&shifted)?;
    let gamma = SectionalFunction::cauchy(contour.clone(), BoundaryFunction::from_samples(log))?;
    let e = gamma.exp();
    let factor = SectionalFunction::monomial(contour, Complex64::new(1.0, 0.0), z0, power);
    let x = SectionalFunction::sided(e.clone(), factor.mul(&e));
    Ok(Canonical {
        x,
        index: aleph,
        z0,
    })
}

fn density(canonical: &Canonical, g: &BoundaryFunction) -> Result<BoundaryFunction> {
    let xp = canonical.x.boundary(Side::Plus)?;
    Ok(BoundaryFunction::from_samples(
        g.values().iter().zip(&xp).map(|(&g, &x)| g / x).collect(),
    ))
}

/// `Ψ`, the Cauchy integral of `g/X⁺`.
pub fn particular(canonical: &Canonical, g: &BoundaryFunction) -> Result<SectionalFunction> {
    let contour = canonical.x.contour().clone();
    contour.check_samples(g.values())?;
    SectionalFunction::cauchy(contour, density(canonical, g)?)
}

/// Number of solvability moments for the given regime.
pub fn condition_count(aleph: i64, vanish_at_infinity: bool) -> usize {
    let n = if vanish_at_infinity { aleph } else { aleph - 1 };
    n.max(0) as usize
}

/// Number of free complex constants for the given regime.
pub fn constant_count(aleph: i64, vanish_at_infinity: bool) -> usize {
    let n = if vanish_at_infinity {
        -aleph
    } else {
        1 - aleph
    };
    n.max(0) as usize
}

/// The moments `∮ (g/X⁺)(τ)(τ - z0)^{k-1} dτ`.
pub fn solvability(
    canonical: &Canonical,
    g: &BoundaryFunction,
    vanish_at_infinity: bool,
) -> Result<Vec<Complex64>> {
    let contour = canonical.x.contour();
    contour.check_samples(g.values())?;
    let count = condition_count(canonical.index, vanish_at_infinity);
    if count == 0 {
        return Ok(Vec::new());
    }
    let d = density(canonical, g)?;
    (0..count)
        .map(|k| {
            let f: Vec<Complex64> = d
                .values()
                .iter()
                .zip(contour.nodes())
                .map(|(&u, &t)| u * (t - canonical.z0).powi(k as i32))
                .collect();
            contour.integrate(&f)
        })
        .collect()
}

impl ScalarRbvp {
    pub fn new(
        contour: Arc<Contour>,
        coefficient: BoundaryFunction,
        rhs: BoundaryFunction,
        vanish_at_infinity: bool,
    ) -> Result<Self> {
        contour.check_samples(coefficient.values())?;
        contour.check_samples(rhs.values())?;
        let scale = coefficient.max_abs();
        if let Some(node) = coefficient
            .values()
            .iter()
            .position(|c| c.norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE))
        {
            return Err(Error::VanishingCoefficient { node });
        }
        Ok(Self {
            contour,
            coefficient,
            rhs,
            vanish_at_infinity,
            condition_tol: DEFAULT_CONDITION_TOL,
        })
    }

    pub fn with_condition_tol(mut self, tol: f64) -> Self {
        self.condition_tol = tol;
        self
    }

    pub fn solve(&self, z0: Complex64) -> Result<ScalarSolution> {
        let aleph = index(&self.coefficient)?;
        let canonical = canonical_function(self.contour.clone(), &self.coefficient, aleph, z0)?;
        let psi = particular(&canonical, &self.rhs)?;
        let conditions = solvability(&canonical, &self.rhs, self.vanish_at_infinity)?;
        let scale = density(&canonical, &self.rhs)?.max_abs() * self.contour.length();
        let tol = self.condition_tol * (1.0 + scale);
        let solvable = conditions.iter().all(|c| c.norm() < tol);
        log::debug!(
            "scalar problem: index {aleph}, {} conditions, solvable {solvable}",
            conditions.len()
        );

        let basis: Vec<SectionalFunction> = (0..constant_count(aleph, self.vanish_at_infinity))
            .map(|j| {
                let m = SectionalFunction::monomial(
                    self.contour.clone(),
                    Complex64::new(1.0, 0.0),
                    z0,
                    j as i32,
                );
                canonical.x.mul(&m)
            })
            .collect();
        let (status, particular) = if !solvable {
            (Status::Unsolvable, None)
        } else if basis.is_empty() {
            (Status::Unique, Some(canonical.x.mul(&psi)))
        } else {
            (Status::Family, Some(canonical.x.mul(&psi)))
        };
        let basis = if solvable { basis } else { Vec::new() };
        Ok(ScalarSolution {
            status,
            particular,
            basis,
            conditions,
            condition_tol: tol,
            index: aleph,
            canonical,
        })
    }

    /// `max |Φ⁺ - C Φ⁻ - rhs|` at the nodes; `homogeneous` drops the rhs.
    pub fn boundary_residual(&self, f: &SectionalFunction, homogeneous: bool) -> Result<f64> {
        let (plus, minus) = f.boundary_values()?;
        let zero = Complex64::new(0.0, 0.0);
        Ok((0..self.contour.len())
            .map(|k| {
                let g = if homogeneous {
                    zero
                } else {
                    self.rhs.values()[k]
                };
                (plus[k] - self.coefficient.values()[k] * minus[k] - g).norm()
            })
            .fold(0.0, f64::max))
    }
}
