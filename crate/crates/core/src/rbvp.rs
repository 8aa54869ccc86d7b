//! The Clifford problem `Φ⁺ - GΦ⁻ = g` on a closed curve.
//!
//! Coefficient and data enter through their hat images `(Ĝ0, Ĝ1)` and
//! `(ĝ0, ĝ1)`. The unknown is carried as a pair of sectionally holomorphic
//! functions `(Υ0, Υ1)` with `Φ = β⁻¹(conj Υ0) + e1 β⁻¹(Υ1)`, which turns the
//! problem into
//!
//! ```text
//! conj(Υ0⁺) - Ĝ0 conj(Υ0⁻) + conj(Ĝ1) Υ1⁻ = ĝ0
//! Υ1⁺ - Ĝ1 conj(Υ0⁻) - conj(Ĝ0) Υ1⁻        = ĝ1
//! ```
//!
//! Two regimes are solvable: a vanishing odd part `Ĝ1 ≡ 0` (two scalar
//! problems sharing the coefficient `conj(Ĝ0)`) and constant coefficients
//! on the unit circle (decoupled through inversion).

use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::boundary::BoundaryFunction;
use crate::cauchy::plemelj;
use crate::clifford::{alpha_inv, from_hat, hat_transform, to_hat, CliffordElement};
use crate::contour::{Contour, Region};
use crate::error::{near_boundary, Error, Result};
use crate::expr::Expr;
use crate::scalar::{ScalarRbvp, Status, DEFAULT_CONDITION_TOL};
use crate::sectional::{SectionalFunction, Side};
use crate::spectral;

/// Relative tolerance for regime classification.
pub const REGIME_TOL: f64 = 1e-10;

const ROUND_TRIP_TOL: f64 = 1e-10;
const ROUND_TRIP_POINTS: usize = 32;

/// Relative size of the top Fourier modes beyond which data is flagged.
const UNDER_RESOLVED: f64 = 1e-8;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Hat images `(F0, F1)` of a Clifford-valued function sampled on the nodes.
#[derive(Debug, Clone)]
pub struct HatData {
    pub even: BoundaryFunction,
    pub odd: BoundaryFunction,
    odd_is_literal_zero: bool,
}

impl HatData {
    pub fn new(even: BoundaryFunction, odd: BoundaryFunction) -> Self {
        Self {
            even,
            odd,
            odd_is_literal_zero: false,
        }
    }

    /// Samples expressions for `F0` and `F1` in `t`.
    pub fn from_exprs(contour: &Contour, even: &Expr, odd: &Expr) -> Result<Self> {
        Ok(Self {
            even: BoundaryFunction::from_expr(contour, even)?,
            odd: BoundaryFunction::from_expr(contour, odd)?,
            odd_is_literal_zero: odd.is_literal_zero(),
        })
    }

    pub fn from_samples(contour: &Contour, samples: &[CliffordElement]) -> Result<Self> {
        if samples.len() != contour.len() {
            return Err(Error::SampleCount {
                expected: contour.len(),
                got: samples.len(),
            });
        }
        let hat = hat_transform(samples);
        Ok(Self::new(hat.even.into(), hat.odd.into()))
    }

    /// `a + e1 β⁻¹(b)` style constant `(F0, F1) = (a, b)`.
    pub fn constant(contour: &Contour, a: Complex64, b: Complex64) -> Self {
        Self {
            even: BoundaryFunction::constant(contour, a),
            odd: BoundaryFunction::constant(contour, b),
            odd_is_literal_zero: b == zero(),
        }
    }

    pub fn reconstruct(&self) -> Vec<CliffordElement> {
        self.even
            .values()
            .iter()
            .zip(self.odd.values())
            .map(|(&f0, &f1)| from_hat(f0, f1))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    NullOdd,
    Constant { a: Complex64, b: Complex64 },
    General,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::NullOdd => "null_odd",
            Regime::Constant { .. } => "constant",
            Regime::General => "general",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReducedSystem {
    pub coefficient: HatData,
    pub data: HatData,
    pub regime: Regime,
}

impl ReducedSystem {
    /// `β⁻¹(Ĝ0) + e1 β⁻¹(Ĝ1)` at each node.
    pub fn reconstruct_coefficient(&self) -> Vec<CliffordElement> {
        self.coefficient.reconstruct()
    }
}

#[derive(Debug, Clone)]
pub struct CliffordRbvp {
    pub contour: Arc<Contour>,
    pub coefficient: HatData,
    pub data: HatData,
    pub vanish_at_infinity: bool,
}

/// Which homogeneous solutions the constant case with `a = 0` generates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FamilyKind {
    /// `Λ⁺ = zⁿ`, `Λ⁻ = 0`.
    Interior,
    /// `Λ⁺ = 0`, `Λ⁻ = z⁻ⁿ`; gives `Φ⁺ = (-e1x)ⁿ` when `b = 1`.
    #[default]
    Exterior,
    /// `Λ⁺ = zⁿ`, `Λ⁻ = z⁻ⁿ` together.
    Paired,
}

impl FamilyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyKind::Interior => "interior",
            FamilyKind::Exterior => "exterior",
            FamilyKind::Paired => "paired",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Reference point for `(z - z0)^ℵ`; defaults to the node centroid.
    pub z0: Option<Complex64>,
    pub condition_tol: f64,
    /// Number of members generated when the solution set is infinite.
    pub family_count: usize,
    pub family_kind: FamilyKind,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            z0: None,
            condition_tol: DEFAULT_CONDITION_TOL,
            family_count: 3,
            family_kind: FamilyKind::Exterior,
        }
    }
}

/// `(Υ0, Υ1)`.
#[derive(Debug, Clone)]
pub struct UpsilonPair {
    pub upsilon0: SectionalFunction,
    pub upsilon1: SectionalFunction,
}

impl UpsilonPair {
    fn map(&self, f: impl Fn(&SectionalFunction) -> Result<SectionalFunction>) -> Result<Self> {
        Ok(Self {
            upsilon0: f(&self.upsilon0)?,
            upsilon1: f(&self.upsilon1)?,
        })
    }
}

/// Solvability record of one scalar sub-problem or condition set.
#[derive(Debug, Clone)]
pub struct SubproblemReport {
    pub label: &'static str,
    pub index: Option<i64>,
    pub solvable: bool,
    pub residuals: Vec<Complex64>,
    pub tolerance: f64,
    pub free_constants: usize,
}

#[derive(Debug, Clone)]
pub struct CliffordSolution {
    pub regime: Regime,
    pub status: Status,
    /// `ℵ = Ind(Ĝ0)` when defined.
    pub index: Option<i64>,
    pub particular: Option<UpsilonPair>,
    /// Free directions. A constant `c` enters as `conj(c)` on `Υ0` and `c`
    /// on `Υ1`, i.e. as right multiplication of `Φ` by `β⁻¹(c)`.
    pub basis: Vec<UpsilonPair>,
    /// Set when `basis` lists only the first members of an infinite family.
    pub infinite_family: bool,
    pub subproblems: Vec<SubproblemReport>,
}

fn hat_of(u0: Complex64, u1: Complex64) -> CliffordElement {
    from_hat(u0.conj(), u1)
}

impl CliffordSolution {
    pub fn free_constant_count(&self) -> usize {
        self.basis.len()
    }

    fn particular(&self) -> Result<&UpsilonPair> {
        self.particular.as_ref().ok_or(Error::Unsolvable)
    }

    fn check_constants(&self, constants: &[Complex64]) -> Result<()> {
        if constants.len() != self.basis.len() {
            return Err(Error::ConstantCount {
                expected: self.basis.len(),
                got: constants.len(),
            });
        }
        Ok(())
    }

    /// The combined `(Υ0, Υ1)` for the given constants.
    pub fn upsilon(&self, constants: &[Complex64]) -> Result<UpsilonPair> {
        self.check_constants(constants)?;
        let p = self.particular()?;
        let contour = p.upsilon0.contour().clone();
        let mut t0 = vec![p.upsilon0.clone()];
        let mut t1 = vec![p.upsilon1.clone()];
        for (b, &c) in self.basis.iter().zip(constants) {
            t0.push(b.upsilon0.scale(c.conj()));
            t1.push(b.upsilon1.scale(c));
        }
        Ok(UpsilonPair {
            upsilon0: SectionalFunction::sum(contour.clone(), t0),
            upsilon1: SectionalFunction::sum(contour, t1),
        })
    }

    /// `Φ` at `z` using the branch of `side`.
    pub fn phi_at(
        &self,
        z: Complex64,
        side: Side,
        constants: &[Complex64],
    ) -> Result<CliffordElement> {
        self.check_constants(constants)?;
        let p = self.particular()?;
        let mut u0 = p.upsilon0.eval_side(z, side)?;
        let mut u1 = p.upsilon1.eval_side(z, side)?;
        for (b, &c) in self.basis.iter().zip(constants) {
            u0 += c.conj() * b.upsilon0.eval_side(z, side)?;
            u1 += c * b.upsilon1.eval_side(z, side)?;
        }
        Ok(hat_of(u0, u1))
    }

    /// `Φ(x)` for a vector `x` off the curve.
    pub fn evaluate_phi(
        &self,
        x: CliffordElement,
        constants: &[Complex64],
    ) -> Result<CliffordElement> {
        let z = alpha_inv(x)?;
        self.evaluate_at(z, constants)
    }

    pub fn evaluate_at(&self, z: Complex64, constants: &[Complex64]) -> Result<CliffordElement> {
        let contour = self.particular()?.upsilon0.contour().clone();
        let loc = contour.locate(z);
        match loc.tag {
            Region::Inside => self.phi_at(z, Side::Plus, constants),
            Region::Outside => self.phi_at(z, Side::Minus, constants),
            Region::NearBoundary => Err(near_boundary(z, loc.distance_estimate)),
        }
    }

    /// `(Φ⁺, Φ⁻)` at the nodes from Plemelj boundary values.
    pub fn boundary_phi(
        &self,
        constants: &[Complex64],
    ) -> Result<(Vec<CliffordElement>, Vec<CliffordElement>)> {
        let u = self.upsilon(constants)?;
        let (p0, m0) = u.upsilon0.boundary_values()?;
        let (p1, m1) = u.upsilon1.boundary_values()?;
        let plus = p0.iter().zip(&p1).map(|(&a, &b)| hat_of(a, b)).collect();
        let minus = m0.iter().zip(&m1).map(|(&a, &b)| hat_of(a, b)).collect();
        Ok((plus, minus))
    }

    /// Least-squares constants matching `targets` at `points`; returns the
    /// constants and the largest componentwise mismatch after the fit.
    pub fn fit_constants(
        &self,
        points: &[Complex64],
        targets: &[CliffordElement],
    ) -> Result<(Vec<Complex64>, f64)> {
        let p = self.particular()?;
        let contour = p.upsilon0.contour().clone();
        let m = self.basis.len();
        let rows = 2 * points.len();
        let mut a = DMatrix::<Complex64>::zeros(rows, m);
        let mut rhs = DVector::<Complex64>::zeros(rows);
        for (i, (&z, &target)) in points.iter().zip(targets).enumerate() {
            let side = match contour.locate(z).tag {
                Region::Inside => Side::Plus,
                Region::Outside => Side::Minus,
                Region::NearBoundary => return Err(near_boundary(z, contour.distance(z))),
            };
            let (t0, t1) = to_hat(target);
            rhs[2 * i] = t0 - p.upsilon0.eval_side(z, side)?.conj();
            rhs[2 * i + 1] = t1 - p.upsilon1.eval_side(z, side)?;
            for (j, b) in self.basis.iter().enumerate() {
                a[(2 * i, j)] = b.upsilon0.eval_side(z, side)?.conj();
                a[(2 * i + 1, j)] = b.upsilon1.eval_side(z, side)?;
            }
        }
        let constants: Vec<Complex64> = if m == 0 {
            Vec::new()
        } else {
            a.svd(true, true)
                .solve(&rhs, 1e-14)
                .map_err(|e| Error::Domain(e.to_string()))?
                .iter()
                .copied()
                .collect()
        };
        let mut worst = 0.0f64;
        for (&z, &target) in points.iter().zip(targets) {
            worst = worst.max(self.evaluate_at(z, &constants)?.max_abs_diff(target));
        }
        Ok((constants, worst))
    }

    /// Re-expresses every sectional function on `contour` through `z ↦ f(χ±(z))`.
    fn composed_with(
        &self,
        contour: &Arc<Contour>,
        chi_plus: &Expr,
        chi_minus: &Expr,
    ) -> Result<Self> {
        let back = |f: &SectionalFunction| {
            SectionalFunction::composed(
                contour.clone(),
                f.clone(),
                chi_plus.clone(),
                chi_minus.clone(),
            )
        };
        Ok(Self {
            particular: self.particular.as_ref().map(|p| p.map(back)).transpose()?,
            basis: self
                .basis
                .iter()
                .map(|b| b.map(back))
                .collect::<Result<_>>()?,
            ..self.clone()
        })
    }
}

impl CliffordRbvp {
    pub fn new(
        contour: Arc<Contour>,
        coefficient: HatData,
        data: HatData,
        vanish_at_infinity: bool,
    ) -> Result<Self> {
        for f in [&coefficient.even, &coefficient.odd, &data.even, &data.odd] {
            contour.check_samples(f.values())?;
        }
        let sq: Vec<f64> = coefficient
            .even
            .values()
            .iter()
            .zip(coefficient.odd.values())
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect();
        let scale = sq.iter().copied().fold(0.0, f64::max);
        if let Some(node) = sq.iter().position(|&s| s <= 1e-28 * scale || s == 0.0) {
            return Err(Error::VanishingCoefficient { node });
        }
        Ok(Self {
            contour,
            coefficient,
            data,
            vanish_at_infinity,
        })
    }

    /// Classifies the coefficient and packages the hat images.
    pub fn reduce(&self) -> ReducedSystem {
        let g0 = &self.coefficient.even;
        let g1 = &self.coefficient.odd;
        let regime = if self.coefficient.odd_is_literal_zero
            || g1.max_abs() <= REGIME_TOL * g0.max_abs()
        {
            Regime::NullOdd
        } else if g0.variation() <= REGIME_TOL * g0.max_abs().max(g1.max_abs())
            && g1.variation() <= REGIME_TOL * g0.max_abs().max(g1.max_abs())
        {
            let mean = |f: &BoundaryFunction| f.values().iter().sum::<Complex64>() / f.len() as f64;
            Regime::Constant {
                a: mean(g0),
                b: mean(g1),
            }
        } else {
            Regime::General
        };
        log::debug!("regime {}", regime.as_str());
        ReducedSystem {
            coefficient: self.coefficient.clone(),
            data: self.data.clone(),
            regime,
        }
    }

    pub fn solve(&self, opts: &SolveOptions) -> Result<CliffordSolution> {
        for (name, f) in [
            ("coefficient", &self.coefficient.even),
            ("coefficient", &self.coefficient.odd),
            ("data", &self.data.even),
            ("data", &self.data.odd),
        ] {
            let tail = spectral::tail_ratio(f.values());
            if tail > UNDER_RESOLVED {
                log::warn!(
                    "{name} is under-resolved on {} nodes (tail ratio {tail:.1e})",
                    self.contour.len()
                );
            }
        }
        let reduced = self.reduce();
        match reduced.regime {
            Regime::NullOdd => {
                solve_null_odd(&self.contour, &reduced, self.vanish_at_infinity, opts)
            }
            Regime::Constant { a, b } => {
                if !self.vanish_at_infinity {
                    return Err(Error::Domain(
                        "constant-coefficient problems are solved under vanishing at infinity"
                            .into(),
                    ));
                }
                solve_constant(
                    &self.contour,
                    a,
                    b,
                    &reduced.data.even,
                    &reduced.data.odd,
                    opts,
                )
            }
            Regime::General => Err(Error::GeneralRegime),
        }
    }

    /// `max |Φ⁺ - GΦ⁻ - g|` over the nodes.
    pub fn boundary_residual(
        &self,
        solution: &CliffordSolution,
        constants: &[Complex64],
    ) -> Result<f64> {
        let (plus, minus) = solution.boundary_phi(constants)?;
        let g = self.coefficient.reconstruct();
        let rhs = self.data.reconstruct();
        Ok((0..self.contour.len())
            .map(|k| (plus[k] - g[k] * minus[k] - rhs[k]).norm())
            .fold(0.0, f64::max))
    }
}

pub fn solve_null_odd(
    contour: &Arc<Contour>,
    reduced: &ReducedSystem,
    vanish_at_infinity: bool,
    opts: &SolveOptions,
) -> Result<CliffordSolution> {
    if reduced.regime != Regime::NullOdd {
        return Err(Error::WrongRegime {
            expected: "null_odd",
            found: reduced.regime.as_str(),
        });
    }
    let z0 = opts.z0.unwrap_or_else(|| contour.centroid());
    let coefficient = reduced.coefficient.even.conj();
    let problems = [
        ("upsilon0", reduced.data.even.conj()),
        ("upsilon1", reduced.data.odd.clone()),
    ];
    let mut solutions = Vec::with_capacity(2);
    let mut subproblems = Vec::with_capacity(2);
    for (label, rhs) in problems {
        let s = ScalarRbvp::new(
            contour.clone(),
            coefficient.clone(),
            rhs,
            vanish_at_infinity,
        )?
        .with_condition_tol(opts.condition_tol)
        .solve(z0)?;
        subproblems.push(SubproblemReport {
            label,
            index: Some(s.index),
            solvable: s.status != Status::Unsolvable,
            residuals: s.conditions.clone(),
            tolerance: s.condition_tol,
            free_constants: s.basis.len(),
        });
        solutions.push(s);
    }
    let index = solutions[0].index;
    let zero_fn = SectionalFunction::zero(contour.clone());
    let [s0, s1] = <[_; 2]>::try_from(solutions).expect("two sub-problems");
    let (status, particular, basis) = match (s0.particular, s1.particular) {
        (Some(p0), Some(p1)) => {
            let mut basis: Vec<UpsilonPair> = s0
                .basis
                .into_iter()
                .map(|b| UpsilonPair {
                    upsilon0: b,
                    upsilon1: zero_fn.clone(),
                })
                .collect();
            basis.extend(s1.basis.into_iter().map(|b| UpsilonPair {
                upsilon0: zero_fn.clone(),
                upsilon1: b,
            }));
            let status = if basis.is_empty() {
                Status::Unique
            } else {
                Status::Family
            };
            (
                status,
                Some(UpsilonPair {
                    upsilon0: p0,
                    upsilon1: p1,
                }),
                basis,
            )
        }
        _ => (Status::Unsolvable, None, Vec::new()),
    };
    Ok(CliffordSolution {
        regime: Regime::NullOdd,
        status,
        index: Some(index),
        particular,
        basis,
        infinite_family: false,
        subproblems,
    })
}

fn is_zero(x: Complex64, scale: f64) -> bool {
    x.norm() <= REGIME_TOL * scale
}

/// One homogeneous solution of the constant problem with `a = 0`.
pub fn constant_family_member(
    contour: &Arc<Contour>,
    b: Complex64,
    n: u32,
    kind: FamilyKind,
) -> Result<UpsilonPair> {
    if n == 0 {
        return Err(Error::Domain("family members start at n = 1".into()));
    }
    let power =
        i32::try_from(n).map_err(|_| Error::Domain(format!("family member {n} too large")))?;
    let one = Complex64::new(1.0, 0.0);
    let zero_fn = SectionalFunction::zero(contour.clone());
    let interior = || {
        // Λ⁺ = zⁿ forces Υ1⁺ = b zⁿ
        let lam = SectionalFunction::sided(
            SectionalFunction::monomial(contour.clone(), one, zero(), power),
            zero_fn.clone(),
        );
        let u1 = SectionalFunction::sided(
            SectionalFunction::monomial(contour.clone(), b, zero(), power),
            zero_fn.clone(),
        );
        (lam, u1)
    };
    let exterior = || {
        // Λ⁻ = z⁻ⁿ forces Υ1⁻ = -z⁻ⁿ / b̄
        let lam = SectionalFunction::sided(
            zero_fn.clone(),
            SectionalFunction::monomial(contour.clone(), one, zero(), -power),
        );
        let u1 = SectionalFunction::sided(
            zero_fn.clone(),
            SectionalFunction::monomial(contour.clone(), -1.0 / b.conj(), zero(), -power),
        );
        (lam, u1)
    };
    let (lam, u1) = match kind {
        FamilyKind::Interior => interior(),
        FamilyKind::Exterior => exterior(),
        FamilyKind::Paired => {
            let (l1, v1) = interior();
            let (l2, v2) = exterior();
            (l1.add(&l2), v1.add(&v2))
        }
    };
    Ok(UpsilonPair {
        upsilon0: lam.inverted()?,
        upsilon1: u1,
    })
}

/// Constant coefficients `(Ĝ0, Ĝ1) = (a, b)` on the unit circle, vanishing
/// at infinity.
pub fn solve_constant(
    contour: &Arc<Contour>,
    a: Complex64,
    b: Complex64,
    g0: &BoundaryFunction,
    g1: &BoundaryFunction,
    opts: &SolveOptions,
) -> Result<CliffordSolution> {
    contour.require_unit_circle()?;
    contour.check_samples(g0.values())?;
    contour.check_samples(g1.values())?;
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        return Err(Error::ZeroCoefficients);
    }
    let origin = zero();
    if !is_zero(a, scale) {
        // Λ⁺ - (Λ⁻ + b̄Υ1⁻)/a = -ĝ0/a with Λ⁺(0) = 0
        let jump0 = SectionalFunction::cauchy(contour.clone(), g0 * (-1.0 / a))?;
        let k = jump0.eval_side(origin, Side::Plus)?;
        let psi0 = jump0.shifted(-k);
        let psi0_plus = psi0.boundary(Side::Plus)?;
        let density1 = if is_zero(b, scale) {
            g1.clone()
        } else {
            g1 + &BoundaryFunction::from_samples(psi0_plus.iter().map(|&v| b * v).collect())
        };
        let psi1 = SectionalFunction::cauchy(contour.clone(), density1)?;
        let lam = SectionalFunction::sided(
            psi0.clone(),
            psi0.scale(a).add(&psi1.scale(-b.conj() / a.conj())),
        );
        let u1 = SectionalFunction::sided(psi1.clone(), psi1.scale(1.0 / a.conj()));
        return Ok(CliffordSolution {
            regime: Regime::Constant { a, b },
            status: Status::Unique,
            index: Some(0),
            particular: Some(UpsilonPair {
                upsilon0: lam.inverted()?,
                upsilon1: u1,
            }),
            basis: Vec::new(),
            infinite_family: false,
            subproblems: Vec::new(),
        });
    }

    // a = 0: P⁺ĝ0 = 0 and P⁻ĝ1 = 0 pointwise
    let p0 = plemelj(contour, g0)?.plus;
    let p1 = plemelj(contour, g1)?.minus;
    let worst = |v: &BoundaryFunction| {
        v.values()
            .iter()
            .copied()
            .max_by(|x, y| x.norm().total_cmp(&y.norm()))
            .unwrap_or_default()
    };
    let tol0 = opts.condition_tol * (1.0 + g0.max_abs());
    let tol1 = opts.condition_tol * (1.0 + g1.max_abs());
    let r0 = worst(&p0);
    let r1 = worst(&p1);
    let subproblems = vec![
        SubproblemReport {
            label: "even_condition",
            index: None,
            solvable: r0.norm() < tol0,
            residuals: vec![r0],
            tolerance: tol0,
            free_constants: 0,
        },
        SubproblemReport {
            label: "odd_condition",
            index: None,
            solvable: r1.norm() < tol1,
            residuals: vec![r1],
            tolerance: tol1,
            free_constants: 0,
        },
    ];
    if !(subproblems[0].solvable && subproblems[1].solvable) {
        return Ok(CliffordSolution {
            regime: Regime::Constant { a, b },
            status: Status::Unsolvable,
            index: None,
            particular: None,
            basis: Vec::new(),
            infinite_family: true,
            subproblems,
        });
    }
    // Λ = 0, Υ1⁺ = C[ĝ1]⁺, Υ1⁻ = -C[ĝ0]⁻ / b̄
    let u1 = SectionalFunction::sided(
        SectionalFunction::cauchy(contour.clone(), g1.clone())?,
        SectionalFunction::cauchy(contour.clone(), g0.clone())?.scale(-1.0 / b.conj()),
    );
    let basis = (1..=opts.family_count as u32)
        .map(|n| constant_family_member(contour, b, n, opts.family_kind))
        .collect::<Result<Vec<_>>>()?;
    Ok(CliffordSolution {
        regime: Regime::Constant { a, b },
        status: Status::Family,
        index: None,
        particular: Some(UpsilonPair {
            upsilon0: SectionalFunction::zero(contour.clone()),
            upsilon1: u1,
        }),
        basis,
        infinite_family: true,
        subproblems,
    })
}

/// User-supplied conformal maps: `χ±` onto the unit disk and its exterior,
/// `φ±` their inverses.
#[derive(Debug, Clone)]
pub struct ConformalMaps {
    pub chi_plus: Expr,
    pub chi_minus: Expr,
    pub phi_plus: Expr,
    pub phi_minus: Expr,
}

/// A problem moved onto the unit circle together with the way back.
#[derive(Debug, Clone)]
pub struct Transported {
    pub problem: CliffordRbvp,
    original: Arc<Contour>,
    maps: ConformalMaps,
}

impl Transported {
    /// Solves on the circle and composes the solution with `χ±`.
    pub fn solve(&self, opts: &SolveOptions) -> Result<CliffordSolution> {
        let on_circle = self.problem.solve(&SolveOptions {
            z0: None,
            ..opts.clone()
        })?;
        on_circle.composed_with(&self.original, &self.maps.chi_plus, &self.maps.chi_minus)
    }
}

fn shoelace(points: &[Complex64]) -> f64 {
    let n = points.len();
    (0..n)
        .map(|k| {
            let (p, q) = (points[k], points[(k + 1) % n]);
            p.re * q.im - q.re * p.im
        })
        .sum::<f64>()
        * 0.5
}

/// Moves `p` onto the unit circle through `χ`. Node `k` of the new contour
/// is `χ⁻(t_k)` and carries the same samples as `t_k`.
pub fn conformal_transport(p: &CliffordRbvp, maps: &ConformalMaps) -> Result<Transported> {
    let nodes = p.contour.nodes();
    let n = nodes.len();
    let mapped = nodes
        .iter()
        .map(|&t| maps.chi_minus.eval_any(t))
        .collect::<Result<Vec<_>>>()?;
    let step = (n / ROUND_TRIP_POINTS).max(1);
    for k in (0..n).step_by(step) {
        let t = nodes[k];
        let w_minus = mapped[k];
        let w_plus = maps.chi_plus.eval_any(t)?;
        let checks = [
            (
                "chi_plus and chi_minus differ on the curve",
                (w_plus - w_minus).norm(),
            ),
            (
                "phi_minus(chi_minus(t)) != t",
                (maps.phi_minus.eval_any(w_minus)? - t).norm(),
            ),
            (
                "phi_plus(chi_plus(t)) != t",
                (maps.phi_plus.eval_any(w_plus)? - t).norm(),
            ),
            (
                "chi_minus(t) is off the unit circle",
                (w_minus.norm() - 1.0).abs(),
            ),
        ];
        for (what, err) in checks {
            if !(err < ROUND_TRIP_TOL) {
                return Err(Error::ConformalMap(format!(
                    "{what} at node {k} (error {err:e})"
                )));
            }
        }
    }
    let inner = p.contour.centroid();
    if !(maps.chi_plus.eval_any(inner)?.norm() < 1.0) {
        return Err(Error::ConformalMap(
            "chi_plus does not map the interior into the unit disk".into(),
        ));
    }
    if shoelace(&mapped) <= 0.0 {
        return Err(Error::ConformalMap(
            "map reverses the orientation of the curve".into(),
        ));
    }
    let circle = Arc::new(Contour::from_samples(mapped)?);
    circle.require_unit_circle()?;
    let coefficient = HatData {
        even: p.coefficient.even.values().to_vec().into(),
        odd: p.coefficient.odd.values().to_vec().into(),
        odd_is_literal_zero: p.coefficient.odd_is_literal_zero,
    };
    let data = HatData::new(
        p.data.even.values().to_vec().into(),
        p.data.odd.values().to_vec().into(),
    );
    Ok(Transported {
        problem: CliffordRbvp::new(circle, coefficient, data, p.vanish_at_infinity)?,
        original: p.contour.clone(),
        maps: maps.clone(),
    })
}
