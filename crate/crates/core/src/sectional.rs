//! Sectionally holomorphic functions on `ℂ \ L`.
//!
//! A [`SectionalFunction`] is an immutable expression tree whose leaves are
//! Cauchy integrals, closed forms and monomials. Every node can be evaluated
//! on either side of the contour, produces boundary values on both sides
//! (Cauchy leaves through Plemelj, never through limits) and, where
//! determined, its limit at infinity.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::boundary::BoundaryFunction;
use crate::cauchy::CauchyIntegral;
use crate::contour::{Contour, Region};
use crate::error::{near_boundary, Error, Result};
use crate::expr::Expr;

/// The two components `Ω⁺` (bounded) and `Ω⁻` (unbounded) of `ℂ \ L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn opposite(self) -> Self {
        match self {
            Side::Plus => Side::Minus,
            Side::Minus => Side::Plus,
        }
    }
}

enum Node {
    Cauchy(CauchyIntegral),
    ClosedForm {
        plus: Expr,
        minus: Expr,
    },
    Constant(Complex64),
    /// `coeff · (z - center)^power` on both sides.
    Monomial {
        coeff: Complex64,
        center: Complex64,
        power: i32,
    },
    Sided {
        plus: SectionalFunction,
        minus: SectionalFunction,
    },
    Sum(Vec<SectionalFunction>),
    Scale(Complex64, SectionalFunction),
    Product(SectionalFunction, SectionalFunction),
    Exp(SectionalFunction),
    /// `z ↦ conj(f(1/z̄))`, swapping the sides of the unit circle.
    Inverted(SectionalFunction),
    /// `z ↦ f(χ±(z))` for `f` living on the image contour.
    Composed {
        inner: SectionalFunction,
        plus_map: Expr,
        minus_map: Expr,
    },
}

#[derive(Clone)]
pub struct SectionalFunction {
    contour: Arc<Contour>,
    node: Arc<Node>,
}

impl fmt::Debug for SectionalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &*self.node {
            Node::Cauchy(_) => "Cauchy",
            Node::ClosedForm { .. } => "ClosedForm",
            Node::Constant(_) => "Constant",
            Node::Monomial { .. } => "Monomial",
            Node::Sided { .. } => "Sided",
            Node::Sum(_) => "Sum",
            Node::Scale(..) => "Scale",
            Node::Product(..) => "Product",
            Node::Exp(_) => "Exp",
            Node::Inverted(_) => "Inverted",
            Node::Composed { .. } => "Composed",
        };
        f.debug_struct("SectionalFunction")
            .field("kind", &kind)
            .field("nodes", &self.contour.len())
            .finish()
    }
}

fn zeros(n: usize) -> Vec<Complex64> {
    vec![Complex64::new(0.0, 0.0); n]
}

fn checked_powi(base: Complex64, power: i32) -> Result<Complex64> {
    if power < 0 && base.norm() < crate::expr::DIVISION_GUARD {
        return Err(Error::Eval(format!(
            "negative power of a value of modulus {:e}",
            base.norm()
        )));
    }
    Ok(base.powi(power))
}

impl SectionalFunction {
    fn wrap(contour: Arc<Contour>, node: Node) -> Self {
        Self {
            contour,
            node: Arc::new(node),
        }
    }

    /// The Cauchy integral of `density`; vanishes at infinity.
    pub fn cauchy(contour: Arc<Contour>, density: BoundaryFunction) -> Result<Self> {
        let ci = CauchyIntegral::new(contour.clone(), density)?;
        Ok(Self::wrap(contour, Node::Cauchy(ci)))
    }

    /// Closed-form expressions in `z` for each side.
    pub fn closed_form(contour: Arc<Contour>, plus: Expr, minus: Expr) -> Self {
        Self::wrap(contour, Node::ClosedForm { plus, minus })
    }

    pub fn constant(contour: Arc<Contour>, c: Complex64) -> Self {
        Self::wrap(contour, Node::Constant(c))
    }

    pub fn zero(contour: Arc<Contour>) -> Self {
        Self::constant(contour, Complex64::new(0.0, 0.0))
    }

    pub fn monomial(
        contour: Arc<Contour>,
        coeff: Complex64,
        center: Complex64,
        power: i32,
    ) -> Self {
        Self::wrap(
            contour,
            Node::Monomial {
                coeff,
                center,
                power,
            },
        )
    }

    /// `plus` in `Ω⁺`, `minus` in `Ω⁻`.
    pub fn sided(plus: SectionalFunction, minus: SectionalFunction) -> Self {
        Self::wrap(plus.contour.clone(), Node::Sided { plus, minus })
    }

    pub fn sum(contour: Arc<Contour>, terms: Vec<SectionalFunction>) -> Self {
        Self::wrap(contour, Node::Sum(terms))
    }

    pub fn add(&self, other: &SectionalFunction) -> Self {
        Self::sum(self.contour.clone(), vec![self.clone(), other.clone()])
    }

    /// Adds a constant on both sides.
    pub fn shifted(&self, c: Complex64) -> Self {
        self.add(&Self::constant(self.contour.clone(), c))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::wrap(self.contour.clone(), Node::Scale(c, self.clone()))
    }

    pub fn mul(&self, other: &SectionalFunction) -> Self {
        Self::wrap(
            self.contour.clone(),
            Node::Product(self.clone(), other.clone()),
        )
    }

    pub fn exp(&self) -> Self {
        Self::wrap(self.contour.clone(), Node::Exp(self.clone()))
    }

    /// `Λ(z) = conj(f(1/z̄))`: `Λ⁺` comes from `f⁻` and `Λ⁻` from `f⁺`.
    /// Only defined on the unit circle centred at the origin.
    pub fn inverted(&self) -> Result<Self> {
        self.contour.require_unit_circle()?;
        Ok(Self::wrap(
            self.contour.clone(),
            Node::Inverted(self.clone()),
        ))
    }

    /// `z ↦ inner(χ±(z))` on `contour`, whose nodes are mapped by `χ` onto
    /// the nodes of `inner`'s contour in the same order.
    pub fn composed(
        contour: Arc<Contour>,
        inner: SectionalFunction,
        plus_map: Expr,
        minus_map: Expr,
    ) -> Result<Self> {
        if inner.contour.len() != contour.len() {
            return Err(Error::SampleCount {
                expected: contour.len(),
                got: inner.contour.len(),
            });
        }
        Ok(Self::wrap(
            contour,
            Node::Composed {
                inner,
                plus_map,
                minus_map,
            },
        ))
    }

    pub fn contour(&self) -> &Arc<Contour> {
        &self.contour
    }

    /// Evaluates at `z` off the curve; points in the refusal band are
    /// rejected.
    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let loc = self.contour.locate(z);
        match loc.tag {
            Region::Inside => self.eval_side(z, Side::Plus),
            Region::Outside => self.eval_side(z, Side::Minus),
            Region::NearBoundary => Err(near_boundary(z, loc.distance_estimate)),
        }
    }

    /// Evaluates the branch belonging to `side` at `z`; the caller is
    /// responsible for `z` lying in that region.
    pub fn eval_side(&self, z: Complex64, side: Side) -> Result<Complex64> {
        Ok(match &*self.node {
            Node::Cauchy(ci) => ci.eval(z, side == Side::Plus)?,
            Node::ClosedForm { plus, minus } => match side {
                Side::Plus => plus.eval_any(z)?,
                Side::Minus => minus.eval_any(z)?,
            },
            Node::Constant(c) => *c,
            Node::Monomial {
                coeff,
                center,
                power,
            } => coeff * checked_powi(z - center, *power)?,
            Node::Sided { plus, minus } => match side {
                Side::Plus => plus.eval_side(z, side)?,
                Side::Minus => minus.eval_side(z, side)?,
            },
            Node::Sum(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for t in terms {
                    acc += t.eval_side(z, side)?;
                }
                acc
            }
            Node::Scale(c, f) => c * f.eval_side(z, side)?,
            Node::Product(a, b) => a.eval_side(z, side)? * b.eval_side(z, side)?,
            Node::Exp(f) => f.eval_side(z, side)?.exp(),
            Node::Inverted(f) => {
                if z == Complex64::new(0.0, 0.0) && side == Side::Plus {
                    f.at_infinity()?.conj()
                } else {
                    let w = 1.0 / z.conj();
                    f.eval_side(w, side.opposite())?.conj()
                }
            }
            Node::Composed {
                inner,
                plus_map,
                minus_map,
            } => {
                let w = match side {
                    Side::Plus => plus_map.eval_any(z)?,
                    Side::Minus => minus_map.eval_any(z)?,
                };
                inner.eval_side(w, side)?
            }
        })
    }

    /// Boundary values at the contour nodes from the given side.
    pub fn boundary(&self, side: Side) -> Result<Vec<Complex64>> {
        let n = self.contour.len();
        Ok(match &*self.node {
            Node::Cauchy(ci) => match side {
                Side::Plus => ci.plemelj().plus.values().to_vec(),
                Side::Minus => ci.plemelj().minus.values().to_vec(),
            },
            Node::ClosedForm { .. } | Node::Monomial { .. } => self
                .contour
                .nodes()
                .iter()
                .map(|&t| self.eval_side(t, side))
                .collect::<Result<_>>()?,
            Node::Constant(c) => vec![*c; n],
            Node::Sided { plus, minus } => match side {
                Side::Plus => plus.boundary(side)?,
                Side::Minus => minus.boundary(side)?,
            },
            Node::Sum(terms) => {
                let mut acc = zeros(n);
                for t in terms {
                    for (a, b) in acc.iter_mut().zip(t.boundary(side)?) {
                        *a += b;
                    }
                }
                acc
            }
            Node::Scale(c, f) => f.boundary(side)?.into_iter().map(|v| c * v).collect(),
            Node::Product(a, b) => a
                .boundary(side)?
                .into_iter()
                .zip(b.boundary(side)?)
                .map(|(x, y)| x * y)
                .collect(),
            Node::Exp(f) => f.boundary(side)?.into_iter().map(|v| v.exp()).collect(),
            // 1/t̄ = t on the unit circle, so each node maps to itself
            Node::Inverted(f) => f
                .boundary(side.opposite())?
                .into_iter()
                .map(|v| v.conj())
                .collect(),
            Node::Composed { inner, .. } => inner.boundary(side)?,
        })
    }

    /// `(f⁺, f⁻)` at the contour nodes.
    pub fn boundary_values(&self) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        Ok((self.boundary(Side::Plus)?, self.boundary(Side::Minus)?))
    }

    /// `lim f⁻(z)` as `z → ∞`, where the representation determines it.
    pub fn at_infinity(&self) -> Result<Complex64> {
        let zero = Complex64::new(0.0, 0.0);
        Ok(match &*self.node {
            Node::Cauchy(_) => zero,
            Node::Constant(c) => *c,
            Node::Monomial { coeff, power, .. } => match power.cmp(&0) {
                std::cmp::Ordering::Less => zero,
                std::cmp::Ordering::Equal => *coeff,
                std::cmp::Ordering::Greater if *coeff == zero => zero,
                std::cmp::Ordering::Greater => return Err(Error::UndeterminedAtInfinity),
            },
            Node::Sided { minus, .. } => minus.at_infinity()?,
            Node::Sum(terms) => {
                let mut acc = zero;
                for t in terms {
                    acc += t.at_infinity()?;
                }
                acc
            }
            Node::Scale(c, f) => c * f.at_infinity()?,
            Node::Product(a, b) => a.at_infinity()? * b.at_infinity()?,
            Node::Exp(f) => f.at_infinity()?.exp(),
            Node::Inverted(f) => f.eval_side(zero, Side::Plus)?.conj(),
            Node::ClosedForm { .. } | Node::Composed { .. } => {
                return Err(Error::UndeterminedAtInfinity)
            }
        })
    }
}
