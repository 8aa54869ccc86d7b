//! The worked examples with their closed-form solutions.
//!
//! Closed forms are written directly in Clifford arithmetic with
//! `ex = -e1 x` and `xe = -x e1`, which correspond to `conj(z)` and `z`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::clifford::{alpha, CliffordElement};
use crate::contour::Contour;
use crate::error::{Error, Result};
use crate::expr::parse;
use crate::rbvp::{CliffordRbvp, HatData};
use crate::sectional::Side;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleId {
    Ex1a,
    Ex1b,
    Ex1c,
    Ex1d,
    Ex2,
    Ex3,
}

impl ExampleId {
    pub const ALL: [ExampleId; 6] = [
        ExampleId::Ex1a,
        ExampleId::Ex1b,
        ExampleId::Ex1c,
        ExampleId::Ex1d,
        ExampleId::Ex2,
        ExampleId::Ex3,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ExampleId::Ex1a => "1a",
            ExampleId::Ex1b => "1b",
            ExampleId::Ex1c => "1c",
            ExampleId::Ex1d => "1d",
            ExampleId::Ex2 => "2",
            ExampleId::Ex3 => "3",
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "unknown example {s:?}; expected one of 1a, 1b, 1c, 1d, 2, 3"
                ))
            })
    }
}

/// How an example's coefficient is given.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientSpec {
    Exprs { g0: &'static str, g1: &'static str },
    Const { a: Complex64, b: Complex64 },
}

/// Textual description of an example problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExampleSpec {
    pub center: Complex64,
    pub radius: f64,
    pub coefficient: CoefficientSpec,
    pub g0: &'static str,
    pub g1: &'static str,
}

const EXAMPLE1_G: CoefficientSpec = CoefficientSpec::Exprs {
    g0: "conj(t)/(conj(t)^2-1)",
    g1: "0",
};

impl ExampleId {
    pub fn spec(self) -> ExampleSpec {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let example1 = |center, radius, g1| ExampleSpec {
            center,
            radius,
            coefficient: EXAMPLE1_G,
            g0: "1/(conj(t)-1)",
            g1,
        };
        match self {
            ExampleId::Ex1a => example1(c(0.0, 0.0), 0.5, "1/(t+1)"),
            ExampleId::Ex1b => example1(c(0.5, 0.0), 1.0, "1/(t+1)"),
            ExampleId::Ex1c => example1(c(-1.0, 0.0), 0.5, "1/(t+1)"),
            ExampleId::Ex1d => example1(c(-1.0, 0.0), 0.5, "1/t"),
            ExampleId::Ex2 => ExampleSpec {
                center: c(0.0, 0.0),
                radius: 1.0,
                coefficient: CoefficientSpec::Const {
                    a: c(1.0, 0.0),
                    b: c(-1.0, 0.0),
                },
                g0: "1/t",
                g1: "1/(t-2)",
            },
            ExampleId::Ex3 => ExampleSpec {
                center: c(0.0, 0.0),
                radius: 1.0,
                coefficient: CoefficientSpec::Const {
                    a: c(0.0, 0.0),
                    b: c(1.0, 0.0),
                },
                g0: "0",
                g1: "0",
            },
        }
    }
}

#[derive(Debug, Clone)]
pub struct Example {
    pub id: ExampleId,
    pub problem: CliffordRbvp,
    pub interior_probes: Vec<Complex64>,
    pub exterior_probes: Vec<Complex64>,
}

/// Builds an example on `nodes` nodes.
pub fn example(id: ExampleId, nodes: usize) -> Result<Example> {
    let spec = id.spec();
    let contour = Arc::new(Contour::circle(spec.center, spec.radius, nodes)?);
    let coefficient = match spec.coefficient {
        CoefficientSpec::Exprs { g0, g1 } => {
            HatData::from_exprs(&contour, &parse(g0)?, &parse(g1)?)?
        }
        CoefficientSpec::Const { a, b } => HatData::constant(&contour, a, b),
    };
    let data = HatData::from_exprs(&contour, &parse(spec.g0)?, &parse(spec.g1)?)?;
    let problem = CliffordRbvp::new(contour, coefficient, data, true)?;
    Ok(Example {
        id,
        problem,
        interior_probes: probes(spec.center, spec.radius, 0.2, 0.06),
        exterior_probes: probes(spec.center, spec.radius, 1.4, 0.25),
    })
}

fn probes(center: Complex64, radius: f64, first: f64, step: f64) -> Vec<Complex64> {
    (0..10)
        .map(|j| {
            let r = radius * (first + step * j as f64);
            // irrational turn keeps probes off symmetry lines
            let angle = 2.0 * PI * 0.618_033_988_75 * j as f64 + 0.3;
            center + Complex64::from_polar(r, angle)
        })
        .collect()
}

fn ex(z: Complex64) -> CliffordElement {
    -(CliffordElement::E1 * alpha(z))
}

fn xe(z: Complex64) -> CliffordElement {
    -(alpha(z) * CliffordElement::E1)
}

fn inv(a: CliffordElement) -> Result<CliffordElement> {
    a.inverse()
}

const ONE: CliffordElement = CliffordElement::ONE;
const E1: CliffordElement = CliffordElement::E1;
const E2: CliffordElement = CliffordElement::E2;
const E12: CliffordElement = CliffordElement::E12;

/// Closed form for examples with a unique solution; `None` for 1a, 1c and 3.
pub fn closed_form_phi(id: ExampleId, z: Complex64, side: Side) -> Result<Option<CliffordElement>> {
    let zero = CliffordElement::ZERO;
    Ok(Some(match (id, side) {
        (ExampleId::Ex1b, Side::Plus) => inv(ex(z) + ONE)? + E1 * inv(xe(z) + ONE)?,
        (ExampleId::Ex1b, Side::Minus) => inv(ex(z))?.scale(-2.0),
        (ExampleId::Ex1d, Side::Plus) => inv(ex(z) - ONE)? + E1 * inv(xe(z))?,
        (ExampleId::Ex1d, Side::Minus) => zero,
        (ExampleId::Ex2, Side::Plus) => ex(z) + E1 * inv(xe(z) - ONE.scale(2.0))?,
        (ExampleId::Ex2, Side::Minus) => zero,
        _ => return Ok(None),
    }))
}

/// Example 1 case a with the real constants `(c⁰₁, c¹₁, c⁰₂, c¹₂)`.
pub fn case_a_phi(z: Complex64, side: Side, c: [f64; 4]) -> Result<CliffordElement> {
    let k1 = ONE.scale(c[0]) + E12.scale(c[1]);
    let k2 = E1.scale(c[2]) - E2.scale(c[3]);
    Ok(match side {
        Side::Plus => {
            let e = ex(z);
            let x = xe(z);
            inv(e - ONE)? + k1 * inv(e * e - ONE)? + E1 * inv(x + ONE)? + k2 * inv(x * x - ONE)?
        }
        Side::Minus => k1 * inv(ex(z))? + k2 * inv(xe(z))?,
    })
}

/// Member `m` of the example 3 family.
pub fn example3_phi(z: Complex64, side: Side, m: u32) -> Result<CliffordElement> {
    let m = i32::try_from(m).map_err(|_| Error::Domain(format!("member {m} too large")))?;
    Ok(match side {
        Side::Plus => ex(z).powi(m)?,
        Side::Minus => -(E1 * inv(xe(z).powi(m)?)?),
    })
}
