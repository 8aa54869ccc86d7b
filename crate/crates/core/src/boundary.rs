use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::contour::Contour;
use crate::error::Result;
use crate::expr::Expr;

/// Complex samples on the nodes of a contour, optionally remembering the
/// expression they were sampled from.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryFunction {
    values: Vec<Complex64>,
    source: Option<Expr>,
}

impl BoundaryFunction {
    pub fn from_samples(values: Vec<Complex64>) -> Self {
        Self {
            values,
            source: None,
        }
    }

    pub fn constant(contour: &Contour, c: Complex64) -> Self {
        Self::from_samples(vec![c; contour.len()])
    }

    pub fn from_fn(contour: &Contour, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_samples(contour.sample(f))
    }

    /// Samples an expression in `t` (or `z`) at the contour nodes.
    pub fn from_expr(contour: &Contour, expr: &Expr) -> Result<Self> {
        let values = contour
            .nodes()
            .iter()
            .map(|&t| expr.eval_any(t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            values,
            source: Some(expr.clone()),
        })
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn source(&self) -> Option<&Expr> {
        self.source.as_ref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self::from_samples(self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        Self::from_samples(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest node-to-node difference from the first sample.
    pub fn variation(&self) -> f64 {
        match self.values.first() {
            Some(&v0) => self
                .values
                .iter()
                .map(|v| (v - v0).norm())
                .fold(0.0, f64::max),
            None => 0.0,
        }
    }
}

impl Add for &BoundaryFunction {
    type Output = BoundaryFunction;
    fn add(self, rhs: Self) -> BoundaryFunction {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &BoundaryFunction {
    type Output = BoundaryFunction;
    fn sub(self, rhs: Self) -> BoundaryFunction {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<Complex64> for &BoundaryFunction {
    type Output = BoundaryFunction;
    fn mul(self, rhs: Complex64) -> BoundaryFunction {
        self.map(|v| v * rhs)
    }
}

impl From<Vec<Complex64>> for BoundaryFunction {
    fn from(values: Vec<Complex64>) -> Self {
        Self::from_samples(values)
    }
}
