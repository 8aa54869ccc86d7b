//! Cauchy-type integrals over a discretized contour.
//!
//! For a density `φ` on `L`,
//!
//! ```text
//! C[φ](z) = 1/(2πi) ∮ φ(τ)/(τ - z) dτ,                z ∉ L
//! S[φ](t) = 2/(2πi) ∮ (φ(τ) - φ(t))/(τ - t) dτ + φ(t),  t ∈ L
//! ```
//!
//! and the boundary values follow from Plemelj: `C⁺ = (S + I)φ/2`,
//! `C⁻ = (S - I)φ/2`. Everything is discretized with the periodic
//! trapezoidal rule; the subtracted integrand in `S` is smooth, its value at
//! `τ = t` being the limit `φ'(t)`.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::boundary::BoundaryFunction;
use crate::contour::{Contour, Region};
use crate::error::{near_boundary, Result};
use crate::spectral;

/// Upper bound on the number of quadrature nodes used near the curve.
pub const MAX_REFINED_NODES: usize = 1 << 16;

/// Treatment of the diagonal node in the singular integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Diagonal {
    /// Limit value from the spectral derivative of the density.
    #[default]
    Spectral,
    /// Drop the diagonal term. First-order accurate; for rough densities.
    Zero,
}

fn two_pi_i() -> Complex64 {
    Complex64::new(0.0, 2.0 * PI)
}

/// `1/(2πi) Σ_j (φ_j - φ_k)/(τ_j - t_k) τ'_j w` at every node `k`,
/// including the diagonal limit.
fn subtracted_pv(contour: &Contour, density: &[Complex64], diagonal: Diagonal) -> Vec<Complex64> {
    let nodes = contour.nodes();
    let dnodes = contour.derivatives();
    let w = contour.weight();
    let dphi = match diagonal {
        Diagonal::Spectral => spectral::derivative(density),
        Diagonal::Zero => vec![Complex64::new(0.0, 0.0); density.len()],
    };
    (0..nodes.len())
        .map(|k| {
            let tk = nodes[k];
            let uk = density[k];
            let mut acc = dphi[k];
            for j in 0..nodes.len() {
                if j != k {
                    acc += (density[j] - uk) / (nodes[j] - tk) * dnodes[j];
                }
            }
            acc * w / two_pi_i()
        })
        .collect()
}

/// `S[φ]` at every node.
pub fn singular_integral(
    contour: &Contour,
    density: &BoundaryFunction,
    diagonal: Diagonal,
) -> Result<BoundaryFunction> {
    contour.check_samples(density.values())?;
    let sub = subtracted_pv(contour, density.values(), diagonal);
    Ok(BoundaryFunction::from_samples(
        sub.iter()
            .zip(density.values())
            .map(|(s, u)| 2.0 * s + u)
            .collect(),
    ))
}

/// `S[φ]` at node `k`.
pub fn singular_pv(contour: &Contour, density: &BoundaryFunction, k: usize) -> Result<Complex64> {
    contour.check_samples(density.values())?;
    let u = density.values();
    let nodes = contour.nodes();
    let dnodes = contour.derivatives();
    let tk = nodes[k];
    let mut acc = spectral::derivative(u)[k];
    for j in 0..nodes.len() {
        if j != k {
            acc += (u[j] - u[k]) / (nodes[j] - tk) * dnodes[j];
        }
    }
    Ok(2.0 * acc * contour.weight() / two_pi_i() + u[k])
}

/// Boundary values of the Cauchy integral from either side.
#[derive(Debug, Clone, PartialEq)]
pub struct Plemelj {
    pub plus: BoundaryFunction,
    pub minus: BoundaryFunction,
}

pub fn plemelj(contour: &Contour, density: &BoundaryFunction) -> Result<Plemelj> {
    plemelj_with(contour, density, Diagonal::Spectral)
}

pub fn plemelj_with(
    contour: &Contour,
    density: &BoundaryFunction,
    diagonal: Diagonal,
) -> Result<Plemelj> {
    contour.check_samples(density.values())?;
    // S/2 = sub + φ/2, hence C⁺ = sub + φ and C⁻ = sub
    let sub = subtracted_pv(contour, density.values(), diagonal);
    let plus = sub
        .iter()
        .zip(density.values())
        .map(|(s, u)| s + u)
        .collect();
    Ok(Plemelj {
        plus: BoundaryFunction::from_samples(plus),
        minus: BoundaryFunction::from_samples(sub),
    })
}

/// Refinement factor making the trapezoidal rule resolve the Cauchy kernel
/// at distance `distance` from the curve.
fn refinement_factor(contour: &Contour, distance: f64) -> usize {
    let spacing = contour.length() / contour.len() as f64;
    let cap = (MAX_REFINED_NODES / contour.len()).max(1);
    // the kernel error decays like exp(-2π d/h); 6 h < d gives ~1e-16
    let need = (6.0 * spacing / distance).ceil().max(1.0) as usize;
    need.next_power_of_two().min(cap)
}

fn subtracted_sum(
    nodes: &[Complex64],
    dnodes: &[Complex64],
    w: f64,
    density: &[Complex64],
    anchor: usize,
    z: Complex64,
    inside: bool,
) -> Complex64 {
    let ua = density[anchor];
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes.len() {
        acc += (density[j] - ua) / (nodes[j] - z) * dnodes[j];
    }
    let indicator = if inside { ua } else { Complex64::new(0.0, 0.0) };
    acc * w / two_pi_i() + indicator
}

/// `C[φ](z)` for `z` off the curve. Points in the refusal band are rejected.
///
/// The density value at the nearest node is subtracted and its exact
/// contribution (`φ` inside, `0` outside) added back; close to the curve the
/// density and contour are refined by trigonometric interpolation.
pub fn cauchy_transform(
    contour: &Contour,
    density: &BoundaryFunction,
    z: Complex64,
) -> Result<Complex64> {
    contour.check_samples(density.values())?;
    let loc = contour.locate(z);
    if loc.tag == Region::NearBoundary {
        return Err(near_boundary(z, loc.distance_estimate));
    }
    let factor = refinement_factor(contour, loc.distance_estimate);
    let fine = contour.refined(factor);
    let dens = spectral::upsample(density.values(), factor);
    let anchor = fine.nearest_node(z);
    Ok(subtracted_sum(
        fine.nodes(),
        fine.derivatives(),
        fine.weight(),
        &dens,
        anchor,
        z,
        loc.tag == Region::Inside,
    ))
}

const LEVELS: usize = 17;

/// A Cauchy integral with cached Plemelj boundary values and refined
/// quadrature grids, for repeated evaluation.
#[derive(Debug)]
pub struct CauchyIntegral {
    contour: Arc<Contour>,
    density: BoundaryFunction,
    plemelj: Plemelj,
    refined: [OnceLock<(Contour, Vec<Complex64>)>; LEVELS],
}

impl CauchyIntegral {
    pub fn new(contour: Arc<Contour>, density: BoundaryFunction) -> Result<Self> {
        let plemelj = plemelj(&contour, &density)?;
        Ok(Self {
            contour,
            density,
            plemelj,
            refined: std::array::from_fn(|_| OnceLock::new()),
        })
    }

    pub fn contour(&self) -> &Arc<Contour> {
        &self.contour
    }

    pub fn density(&self) -> &BoundaryFunction {
        &self.density
    }

    pub fn plemelj(&self) -> &Plemelj {
        &self.plemelj
    }

    fn level(&self, factor: usize) -> &(Contour, Vec<Complex64>) {
        let idx = factor.trailing_zeros() as usize;
        self.refined[idx.min(LEVELS - 1)].get_or_init(|| {
            (
                self.contour.refined(factor),
                spectral::upsample(self.density.values(), factor),
            )
        })
    }

    /// Evaluates at `z`, which the caller asserts lies on the given side.
    pub fn eval(&self, z: Complex64, inside: bool) -> Result<Complex64> {
        let distance = self.contour.distance(z);
        if distance < self.contour.band() {
            return Err(near_boundary(z, distance));
        }
        let factor = refinement_factor(&self.contour, distance);
        let (fine, dens) = self.level(factor);
        // nearest fine node is within `factor` of the nearest coarse one
        let coarse = self.contour.nearest_node(z);
        let n = fine.len();
        let anchor = (0..=2 * factor)
            .map(|d| (coarse * factor + n + d - factor) % n)
            .min_by(|&a, &b| {
                (fine.nodes()[a] - z)
                    .norm_sqr()
                    .total_cmp(&(fine.nodes()[b] - z).norm_sqr())
            })
            .unwrap_or(0);
        Ok(subtracted_sum(
            fine.nodes(),
            fine.derivatives(),
            fine.weight(),
            dens,
            anchor,
            z,
            inside,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit(n: usize) -> Contour {
        Contour::unit_circle(n).unwrap()
    }

    #[test]
    fn transform_examples() {
        let k = unit(256);
        let one = BoundaryFunction::constant(&k, c(1.0, 0.0));
        assert!((cauchy_transform(&k, &one, c(0.2, 0.1)).unwrap() - 1.0).norm() < 1e-14);
        assert!(cauchy_transform(&k, &one, c(2.0, 0.1)).unwrap().norm() < 1e-14);
        let t = BoundaryFunction::from_fn(&k, |t| t);
        let z = c(0.3, -0.4);
        assert!((cauchy_transform(&k, &t, z).unwrap() - z).norm() < 1e-14);
        let inv = BoundaryFunction::from_fn(&k, |t| 1.0 / t);
        let z = c(1.7, 0.9);
        assert!((cauchy_transform(&k, &inv, z).unwrap() + 1.0 / z).norm() < 1e-14);
    }

    #[test]
    fn transform_refuses_band() {
        let k = unit(256);
        let one = BoundaryFunction::constant(&k, c(1.0, 0.0));
        assert!(cauchy_transform(&k, &one, c(1.0005, 0.0)).is_err());
    }

    #[test]
    fn transform_near_curve_stays_accurate() {
        let k = Contour::circle(c(0.5, 0.0), 1.0, 128).unwrap();
        let g = BoundaryFunction::from_fn(&k, |t| 1.0 / (t + 1.0));
        let ci = CauchyIntegral::new(Arc::new(k.clone()), g.clone()).unwrap();
        for d in [0.3, 0.05, 0.01, 3e-3] {
            let z = c(1.5 - d, 0.0);
            let want = 1.0 / (z + 1.0);
            let got = ci.eval(z, true).unwrap();
            assert!(
                (got - want).norm() < 1e-12,
                "d = {d}: {}",
                (got - want).norm()
            );
            let free = cauchy_transform(&k, &g, z).unwrap();
            assert!((free - want).norm() < 1e-12);
            let z = c(1.5 + d, 0.0);
            assert!(ci.eval(z, false).unwrap().norm() < 1e-12);
        }
    }

    #[test]
    fn singular_examples() {
        let k = unit(256);
        let one = BoundaryFunction::constant(&k, c(1.0, 0.0));
        let s = singular_integral(&k, &one, Diagonal::Spectral).unwrap();
        assert!(s.values().iter().all(|v| (v - 1.0).norm() < 1e-14));
        let t = BoundaryFunction::from_fn(&k, |t| t);
        let s = singular_integral(&k, &t, Diagonal::Spectral).unwrap();
        for (v, tk) in s.values().iter().zip(k.nodes()) {
            assert!((v - tk).norm() < 1e-13);
        }
        let inv = BoundaryFunction::from_fn(&k, |t| 1.0 / t);
        for idx in [0, 17, 200] {
            let v = singular_pv(&k, &inv, idx).unwrap();
            assert!((v + 1.0 / k.nodes()[idx]).norm() < 1e-13);
        }
    }

    #[test]
    fn plemelj_examples() {
        let k = unit(256);
        let one = BoundaryFunction::constant(&k, c(1.0, 0.0));
        let p = plemelj(&k, &one).unwrap();
        assert!(p.plus.values().iter().all(|v| (v - 1.0).norm() < 1e-14));
        assert!(p.minus.values().iter().all(|v| v.norm() < 1e-14));
        let t = BoundaryFunction::from_fn(&k, |t| t);
        let p = plemelj(&k, &t).unwrap();
        for ((a, b), tk) in p.plus.values().iter().zip(p.minus.values()).zip(k.nodes()) {
            assert!((a - tk).norm() < 1e-13 && b.norm() < 1e-13);
        }
        let inv = BoundaryFunction::from_fn(&k, |t| 1.0 / t);
        let p = plemelj(&k, &inv).unwrap();
        for ((a, b), tk) in p.plus.values().iter().zip(p.minus.values()).zip(k.nodes()) {
            assert!(a.norm() < 1e-13 && (b + 1.0 / tk).norm() < 1e-13);
        }
    }

    #[test]
    fn zero_diagonal_is_first_order() {
        // dropping the diagonal costs O(h) on a smooth density
        let mut errs = Vec::new();
        for n in [64, 128, 256] {
            let k = unit(n);
            let g = BoundaryFunction::from_fn(&k, |t| 1.0 / (t - 2.0));
            let p = plemelj_with(&k, &g, Diagonal::Zero).unwrap();
            let err = p
                .plus
                .values()
                .iter()
                .zip(k.nodes())
                .map(|(v, t)| (v - 1.0 / (t - 2.0)).norm())
                .fold(0.0, f64::max);
            errs.push(err);
        }
        assert!(errs[0] > 1e-4);
        assert!(errs[1] < errs[0] * 0.6 && errs[2] < errs[1] * 0.6);
    }
}
