//! Discretized smooth closed curves.
//!
//! A [`Contour`] carries `N` uniform parameter values `θ_k = 2πk/N`, the node
//! positions `γ(θ_k)` and the derivatives `γ'(θ_k)`. Integrals `∮ f(τ) dτ` are
//! evaluated with the periodic trapezoidal rule, which converges
//! geometrically for analytic integrands.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral;

/// Default width of the refusal band, relative to the curve diameter.
pub const DEFAULT_BAND: f64 = 1e-3;

/// Minimum number of nodes accepted by the constructors.
pub const MIN_NODES: usize = 16;

const WINDING_RESIDUAL_MAX: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Circle { center: Complex64, radius: f64 },
    Fourier { modes: Vec<(i64, Complex64)> },
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    Inside,
    Outside,
    NearBoundary,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Inside => "inside",
            Region::Outside => "outside",
            Region::NearBoundary => "near_boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointLocation {
    pub tag: Region,
    /// Distance to the polygon through the nodes.
    pub distance_estimate: f64,
}

/// Result of [`winding_number`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    pub value: i64,
    /// `|raw - value|` where `raw` is the accumulated phase over `2π`.
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct Contour {
    shape: Shape,
    theta: Vec<f64>,
    gamma: Vec<Complex64>,
    dgamma: Vec<Complex64>,
    diameter: f64,
    band: f64,
}

fn check_node_count(n: usize) -> Result<()> {
    if n < MIN_NODES || !n.is_power_of_two() {
        return Err(Error::InvalidContour(format!(
            "node count {n} must be a power of two and at least {MIN_NODES}"
        )));
    }
    Ok(())
}

fn thetas(n: usize) -> Vec<f64> {
    (0..n).map(|k| 2.0 * PI * k as f64 / n as f64).collect()
}

fn max_pairwise_distance(points: &[Complex64]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            d = d.max((a - b).norm());
        }
    }
    d
}

fn segment_distance(z: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (z - a).norm();
    }
    let s = ((z - a) * ab.conj()).re / len2;
    let s = s.clamp(0.0, 1.0);
    (z - (a + ab * s)).norm()
}

impl Contour {
    /// `γ(θ) = center + radius·e^{iθ}`.
    pub fn circle(center: Complex64, radius: f64, n: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidContour(format!(
                "radius must be positive, got {radius}"
            )));
        }
        check_node_count(n)?;
        let theta = thetas(n);
        let gamma = theta
            .iter()
            .map(|&t| center + Complex64::from_polar(radius, t))
            .collect();
        let dgamma = theta
            .iter()
            .map(|&t| Complex64::from_polar(radius, t + PI / 2.0))
            .collect();
        Ok(Self {
            shape: Shape::Circle { center, radius },
            theta,
            gamma,
            dgamma,
            diameter: 2.0 * radius,
            band: DEFAULT_BAND * 2.0 * radius,
        })
    }

    /// The unit circle centred at the origin.
    pub fn unit_circle(n: usize) -> Result<Self> {
        Self::circle(Complex64::new(0.0, 0.0), 1.0, n)
    }

    /// `γ(θ) = Σ c_m e^{imθ}` over the supplied `(m, c_m)` modes.
    pub fn from_fourier(modes: &[(i64, Complex64)], n: usize) -> Result<Self> {
        check_node_count(n)?;
        let modes: Vec<(i64, Complex64)> = modes.to_vec();
        let (gamma, dgamma) = eval_modes(&modes, &thetas(n));
        let contour = Self::assemble(Shape::Fourier { modes }, gamma, dgamma, None)?;
        Ok(contour.positively_oriented())
    }

    /// Builds a contour from node positions on a uniform parameter grid; the
    /// derivative is obtained spectrally.
    pub fn from_samples(gamma: Vec<Complex64>) -> Result<Self> {
        check_node_count(gamma.len())?;
        let dgamma = spectral::derivative(&gamma);
        let contour = Self::assemble(Shape::Sampled, gamma, dgamma, None)?;
        Ok(contour.positively_oriented())
    }

    fn assemble(
        shape: Shape,
        gamma: Vec<Complex64>,
        dgamma: Vec<Complex64>,
        diameter: Option<f64>,
    ) -> Result<Self> {
        let max_speed = dgamma.iter().map(|d| d.norm()).fold(0.0, f64::max);
        if !(max_speed > 0.0) || !max_speed.is_finite() {
            return Err(Error::InvalidContour("curve has zero length".into()));
        }
        for (node, d) in dgamma.iter().enumerate() {
            let speed = d.norm();
            if speed < 1e-8 * max_speed {
                return Err(Error::DegenerateContour {
                    node,
                    min_speed: speed,
                    max_speed,
                });
            }
        }
        let diameter = diameter.unwrap_or_else(|| max_pairwise_distance(&gamma));
        Ok(Self {
            shape,
            theta: thetas(gamma.len()),
            gamma,
            dgamma,
            diameter,
            band: DEFAULT_BAND * diameter,
        })
    }

    fn signed_area(&self) -> f64 {
        let w = self.weight();
        0.5 * self
            .gamma
            .iter()
            .zip(&self.dgamma)
            .map(|(g, d)| (g.conj() * d).im)
            .sum::<f64>()
            * w
    }

    fn positively_oriented(self) -> Self {
        if self.signed_area() >= 0.0 {
            return self;
        }
        log::warn!("contour is negatively oriented; reversing the parametrization");
        let n = self.len();
        let idx = |k: usize| (n - k) % n;
        let gamma = (0..n).map(|k| self.gamma[idx(k)]).collect();
        let dgamma = (0..n).map(|k| -self.dgamma[idx(k)]).collect();
        let shape = match self.shape {
            Shape::Fourier { modes } => Shape::Fourier {
                modes: modes.into_iter().map(|(m, c)| (-m, c)).collect(),
            },
            other => other,
        };
        Self {
            shape,
            gamma,
            dgamma,
            ..self
        }
    }

    /// Same curve with `factor` times as many nodes. Circles and Fourier
    /// curves are re-evaluated exactly; sampled curves are interpolated.
    pub fn refined(&self, factor: usize) -> Self {
        if factor <= 1 {
            return self.clone();
        }
        let n = self.len() * factor;
        let theta = thetas(n);
        let (gamma, dgamma) = match &self.shape {
            Shape::Circle { center, radius } => (
                theta
                    .iter()
                    .map(|&t| center + Complex64::from_polar(*radius, t))
                    .collect(),
                theta
                    .iter()
                    .map(|&t| Complex64::from_polar(*radius, t + PI / 2.0))
                    .collect(),
            ),
            Shape::Fourier { modes } => eval_modes(modes, &theta),
            Shape::Sampled => (
                spectral::upsample(&self.gamma, factor),
                spectral::upsample(&self.dgamma, factor),
            ),
        };
        Self {
            shape: self.shape.clone(),
            theta,
            gamma,
            dgamma,
            diameter: self.diameter,
            band: self.band,
        }
    }

    /// Overrides the refusal band width, relative to the diameter.
    pub fn with_band(mut self, relative: f64) -> Self {
        self.band = relative * self.diameter;
        self
    }

    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.gamma
    }

    pub fn derivatives(&self) -> &[Complex64] {
        &self.dgamma
    }

    /// Trapezoidal weight `2π/N`.
    pub fn weight(&self) -> f64 {
        2.0 * PI / self.len() as f64
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn band(&self) -> f64 {
        self.band
    }

    pub fn length(&self) -> f64 {
        self.dgamma.iter().map(|d| d.norm()).sum::<f64>() * self.weight()
    }

    /// Mean of the node positions.
    pub fn centroid(&self) -> Complex64 {
        self.gamma.iter().sum::<Complex64>() / self.len() as f64
    }

    /// Largest distance from the centroid to a node.
    pub fn circumradius(&self) -> f64 {
        let c = self.centroid();
        self.gamma
            .iter()
            .map(|g| (g - c).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation `||γ_k| - 1|` over the nodes.
    pub fn unit_circle_deviation(&self) -> f64 {
        self.gamma
            .iter()
            .map(|g| (g.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Fails unless the nodes lie on the unit circle centred at the origin.
    pub fn require_unit_circle(&self) -> Result<()> {
        let deviation = self.unit_circle_deviation();
        if deviation > 1e-9 {
            return Err(Error::NotUnitCircle { deviation });
        }
        Ok(())
    }

    pub fn check_samples(&self, samples: &[Complex64]) -> Result<()> {
        if samples.len() != self.len() {
            return Err(Error::SampleCount {
                expected: self.len(),
                got: samples.len(),
            });
        }
        Ok(())
    }

    /// `∮ f(τ) dτ ≈ Σ f(γ_k) γ'(θ_k) · 2π/N`.
    pub fn integrate(&self, f: &[Complex64]) -> Result<Complex64> {
        self.check_samples(f)?;
        Ok(f.iter()
            .zip(&self.dgamma)
            .map(|(fk, dk)| fk * dk)
            .sum::<Complex64>()
            * self.weight())
    }

    /// Samples `f` at the nodes.
    pub fn sample(&self, f: impl Fn(Complex64) -> Complex64) -> Vec<Complex64> {
        self.gamma.iter().map(|&t| f(t)).collect()
    }

    /// Distance from `z` to the polygon through the nodes.
    pub fn distance(&self, z: Complex64) -> f64 {
        let n = self.len();
        (0..n)
            .map(|k| segment_distance(z, self.gamma[k], self.gamma[(k + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }

    /// Index of the node closest to `z`.
    pub fn nearest_node(&self, z: Complex64) -> usize {
        let mut best = (0, f64::INFINITY);
        for (k, g) in self.gamma.iter().enumerate() {
            let d = (g - z).norm_sqr();
            if d < best.1 {
                best = (k, d);
            }
        }
        best.0
    }

    /// Classifies `z` as inside, outside or within the refusal band.
    pub fn locate(&self, z: Complex64) -> PointLocation {
        let distance = self.distance(z);
        if distance < self.band {
            return PointLocation {
                tag: Region::NearBoundary,
                distance_estimate: distance,
            };
        }
        // Winding of the node polygon about z. Away from the polygon every
        // chord subtends less than π, so principal arguments add up exactly.
        let n = self.len();
        let mut total = 0.0;
        for k in 0..n {
            let a = self.gamma[k] - z;
            let b = self.gamma[(k + 1) % n] - z;
            total += (b / a).arg();
        }
        let w = (total / (2.0 * PI)).round();
        PointLocation {
            tag: if w != 0.0 {
                Region::Inside
            } else {
                Region::Outside
            },
            distance_estimate: distance,
        }
    }

    pub fn is_inside(&self, z: Complex64) -> bool {
        self.locate(z).tag == Region::Inside
    }
}

fn eval_modes(modes: &[(i64, Complex64)], theta: &[f64]) -> (Vec<Complex64>, Vec<Complex64>) {
    let mut gamma = vec![Complex64::new(0.0, 0.0); theta.len()];
    let mut dgamma = gamma.clone();
    for (k, &t) in theta.iter().enumerate() {
        for &(m, c) in modes {
            let e = c * Complex64::from_polar(1.0, m as f64 * t);
            gamma[k] += e;
            dgamma[k] += e * Complex64::new(0.0, m as f64);
        }
    }
    (gamma, dgamma)
}

/// Winding number of nonvanishing samples around the origin, from the
/// accumulated phase increments `arg(f_{k+1}/f_k)`.
pub fn winding_number(f: &[Complex64]) -> Result<Winding> {
    let n = f.len();
    if n == 0 {
        return Err(Error::InvalidContour("no samples".into()));
    }
    let scale = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
    for (node, z) in f.iter().enumerate() {
        let modulus = z.norm();
        if !(modulus > 1e-300) || modulus < 1e-14 * scale || !modulus.is_finite() {
            return Err(Error::VanishingSample { node, modulus });
        }
    }
    let mut total = 0.0;
    for k in 0..n {
        let next = (k + 1) % n;
        let step = (f[next] / f[k]).arg();
        if step.abs() >= PI / 2.0 {
            return Err(Error::UnresolvedPhase {
                node: k,
                next,
                step,
            });
        }
        total += step;
    }
    let raw = total / (2.0 * PI);
    let value = raw.round();
    let residual = (raw - value).abs();
    if residual > WINDING_RESIDUAL_MAX {
        return Err(Error::WindingResidual { raw, residual });
    }
    Ok(Winding {
        value: value as i64,
        residual,
    })
}
