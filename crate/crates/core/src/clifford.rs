//! Arithmetic in the four-dimensional Clifford algebra R(0,2).
//!
//! Elements are stored on the basis `(1, e1, e2, e12)` with `e1² = e2² = -1`
//! and `e1 e2 = -e2 e1 = e12`. The even subalgebra `span(1, e12)` is
//! identified with the complex numbers through [`beta`], vectors
//! `x1 e1 + x2 e2` with complex numbers through [`alpha`].

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `TABLE[i][j] = (sign, k)` means `basis[i] * basis[j] = sign * basis[k]`.
const TABLE: [[(f64, usize); 4]; 4] = [
    [(1.0, 0), (1.0, 1), (1.0, 2), (1.0, 3)],
    [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
    [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
    [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
];

/// An element `c0 + c1 e1 + c2 e2 + c12 e12` of R(0,2).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CliffordElement {
    pub c0: f64,
    pub c1: f64,
    pub c2: f64,
    pub c12: f64,
}

impl CliffordElement {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const E1: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const E2: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const E12: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(c0: f64, c1: f64, c2: f64, c12: f64) -> Self {
        Self { c0, c1, c2, c12 }
    }

    pub const fn scalar(s: f64) -> Self {
        Self::new(s, 0.0, 0.0, 0.0)
    }

    /// The vector `x1 e1 + x2 e2`.
    pub const fn vector(x1: f64, x2: f64) -> Self {
        Self::new(0.0, x1, x2, 0.0)
    }

    pub fn from_array(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.c0, self.c1, self.c2, self.c12]
    }

    /// Clifford conjugation: `conj(e_A) = (-1)^k e_{b_k} ... e_{b_1}`.
    ///
    /// Every basis blade of R(0,2) other than the scalar changes sign, so this
    /// coincides with quaternion conjugation under R(0,2) ≅ H.
    pub fn conj(self) -> Self {
        Self::new(self.c0, -self.c1, -self.c2, -self.c12)
    }

    /// Euclidean norm of the coefficient vector. `a * conj(a) = |a|²`.
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn norm_sqr(self) -> f64 {
        self.c0 * self.c0 + self.c1 * self.c1 + self.c2 * self.c2 + self.c12 * self.c12
    }

    pub fn scale(self, s: f64) -> Self {
        Self::new(self.c0 * s, self.c1 * s, self.c2 * s, self.c12 * s)
    }

    /// Multiplicative inverse, `conj(a) / |a|²`.
    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::Domain(format!("{self} is not invertible")));
        }
        Ok(self.conj().scale(1.0 / n2))
    }

    /// Integer power; negative exponents go through [`Self::inverse`].
    pub fn powi(self, n: i32) -> Result<Self> {
        let base = if n < 0 { self.inverse()? } else { self };
        let mut acc = Self::ONE;
        for _ in 0..n.unsigned_abs() {
            acc = acc * base;
        }
        Ok(acc)
    }

    pub fn is_vector(self) -> bool {
        self.c0 == 0.0 && self.c12 == 0.0
    }

    pub fn max_abs_diff(self, other: Self) -> f64 {
        let d = self - other;
        d.c0.abs().max(d.c1.abs()).max(d.c2.abs()).max(d.c12.abs())
    }

    fn coeff(&self, k: usize) -> f64 {
        match k {
            0 => self.c0,
            1 => self.c1,
            2 => self.c2,
            _ => self.c12,
        }
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // honours a requested precision, e.g. `{:.6}`
        match f.precision() {
            Some(p) => write!(
                f,
                "{:.p$} {:+.p$}*e1 {:+.p$}*e2 {:+.p$}*e12",
                self.c0, self.c1, self.c2, self.c12
            ),
            None => write!(
                f,
                "{} {:+}*e1 {:+}*e2 {:+}*e12",
                self.c0, self.c1, self.c2, self.c12
            ),
        }
    }
}

impl Mul for CliffordElement {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        let mut out = [0.0; 4];
        for (i, row) in TABLE.iter().enumerate() {
            let a = self.coeff(i);
            if a == 0.0 {
                continue;
            }
            for (j, &(sign, k)) in row.iter().enumerate() {
                out[k] += sign * a * rhs.coeff(j);
            }
        }
        Self::from_array(out)
    }
}

impl Add for CliffordElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.c0 + rhs.c0,
            self.c1 + rhs.c1,
            self.c2 + rhs.c2,
            self.c12 + rhs.c12,
        )
    }
}

impl AddAssign for CliffordElement {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for CliffordElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.c0 - rhs.c0,
            self.c1 - rhs.c1,
            self.c2 - rhs.c2,
            self.c12 - rhs.c12,
        )
    }
}

impl Neg for CliffordElement {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.c0, -self.c1, -self.c2, -self.c12)
    }
}

/// An element `s + p e12` of the even subalgebra.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvenElement {
    pub s: f64,
    pub p: f64,
}

impl EvenElement {
    pub const fn new(s: f64, p: f64) -> Self {
        Self { s, p }
    }

    pub fn to_clifford(self) -> CliffordElement {
        CliffordElement::new(self.s, 0.0, 0.0, self.p)
    }
}

impl Mul for EvenElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // e12² = -1, so the product mirrors complex multiplication
        Self::new(
            self.s * rhs.s - self.p * rhs.p,
            self.s * rhs.p + self.p * rhs.s,
        )
    }
}

impl From<EvenElement> for CliffordElement {
    fn from(a: EvenElement) -> Self {
        a.to_clifford()
    }
}

/// Splits `a = a0 + e1 a1` with `a0`, `a1` even.
pub fn even_odd_split(a: CliffordElement) -> (EvenElement, EvenElement) {
    // e1 (s + p e12) = s e1 - p e2
    (EvenElement::new(a.c0, a.c12), EvenElement::new(a.c1, -a.c2))
}

/// Inverse of [`even_odd_split`]: `a0 + e1 a1`.
pub fn even_odd_join(a0: EvenElement, a1: EvenElement) -> CliffordElement {
    CliffordElement::new(a0.s, a1.s, -a1.p, a0.p)
}

/// `x1 + x2 i -> x1 e1 + x2 e2`.
pub fn alpha(z: Complex64) -> CliffordElement {
    CliffordElement::vector(z.re, z.im)
}

/// Inverse of [`alpha`]; fails unless `x` is purely vectorial.
pub fn alpha_inv(x: CliffordElement) -> Result<Complex64> {
    if !x.is_vector() {
        return Err(Error::Domain(format!("{x} is not a vector")));
    }
    Ok(Complex64::new(x.c1, x.c2))
}

/// `e12 -> i`.
pub fn beta(a: EvenElement) -> Complex64 {
    Complex64::new(a.s, a.p)
}

pub fn beta_inv(z: Complex64) -> EvenElement {
    EvenElement::new(z.re, z.im)
}

/// Builds `beta_inv(f0) + e1 beta_inv(f1)`.
pub fn from_hat(f0: Complex64, f1: Complex64) -> CliffordElement {
    even_odd_join(beta_inv(f0), beta_inv(f1))
}

/// Complex pair `(beta(a0), beta(a1))` of a single element.
pub fn to_hat(a: CliffordElement) -> (Complex64, Complex64) {
    let (a0, a1) = even_odd_split(a);
    (beta(a0), beta(a1))
}

/// `G* = -e1 G e1`.
pub fn star(a: CliffordElement) -> CliffordElement {
    -(CliffordElement::E1 * a * CliffordElement::E1)
}

/// Hat images of a Clifford-valued boundary function, node by node.
#[derive(Debug, Clone, PartialEq)]
pub struct HatPair {
    pub even: Vec<Complex64>,
    pub odd: Vec<Complex64>,
}

impl HatPair {
    /// Hat images of the starred coefficients `-e1 G_j e1`. At n = 2 these are
    /// the complex conjugates of the plain hat images.
    pub fn starred(&self) -> HatPair {
        HatPair {
            even: self.even.iter().map(|z| z.conj()).collect(),
            odd: self.odd.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn reconstruct(&self) -> Vec<CliffordElement> {
        self.even
            .iter()
            .zip(&self.odd)
            .map(|(&f0, &f1)| from_hat(f0, f1))
            .collect()
    }
}

/// Per-node `(beta(F0), beta(F1))` for samples `F = F0 + e1 F1`.
pub fn hat_transform(samples: &[CliffordElement]) -> HatPair {
    let mut even = Vec::with_capacity(samples.len());
    let mut odd = Vec::with_capacity(samples.len());
    for &f in samples {
        let (a0, a1) = even_odd_split(f);
        debug_assert!({
            let (s0, s1) = even_odd_split(star(a0.to_clifford()));
            let (t0, _) = even_odd_split(star(a1.to_clifford()));
            s1 == EvenElement::default()
                && beta(s0) == beta(a0).conj()
                && beta(t0) == beta(a1).conj()
        });
        even.push(beta(a0));
        odd.push(beta(a1));
    }
    HatPair { even, odd }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(z: (f64, f64)) -> Complex64 {
        Complex64::new(z.0, z.1)
    }

    #[test]
    fn defining_relations() {
        use CliffordElement as C;
        assert_eq!(C::E1 * C::E2, C::E12);
        assert_eq!(C::E1 * C::E1, -C::ONE);
        assert_eq!(C::E2 * C::E2, -C::ONE);
        assert_eq!(C::E2 * C::E1, -C::E12);
        assert_eq!(C::E12 * C::E12, -C::ONE);
        let p = (C::ONE + C::E1) * (C::ONE - C::E1);
        assert_eq!(p, C::scalar(2.0));
    }

    #[test]
    fn conjugation_examples() {
        use CliffordElement as C;
        assert_eq!(C::E1.conj(), -C::E1);
        assert_eq!(C::E12.conj(), -C::E12);
        let x = C::vector(3.0, 4.0);
        assert_eq!(x * x.conj(), C::scalar(25.0));
        assert_eq!(x.conj() * x, C::scalar(25.0));
    }

    #[test]
    fn split_examples() {
        let (a0, a1) = even_odd_split(CliffordElement::new(1.0, 0.0, 0.0, 4.0));
        assert_eq!(
            (a0, a1),
            (EvenElement::new(1.0, 4.0), EvenElement::default())
        );
        let (a0, a1) = even_odd_split(CliffordElement::E1);
        assert_eq!(
            (a0, a1),
            (EvenElement::default(), EvenElement::new(1.0, 0.0))
        );
        let a = CliffordElement::new(1.0, 2.0, 3.0, 4.0);
        let (a0, a1) = even_odd_split(a);
        assert_eq!(a0, EvenElement::new(1.0, 4.0));
        assert_eq!(a1, EvenElement::new(2.0, -3.0));
        // e1 (2 - 3 e12) = 2 e1 + 3 e2
        assert_eq!(
            CliffordElement::E1 * a1.to_clifford(),
            CliffordElement::vector(2.0, 3.0)
        );
    }

    #[test]
    fn alpha_beta_examples() {
        assert_eq!(alpha(c((3.0, 4.0))), CliffordElement::vector(3.0, 4.0));
        assert_eq!(alpha(Complex64::new(0.0, 0.0)), CliffordElement::ZERO);
        assert!(alpha_inv(CliffordElement::ONE).is_err());
        assert_eq!(beta(EvenElement::new(0.0, 1.0)), Complex64::i());
        assert_eq!(beta(EvenElement::new(1.0, 0.0)), Complex64::new(1.0, 0.0));
        let lhs = beta(EvenElement::new(1.0, 1.0) * EvenElement::new(2.0, -1.0));
        assert_eq!(lhs, c((1.0, 1.0)) * c((2.0, -1.0)));
    }

    #[test]
    fn hat_transform_examples() {
        let h = hat_transform(&[CliffordElement::ONE - CliffordElement::E1]);
        assert_eq!((h.even[0], h.odd[0]), (c((1.0, 0.0)), c((-1.0, 0.0))));
        let h = hat_transform(&[CliffordElement::E1]);
        assert_eq!((h.even[0], h.odd[0]), (c((0.0, 0.0)), c((1.0, 0.0))));
        // F(x) = -e1 x at x = alpha(t) gives conj(t)
        let t = c((0.3, -1.7));
        let f = -(CliffordElement::E1 * alpha(t));
        let h = hat_transform(&[f]);
        assert_eq!(h.even[0], t.conj());
        assert_eq!(h.odd[0], Complex64::new(0.0, 0.0));
        assert_eq!(h.reconstruct()[0], f);
    }

    #[test]
    fn star_is_conjugate_of_hat() {
        let a = EvenElement::new(0.7, -2.5).to_clifford();
        let (s, odd) = to_hat(star(a));
        assert_eq!(odd, Complex64::new(0.0, 0.0));
        assert_eq!(s, to_hat(a).0.conj());
    }

    fn element() -> impl Strategy<Value = CliffordElement> {
        prop::array::uniform4(-10.0f64..10.0).prop_map(CliffordElement::from_array)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn associativity(a in element(), b in element(), c in element()) {
            let l = (a * b) * c;
            let r = a * (b * c);
            let scale = 1.0 + a.norm() * b.norm() * c.norm();
            prop_assert!(l.max_abs_diff(r) <= 1e-12 * scale);
        }

        #[test]
        fn conj_is_anti_automorphism(a in element(), b in element()) {
            let l = (a * b).conj();
            let r = b.conj() * a.conj();
            prop_assert!(l.max_abs_diff(r) <= 1e-12 * (1.0 + a.norm() * b.norm()));
        }

        #[test]
        fn split_roundtrip_is_bit_exact(a in element()) {
            let (a0, a1) = even_odd_split(a);
            prop_assert_eq!(even_odd_join(a0, a1), a);
        }

        #[test]
        fn beta_is_multiplicative(s1 in -5.0f64..5.0, p1 in -5.0f64..5.0,
                                  s2 in -5.0f64..5.0, p2 in -5.0f64..5.0) {
            let a = EvenElement::new(s1, p1);
            let b = EvenElement::new(s2, p2);
            let lhs = beta(a * b);
            let rhs = beta(a) * beta(b);
            prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
            prop_assert_eq!(beta(beta_inv(Complex64::new(s1, p1))), Complex64::new(s1, p1));
            // the even-subalgebra product agrees with the full table
            prop_assert_eq!((a * b).to_clifford(), a.to_clifford() * b.to_clifford());
        }

        #[test]
        fn vector_norm_is_scalar(x1 in -100.0f64..100.0, x2 in -100.0f64..100.0) {
            let x = CliffordElement::vector(x1, x2);
            let p = x * x.conj();
            let n2 = x1 * x1 + x2 * x2;
            prop_assert!(p.c1 == 0.0 && p.c2 == 0.0 && p.c12.abs() <= 1e-14 * (1.0 + n2));
            prop_assert!((p.c0 - n2).abs() <= 1e-14 * n2.max(1e-300));
        }

        #[test]
        fn alpha_roundtrip(re in -1e3f64..1e3, im in -1e3f64..1e3) {
            let z = Complex64::new(re, im);
            prop_assert_eq!(alpha_inv(alpha(z)).unwrap(), z);
        }

        #[test]
        fn inverse_is_two_sided(a in element()) {
            prop_assume!(a.norm() > 1e-3);
            let inv = a.inverse().unwrap();
            prop_assert!((a * inv).max_abs_diff(CliffordElement::ONE) < 1e-12);
            prop_assert!((inv * a).max_abs_diff(CliffordElement::ONE) < 1e-12);
        }
    }
}
