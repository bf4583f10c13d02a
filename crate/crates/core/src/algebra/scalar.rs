use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

/// Exact complex numbers with rational real and imaginary parts.
pub type Gaussian = Complex<BigRational>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarMode {
    ExactRational,
    GaussianRational,
    ComplexFloat,
    Float,
    Series,
}

impl ScalarMode {
    pub fn name(self) -> &'static str {
        match self {
            ScalarMode::ExactRational => "exact-rational",
            ScalarMode::GaussianRational => "gaussian-rational",
            ScalarMode::ComplexFloat => "complex-float",
            ScalarMode::Float => "float",
            ScalarMode::Series => "series",
        }
    }
}

/// Commutative ring with the few extras the matrix code needs.
///
/// `magnitude` is only used for reporting and tolerance tests. Exact types
/// compare exactly in [`Ring::near`].
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;
    const MODE: ScalarMode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(n: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> Complex64;

    fn near(&self, other: &Self, tol: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.clone() - other.clone()).magnitude() <= tol
        }
    }

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

pub trait Field: Ring + Div<Output = Self> {
    fn try_inv(&self) -> Option<Self>;
    fn from_rational(r: &BigRational) -> Self;

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(n.into(), d.into()))
    }
}

/// Square and n-th roots where the scalar mode can represent them.
///
/// `try_sqrt` returns the principal branch; callers negate for the other one.
pub trait Radicals: Field {
    fn try_sqrt(&self) -> Option<Self>;
    fn try_nth_root(&self, n: u32) -> Option<Self>;
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_zero() -> BigRational {
    rat(0)
}

fn rat_is_zero(r: &BigRational) -> bool {
    r.numer().sign() == Sign::NoSign
}

pub(crate) fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

impl Ring for BigRational {
    const EXACT: bool = true;
    const MODE: ScalarMode = ScalarMode::ExactRational;

    fn zero() -> Self {
        rat_zero()
    }
    fn one() -> Self {
        rat(1)
    }
    fn from_i64(n: i64) -> Self {
        rat(n)
    }
    fn is_zero(&self) -> bool {
        rat_is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        rat_to_f64(self).abs()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(self), 0.0)
    }
}

impl Field for BigRational {
    fn try_inv(&self) -> Option<Self> {
        if rat_is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_rational(r: &BigRational) -> Self {
        r.clone()
    }
}

fn int_nth_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k.is_multiple_of(2) {
            return None;
        }
        return int_nth_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

impl Radicals for BigRational {
    fn try_sqrt(&self) -> Option<Self> {
        self.try_nth_root(2)
    }
    fn try_nth_root(&self, n: u32) -> Option<Self> {
        let num = int_nth_root(self.numer(), n)?;
        let den = int_nth_root(self.denom(), n)?;
        Some(BigRational::new(num, den))
    }
}

impl Ring for Gaussian {
    const EXACT: bool = true;
    const MODE: ScalarMode = ScalarMode::GaussianRational;

    fn zero() -> Self {
        Complex::new(rat_zero(), rat_zero())
    }
    fn one() -> Self {
        Complex::new(rat(1), rat_zero())
    }
    fn from_i64(n: i64) -> Self {
        Complex::new(rat(n), rat_zero())
    }
    fn is_zero(&self) -> bool {
        rat_is_zero(&self.re) && rat_is_zero(&self.im)
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl Field for Gaussian {
    fn try_inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            return None;
        }
        let norm = self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone();
        Some(Complex::new(self.re.clone() / norm.clone(), -self.im.clone() / norm))
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex::new(r.clone(), rat_zero())
    }
}

impl Radicals for Gaussian {
    fn try_sqrt(&self) -> Option<Self> {
        if rat_is_zero(&self.im) {
            return if self.re.is_negative() {
                Some(Complex::new(rat_zero(), (-self.re.clone()).try_sqrt()?))
            } else {
                Some(Complex::new(self.re.try_sqrt()?, rat_zero()))
            };
        }
        let modulus = (self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()).try_sqrt()?;
        let two = rat(2);
        let x = ((modulus + self.re.clone()) / two.clone()).try_sqrt()?;
        let y = self.im.clone() / (two * x.clone());
        Some(Complex::new(x, y))
    }
    fn try_nth_root(&self, n: u32) -> Option<Self> {
        if n == 2 {
            return self.try_sqrt();
        }
        if !rat_is_zero(&self.im) {
            return None;
        }
        Some(Complex::new(self.re.try_nth_root(n)?, rat_zero()))
    }
}

impl Ring for f64 {
    const EXACT: bool = false;
    const MODE: ScalarMode = ScalarMode::Float;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    fn to_c64(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }
}

impl Field for f64 {
    fn try_inv(&self) -> Option<Self> {
        if *self == 0.0 {
            None
        } else {
            Some(1.0 / self)
        }
    }
    fn from_rational(r: &BigRational) -> Self {
        rat_to_f64(r)
    }
}

impl Radicals for f64 {
    fn try_sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| self.sqrt())
    }
    fn try_nth_root(&self, n: u32) -> Option<Self> {
        if *self >= 0.0 {
            Some(self.powf(1.0 / n as f64))
        } else if n % 2 == 1 {
            Some(-(-self).powf(1.0 / n as f64))
        } else {
            None
        }
    }
}

impl Ring for Complex64 {
    const EXACT: bool = false;
    const MODE: ScalarMode = ScalarMode::ComplexFloat;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl Field for Complex64 {
    fn try_inv(&self) -> Option<Self> {
        if Ring::is_zero(self) {
            None
        } else {
            Some(Complex64::new(1.0, 0.0) / self)
        }
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(rat_to_f64(r), 0.0)
    }
}

impl Radicals for Complex64 {
    fn try_sqrt(&self) -> Option<Self> {
        Some(self.sqrt())
    }
    fn try_nth_root(&self, n: u32) -> Option<Self> {
        Some(self.powf(1.0 / n as f64))
    }
}

/// Exact square root or an error naming the radicand.
pub fn sqrt_or_err<F: Radicals + crate::algebra::json::JsonScalar>(x: &F) -> crate::Result<F> {
    x.try_sqrt()
        .ok_or_else(|| crate::Error::NotRepresentable(x.render()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_roots() {
        assert_eq!(r(9, 4).try_sqrt(), Some(r(3, 2)));
        assert_eq!(r(2, 1).try_sqrt(), None);
        assert_eq!(r(-8, 27).try_nth_root(3), Some(r(-2, 3)));
        assert_eq!(r(-4, 1).try_sqrt(), None);
    }

    #[test]
    fn gaussian_roots() {
        let minus_four = Gaussian::from_rational(&r(-4, 1));
        assert_eq!(minus_four.try_sqrt(), Some(Complex::new(r(0, 1), r(2, 1))));
        // (2 + i)^2 = 3 + 4i
        let z = Complex::new(r(3, 1), r(4, 1));
        assert_eq!(z.try_sqrt(), Some(Complex::new(r(2, 1), r(1, 1))));
        let w = Complex::new(r(1, 1), r(1, 1));
        assert_eq!(w.try_sqrt(), None);
    }

    #[test]
    fn gaussian_inverse() {
        let z = Complex::new(r(1, 1), r(2, 1));
        let zi = z.try_inv().unwrap();
        assert!((z * zi).is_one());
    }

    #[test]
    fn near_is_exact_for_rationals() {
        assert!(!r(1, 3).near(&r(1, 3 + 1), 1.0));
        assert!(0.1f64.near(&0.1000001, 1e-5));
    }
}
