//! Binary floating point with arbitrary precision and unbounded exponent,
//! plus a complex type on top of it.
//!
//! A value is `mant · 2^exp` with `|mant| < 2^prec`. Every arithmetic result
//! is rounded to nearest at the larger precision of its operands.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn ldexp(x: f64, mut e: i64) -> f64 {
    let mut x = x;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        BigFloat {
            mant: BigInt::zero(),
            exp: 0,
            prec,
        }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_bigint(&BigInt::one(), prec)
    }

    pub fn from_bigint(x: &BigInt, prec: u32) -> Self {
        BigFloat {
            mant: x.clone(),
            exp: 0,
            prec,
        }
        .rounded()
    }

    pub fn from_i64(x: i64, prec: u32) -> Self {
        Self::from_bigint(&BigInt::from(x), prec)
    }

    /// `num / den` rounded to `prec` bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, prec: u32) -> Self {
        &Self::from_bigint(num, prec) / &Self::from_bigint(den, prec)
    }

    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite(), "BigFloat::from_f64 on non-finite value");
        if x == 0.0 {
            return Self::zero(prec);
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), raw_exp - 1075)
        };
        BigFloat {
            mant: BigInt::from(m) * sign,
            exp: e,
            prec,
        }
        .rounded()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp,
            prec,
        }
        .rounded()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigFloat {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Multiplies by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        BigFloat {
            mant: self.mant.clone(),
            exp: self.exp + k,
            prec: self.prec,
        }
    }

    fn rounded(mut self) -> Self {
        let bits = self.mant.bits();
        if bits > self.prec as u64 {
            let shift = bits - self.prec as u64;
            let neg = self.mant.is_negative();
            let mag = self.mant.magnitude();
            let half = num_bigint::BigUint::one() << (shift - 1);
            let m = (mag + half) >> shift;
            self.mant = BigInt::from_biguint(if neg { Sign::Minus } else { Sign::Plus }, m);
            self.exp += shift as i64;
        }
        if self.mant.is_zero() {
            self.exp = 0;
        }
        self
    }

    /// Position of the leading bit: `|x| ∈ [2^{top−1}, 2^top)`.
    fn top(&self) -> i64 {
        self.exp + self.mant.bits() as i64
    }

    pub fn sqrt(&self) -> Self {
        assert!(!self.is_negative(), "sqrt of negative BigFloat");
        if self.is_zero() {
            return self.clone();
        }
        let want = 2 * (self.prec as i64 + 2);
        let bits = self.mant.bits() as i64;
        let mut s = (want - bits).max(0);
        if (self.exp - s).rem_euclid(2) != 0 {
            s += 1;
        }
        let r = (&self.mant << s as usize).sqrt();
        BigFloat {
            mant: r,
            exp: (self.exp - s) / 2,
            prec: self.prec,
        }
        .rounded()
    }

    /// `log2 |x|`, `-inf` for zero. Accurate to f64 precision at any exponent.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(64);
        let top = (self.mant.magnitude() >> shift).to_u64().unwrap();
        (top as f64).log2() + (self.exp + shift as i64) as f64
    }

    pub fn ln_abs(&self) -> f64 {
        self.log2_abs() * std::f64::consts::LN_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits();
        let shift = bits.saturating_sub(64);
        let top = (self.mant.magnitude() >> shift).to_u64().unwrap() as f64;
        let v = ldexp(top, self.exp + shift as i64);
        if self.is_negative() {
            -v
        } else {
            v
        }
    }

    /// The exact rational value.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn cmp_abs(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (ta, tb) = (self.top(), other.top());
        if ta != tb {
            return ta.cmp(&tb);
        }
        let e = self.exp.min(other.exp);
        let a = self.mant.magnitude() << (self.exp - e) as usize;
        let b = other.mant.magnitude() << (other.exp - e) as usize;
        a.cmp(&b)
    }

    fn add_impl(&self, other: &Self, negate_other: bool) -> Self {
        let prec = self.prec.max(other.prec);
        if other.is_zero() {
            return self.with_prec(prec);
        }
        let other_mant = if negate_other {
            -other.mant.clone()
        } else {
            other.mant.clone()
        };
        if self.is_zero() {
            return BigFloat {
                mant: other_mant,
                exp: other.exp,
                prec,
            }
            .rounded();
        }
        let gap = self.top() - other.top();
        let slack = prec as i64 + 3;
        if gap > slack {
            return self.with_prec(prec);
        }
        if -gap > slack {
            return BigFloat {
                mant: other_mant,
                exp: other.exp,
                prec,
            }
            .rounded();
        }
        let e = self.exp.min(other.exp);
        let m = (&self.mant << (self.exp - e) as usize) + (other_mant << (other.exp - e) as usize);
        BigFloat {
            mant: m,
            exp: e,
            prec,
        }
        .rounded()
    }
}

impl PartialEq for BigFloat {
    fn eq(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }
}

impl Add for &BigFloat {
    type Output = BigFloat;
    fn add(self, rhs: &BigFloat) -> BigFloat {
        self.add_impl(rhs, false)
    }
}

impl Sub for &BigFloat {
    type Output = BigFloat;
    fn sub(self, rhs: &BigFloat) -> BigFloat {
        self.add_impl(rhs, true)
    }
}

impl Mul for &BigFloat {
    type Output = BigFloat;
    fn mul(self, rhs: &BigFloat) -> BigFloat {
        BigFloat {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
            prec: self.prec.max(rhs.prec),
        }
        .rounded()
    }
}

impl Div for &BigFloat {
    type Output = BigFloat;
    fn div(self, rhs: &BigFloat) -> BigFloat {
        assert!(!rhs.is_zero(), "BigFloat division by zero");
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return BigFloat::zero(prec);
        }
        let s = (prec as i64 + 2 + rhs.mant.bits() as i64 - self.mant.bits() as i64).max(0);
        let q = (&self.mant << s as usize) / &rhs.mant;
        BigFloat {
            mant: q,
            exp: self.exp - s - rhs.exp,
            prec,
        }
        .rounded()
    }
}

impl Neg for &BigFloat {
    type Output = BigFloat;
    fn neg(self) -> BigFloat {
        BigFloat {
            mant: -self.mant.clone(),
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Neg for BigFloat {
    type Output = BigFloat;
    fn neg(mut self) -> BigFloat {
        self.mant = -self.mant;
        self
    }
}

/// Complex number with [`BigFloat`] parts.
#[derive(Clone, Debug, PartialEq)]
pub struct MpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl MpComplex {
    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        MpComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        MpComplex::new(BigFloat::zero(prec), BigFloat::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        MpComplex::new(BigFloat::one(prec), BigFloat::zero(prec))
    }

    pub fn real(x: BigFloat) -> Self {
        let p = x.prec();
        MpComplex::new(x, BigFloat::zero(p))
    }

    pub fn from_c64(z: Complex64, prec: u32) -> Self {
        MpComplex::new(
            BigFloat::from_f64(z.re, prec),
            BigFloat::from_f64(z.im, prec),
        )
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        MpComplex::new(self.re.with_prec(prec), self.im.with_prec(prec))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        MpComplex::new(self.re.clone(), -&self.im)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt()
    }

    /// `log2 |z|`, `-inf` for zero.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        0.5 * self.norm_sqr().log2_abs()
    }

    pub fn ln_abs(&self) -> f64 {
        self.log2_abs() * std::f64::consts::LN_2
    }

    pub fn scale(&self, x: &BigFloat) -> Self {
        MpComplex::new(&self.re * x, &self.im * x)
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        MpComplex::new(&self.re / &n, &-&self.im / &n)
    }
}

impl Add for &MpComplex {
    type Output = MpComplex;
    fn add(self, rhs: &MpComplex) -> MpComplex {
        MpComplex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &MpComplex {
    type Output = MpComplex;
    fn sub(self, rhs: &MpComplex) -> MpComplex {
        MpComplex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &MpComplex {
    type Output = MpComplex;
    fn mul(self, rhs: &MpComplex) -> MpComplex {
        MpComplex::new(
            &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        )
    }
}

impl Div for &MpComplex {
    type Output = MpComplex;
    fn div(self, rhs: &MpComplex) -> MpComplex {
        let n = rhs.norm_sqr();
        let num = self * &rhs.conj();
        MpComplex::new(&num.re / &n, &num.im / &n)
    }
}

impl Neg for &MpComplex {
    type Output = MpComplex;
    fn neg(self) -> MpComplex {
        MpComplex::new(-&self.re, -&self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_matches_f64() {
        let p = 128;
        let a = BigFloat::from_f64(1.5, p);
        let b = BigFloat::from_f64(-0.375, p);
        assert_eq!((&a + &b).to_f64(), 1.125);
        assert_eq!((&a - &b).to_f64(), 1.875);
        assert_eq!((&a * &b).to_f64(), -0.5625);
        assert_eq!((&a / &b).to_f64(), -4.0);
        assert_eq!(BigFloat::from_i64(9, p).sqrt().to_f64(), 3.0);
    }

    #[test]
    fn precision_beyond_f64() {
        let p = 200;
        let third = BigFloat::from_ratio(&BigInt::from(1), &BigInt::from(3), p);
        let back = &third * &BigFloat::from_i64(3, p);
        let err = &back - &BigFloat::one(p);
        assert!(err.log2_abs() < -190.0);
        // 1 + 2^-150 survives at 200 bits
        let tiny = BigFloat::one(p).mul_pow2(-150);
        let s = &BigFloat::one(p) + &tiny;
        assert!((&s - &BigFloat::one(p)).log2_abs() > -151.0);
    }

    #[test]
    fn huge_exponents_stay_finite_in_log() {
        let big = BigFloat::one(64).mul_pow2(100_000);
        assert_eq!(big.log2_abs(), 100_000.0);
        assert!(big.to_f64().is_infinite());
        assert_eq!(BigFloat::one(64).mul_pow2(-100_000).to_f64(), 0.0);
    }

    #[test]
    fn sqrt_two_digits() {
        let r = BigFloat::from_i64(2, 256).sqrt();
        let sq = &r * &r;
        assert!((&sq - &BigFloat::from_i64(2, 256)).log2_abs() < -250.0);
    }

    #[test]
    fn complex_division_roundtrip() {
        let p = 128;
        let a = MpComplex::from_c64(Complex64::new(1.0, 2.0), p);
        let b = MpComplex::from_c64(Complex64::new(-3.0, 0.5), p);
        let q = &a / &b;
        let back = &q * &b;
        assert!((&back - &a).log2_abs() < -120.0);
        assert!(
            (MpComplex::from_c64(Complex64::new(3.0, 4.0), p)
                .abs()
                .to_f64()
                - 5.0)
                .abs()
                < 1e-15
        );
    }
}
