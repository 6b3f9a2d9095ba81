use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, ToPrimitive};

/// Field-like scalar shared by exact and floating point evaluation paths.
pub trait Scalar: Num + Clone + PartialOrd + Debug {
    fn from_ratio(r: Ratio<i64>) -> Self;

    fn from_u64(n: u64) -> Self;

    fn from_big_ratio(r: &BigRational) -> Self;

    fn approx_f64(&self) -> f64;

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(Ratio::from_integer(n))
    }
}

impl Scalar for f64 {
    fn from_ratio(r: Ratio<i64>) -> Self {
        *r.numer() as f64 / *r.denom() as f64
    }

    fn from_u64(n: u64) -> Self {
        n as f64
    }

    fn from_big_ratio(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn approx_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_ratio(r: Ratio<i64>) -> Self {
        (*r.numer() as f64 / *r.denom() as f64) as f32
    }

    fn from_u64(n: u64) -> Self {
        n as f32
    }

    fn from_big_ratio(r: &BigRational) -> Self {
        r.to_f32().unwrap_or(f32::NAN)
    }

    fn approx_f64(&self) -> f64 {
        *self as f64
    }
}

impl Scalar for BigRational {
    fn from_ratio(r: Ratio<i64>) -> Self {
        BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
    }

    fn from_u64(n: u64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn from_big_ratio(r: &BigRational) -> Self {
        r.clone()
    }

    fn approx_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

/// Natural log of a big unsigned integer without overflowing `f64`.
pub fn ln_biguint(x: &num_bigint::BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top: num_bigint::BigUint = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of a positive big rational.
pub fn ln_big_ratio(x: &BigRational) -> f64 {
    let num = x.numer().magnitude();
    let den = x.denom().magnitude();
    ln_biguint(num) - ln_biguint(den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    #[test]
    fn ratio_conversions_agree() {
        let r = Ratio::new(-3i64, 8);
        assert_eq!(f64::from_ratio(r), -0.375);
        assert_eq!(f32::from_ratio(r), -0.375f32);
        assert_eq!(BigRational::from_ratio(r).approx_f64(), -0.375);
    }

    #[test]
    fn ln_of_huge_integer() {
        let x = BigUint::from(3u32).pow(2000);
        let expect = 2000.0 * 3f64.ln();
        assert!((ln_biguint(&x) - expect).abs() < 1e-9 * expect);
    }
}
