//! Exact arithmetic in a real quadratic field ℚ(√d).
//!
//! A value is `a + b√d` with rational `a`, `b` and a square-free integer
//! `d > 1` fixed per session.  Values with `b = 0` carry `d = 0` ("any
//! field") so that plain rationals mix freely with field elements; binary
//! operations unify the two discriminants and panic on a genuine mismatch,
//! which would be a programming error, not a data condition.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Scalar;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
    /// Square-free discriminant; 0 when the value is rational.
    d: u64,
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Self {
        let mut v = QuadExt { a, b, d };
        if v.b.is_zero() {
            v.d = 0;
        }
        v
    }

    pub fn from_rat(q: &BigRational) -> Self {
        QuadExt::new(q.clone(), BigRational::zero(), 0)
    }

    pub fn sqrt_of(d: u64) -> Self {
        QuadExt::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.b
    }

    pub fn discriminant(&self) -> u64 {
        self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn unify(&self, other: &Self) -> u64 {
        match (self.d, other.d) {
            (0, d) | (d, 0) => d,
            (d1, d2) if d1 == d2 => d1,
            (d1, d2) => panic!("mixed quadratic fields: sqrt({d1}) vs sqrt({d2})"),
        }
    }

    /// Certified sign of `a + b√d` by case analysis and one squaring.
    fn sign(&self) -> i8 {
        let sa = rational_sign(&self.a);
        if self.b.is_zero() {
            return sa;
        }
        let sb = rational_sign(&self.b);
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // Opposite signs: compare a² against b²·d; the sign of the larger
        // magnitude wins.  a² = b²d is impossible for square-free d > 1 with
        // b ≠ 0 (it would make √d rational).
        let t = &self.a * &self.a - &self.b * &self.b * BigRational::from(BigInt::from(self.d));
        debug_assert!(!t.is_zero());
        if t.is_positive() {
            sa
        } else {
            sb
        }
    }

    pub fn approx(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN)
            + self.b.to_f64().unwrap_or(f64::NAN) * (self.d as f64).sqrt()
    }
}

fn rational_sign(q: &BigRational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

impl Add for QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: QuadExt) -> QuadExt {
        let d = self.unify(&rhs);
        QuadExt::new(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl Sub for QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: QuadExt) -> QuadExt {
        let d = self.unify(&rhs);
        QuadExt::new(self.a - rhs.a, self.b - rhs.b, d)
    }
}

impl Mul for QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: QuadExt) -> QuadExt {
        let d = self.unify(&rhs);
        let dd = BigRational::from(BigInt::from(d));
        let a = &self.a * &rhs.a + &self.b * &rhs.b * &dd;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadExt::new(a, b, d)
    }
}

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt::new(-self.a, -self.b, self.d)
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        QuadExt::from_rat(&BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        QuadExt::from_rat(&BigRational::one())
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.d)
        } else {
            write!(f, "{}+{}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl Scalar for QuadExt {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        QuadExt::from_rat(&BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    fn from_rat(q: &BigRational) -> Self {
        QuadExt::from_rat(q)
    }

    fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        let diff = self.clone() - other.clone();
        Ok(match diff.sign() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        })
    }

    fn try_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let d = self.unify(other);
        // 1/(a+b√d) = (a−b√d)/(a²−b²d).
        let dd = BigRational::from(BigInt::from(other.d));
        let norm = &other.a * &other.a - &other.b * &other.b * &dd;
        debug_assert!(!norm.is_zero());
        let inv = QuadExt::new(&other.a / &norm, -(&other.b / &norm), other.d);
        let q = self.clone() * inv;
        let d = if q.b.is_zero() { 0 } else { d };
        Ok(QuadExt::new(q.a, q.b, d))
    }

    fn bit_size(&self) -> u64 {
        self.a.numer().bits()
            + self.a.denom().bits()
            + self.b.numer().bits()
            + self.b.denom().bits()
    }

    fn approx(&self) -> f64 {
        QuadExt::approx(self)
    }

    fn exact_str(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> QuadExt {
        QuadExt::new(
            BigRational::from_ratio(1, 2),
            BigRational::from_ratio(1, 2),
            5,
        )
    }

    #[test]
    fn golden_vs_rational_comparison() {
        // φ = (1+√5)/2 against 1618/1000: √5 > 1.236 so φ > 1.618.
        let approx = QuadExt::from_ratio(1618, 1000);
        assert_eq!(phi().try_cmp(&approx).unwrap(), Ordering::Greater);
    }

    #[test]
    fn golden_polynomial_identity() {
        // φ² − φ = 1.
        let v = phi() * phi() - phi();
        assert_eq!(v.try_cmp(&QuadExt::one()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = QuadExt::new(
            BigRational::from_ratio(3, 7),
            BigRational::from_ratio(-2, 5),
            5,
        );
        let y = QuadExt::new(
            BigRational::from_ratio(1, 3),
            BigRational::from_ratio(4, 9),
            5,
        );
        let q = x.clone().try_div(&y).unwrap();
        assert_eq!((q * y).try_cmp(&x).unwrap(), Ordering::Equal);
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let r2 = QuadExt::sqrt_of(2);
        assert_eq!(
            (r2.clone() * r2).try_cmp(&QuadExt::from_ratio(2, 1)).unwrap(),
            Ordering::Equal
        );
    }

    #[test]
    fn opposite_sign_cases() {
        // 3 − √5 > 0 but 2 − √5 < 0.
        let v = QuadExt::new(BigRational::from_ratio(3, 1), BigRational::from_ratio(-1, 1), 5);
        assert_eq!(v.sign(), 1);
        let w = QuadExt::new(BigRational::from_ratio(2, 1), BigRational::from_ratio(-1, 1), 5);
        assert_eq!(w.sign(), -1);
    }

    #[test]
    fn transitivity_on_sampled_triples() {
        let mut vals = Vec::new();
        for i in -3i64..=3 {
            for j in -2i64..=2 {
                vals.push(QuadExt::new(
                    BigRational::from_ratio(i, 2),
                    BigRational::from_ratio(j, 3),
                    5,
                ));
            }
        }
        for x in &vals {
            for y in &vals {
                for z in &vals {
                    let xy = x.try_cmp(y).unwrap();
                    let yz = y.try_cmp(z).unwrap();
                    if xy == yz {
                        assert_eq!(x.try_cmp(z).unwrap(), xy);
                    }
                }
            }
        }
    }
}
