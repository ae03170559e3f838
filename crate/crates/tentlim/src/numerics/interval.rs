//! Adaptive-precision real arithmetic with dyadic interval enclosures.
//!
//! An [`IntervalReal`] is an expression DAG over exact rationals and integer
//! square roots.  Evaluation produces a dyadic interval guaranteed to contain
//! the true value; comparisons refine the working precision (doubling from 64
//! bits) until the intervals separate or the configured cap is reached, in
//! which case the comparison fails loudly with `PrecisionExhausted` instead of
//! guessing.  Equality is certified only structurally (same expression) or by
//! exact rational constant-folding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::Scalar;
use crate::{Error, Result};

/// Default hard cap on refinement precision, in bits.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

#[derive(Debug)]
enum Node {
    Rat(BigRational),
    /// √n for a nonnegative integer n.
    SqrtInt(u64),
    Add(IntervalReal, IntervalReal),
    Sub(IntervalReal, IntervalReal),
    Mul(IntervalReal, IntervalReal),
    Div(IntervalReal, IntervalReal),
    Neg(IntervalReal),
}

#[derive(Clone, Debug)]
pub struct IntervalReal(Arc<Node>);

/// A dyadic number m·2^e.
#[derive(Clone, Debug)]
struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    fn from_int(n: BigInt) -> Self {
        Dyadic { m: n, e: 0 }
    }

    fn cmp(&self, other: &Dyadic) -> Ordering {
        let e = self.e.min(other.e);
        let a = &self.m << (self.e - e) as usize;
        let b = &other.m << (other.e - e) as usize;
        a.cmp(&b)
    }

    fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.e.min(other.e);
        Dyadic {
            m: (&self.m << (self.e - e) as usize) + (&other.m << (other.e - e) as usize),
            e,
        }
    }

    fn sub(&self, other: &Dyadic) -> Dyadic {
        let e = self.e.min(other.e);
        Dyadic {
            m: (&self.m << (self.e - e) as usize) - (&other.m << (other.e - e) as usize),
            e,
        }
    }

    fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic { m: &self.m * &other.m, e: self.e + other.e }
    }

    fn neg(&self) -> Dyadic {
        Dyadic { m: -&self.m, e: self.e }
    }

    /// Round down (toward −∞) to at most `prec` mantissa bits.
    fn round_down(&self, prec: u32) -> Dyadic {
        let bits = self.m.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = (bits - prec as u64) as usize;
        let q = &self.m >> k;
        // BigInt shr truncates toward −∞ for negative values in num-bigint
        // (arithmetic shift), which is exactly floor division by 2^k.
        Dyadic { m: q, e: self.e + k as i64 }
    }

    /// Round up (toward +∞) to at most `prec` mantissa bits.
    fn round_up(&self, prec: u32) -> Dyadic {
        let bits = self.m.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = (bits - prec as u64) as usize;
        let q = &self.m >> k;
        let back = &q << k;
        let m = if back == self.m { q } else { q + 1 };
        Dyadic { m, e: self.e + k as i64 }
    }

    fn is_positive(&self) -> bool {
        self.m.sign() == Sign::Plus
    }

    fn is_negative(&self) -> bool {
        self.m.sign() == Sign::Minus
    }

    fn to_f64(&self) -> f64 {
        let rounded = self.round_down(64);
        rounded.m.to_f64().unwrap_or(f64::NAN) * 2f64.powi(rounded.e as i32)
    }
}

/// Closed dyadic interval [lo, hi] enclosing a real value.
#[derive(Clone, Debug)]
struct Iv {
    lo: Dyadic,
    hi: Dyadic,
}

impl Iv {
    fn point(d: Dyadic) -> Iv {
        Iv { lo: d.clone(), hi: d }
    }

    fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }
}

fn rat_to_iv(q: &BigRational, prec: u32) -> Iv {
    if q.denom().is_one() {
        return Iv::point(Dyadic::from_int(q.numer().clone()));
    }
    // Outward-rounded division at `prec` bits: floor((n << shift) / d).
    let shift = prec as usize + 2;
    let scaled = q.numer() << shift;
    let (quo, rem) = scaled.div_mod_floor(q.denom());
    let lo = Dyadic { m: quo.clone(), e: -(shift as i64) };
    let hi = if rem.is_zero() {
        lo.clone()
    } else {
        Dyadic { m: quo + 1, e: -(shift as i64) }
    };
    Iv { lo, hi }
}

fn sqrt_int_iv(n: u64, prec: u32) -> Iv {
    if n == 0 {
        return Iv::point(Dyadic::zero());
    }
    // isqrt(n << 2k) gives √n at 2^-k resolution; k chosen from prec.
    let k = prec as usize + 2;
    let scaled = BigInt::from(n) << (2 * k);
    let root = scaled.sqrt();
    let lo = Dyadic { m: root.clone(), e: -(k as i64) };
    let hi = if &root * &root == scaled {
        lo.clone()
    } else {
        Dyadic { m: root + 1, e: -(k as i64) }
    };
    Iv { lo, hi }
}

impl IntervalReal {
    fn wrap(n: Node) -> Self {
        IntervalReal(Arc::new(n))
    }

    pub fn from_rational(q: BigRational) -> Self {
        IntervalReal::wrap(Node::Rat(q))
    }

    pub fn sqrt_int(n: u64) -> Self {
        IntervalReal::wrap(Node::SqrtInt(n))
    }

    /// Exact rational constant folding; `None` when the value involves an
    /// irrational square root or an undefined division.
    pub fn as_rational(&self) -> Option<BigRational> {
        match &*self.0 {
            Node::Rat(q) => Some(q.clone()),
            Node::SqrtInt(n) => {
                let r = (*n as f64).sqrt().round() as u64;
                for cand in [r.saturating_sub(1), r, r + 1] {
                    if cand.checked_mul(cand) == Some(*n) {
                        return Some(BigRational::from(BigInt::from(cand)));
                    }
                }
                None
            }
            Node::Add(a, b) => Some(a.as_rational()? + b.as_rational()?),
            Node::Sub(a, b) => Some(a.as_rational()? - b.as_rational()?),
            Node::Mul(a, b) => Some(a.as_rational()? * b.as_rational()?),
            Node::Div(a, b) => {
                let d = b.as_rational()?;
                if d.is_zero() {
                    None
                } else {
                    Some(a.as_rational()? / d)
                }
            }
            Node::Neg(a) => Some(-a.as_rational()?),
        }
    }

    /// Structural identity (same DAG shape); sound but incomplete for
    /// mathematical equality.
    fn structurally_eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        match (&*self.0, &*other.0) {
            (Node::Rat(a), Node::Rat(b)) => a == b,
            (Node::SqrtInt(a), Node::SqrtInt(b)) => a == b,
            (Node::Add(a1, a2), Node::Add(b1, b2))
            | (Node::Sub(a1, a2), Node::Sub(b1, b2))
            | (Node::Mul(a1, a2), Node::Mul(b1, b2))
            | (Node::Div(a1, a2), Node::Div(b1, b2)) => {
                a1.structurally_eq(b1) && a2.structurally_eq(b2)
            }
            (Node::Neg(a), Node::Neg(b)) => a.structurally_eq(b),
            _ => false,
        }
    }

    /// Enclosing interval at the requested precision.  `None` means a
    /// division's denominator still straddles zero at this precision and the
    /// caller should refine.
    fn eval(&self, prec: u32) -> Option<Iv> {
        match &*self.0 {
            Node::Rat(q) => Some(rat_to_iv(q, prec)),
            Node::SqrtInt(n) => Some(sqrt_int_iv(*n, prec)),
            Node::Neg(a) => {
                let iv = a.eval(prec)?;
                Some(Iv { lo: iv.hi.neg(), hi: iv.lo.neg() })
            }
            Node::Add(a, b) => {
                let (x, y) = (a.eval(prec)?, b.eval(prec)?);
                Some(Iv {
                    lo: x.lo.add(&y.lo).round_down(prec),
                    hi: x.hi.add(&y.hi).round_up(prec),
                })
            }
            Node::Sub(a, b) => {
                let (x, y) = (a.eval(prec)?, b.eval(prec)?);
                Some(Iv {
                    lo: x.lo.sub(&y.hi).round_down(prec),
                    hi: x.hi.sub(&y.lo).round_up(prec),
                })
            }
            Node::Mul(a, b) => {
                let (x, y) = (a.eval(prec)?, b.eval(prec)?);
                let products = [
                    x.lo.mul(&y.lo),
                    x.lo.mul(&y.hi),
                    x.hi.mul(&y.lo),
                    x.hi.mul(&y.hi),
                ];
                let mut lo = products[0].clone();
                let mut hi = products[0].clone();
                for p in &products[1..] {
                    if p.cmp(&lo) == Ordering::Less {
                        lo = p.clone();
                    }
                    if p.cmp(&hi) == Ordering::Greater {
                        hi = p.clone();
                    }
                }
                Some(Iv { lo: lo.round_down(prec), hi: hi.round_up(prec) })
            }
            Node::Div(a, b) => {
                let (x, y) = (a.eval(prec)?, b.eval(prec)?);
                if y.contains_zero() {
                    return None;
                }
                // Endpoint candidates of x/y, each rounded outward.
                let mut lo: Option<Dyadic> = None;
                let mut hi: Option<Dyadic> = None;
                for xe in [&x.lo, &x.hi] {
                    for ye in [&y.lo, &y.hi] {
                        let (d, up) = dyadic_div(xe, ye, prec);
                        let cand_lo = d.clone();
                        let cand_hi = up;
                        lo = Some(match lo {
                            None => cand_lo.clone(),
                            Some(cur) => {
                                if cand_lo.cmp(&cur) == Ordering::Less {
                                    cand_lo.clone()
                                } else {
                                    cur
                                }
                            }
                        });
                        hi = Some(match hi {
                            None => cand_hi.clone(),
                            Some(cur) => {
                                if cand_hi.cmp(&cur) == Ordering::Greater {
                                    cand_hi
                                } else {
                                    cur
                                }
                            }
                        });
                    }
                }
                Some(Iv { lo: lo.unwrap(), hi: hi.unwrap() })
            }
        }
    }

    fn refine<T>(
        &self,
        other: Option<&Self>,
        mut f: impl FnMut(&Iv, Option<&Iv>) -> Option<T>,
    ) -> Result<T> {
        let mut prec = 64u32;
        loop {
            let a = self.eval(prec);
            let b = other.map(|o| o.eval(prec));
            if let Some(a) = &a {
                match (&b, other) {
                    (None, None) => {
                        if let Some(t) = f(a, None) {
                            return Ok(t);
                        }
                    }
                    (Some(Some(b)), Some(_)) => {
                        if let Some(t) = f(a, Some(b)) {
                            return Ok(t);
                        }
                    }
                    _ => {}
                }
            }
            if prec >= DEFAULT_PRECISION_CAP {
                return Err(Error::PrecisionExhausted(DEFAULT_PRECISION_CAP));
            }
            prec *= 2;
        }
    }
}

/// Floor and ceiling of a/b as dyadics with `prec` fractional bits.
fn dyadic_div(a: &Dyadic, b: &Dyadic, prec: u32) -> (Dyadic, Dyadic) {
    debug_assert!(!b.m.is_zero());
    let shift = prec as usize + 2;
    let num = &a.m << shift;
    let (quo, rem) = num.div_mod_floor(&b.m);
    let e = a.e - b.e - shift as i64;
    let lo = Dyadic { m: quo.clone(), e };
    let hi = if rem.is_zero() {
        lo.clone()
    } else {
        Dyadic { m: quo + 1, e }
    };
    (lo, hi)
}

impl PartialEq for IntervalReal {
    fn eq(&self, other: &Self) -> bool {
        if self.structurally_eq(other) {
            return true;
        }
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

impl Add for IntervalReal {
    type Output = IntervalReal;
    fn add(self, rhs: IntervalReal) -> IntervalReal {
        match (self.as_rational(), rhs.as_rational()) {
            (Some(a), Some(b)) => IntervalReal::from_rational(a + b),
            _ => IntervalReal::wrap(Node::Add(self, rhs)),
        }
    }
}

impl Sub for IntervalReal {
    type Output = IntervalReal;
    fn sub(self, rhs: IntervalReal) -> IntervalReal {
        match (self.as_rational(), rhs.as_rational()) {
            (Some(a), Some(b)) => IntervalReal::from_rational(a - b),
            _ => IntervalReal::wrap(Node::Sub(self, rhs)),
        }
    }
}

impl Mul for IntervalReal {
    type Output = IntervalReal;
    fn mul(self, rhs: IntervalReal) -> IntervalReal {
        match (self.as_rational(), rhs.as_rational()) {
            (Some(a), Some(b)) => IntervalReal::from_rational(a * b),
            _ => IntervalReal::wrap(Node::Mul(self, rhs)),
        }
    }
}

impl Neg for IntervalReal {
    type Output = IntervalReal;
    fn neg(self) -> IntervalReal {
        match self.as_rational() {
            Some(a) => IntervalReal::from_rational(-a),
            None => IntervalReal::wrap(Node::Neg(self)),
        }
    }
}

impl Zero for IntervalReal {
    fn zero() -> Self {
        IntervalReal::from_rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        matches!(self.as_rational(), Some(q) if q.is_zero())
    }
}

impl One for IntervalReal {
    fn one() -> Self {
        IntervalReal::from_rational(BigRational::one())
    }
}

impl fmt::Display for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_rational() {
            Some(q) => write!(f, "{q}"),
            None => write!(f, "≈{}", self.approx()),
        }
    }
}

impl Scalar for IntervalReal {
    fn from_ratio(numer: i64, denom: i64) -> Self {
        IntervalReal::from_rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    fn from_rat(q: &BigRational) -> Self {
        IntervalReal::from_rational(q.clone())
    }

    fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        if let (Some(a), Some(b)) = (self.as_rational(), other.as_rational()) {
            return Ok(a.cmp(&b));
        }
        if self.structurally_eq(other) {
            return Ok(Ordering::Equal);
        }
        self.refine(Some(other), |a, b| {
            let b = b.unwrap();
            if a.hi.cmp(&b.lo) == Ordering::Less {
                Some(Ordering::Less)
            } else if a.lo.cmp(&b.hi) == Ordering::Greater {
                Some(Ordering::Greater)
            } else {
                None
            }
        })
    }

    fn try_div(&self, other: &Self) -> Result<Self> {
        match other.try_cmp(&IntervalReal::zero()) {
            Ok(Ordering::Equal) => Err(Error::DivisionByZero),
            Ok(_) => match (self.as_rational(), other.as_rational()) {
                (Some(a), Some(b)) => Ok(IntervalReal::from_rational(a / b)),
                _ => Ok(IntervalReal::wrap(Node::Div(self.clone(), other.clone()))),
            },
            Err(e) => Err(e),
        }
    }

    fn bit_size(&self) -> u64 {
        match &*self.0 {
            Node::Rat(q) => q.numer().bits() + q.denom().bits(),
            Node::SqrtInt(_) => 64,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                64 + a.bit_size() + b.bit_size()
            }
            Node::Neg(a) => 64 + a.bit_size(),
        }
    }

    fn approx(&self) -> f64 {
        let mut prec = 64u32;
        loop {
            if let Some(iv) = self.eval(prec) {
                return (iv.lo.to_f64() + iv.hi.to_f64()) / 2.0;
            }
            if prec >= DEFAULT_PRECISION_CAP {
                return f64::NAN;
            }
            prec *= 2;
        }
    }

    fn exact_str(&self) -> String {
        self.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> IntervalReal {
        IntervalReal::from_ratio(n, d)
    }

    #[test]
    fn rational_fast_path_is_exact() {
        let v = r(17, 10) * r(3, 20);
        assert_eq!(v.as_rational().unwrap(), BigRational::from_ratio(51, 200));
    }

    #[test]
    fn sqrt5_separates_from_rationals() {
        let s5 = IntervalReal::sqrt_int(5);
        assert_eq!(s5.try_cmp(&r(2236, 1000)).unwrap(), Ordering::Greater);
        assert_eq!(s5.try_cmp(&r(2237, 1000)).unwrap(), Ordering::Less);
    }

    #[test]
    fn golden_comparison_via_intervals() {
        // (1 + √5)/2 vs 1618/1000.
        let phi = (r(1, 1) + IntervalReal::sqrt_int(5)).try_div(&r(2, 1)).unwrap();
        assert_eq!(phi.try_cmp(&r(1618, 1000)).unwrap(), Ordering::Greater);
    }

    #[test]
    fn equal_but_distinct_dags_exhaust_precision() {
        // √2·√2 and 2 are equal but not structurally so; no certificate exists.
        let s2 = IntervalReal::sqrt_int(2);
        let prod = s2.clone() * s2;
        assert!(matches!(
            prod.try_cmp(&r(2, 1)),
            Err(Error::PrecisionExhausted(_))
        ));
    }

    #[test]
    fn structural_equality_certifies() {
        let s2 = IntervalReal::sqrt_int(2);
        let a = s2.clone() + r(1, 3);
        let b = s2 + r(1, 3);
        assert_eq!(a.try_cmp(&b).unwrap(), Ordering::Equal);
    }

    #[test]
    fn division_by_certified_zero_fails() {
        let z = r(1, 2) - r(1, 2);
        assert!(matches!(r(1, 1).try_div(&z), Err(Error::DivisionByZero)));
    }

    #[test]
    fn interval_contains_exact_value_randomized() {
        // Random expression trees over rationals and √2, √3, √5; interval
        // evaluation must enclose a high-precision float estimate.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..2000 {
            let mut val = r((next() % 19) as i64 + 1, (next() % 7) as i64 + 1);
            let mut f = val.approx();
            for _ in 0..4 {
                let leaf_kind = next() % 4;
                let (leaf, leaf_f): (IntervalReal, f64) = if leaf_kind == 0 {
                    let d = [2u64, 3, 5][(next() % 3) as usize];
                    (IntervalReal::sqrt_int(d), (d as f64).sqrt())
                } else {
                    let n = (next() % 13) as i64 + 1;
                    let den = (next() % 9) as i64 + 1;
                    (r(n, den), n as f64 / den as f64)
                };
                match next() % 3 {
                    0 => {
                        val = val + leaf;
                        f += leaf_f;
                    }
                    1 => {
                        val = val - leaf;
                        f -= leaf_f;
                    }
                    _ => {
                        val = val * leaf;
                        f *= leaf_f;
                    }
                }
            }
            let iv = val.eval(128).unwrap();
            let lo = iv.lo.to_f64();
            let hi = iv.hi.to_f64();
            assert!(lo <= hi);
            let tol = 1e-6 * (1.0 + f.abs());
            assert!(
                lo - tol <= f && f <= hi + tol,
                "enclosure [{lo}, {hi}] misses {f}"
            );
        }
    }
}
