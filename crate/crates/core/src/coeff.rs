//! The coefficient-ring abstraction shared by Witt vectors and series.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic_core::{ExtElement, Valuation, EXACT, Q};
use crate::rational::{self, vp_rat};

/// A commutative ring with a p-adic valuation in which division by nonzero
/// integers makes sense (the result may fail to be integral).
pub trait Coeff: Clone + fmt::Debug {
    fn prime(&self) -> u32;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn rational_like(&self, q: &BigRational) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn neg(&self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    /// Multiplication by `p^k`, `k` of either sign.
    fn mul_p_pow(&self, k: i64) -> Self;
    fn valuation(&self) -> Valuation;
    fn try_inv(&self) -> Option<Self> {
        None
    }
    /// Absolute precision in p-digits (`EXACT` for exact values).
    fn precision(&self) -> i64 {
        EXACT
    }

    fn int_like(&self, n: i64) -> Self {
        self.rational_like(&rational::rat(n))
    }
    fn mul_int(&self, k: i64) -> Self {
        self.mul(&self.int_like(k))
    }
    fn div_int(&self, k: i64) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidInput("division by zero".into()));
        }
        Ok(self.mul(&self.rational_like(&BigRational::new(BigInt::one(), BigInt::from(k)))))
    }
    fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl Coeff for ExtElement {
    fn prime(&self) -> u32 {
        self.p()
    }
    fn zero_like(&self) -> Self {
        ExtElement::zero(self.ring())
    }
    fn one_like(&self) -> Self {
        ExtElement::one(self.ring())
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        ExtElement::from_rational(self.ring(), q)
    }
    fn is_zero(&self) -> bool {
        ExtElement::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        ExtElement::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        ExtElement::sub(self, o)
    }
    fn neg(&self) -> Self {
        ExtElement::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        ExtElement::mul(self, o)
    }
    fn mul_p_pow(&self, k: i64) -> Self {
        ExtElement::mul_p_pow(self, k)
    }
    fn valuation(&self) -> Valuation {
        ExtElement::valuation(self)
    }
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn precision(&self) -> i64 {
        ExtElement::precision(self)
    }
    fn mul_int(&self, k: i64) -> Self {
        ExtElement::mul_int(self, k)
    }
}

/// An exact rational viewed inside `Q_p`.
#[derive(Clone, PartialEq, Eq)]
pub struct PRational {
    pub p: u32,
    pub q: BigRational,
}

impl PRational {
    pub fn new(p: u32, q: BigRational) -> Self {
        PRational { p, q }
    }
    pub fn int(p: u32, n: i64) -> Self {
        PRational { p, q: rational::rat(n) }
    }
}

impl fmt::Debug for PRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", rational::fmt_rat(&self.q))
    }
}

impl Coeff for PRational {
    fn prime(&self) -> u32 {
        self.p
    }
    fn zero_like(&self) -> Self {
        PRational::int(self.p, 0)
    }
    fn one_like(&self) -> Self {
        PRational::int(self.p, 1)
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        PRational::new(self.p, q.clone())
    }
    fn is_zero(&self) -> bool {
        self.q.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        PRational::new(self.p, &self.q + &o.q)
    }
    fn sub(&self, o: &Self) -> Self {
        PRational::new(self.p, &self.q - &o.q)
    }
    fn neg(&self) -> Self {
        PRational::new(self.p, -&self.q)
    }
    fn mul(&self, o: &Self) -> Self {
        PRational::new(self.p, &self.q * &o.q)
    }
    fn mul_p_pow(&self, k: i64) -> Self {
        let f = BigRational::from_integer(rational::pow_big(self.p, k.unsigned_abs()));
        PRational::new(self.p, if k >= 0 { &self.q * f } else { &self.q / f })
    }
    fn valuation(&self) -> Valuation {
        match vp_rat(&self.q, self.p) {
            Some(v) => Valuation::Finite(Q::from(v)),
            None => Valuation::Zero { bound: EXACT },
        }
    }
    fn try_inv(&self) -> Option<Self> {
        (!self.q.is_zero()).then(|| PRational::new(self.p, self.q.recip()))
    }
}
