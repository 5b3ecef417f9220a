//! Exact integer and rational helpers: p-adic valuations, residues, parsing,
//! and dense polynomials over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `v_p(n)`, or `None` for zero.
pub fn vp_int(n: &BigInt, p: u32) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    if p == 2 {
        return n.trailing_zeros();
    }
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Some(v);
        }
        m = q;
        v += 1;
    }
}

/// `v_p(n)` capped at `cap` (cheaper when only a lower bound matters).
pub fn vp_int_capped(n: &BigInt, p: u32, cap: u64) -> u64 {
    if n.is_zero() {
        return cap;
    }
    if p == 2 {
        return n.trailing_zeros().unwrap_or(cap).min(cap);
    }
    let mut v = 0;
    let mut m = n.clone();
    while v < cap {
        let r = &m % p;
        if !r.is_zero() {
            return v;
        }
        m /= p;
        v += 1;
    }
    cap
}

pub fn vp_rat(q: &BigRational, p: u32) -> Option<i64> {
    let n = vp_int(q.numer(), p)?;
    let d = vp_int(q.denom(), p).unwrap_or(0);
    Some(n as i64 - d as i64)
}

pub fn pow_big(p: u32, k: u64) -> BigInt {
    num_traits::pow(BigInt::from(p), k as usize)
}

/// Residue of `q` modulo `p^k`, in `[0, p^k)`. The denominator must be prime to p
/// and the numerator need not be.
pub fn rat_residue(q: &BigRational, p: u32, modulus: &BigInt) -> Result<BigInt> {
    let d = q.denom();
    if (d % p).is_zero() {
        return Err(Error::IntegralityViolation(fmt_rat(q)));
    }
    let n = q.numer().mod_floor(modulus);
    if d.is_one() {
        return Ok(n);
    }
    let inv = d
        .mod_floor(modulus)
        .modinv(modulus)
        .ok_or_else(|| Error::IntegralityViolation(fmt_rat(q)))?;
    Ok((n * inv).mod_floor(modulus))
}

pub fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidInput(format!("cannot parse rational {s:?}"));
    match s.split_once('/') {
        Some((a, b)) => {
            let n: BigInt = a.trim().parse().map_err(|_| bad())?;
            let d: BigInt = b.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

pub fn fmt_rat(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Symmetric representative of `n` modulo `m`.
pub fn symmetric(n: &BigInt, m: &BigInt) -> BigInt {
    let r = n.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// Dense polynomials over Q, lowest degree first.
pub mod qpoly {
    use super::*;

    pub fn trim(mut a: Vec<BigRational>) -> Vec<BigRational> {
        while a.last().is_some_and(|c| c.is_zero()) {
            a.pop();
        }
        a
    }

    pub fn add(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        let out = (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
                let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
                x + y
            })
            .collect();
        trim(out)
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(out)
    }

    /// `f(g(X))`.
    pub fn compose(f: &[BigRational], g: &[BigRational]) -> Vec<BigRational> {
        let mut acc: Vec<BigRational> = Vec::new();
        for c in f.iter().rev() {
            acc = mul(&acc, g);
            acc = add(&acc, std::slice::from_ref(c));
        }
        acc
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let b = trim(b.to_vec());
        let mut r = trim(a.to_vec());
        let db = b.len() - 1;
        let lead = b[db].clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![BigRational::zero(); r.len() - db];
        while r.len() >= b.len() {
            let k = r.len() - 1 - db;
            let c = r.last().unwrap() / &lead;
            for (i, bi) in b.iter().enumerate() {
                r[k + i] -= &c * bi;
            }
            q[k] = c;
            r.pop();
            r = trim(r);
        }
        (trim(q), r)
    }

    pub fn eval(f: &[BigRational], x: &BigRational) -> BigRational {
        f.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn is_zero(f: &[BigRational]) -> bool {
        f.iter().all(|c| c.is_zero())
    }

    pub fn content_is_integral(f: &[BigRational], p: u32) -> bool {
        f.iter().all(|c| c.is_zero() || vp_rat(c, p).unwrap() >= 0)
    }

    pub fn negate(f: &[BigRational]) -> Vec<BigRational> {
        f.iter().map(|c| -c).collect()
    }

    pub fn abs_max_bits(f: &[BigRational]) -> u64 {
        f.iter()
            .map(|c| c.numer().abs().bits().max(c.denom().bits()))
            .max()
            .unwrap_or(0)
    }
}
