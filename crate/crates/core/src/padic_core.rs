//! Truncated arithmetic in `Z_p` and in the totally ramified tower rings
//! `O_{K_s} = Z_p[x]/(Φ_s)`, with exact valuations, Newton polygons and
//! Hensel lifting.
//!
//! An element is stored as `p^shift · Σ u_i x^i` with the `u_i` reduced modulo
//! `p^(prec - shift)`. `prec` is the absolute precision: the element is known
//! modulo `p^prec · O`. Because `1, x, …, x^(e-1)` have valuations `i/e` that are
//! distinct modulo 1, the valuation `min_i v_p(u_i) + i/e` is exact.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lubin_tate::LubinTateData;
use crate::rational::{self, qpoly, vp_int, vp_int_capped, vp_rat};

/// Exact rational valuations (denominators divide the ramification index).
pub type Q = Ratio<i64>;

/// Precision marker for exactly known values.
pub const EXACT: i64 = 1 << 40;

fn sat(a: i64, b: i64) -> i64 {
    a.saturating_add(b).min(EXACT)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionBudget {
    pub p: u32,
    pub n_digits: u32,
    pub guard_digits: u32,
}

impl PrecisionBudget {
    pub fn new(p: u32, n_digits: u32, guard_digits: u32) -> Result<Self> {
        if !rational::is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        if n_digits == 0 {
            return Err(Error::InvalidInput("n_digits must be at least 1".into()));
        }
        Ok(PrecisionBudget { p, n_digits, guard_digits })
    }

    /// Default guard: `ceil(N_T/(p-1)) + s + 2` for truncation degree `N_T` at level `s`.
    pub fn for_truncation(p: u32, n_digits: u32, truncation: u32, level: u32) -> Result<Self> {
        let pm1 = p.saturating_sub(1).max(1);
        let guard = truncation.div_ceil(pm1) + level + 2;
        Self::new(p, n_digits, guard)
    }

    pub fn working(&self) -> u32 {
        self.n_digits + self.guard_digits
    }
}

/// A valuation normalized by `v(p) = 1`. Zero-to-precision values carry the
/// precision bound they are known to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(Q),
    Zero { bound: i64 },
}

impl Valuation {
    pub fn finite(&self) -> Option<Q> {
        match self {
            Valuation::Finite(q) => Some(*q),
            Valuation::Zero { .. } => None,
        }
    }

    /// The value, or the precision bound for zero-to-precision.
    pub fn lower_bound(&self) -> Q {
        match self {
            Valuation::Finite(q) => *q,
            Valuation::Zero { bound } => Q::from(*bound),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Valuation::Zero { .. })
    }

    pub fn min(self, other: Valuation) -> Valuation {
        if other.lower_bound() < self.lower_bound() {
            other
        } else {
            self
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(q) => write!(f, "{q}"),
            Valuation::Zero { bound } => write!(f, "zero at precision {bound}"),
        }
    }
}

/// `Z_p[x]/(Φ)` for an Eisenstein `Φ`; level 0 without a Lubin-Tate series is
/// `Z_p` itself with `Φ = X - p`.
pub struct TowerRing {
    p: u32,
    level: u32,
    e: usize,
    budget: PrecisionBudget,
    lt: Option<LubinTateData>,
    phi: Vec<BigRational>,
    pows: Vec<BigInt>,
    red: Vec<Vec<BigInt>>,
}

pub type Ring = Arc<TowerRing>;

impl fmt::Debug for TowerRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TowerRing(p={}, level={}, e={}, digits={})", self.p, self.level, self.e, self.work())
    }
}

impl TowerRing {
    fn build(level: u32, phi: Vec<BigRational>, lt: Option<LubinTateData>, budget: PrecisionBudget) -> Ring {
        let p = budget.p;
        let work = budget.working();
        let e = phi.len() - 1;
        let pows: Vec<BigInt> = (0..=work as u64 + 1).map(|k| rational::pow_big(p, k)).collect();
        let m = &pows[work as usize];
        let top: Vec<BigInt> = phi[..e]
            .iter()
            .map(|c| rational::rat_residue(&-c, p, m).expect("Eisenstein coefficients are p-integral"))
            .collect();
        let mut red = Vec::with_capacity(e.saturating_sub(1));
        if e >= 2 {
            red.push(top.clone());
            for _ in 1..e - 1 {
                let prev: &Vec<BigInt> = red.last().unwrap();
                let carry = prev[e - 1].clone();
                let mut next = vec![BigInt::zero(); e];
                next[1..e].clone_from_slice(&prev[..e - 1]);
                for i in 0..e {
                    next[i] = (&next[i] + &carry * &top[i]).mod_floor(m);
                }
                red.push(next);
            }
        }
        Arc::new(TowerRing { p, level, e, budget, lt, phi, pows, red })
    }

    /// `Z_p` at the given budget.
    pub fn zp(budget: PrecisionBudget) -> Ring {
        let phi = vec![rational::rat(-(budget.p as i64)), rational::rat(1)];
        Self::build(0, phi, None, budget)
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn level(&self) -> u32 {
        self.level
    }
    /// Ramification index, the degree of `Φ`.
    pub fn e(&self) -> usize {
        self.e
    }
    pub fn budget(&self) -> PrecisionBudget {
        self.budget
    }
    /// Working digits `n_digits + guard_digits`.
    pub fn work(&self) -> i64 {
        self.budget.working() as i64
    }
    pub fn lubin_tate(&self) -> Option<&LubinTateData> {
        self.lt.as_ref()
    }
    /// The monic modulus `Φ`, lowest degree first.
    pub fn modulus(&self) -> &[BigRational] {
        &self.phi
    }

    fn pow(&self, k: i64) -> &BigInt {
        &self.pows[k as usize]
    }

    pub fn same_as(&self, other: &TowerRing) -> bool {
        std::ptr::eq(self, other)
            || (self.p == other.p
                && self.level == other.level
                && self.budget == other.budget
                && self.phi == other.phi)
    }
}

/// Builds the level-`s` ring of the torsion tower of `P`:
/// `Φ_s = P^{(s+1)}/P^{(s)} = (P(X)/X) ∘ P^{(s)}`, normalized monic.
pub fn make_tower(lt: &LubinTateData, s: u32, budget: PrecisionBudget) -> Result<Ring> {
    let p = lt.p;
    if budget.p != p {
        return Err(Error::InvalidInput("budget prime differs from P".into()));
    }
    if !lt.is_polynomial {
        return Err(Error::NonPolynomialSeries);
    }
    let coeffs = qpoly::trim(lt.coeffs.clone());
    if coeffs.is_empty() || !coeffs[0].is_zero() {
        return Err(Error::NotEisenstein("P(0) must vanish".into()));
    }
    let q = coeffs[1..].to_vec();
    let mut iterate = vec![BigRational::zero(), BigRational::one()];
    for _ in 0..s {
        iterate = qpoly::compose(&coeffs, &iterate);
    }
    let phi = qpoly::compose(&q, &iterate);
    let lead = phi.last().cloned().unwrap_or_else(BigRational::zero);
    if lead.is_zero() || vp_rat(&lead, p) != Some(0) {
        return Err(Error::NotEisenstein("leading coefficient is not a unit".into()));
    }
    let phi: Vec<BigRational> = phi.iter().map(|c| c / &lead).collect();
    let deg = phi.len() - 1;
    let expect = (p as usize).pow(s) * (p as usize - 1);
    if deg != expect {
        return Err(Error::NotEisenstein(format!("degree {deg}, expected {expect}")));
    }
    if !is_eisenstein(&phi, p) {
        return Err(Error::NotEisenstein(format!("level {s}")));
    }
    Ok(TowerRing::build(s, phi, Some(lt.clone()), budget))
}

/// Monic, constant term of valuation 1, interior coefficients divisible by p.
pub fn is_eisenstein(phi: &[BigRational], p: u32) -> bool {
    let d = phi.len() - 1;
    if d == 0 || phi[d] != BigRational::one() {
        return false;
    }
    if vp_rat(&phi[0], p) != Some(1) {
        return false;
    }
    phi[1..d].iter().all(|c| c.is_zero() || vp_rat(c, p).unwrap() >= 1)
}

/// Element of a tower ring at finite absolute precision.
#[derive(Clone)]
pub struct ExtElement {
    ring: Ring,
    shift: i64,
    prec: i64,
    u: Vec<BigInt>,
}

impl ExtElement {
    fn build(ring: &Ring, shift: i64, prec: i64, mut u: Vec<BigInt>) -> Self {
        let prec = prec.min(EXACT).min(shift.saturating_add(ring.work()));
        let rel = prec - shift;
        if rel <= 0 {
            return Self::zero_prec(ring, prec);
        }
        let m = ring.pow(rel);
        for c in u.iter_mut() {
            if c.is_negative() || &*c >= m {
                *c = c.mod_floor(m);
            }
        }
        let mut k = rel as u64;
        for c in &u {
            if !c.is_zero() {
                k = k.min(vp_int_capped(c, ring.p, k));
                if k == 0 {
                    break;
                }
            }
        }
        if k == rel as u64 {
            return Self::zero_prec(ring, prec);
        }
        if k > 0 {
            let d = ring.pow(k as i64);
            for c in u.iter_mut() {
                *c = &*c / d;
            }
        }
        ExtElement { ring: ring.clone(), shift: shift + k as i64, prec, u }
    }

    /// Zero known modulo `p^prec`.
    pub fn zero_prec(ring: &Ring, prec: i64) -> Self {
        let prec = prec.min(EXACT);
        ExtElement { ring: ring.clone(), shift: prec, prec, u: vec![BigInt::zero(); ring.e] }
    }

    pub fn zero(ring: &Ring) -> Self {
        Self::zero_prec(ring, EXACT)
    }

    pub fn one(ring: &Ring) -> Self {
        Self::from_i64(ring, 1)
    }

    pub fn from_i64(ring: &Ring, n: i64) -> Self {
        Self::from_bigint(ring, &BigInt::from(n))
    }

    pub fn from_bigint(ring: &Ring, n: &BigInt) -> Self {
        if n.is_zero() {
            return Self::zero(ring);
        }
        let mut u = vec![BigInt::zero(); ring.e];
        u[0] = n.clone();
        Self::build(ring, 0, ring.work(), u)
    }

    /// Embeds a rational; denominators divisible by p give negative valuation.
    pub fn from_rational(ring: &Ring, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero(ring);
        }
        let v = vp_rat(q, ring.p).unwrap();
        let pv = BigRational::from_integer(rational::pow_big(ring.p, v.unsigned_abs()));
        let unit = if v >= 0 { q / pv } else { q * pv };
        let m = ring.pow(ring.work());
        let r = rational::rat_residue(&unit, ring.p, m).expect("unit part is p-integral");
        let mut u = vec![BigInt::zero(); ring.e];
        u[0] = r;
        Self::build(ring, v, v + ring.work(), u)
    }

    /// The class of `x`, i.e. `π_s` at level `s` (or `p` in the bare `Z_p` ring).
    pub fn gen(ring: &Ring) -> Self {
        if ring.e == 1 {
            return Self::from_rational(ring, &-&ring.phi[0]);
        }
        let mut u = vec![BigInt::zero(); ring.e];
        u[1] = BigInt::one();
        Self::build(ring, 0, ring.work(), u)
    }

    /// `Σ c_i x^i` for rationals `c_i` (any length; reduced modulo `Φ`).
    pub fn from_coeffs(ring: &Ring, cs: &[BigRational]) -> Self {
        let x = Self::gen(ring);
        let mut acc = Self::zero(ring);
        for c in cs.iter().rev() {
            acc = acc.mul(&x).add(&Self::from_rational(ring, c));
        }
        acc
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn p(&self) -> u32 {
        self.ring.p
    }
    /// Absolute precision in p-digits.
    pub fn precision(&self) -> i64 {
        self.prec
    }
    fn rel(&self) -> i64 {
        self.prec - self.shift
    }
    /// Largest `k` with the element in `p^k O` (the precision for zero).
    pub fn digit_valuation(&self) -> i64 {
        self.shift
    }

    pub fn is_zero(&self) -> bool {
        self.shift >= self.prec
    }

    /// `Some(prec)` when the element is zero at that precision.
    pub fn zero_at(&self) -> Option<i64> {
        self.is_zero().then_some(self.prec)
    }

    pub fn with_prec(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::build(&self.ring, self.shift, prec, self.u.clone())
    }

    fn check_ring(&self, o: &Self) {
        debug_assert!(self.ring.same_as(&o.ring), "mixed rings");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check_ring(o);
        let prec = self.prec.min(o.prec);
        if self.is_zero() {
            return o.with_prec(prec);
        }
        if o.is_zero() {
            return self.with_prec(prec);
        }
        let s0 = self.shift.min(o.shift);
        let rel = prec - s0;
        if rel <= 0 {
            return Self::zero_prec(&self.ring, prec);
        }
        let da = self.shift - s0;
        let db = o.shift - s0;
        let u = (0..self.ring.e)
            .map(|i| {
                let mut t = BigInt::zero();
                if da < rel {
                    t += if da == 0 { self.u[i].clone() } else { &self.u[i] * self.ring.pow(da) };
                }
                if db < rel {
                    t += if db == 0 { o.u[i].clone() } else { &o.u[i] * self.ring.pow(db) };
                }
                t
            })
            .collect();
        Self::build(&self.ring, s0, prec, u)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let u = self.u.iter().map(|c| -c).collect();
        Self::build(&self.ring, self.shift, self.prec, u)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        self.check_ring(o);
        if self.is_zero() || o.is_zero() {
            let prec = sat(self.prec, o.shift).min(sat(o.prec, self.shift));
            return Self::zero_prec(&self.ring, prec);
        }
        let rel = self.rel().min(o.rel());
        let e = self.ring.e;
        let mut c = vec![BigInt::zero(); 2 * e - 1];
        for (i, a) in self.u.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.u.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        for k in (e..2 * e - 1).rev() {
            let t = std::mem::take(&mut c[k]);
            if t.is_zero() {
                continue;
            }
            for (i, r) in self.ring.red[k - e].iter().enumerate() {
                if !r.is_zero() {
                    c[i] += &t * r;
                }
            }
        }
        c.truncate(e);
        let shift = self.shift + o.shift;
        Self::build(&self.ring, shift, shift + rel, c)
    }

    /// Multiplication by `p^k` (`k` may be negative; division is always exact in `K`).
    pub fn mul_p_pow(&self, k: i64) -> Self {
        let mut r = self.clone();
        r.prec = sat(r.prec, k);
        r.shift = if self.is_zero() { r.prec } else { r.shift + k };
        r
    }

    pub fn mul_int(&self, k: i64) -> Self {
        self.mul(&Self::from_i64(&self.ring, k))
    }

    pub fn pow(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.ring);
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

    pub fn valuation(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Zero { bound: self.prec };
        }
        let e = self.ring.e as i64;
        let mut best: Option<i64> = None;
        for (i, c) in self.u.iter().enumerate() {
            if let Some(v) = vp_int(c, self.ring.p) {
                let t = v as i64 * e + i as i64;
                best = Some(best.map_or(t, |b| b.min(t)));
            }
        }
        Valuation::Finite(Q::new(best.unwrap() + self.shift * e, e))
    }

    /// Image in the residue field `F_p`.
    pub fn residue(&self) -> u32 {
        if self.is_zero() || self.shift != 0 {
            return 0;
        }
        (&self.u[0] % self.ring.p).to_u32().unwrap()
    }

    fn unit_inv(&self) -> Self {
        let rel = self.rel();
        let m = self.ring.pow(rel);
        let c = self.u[0].modinv(m).expect("unit constant term");
        let mut u = vec![BigInt::zero(); self.ring.e];
        u[0] = c;
        let mut y = Self::build(&self.ring, 0, rel, u);
        let two = Self::from_i64(&self.ring, 2);
        let target = rel * self.ring.e as i64;
        let mut acc = 1i64;
        while acc < target {
            y = y.mul(&two.sub(&self.mul(&y)));
            acc *= 2;
        }
        y.with_prec(rel)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InsufficientPrecision("inverse of an element that is zero to precision".into()));
        }
        let unit_part = ExtElement { ring: self.ring.clone(), shift: 0, prec: self.rel(), u: self.u.clone() };
        let v = unit_part.valuation().finite().unwrap();
        let e = self.ring.e as i64;
        let k = (v * e).to_integer();
        if k == 0 {
            return Ok(unit_part.unit_inv().mul_p_pow(-self.shift));
        }
        let xe = Self::gen(&self.ring).pow((e - k) as u64);
        let w = unit_part.mul(&xe);
        debug_assert_eq!(w.shift, 1);
        let y = w.mul_p_pow(-1).unit_inv().mul(&xe);
        Ok(y.mul_p_pow(-1 - self.shift))
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn eq_to_prec(&self, o: &Self) -> bool {
        self.sub(o).is_zero()
    }

    /// Coefficients `c_i` of `Σ c_i x^i` reduced to absolute precision
    /// `min(prec, digits)`, using symmetric residues.
    pub fn coefficients(&self, digits: i64) -> Vec<BigRational> {
        let e = self.ring.e;
        let top = self.prec.min(digits);
        if self.is_zero() || self.shift >= top {
            return vec![BigRational::zero(); e];
        }
        let rel = top - self.shift;
        let m = self.ring.pow(rel);
        let scale = rational::pow_big(self.ring.p, self.shift.unsigned_abs());
        self.u
            .iter()
            .map(|c| {
                let s = rational::symmetric(c, m);
                if self.shift >= 0 {
                    BigRational::from_integer(s * &scale)
                } else {
                    BigRational::new(s, scale.clone())
                }
            })
            .collect()
    }

    /// Maps into a ring of the same tower at a level at least this one
    /// (or from bare `Z_p` into any ring over the same prime).
    pub fn embed(&self, target: &Ring) -> Result<Self> {
        if self.ring.same_as(target) {
            return Ok(self.clone());
        }
        if self.ring.p != target.p {
            return Err(Error::InvalidInput("embedding across primes".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero_prec(target, self.prec));
        }
        let y = match &self.ring.lt {
            None => Self::from_i64(target, self.ring.p as i64),
            Some(lt) => {
                let same = target.lt.as_ref().is_some_and(|t| t.coeffs == lt.coeffs && t.w == lt.w);
                if !same || target.level < self.ring.level {
                    return Err(Error::InvalidInput("target ring is not above the source ring".into()));
                }
                pi_at(target, self.ring.level)?
            }
        };
        let mut acc = Self::zero(target);
        for c in self.u.iter().rev() {
            acc = acc.mul(&y).add(&Self::from_bigint(target, c));
        }
        Ok(acc.mul_p_pow(self.shift).with_prec(self.prec))
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coefficients(self.prec).iter().map(rational::fmt_rat).collect();
        write!(f, "[{}] + O(p^{})", cs.join(", "), self.prec)
    }
}

impl PartialEq for ExtElement {
    fn eq(&self, o: &Self) -> bool {
        self.eq_to_prec(o)
    }
}

/// `π_j = P^{(s-j)}(x)` inside the level-`s` ring.
pub fn pi_at(ring: &Ring, j: u32) -> Result<ExtElement> {
    let lt = ring.lt.as_ref().ok_or(Error::LevelRaiseRequired(j))?;
    if j > ring.level {
        return Err(Error::LevelTooLow { needed: j, have: ring.level });
    }
    let pc: Vec<ExtElement> = lt.coeffs.iter().map(|c| ExtElement::from_rational(ring, c)).collect();
    let mut y = ExtElement::gen(ring);
    for _ in j..ring.level {
        y = poly_eval(&pc, &y);
    }
    Ok(y)
}

/// Horner evaluation, coefficients lowest degree first.
pub fn poly_eval(f: &[ExtElement], x: &ExtElement) -> ExtElement {
    let mut acc = ExtElement::zero(x.ring());
    for c in f.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

pub fn poly_derivative(f: &[ExtElement]) -> Vec<ExtElement> {
    f.iter().enumerate().skip(1).map(|(i, c)| c.mul_int(i as i64)).collect()
}

/// Lower convex hull of points sorted by abscissa.
pub(crate) fn lower_hull(points: &[(i64, Q)]) -> Vec<(i64, Q)> {
    let mut hull: Vec<(i64, Q)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point if it lies on or above the chord
            let lhs = (y2 - y1) * Q::from(pt.0 - x1);
            let rhs = (pt.1 - y1) * Q::from(x2 - x1);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    hull
}

/// Newton polygon of a polynomial (lowest degree first), returned as
/// `(root valuation, multiplicity)` pairs: each hull segment of slope `σ`
/// contributes roots of valuation `-σ`. Roots at zero are not listed.
pub fn newton_polygon(f: &[ExtElement]) -> Result<Vec<(Q, usize)>> {
    let last = f.iter().rposition(|c| !c.is_zero());
    let first = f.iter().position(|c| !c.is_zero());
    let (Some(lo), Some(hi)) = (first, last) else {
        return Err(Error::InsufficientPrecision("polynomial is zero to precision".into()));
    };
    if hi + 1 != f.len() {
        return Err(Error::InsufficientPrecision("leading coefficient is zero to precision".into()));
    }
    let points: Vec<(i64, Q)> = (lo..=hi)
        .filter(|&i| !f[i].is_zero())
        .map(|i| (i as i64, f[i].valuation().finite().unwrap()))
        .collect();
    let hull = lower_hull(&points);
    for (i, c) in f.iter().enumerate().take(hi + 1).skip(lo) {
        if let Valuation::Zero { bound } = c.valuation() {
            let k = hull.partition_point(|h| h.0 <= i as i64);
            let (x1, y1) = hull[k - 1];
            let (x2, y2) = hull[k.min(hull.len() - 1)];
            let at = if x2 == x1 { y1 } else { y1 + (y2 - y1) * Q::new(i as i64 - x1, x2 - x1) };
            if Q::from(bound) < at {
                return Err(Error::InsufficientPrecision(format!("coefficient {i} is below the hull")));
            }
        }
    }
    Ok(hull
        .windows(2)
        .map(|w| {
            let slope = (w[1].1 - w[0].1) / Q::from(w[1].0 - w[0].0);
            (-slope, (w[1].0 - w[0].0) as usize)
        })
        .collect())
}

/// Newton iteration from `x0` under the classical Hensel condition
/// `v(f(x0)) > 2 v(f'(x0))`.
pub fn hensel_root(f: &[ExtElement], x0: &ExtElement) -> Result<ExtElement> {
    let deg = f.iter().rposition(|c| !c.is_zero());
    if deg == Some(1) {
        // linear: Newton converges in one step from any seed
        return f[0].neg().div(&f[1]);
    }
    let df = poly_derivative(f);
    let fx = poly_eval(f, x0);
    if fx.is_zero() {
        return Ok(x0.clone());
    }
    let dfx = poly_eval(&df, x0);
    let ok = match (fx.valuation(), dfx.valuation()) {
        (Valuation::Finite(a), Valuation::Finite(b)) => a > b * 2,
        _ => false,
    };
    if !ok {
        return Err(Error::HenselFails { fx: fx.valuation().to_string(), dfx: dfx.valuation().to_string() });
    }
    let ring = x0.ring();
    let mut x = x0.clone();
    let mut rounds = 4;
    let mut t = 1;
    while t < ring.work() * ring.e() as i64 {
        t *= 2;
        rounds += 1;
    }
    for _ in 0..rounds {
        let fx = poly_eval(f, &x);
        if fx.is_zero() {
            break;
        }
        x = x.sub(&fx.div(&poly_eval(&df, &x))?);
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lubin_tate::LubinTateData;
    use crate::rational::rat;

    fn budget(p: u32) -> PrecisionBudget {
        PrecisionBudget::new(p, 20, 6).unwrap()
    }

    #[test]
    fn test_phi_examples() {
        let lt = LubinTateData::cyclotomic(2);
        let r = make_tower(&lt, 1, budget(2)).unwrap();
        assert_eq!(r.modulus(), &[rat(2), rat(2), rat(1)]);
        for p in [2, 3, 5] {
            let r = make_tower(&LubinTateData::simple(p), 0, budget(p)).unwrap();
            let mut expect = vec![rat(0); p as usize];
            expect[0] = rat(p as i64);
            expect[p as usize - 1] = rat(1);
            assert_eq!(r.modulus(), expect.as_slice());
            assert_eq!(r.e(), p as usize - 1);
        }
    }

    #[test]
    fn test_phi_matches_exact_division() {
        for p in [2u32, 3] {
            for lt in [LubinTateData::simple(p), LubinTateData::cyclotomic(p)] {
                for s in 0..3 {
                    let r = make_tower(&lt, s, budget(p)).unwrap();
                    let mut a = vec![rat(0), rat(1)];
                    for _ in 0..s {
                        a = qpoly::compose(&lt.coeffs, &a);
                    }
                    let b = qpoly::compose(&lt.coeffs, &a);
                    let (q, rem) = qpoly::divrem(&b, &a);
                    assert!(rem.is_empty());
                    assert_eq!(q, r.modulus());
                }
            }
        }
    }

    #[test]
    fn test_valuations() {
        let r = make_tower(&LubinTateData::simple(3), 2, budget(3)).unwrap();
        let pe = ExtElement::from_i64(&r, 3);
        assert_eq!(pe.valuation(), Valuation::Finite(Q::from(1)));
        for j in 0..=2 {
            let pi = pi_at(&r, j).unwrap();
            assert_eq!(pi.valuation(), Valuation::Finite(Q::new(1, 3i64.pow(j) * 2)));
        }
        assert_eq!(pi_at(&r, 2).unwrap(), ExtElement::gen(&r));
        let z = ExtElement::zero_prec(&r, 7);
        assert_eq!(z.valuation(), Valuation::Zero { bound: 7 });
    }

    #[test]
    fn test_tower_relation() {
        let lt = LubinTateData::cyclotomic(2);
        let r = make_tower(&lt, 2, budget(2)).unwrap();
        let pc: Vec<_> = lt.coeffs.iter().map(|c| ExtElement::from_rational(&r, c)).collect();
        for j in 0..2 {
            let lhs = poly_eval(&pc, &pi_at(&r, j + 1).unwrap());
            assert_eq!(lhs, pi_at(&r, j).unwrap());
        }
        assert!(poly_eval(&pc, &pi_at(&r, 0).unwrap()).is_zero());
    }

    #[test]
    fn test_inverse() {
        let r = make_tower(&LubinTateData::simple(3), 1, budget(3)).unwrap();
        let x = ExtElement::gen(&r);
        let a = x.pow(5).add(&ExtElement::from_i64(&r, 9)).mul(&x);
        let b = a.inv().unwrap();
        let one = a.mul(&b);
        assert!(one.sub(&ExtElement::one(&r)).valuation().lower_bound() >= Q::from(15));
        assert_eq!(b.valuation().finite().unwrap(), -a.valuation().finite().unwrap());
        let h = ExtElement::from_rational(&r, &BigRational::new(1.into(), 6.into()));
        assert_eq!(h.valuation(), Valuation::Finite(Q::from(-1)));
        assert_eq!(h.mul_int(6), ExtElement::one(&r));
    }

    #[test]
    fn test_newton_polygon() {
        let r = TowerRing::zp(budget(5));
        let f = vec![ExtElement::from_i64(&r, -5), ExtElement::zero(&r), ExtElement::one(&r)];
        assert_eq!(newton_polygon(&f).unwrap(), vec![(Q::new(1, 2), 2)]);
        let r2 = TowerRing::zp(budget(2));
        let phi: Vec<_> = [2, 2, 1].iter().map(|&c| ExtElement::from_i64(&r2, c)).collect();
        assert_eq!(newton_polygon(&phi).unwrap(), vec![(Q::new(1, 2), 2)]);
        for p in [2u32, 3, 5] {
            let r = TowerRing::zp(budget(p));
            let lt = LubinTateData::simple(p);
            let q: Vec<_> = lt.coeffs[1..].iter().map(|c| ExtElement::from_rational(&r, c)).collect();
            assert_eq!(newton_polygon(&q).unwrap(), vec![(Q::new(1, p as i64 - 1), p as usize - 1)]);
        }
    }

    #[test]
    fn test_hensel() {
        let r = make_tower(&LubinTateData::simple(2), 0, budget(2)).unwrap();
        let pi0 = pi_at(&r, 0).unwrap();
        assert_eq!(pi0, ExtElement::from_i64(&r, -2));
        let f: Vec<_> = [0, 2, 1].iter().map(|&c| ExtElement::from_i64(&r, c)).collect();
        assert_eq!(hensel_root(&f, &pi0).unwrap(), pi0);

        let r = make_tower(&LubinTateData::simple(3), 0, budget(3)).unwrap();
        let pi0 = pi_at(&r, 0).unwrap();
        let f: Vec<_> = [3, 3, 1].iter().map(|&c| ExtElement::from_i64(&r, c)).collect();
        let root = hensel_root(&f, &pi0).unwrap();
        assert!(poly_eval(&f, &root).is_zero());
        assert!(root.sub(&pi0).valuation().lower_bound() >= Q::from(1));

        let a = ExtElement::from_i64(&r, 7);
        let lin = vec![a.neg(), ExtElement::one(&r)];
        assert_eq!(hensel_root(&lin, &ExtElement::zero(&r)).unwrap(), a);

        let bad = vec![ExtElement::from_i64(&r, 1), ExtElement::zero(&r), ExtElement::one(&r)];
        assert!(matches!(hensel_root(&bad, &pi0), Err(Error::HenselFails { .. })));
    }

    #[test]
    fn test_embed() {
        let lt = LubinTateData::simple(2);
        let r0 = make_tower(&lt, 0, budget(2)).unwrap();
        let r2 = make_tower(&lt, 2, budget(2)).unwrap();
        let a = pi_at(&r0, 0).unwrap().add(&ExtElement::from_i64(&r0, 5));
        let b = a.embed(&r2).unwrap();
        assert_eq!(b, pi_at(&r2, 0).unwrap().add(&ExtElement::from_i64(&r2, 5)));
        let zp = TowerRing::zp(budget(2));
        let c = ExtElement::from_i64(&zp, 12).embed(&r2).unwrap();
        assert_eq!(c, ExtElement::from_i64(&r2, 12));
    }

    #[test]
    fn test_coefficients_report() {
        let r = make_tower(&LubinTateData::simple(2), 0, budget(2)).unwrap();
        let m1 = ExtElement::from_i64(&r, -1);
        assert_eq!(m1.coefficients(20), vec![rat(-1)]);
        let h = ExtElement::from_rational(&r, &BigRational::new(3.into(), 4.into()));
        assert_eq!(h.coefficients(20), vec![BigRational::new(3.into(), 4.into())]);
    }
}
