//! Truncated Laurent series, the Artin-Hasse exponential and its Witt and
//! π-twisted variants, θ-functions, and coefficient growth analysis.
//!
//! A series carries a window `[lo, hi]`: coefficients below `lo` are exactly
//! zero and coefficients above `hi` are unknown. Exact polynomials use
//! `hi = EXACT_HI`. Series in `T^{-1}` (the output of [`e_minus`]) are stored as
//! power series in `U = T^{-1}`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use num_traits::{One, Zero};
use once_cell::sync::Lazy;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::padic_core::{pi_at, ExtElement, Ring, Valuation, EXACT, Q};
use crate::rational::{fmt_rat, vp_int};
use crate::witt::{self, WittVector};

pub const EXACT_HI: i64 = i64::MAX / 4;

fn norm_hi(hi: i64) -> i64 {
    if hi >= EXACT_HI / 2 {
        EXACT_HI
    } else {
        hi
    }
}

#[derive(Clone)]
pub struct LaurentSeries<C> {
    zero: C,
    lo: i64,
    hi: i64,
    terms: BTreeMap<i64, C>,
}

/// Result of a Gauss-valuation query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GaussVal {
    pub value: Valuation,
    /// Lowest degree attaining the minimum.
    pub argmin: Option<i64>,
    /// The minimum is attained at the last stored degree of a truncated window,
    /// so unseen terms could lower it.
    pub at_boundary: bool,
}

impl<C: Coeff> LaurentSeries<C> {
    /// Empty series known on `[lo, hi]`.
    pub fn new(template: &C, lo: i64, hi: i64) -> Self {
        LaurentSeries { zero: template.zero_like(), lo, hi: norm_hi(hi), terms: BTreeMap::new() }
    }

    pub fn exact_zero(template: &C) -> Self {
        Self::new(template, 0, EXACT_HI)
    }

    pub fn from_terms(template: &C, lo: i64, hi: i64, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut s = Self::new(template, lo, hi);
        for (i, c) in terms {
            s.lo = s.lo.min(i);
            s.push(i, c);
        }
        s
    }

    pub fn polynomial(template: &C, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let terms: Vec<(i64, C)> = terms.into_iter().collect();
        let lo = terms.iter().map(|t| t.0).min().unwrap_or(0);
        Self::from_terms(template, lo, EXACT_HI, terms)
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: C, k: i64) -> Self {
        let t = c.clone();
        Self::from_terms(&t, k, EXACT_HI, [(k, c)])
    }

    fn push(&mut self, i: i64, c: C) {
        if i > self.hi || c.is_zero() {
            return;
        }
        match self.terms.remove(&i) {
            None => {
                self.terms.insert(i, c);
            }
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(i, s);
                }
            }
        }
    }

    pub fn template(&self) -> &C {
        &self.zero
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn hi(&self) -> i64 {
        self.hi
    }
    pub fn is_exact(&self) -> bool {
        self.hi == EXACT_HI
    }
    pub fn terms(&self) -> &BTreeMap<i64, C> {
        &self.terms
    }
    pub fn coeff(&self, i: i64) -> C {
        self.terms.get(&i).cloned().unwrap_or_else(|| self.zero.clone())
    }
    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }
    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Truncates to degrees `<= hi`.
    pub fn with_hi(&self, hi: i64) -> Self {
        let hi = norm_hi(hi.min(self.hi));
        let terms = self.terms.range(..=hi).map(|(i, c)| (*i, c.clone())).collect();
        LaurentSeries { zero: self.zero.clone(), lo: self.lo, hi, terms }
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut s = Self::new(&self.zero, self.lo, self.hi);
        for (i, c) in &self.terms {
            s.push(*i, f(c));
        }
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut s = Self::new(&self.zero, self.lo.min(o.lo), self.hi.min(o.hi));
        for (i, c) in self.terms.iter().chain(o.terms.iter()) {
            s.push(*i, c.clone());
        }
        s
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &C) -> Self {
        self.map(|c| c.mul(k))
    }

    pub fn mul(&self, o: &Self) -> Self {
        if (self.is_zero() && self.is_exact()) || (o.is_zero() && o.is_exact()) {
            return Self::exact_zero(&self.zero);
        }
        let lo = self.lo + o.lo;
        let hi = norm_hi(self.hi.saturating_add(o.lo).min(o.hi.saturating_add(self.lo)));
        let mut acc: BTreeMap<i64, C> = BTreeMap::new();
        for (i, a) in &self.terms {
            if i + o.lo > hi {
                break;
            }
            for (j, b) in o.terms.range(..=hi - i) {
                let t = a.mul(b);
                match acc.get_mut(&(i + j)) {
                    Some(x) => *x = x.add(&t),
                    None => {
                        acc.insert(i + j, t);
                    }
                }
            }
        }
        let mut s = Self::new(&self.zero, lo, hi);
        for (i, c) in acc {
            s.push(i, c);
        }
        s
    }

    /// Multiplication by `T^k`.
    pub fn shift(&self, k: i64) -> Self {
        let hi = if self.is_exact() { EXACT_HI } else { self.hi + k };
        Self::from_terms(&self.zero, self.lo + k, hi, self.terms.iter().map(|(i, c)| (i + k, c.clone())))
    }

    /// `T → T^k` for `k >= 1`.
    pub fn substitute_power(&self, k: u64) -> Self {
        let k = k as i64;
        let hi = if self.is_exact() { EXACT_HI } else { k * (self.hi + 1) - 1 };
        Self::from_terms(&self.zero, self.lo * k, hi, self.terms.iter().map(|(i, c)| (i * k, c.clone())))
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut acc = LaurentSeries::constant(self.zero.one_like());
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; the leading coefficient must be invertible.
    /// `len` bounds the window of an inverted polynomial.
    pub fn inv(&self, len: i64) -> Result<Self> {
        let k0 = self.min_degree().ok_or(Error::DivisionWindowExhausted)?;
        let u = self.terms[&k0].try_inv().ok_or(Error::DivisionWindowExhausted)?;
        let span = if self.is_exact() { len } else { (self.hi - k0).min(len) };
        if span < 0 {
            return Err(Error::DivisionWindowExhausted);
        }
        let mut b: Vec<C> = Vec::with_capacity(span as usize + 1);
        b.push(u.clone());
        let tail: Vec<(i64, &C)> = self.terms.range(k0 + 1..=k0 + span).map(|(i, c)| (i - k0, c)).collect();
        for k in 1..=span {
            let mut acc = self.zero.clone();
            for &(j, c) in &tail {
                if j > k {
                    break;
                }
                acc = acc.add(&c.mul(&b[(k - j) as usize]));
            }
            b.push(acc.mul(&u).neg());
        }
        Ok(Self::from_terms(&self.zero, -k0, -k0 + span, b.into_iter().enumerate().map(|(i, c)| (i as i64 - k0, c))))
    }

    /// `d/dT`.
    pub fn derivative(&self) -> Self {
        let hi = if self.is_exact() { EXACT_HI } else { self.hi - 1 };
        Self::from_terms(
            &self.zero,
            self.lo - 1,
            hi,
            self.terms.iter().filter(|(i, _)| **i != 0).map(|(i, c)| (i - 1, c.mul_int(*i))),
        )
    }

    /// `∂ = T d/dT`.
    pub fn theta_derivative(&self) -> Self {
        self.map_indexed(|i, c| c.mul_int(i))
    }

    fn map_indexed(&self, f: impl Fn(i64, &C) -> C) -> Self {
        let mut s = Self::new(&self.zero, self.lo, self.hi);
        for (i, c) in &self.terms {
            s.push(*i, f(*i, c));
        }
        s
    }

    /// Minimum coefficient valuation.
    pub fn min_valuation(&self) -> Valuation {
        self.terms.values().map(|c| c.valuation()).fold(Valuation::Zero { bound: EXACT }, Valuation::min)
    }

    /// `min_i v(a_i) + i·r`, with `r` the valuation of `T` (so `r = -log_p ρ`).
    pub fn gauss_val(&self, r: Q) -> GaussVal {
        let mut best: Option<(Q, i64)> = None;
        for (i, c) in &self.terms {
            if let Valuation::Finite(v) = c.valuation() {
                let t = v + r * Q::from(*i);
                if best.is_none_or(|b| t < b.0) {
                    best = Some((t, *i));
                }
            }
        }
        match best {
            None => GaussVal { value: Valuation::Zero { bound: EXACT }, argmin: None, at_boundary: false },
            Some((v, i)) => {
                let at_boundary = !self.is_exact() && self.max_degree() == Some(i);
                GaussVal { value: Valuation::Finite(v), argmin: Some(i), at_boundary }
            }
        }
    }
}

impl<C: fmt::Debug> fmt::Debug for LaurentSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, (i, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c:?})T^{i}")?;
        }
        if self.hi == EXACT_HI {
            write!(f, "]")
        } else {
            write!(f, " + O(T^{})]", self.hi + 1)
        }
    }
}

impl<C: Coeff> PartialEq for LaurentSeries<C> {
    /// Agreement on the common window.
    fn eq(&self, o: &Self) -> bool {
        let d = self.sub(o);
        d.is_zero()
    }
}

impl<C: Coeff> Coeff for LaurentSeries<C> {
    fn prime(&self) -> u32 {
        self.zero.prime()
    }
    fn zero_like(&self) -> Self {
        Self::exact_zero(&self.zero)
    }
    fn one_like(&self) -> Self {
        Self::constant(self.zero.one_like())
    }
    fn rational_like(&self, q: &BigRational) -> Self {
        Self::constant(self.zero.rational_like(q))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, o: &Self) -> Self {
        LaurentSeries::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        LaurentSeries::sub(self, o)
    }
    fn neg(&self) -> Self {
        LaurentSeries::neg(self)
    }
    fn mul(&self, o: &Self) -> Self {
        LaurentSeries::mul(self, o)
    }
    fn mul_p_pow(&self, k: i64) -> Self {
        self.map(|c| c.mul_p_pow(k))
    }
    fn valuation(&self) -> Valuation {
        self.min_valuation()
    }
    fn mul_int(&self, k: i64) -> Self {
        self.map(|c| c.mul_int(k))
    }
    fn precision(&self) -> i64 {
        self.terms.values().map(|c| c.precision()).min().unwrap_or(EXACT)
    }
}

/// `exp(f)` for `f` with support in degrees `>= 1`, through degree `len` at most.
pub fn exp_series<C: Coeff>(f: &LaurentSeries<C>, len: i64) -> Result<LaurentSeries<C>> {
    if f.min_degree().is_some_and(|d| d < 1) {
        return Err(Error::InvalidInput("exp needs a series without constant or negative terms".into()));
    }
    let hi = f.hi().min(len);
    let one = f.template().one_like();
    let mut g = vec![one];
    let fk: Vec<(i64, C)> = f.terms().range(1..=hi).map(|(i, c)| (*i, c.mul_int(*i))).collect();
    for n in 1..=hi {
        let mut acc = f.template().zero_like();
        for (k, c) in &fk {
            if *k > n {
                break;
            }
            acc = acc.add(&c.mul(&g[(n - k) as usize]));
        }
        g.push(acc.div_int(n)?);
    }
    Ok(LaurentSeries::from_terms(f.template(), 0, hi, g.into_iter().enumerate().map(|(i, c)| (i as i64, c))))
}

/// `log(h)` for `h` with constant term 1 and no negative terms.
pub fn log_series<C: Coeff>(h: &LaurentSeries<C>, len: i64) -> Result<LaurentSeries<C>> {
    if h.min_degree() != Some(0) || h.min_degree().is_some_and(|d| d < 0) {
        return Err(Error::InvalidInput("log needs constant term 1".into()));
    }
    let c0 = h.coeff(0);
    if !c0.sub(&c0.one_like()).is_zero() {
        return Err(Error::InvalidInput("log needs constant term 1".into()));
    }
    let hi = h.hi().min(len);
    let zero = h.template().zero_like();
    let mut l: Vec<C> = vec![zero.clone()];
    for n in 1..=hi {
        // n L_n = n h_n - Σ_{k<n} k L_k h_{n-k}
        let mut acc = h.coeff(n).mul_int(n);
        for k in 1..n {
            if l[k as usize].is_zero() {
                continue;
            }
            if let Some(hc) = h.terms().get(&(n - k)) {
                acc = acc.sub(&l[k as usize].mul_int(k).mul(hc));
            }
        }
        l.push(acc.div_int(n)?);
    }
    Ok(LaurentSeries::from_terms(h.template(), 1, hi, l.into_iter().enumerate().skip(1).map(|(i, c)| (i as i64, c))))
}

static AH_CACHE: Lazy<Mutex<HashMap<u32, Arc<Vec<BigRational>>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

/// Coefficients `e_0, e_1, …` of `E(T) = exp(Σ_j T^{p^j}/p^j)` through at least
/// degree `n`, exact, from `k e_k = Σ_{p^j <= k} e_{k-p^j}`. Every denominator is
/// checked to be prime to `p`.
pub fn artin_hasse_universal(p: u32, n: usize) -> Result<Arc<Vec<BigRational>>> {
    if let Some(v) = AH_CACHE.lock().unwrap().get(&p) {
        if v.len() > n {
            return Ok(v.clone());
        }
    }
    let mut e: Vec<BigRational> = vec![BigRational::one()];
    let mut powers = vec![1usize];
    while powers.last().unwrap() * (p as usize) <= n {
        let next = powers.last().unwrap() * p as usize;
        powers.push(next);
    }
    for k in 1..=n {
        let mut acc = BigRational::zero();
        for &q in &powers {
            if q > k {
                break;
            }
            acc += &e[k - q];
        }
        let c = acc / BigRational::from_integer(k.into());
        if vp_int(c.denom(), p).unwrap_or(0) > 0 {
            return Err(Error::IntegralityViolation(format!("E(T) coefficient {k} = {}", fmt_rat(&c))));
        }
        e.push(c);
    }
    let e = Arc::new(e);
    let mut cache = AH_CACHE.lock().unwrap();
    let slot = cache.entry(p).or_insert_with(|| e.clone());
    if slot.len() < e.len() {
        *slot = e.clone();
    }
    Ok(e)
}

/// `E(c·T^step)` through degree `hi`.
fn ah_factor<C: Coeff>(c: &C, step: i64, hi: i64) -> Result<LaurentSeries<C>> {
    let kmax = hi / step;
    let e = artin_hasse_universal(c.prime(), kmax as usize)?;
    let mut terms = Vec::with_capacity(kmax as usize + 1);
    let mut cp = c.one_like();
    for k in 0..=kmax {
        if cp.is_zero() {
            break;
        }
        terms.push((k * step, cp.mul(&c.rational_like(&e[k as usize]))));
        cp = cp.mul(c);
    }
    Ok(LaurentSeries::from_terms(c, 0, hi, terms))
}

/// `E(λ, T^n) = Π_j E(λ_j T^{n p^j})` through degree `hi`.
pub fn e_of_witt<C: Coeff>(lambda: &WittVector<C>, n: u64, hi: i64) -> Result<LaurentSeries<C>> {
    let tmpl = &lambda.entries()[0];
    let p = tmpl.prime() as i64;
    let mut acc = LaurentSeries::constant(tmpl.one_like()).with_hi(hi);
    let mut step = n as i64;
    for l in lambda.entries() {
        if step > hi {
            break;
        }
        if !l.is_zero() {
            acc = acc.mul(&ah_factor(l, step, hi)?);
        }
        step = step.saturating_mul(p);
    }
    Ok(acc)
}

/// `[π_m] = unghost⟨π_m, π_{m-1}, …, π_0⟩` in `W_m` of the ring.
pub fn teichmuller_pi(ring: &Ring, m: u32) -> Result<WittVector<ExtElement>> {
    if ring.level() < m {
        return Err(Error::LevelTooLow { needed: m, have: ring.level() });
    }
    let ghost = (0..=m).map(|j| pi_at(ring, m - j)).collect::<Result<Vec<_>>>()?;
    witt::unghost(&witt::GhostVector::new(ghost))
}

/// `[π_m]·λ` as a Witt vector of length `len`. The ghost components of `[π_m]`
/// vanish past index `m`, so the product has ghost
/// `⟨π_m φ_0(λ), …, π_0 φ_m(λ), 0, 0, …⟩` and its entries past `m` are nonzero.
pub fn pi_twist(lambda: &WittVector<ExtElement>, ring: &Ring, len: usize) -> Result<WittVector<ExtElement>> {
    let m = lambda.len() as u32 - 1;
    if ring.level() < m {
        return Err(Error::LevelTooLow { needed: m, have: ring.level() });
    }
    let phi = lambda.ghost();
    let mut g = Vec::with_capacity(len.max(m as usize + 1));
    for j in 0..=m {
        g.push(pi_at(ring, m - j)?.mul(&phi.entries()[j as usize]));
    }
    while g.len() < len {
        g.push(ExtElement::zero(ring));
    }
    witt::unghost(&witt::GhostVector::new(g))
}

/// Number of Witt entries `j` with `n p^j <= hi`.
fn entries_below(n: u64, p: u64, hi: i64) -> usize {
    let mut k = 0;
    let mut step = n as i64;
    while step <= hi {
        k += 1;
        step = step.saturating_mul(p as i64);
    }
    k
}

/// `e_d(λ, T) = E([π_m]·λ, T^n)` for `d = n p^m`, `m + 1` the length of `λ`.
/// Equals `exp(Σ_{j<=m} π_{m-j} φ_j(λ) T^{np^j} / p^j)`.
pub fn pi_exponential(lambda: &WittVector<ExtElement>, n: u64, hi: i64) -> Result<LaurentSeries<ExtElement>> {
    let ring = lambda.entries()[0].ring().clone();
    let p = ring.p() as u64;
    if n == 0 || n.is_multiple_of(p) {
        return Err(Error::InvalidInput(format!("n = {n} must be positive and prime to p")));
    }
    let len = entries_below(n, p, hi).max(lambda.len());
    e_of_witt(&pi_twist(lambda, &ring, len)?, n, hi)
}

/// `e_{p^s}(f⁻, 1)` as a power series in `U = T^{-1}` through degree `hi`,
/// computed block by block from the co-monomial decomposition.
pub fn e_minus(f: &WittVector<LaurentSeries<ExtElement>>, ring: &Ring, hi: i64) -> Result<LaurentSeries<ExtElement>> {
    for e in f.entries() {
        if e.max_degree().is_some_and(|d| d >= 0) {
            return Err(Error::PositiveSupport);
        }
    }
    let s = f.len() as u32 - 1;
    if ring.level() < s {
        return Err(Error::LevelTooLow { needed: s, have: ring.level() });
    }
    let dec = witt::decompose(f)?;
    e_minus_blocks(dec.blocks.values(), s, ring, hi)
}

/// Product of `e_d(λ, U)` over co-monomial blocks at ambient length `s + 1`.
/// A block with `m > s` keeps only `λ_{m-s}, …, λ_m` and contributes
/// `e_{n' p^s}` with `n' = n p^{m-s}`.
pub fn e_minus_blocks<'a>(
    blocks: impl IntoIterator<Item = &'a witt::ComonomialBlock<ExtElement>>,
    s: u32,
    ring: &Ring,
    hi: i64,
) -> Result<LaurentSeries<ExtElement>> {
    let one = ExtElement::one(ring);
    let p = ring.p() as u64;
    let mut acc = LaurentSeries::constant(one).with_hi(hi);
    for b in blocks {
        let k = b.n * p.pow(b.m.saturating_sub(s));
        let len = entries_below(k, p, hi).max(b.lambda.len());
        acc = acc.mul(&e_of_witt(&pi_twist(&b.lambda, ring, len)?, k, hi)?);
    }
    Ok(acc)
}

/// `θ = e_d(λ_F, T^p) / e_d(λ, T)` through degree `hi`, where `λ_F` is the
/// image of `λ` under the chosen Frobenius lift.
pub fn theta(lambda_frob: &WittVector<ExtElement>, lambda: &WittVector<ExtElement>, n: u64, hi: i64) -> Result<LaurentSeries<ExtElement>> {
    let p = lambda.entries()[0].p() as u64;
    let num = pi_exponential(lambda_frob, n, hi / p as i64)?.substitute_power(p).with_hi(hi);
    let den = pi_exponential(lambda, n, hi)?;
    Ok(num.mul(&den.inv(hi)?).with_hi(hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthClass {
    Overconvergent,
    UnitRadius,
    Subunit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    /// Fitted degrees `[tail_start, hi]`.
    pub window: (i64, i64),
    /// Hull chord slope across the tail; `None` when the tail vanishes to precision.
    pub slope: Option<Q>,
    pub min_tail_val: Option<Q>,
    pub classification: GrowthClass,
    /// Last degree with a nonzero coefficient and the hull value there.
    pub last: Option<(i64, Q)>,
    /// Valuation assumed for vanished coefficients.
    pub precision: i64,
}

pub const DEFAULT_TAIL_FRACTION: (i64, i64) = (3, 4);
const MIN_TAIL: i64 = 16;

/// Lower-hull analysis of `(i, v(a_i))` over the tail of the window.
///
/// The hull is taken over all nonzero coefficients of nonnegative degree
/// together with the origin; the slope is the hull chord from the tail start to
/// the last nonzero point. Overconvergent needs slope `>= 1/(2p(p-1))` and a
/// positive tail minimum; Subunit means slope `<= -1/(2p(p-1))`.
pub fn growth_slope<C: Coeff>(f: &LaurentSeries<C>, tail_fraction: Q) -> Result<GrowthReport> {
    let p = f.template().prime() as i64;
    let lo = f.lo().max(0);
    let hi = if f.is_exact() { f.max_degree().unwrap_or(0) } else { f.hi() };
    if tail_fraction <= Q::zero() || tail_fraction > Q::one() {
        return Err(Error::InvalidInput("tail fraction must lie in (0, 1]".into()));
    }
    let tail_start = hi - (tail_fraction * Q::from(hi - lo)).floor().to_integer();
    let precision = f.terms().values().map(|c| c.precision()).min().unwrap_or(EXACT);
    if f.is_exact() {
        return Ok(GrowthReport {
            window: (tail_start, hi),
            slope: None,
            min_tail_val: None,
            classification: GrowthClass::Overconvergent,
            last: None,
            precision: EXACT,
        });
    }
    if hi - tail_start < MIN_TAIL {
        let needed = lo + (Q::from(MIN_TAIL) / tail_fraction).ceil().to_integer();
        return Err(Error::WindowTooShort { needed });
    }
    let mut pts: Vec<(i64, Q)> = Vec::new();
    if f.terms().get(&0).is_none() {
        pts.push((0, Q::zero()));
    }
    for (i, c) in f.terms().range(0..=hi) {
        if let Valuation::Finite(v) = c.valuation() {
            pts.push((*i, v));
        }
    }
    pts.sort_by_key(|t| t.0);
    let hull = crate::padic_core::lower_hull(&pts);
    let hull_at = |x: i64| -> Q {
        let k = hull.partition_point(|h| h.0 <= x);
        if k == 0 {
            return hull[0].1;
        }
        if k == hull.len() {
            return hull[k - 1].1;
        }
        let (x1, y1) = hull[k - 1];
        let (x2, y2) = hull[k];
        y1 + (y2 - y1) * Q::new(x - x1, x2 - x1)
    };
    let tail: Vec<(i64, Q)> = pts.iter().filter(|t| t.0 >= tail_start).copied().collect();
    let thr = Q::new(1, 2 * p * (p - 1));
    if tail.is_empty() {
        return Ok(GrowthReport {
            window: (tail_start, hi),
            slope: None,
            min_tail_val: None,
            classification: GrowthClass::Overconvergent,
            last: None,
            precision,
        });
    }
    let last = tail.last().unwrap().0;
    let min_tail = tail.iter().map(|t| t.1).min().unwrap();
    let slope = if last > tail_start {
        (hull_at(last) - hull_at(tail_start)) / Q::from(last - tail_start)
    } else {
        Q::zero()
    };
    let classification = if slope >= thr && min_tail > Q::zero() {
        GrowthClass::Overconvergent
    } else if slope <= -thr {
        GrowthClass::Subunit
    } else {
        GrowthClass::UnitRadius
    };
    Ok(GrowthReport {
        window: (tail_start, hi),
        slope: Some(slope),
        min_tail_val: Some(min_tail),
        classification,
        last: Some((last, hull_at(last))),
        precision,
    })
}

#[derive(Clone, Debug)]
pub struct EvalAtOne {
    pub value: ExtElement,
    /// Valuation bound on the neglected tail.
    pub error_bound: Q,
}

/// `Σ a_i` for an overconvergent series, refusing windows too short for the
/// ring's reported precision.
pub fn eval_at_1(f: &LaurentSeries<ExtElement>, report: &GrowthReport) -> Result<EvalAtOne> {
    if report.classification != GrowthClass::Overconvergent {
        return Err(Error::NotOverconvergent);
    }
    let ring = f.template().ring().clone();
    let target = ring.budget().n_digits as i64;
    let mut sum = ExtElement::zero(&ring);
    for c in f.terms().values() {
        sum = sum.add(c);
    }
    let error_bound = match report.slope {
        _ if f.is_exact() => Q::from(EXACT),
        Some(sigma) => {
            // coefficients past the window may dip below the hull line, so every
            // tail point is extrapolated at the threshold slope
            let p = ring.p() as i64;
            let safe = sigma.min(Q::new(1, 2 * p * (p - 1)));
            let next = f.hi() + 1;
            let bound = f
                .terms()
                .range(report.window.0..=f.hi())
                .filter_map(|(i, c)| c.valuation().finite().map(|v| v + safe * Q::from(next - i)))
                .min()
                .unwrap_or(Q::from(report.precision));
            let mut needed = (Q::from(target) / sigma).ceil().to_integer();
            if bound < Q::from(target) {
                needed = needed.max(f.hi() + ((Q::from(target) - bound) / safe).ceil().to_integer());
            }
            if f.hi() < needed {
                return Err(Error::WindowTooShort { needed });
            }
            bound
        }
        None => Q::from(report.precision),
    };
    let cap = error_bound.floor().to_integer().min(target);
    Ok(EvalAtOne { value: sum.with_prec(cap), error_bound })
}
