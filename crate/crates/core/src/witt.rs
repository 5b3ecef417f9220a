//! Finite-length p-typical Witt vectors over any [`Coeff`] ring, computed
//! through ghost components.
//!
//! Recovering `λ_n` from the ghost vector divides by `p^n`, so a length `m+1`
//! vector over a truncated ring needs `m` guard digits beyond the reported
//! precision.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::padic_core::{poly_eval, ExtElement, Valuation, Q};
use crate::rational::{fmt_rat, vp_rat};
use crate::series::LaurentSeries;

#[derive(Clone, Debug)]
pub struct WittVector<C> {
    entries: Vec<C>,
}

/// Ghost (phantom) components `⟨φ_0, …, φ_m⟩`.
#[derive(Clone, Debug)]
pub struct GhostVector<C> {
    entries: Vec<C>,
}

impl<C: Coeff> GhostVector<C> {
    pub fn new(entries: Vec<C>) -> Self {
        assert!(!entries.is_empty(), "ghost vectors have length at least 1");
        GhostVector { entries }
    }
    pub fn entries(&self) -> &[C] {
        &self.entries
    }
    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    fn zip(&self, o: &Self, f: impl Fn(&C, &C) -> C) -> Self {
        assert_eq!(self.len(), o.len(), "length mismatch");
        GhostVector::new(self.entries.iter().zip(&o.entries).map(|(a, b)| f(a, b)).collect())
    }
    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.add(b))
    }
    pub fn mul(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a.mul(b))
    }
    pub fn neg(&self) -> Self {
        GhostVector::new(self.entries.iter().map(|a| a.neg()).collect())
    }
}

impl<C: Coeff> PartialEq for GhostVector<C> {
    fn eq(&self, o: &Self) -> bool {
        self.len() == o.len() && self.entries.iter().zip(&o.entries).all(|(a, b)| a.sub(b).is_zero())
    }
}

impl<C: Coeff> PartialEq for WittVector<C> {
    fn eq(&self, o: &Self) -> bool {
        self.len() == o.len() && self.entries.iter().zip(&o.entries).all(|(a, b)| a.sub(b).is_zero())
    }
}

/// `φ_n = Σ_{i<=n} p^i λ_i^{p^{n-i}}`.
pub fn ghost<C: Coeff>(w: &WittVector<C>) -> GhostVector<C> {
    let p = w.entries[0].prime() as u64;
    let mut pw: Vec<C> = Vec::with_capacity(w.len());
    let mut out = Vec::with_capacity(w.len());
    for (n, l) in w.entries.iter().enumerate() {
        for x in pw.iter_mut() {
            *x = x.pow(p);
        }
        pw.push(l.clone());
        let mut acc = l.zero_like();
        for (i, x) in pw.iter().enumerate() {
            if !x.is_zero() {
                acc = acc.add(&x.mul_p_pow(i as i64));
            }
        }
        debug_assert_eq!(pw.len(), n + 1);
        out.push(acc);
    }
    GhostVector::new(out)
}

/// The Witt vector with the given ghost components. A recovered entry of
/// negative valuation is reported as `NotIntegral` with its index.
pub fn unghost<C: Coeff>(g: &GhostVector<C>) -> Result<WittVector<C>> {
    let p = g.entries[0].prime() as u64;
    let mut pw: Vec<C> = Vec::with_capacity(g.len());
    let mut out: Vec<C> = Vec::with_capacity(g.len());
    for (n, phi) in g.entries.iter().enumerate() {
        for x in pw.iter_mut() {
            *x = x.pow(p);
        }
        let mut rest = phi.clone();
        for (i, x) in pw.iter().enumerate() {
            if !x.is_zero() {
                rest = rest.sub(&x.mul_p_pow(i as i64));
            }
        }
        let l = rest.mul_p_pow(-(n as i64));
        if let Valuation::Finite(v) = l.valuation() {
            if v < Q::zero() {
                return Err(Error::NotIntegral { index: n, valuation: v });
            }
        }
        if l.precision() <= 0 {
            return Err(Error::InsufficientPrecision(format!("Witt entry {n} lost all digits")));
        }
        pw.push(l.clone());
        out.push(l);
    }
    Ok(WittVector { entries: out })
}

impl<C: Coeff> WittVector<C> {
    pub fn new(entries: Vec<C>) -> Self {
        assert!(!entries.is_empty(), "Witt vectors have length at least 1");
        WittVector { entries }
    }

    /// Like [`WittVector::new`], rejecting entries of negative valuation.
    pub fn integral(entries: Vec<C>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if let Valuation::Finite(v) = e.valuation() {
                if v < Q::zero() {
                    return Err(Error::NotIntegral { index: i, valuation: v });
                }
            }
        }
        Ok(Self::new(entries))
    }

    pub fn zero(template: &C, len: usize) -> Self {
        Self::new(vec![template.zero_like(); len])
    }

    pub fn one(template: &C, len: usize) -> Self {
        Self::teichmuller(template.one_like(), len)
    }

    /// `[c] = (c, 0, …, 0)`.
    pub fn teichmuller(c: C, len: usize) -> Self {
        let mut e = vec![c.zero_like(); len];
        e[0] = c;
        Self::new(e)
    }

    /// The image of an integer `k`, with ghost `⟨k, …, k⟩`.
    pub fn from_int(template: &C, k: i64, len: usize) -> Result<Self> {
        unghost(&GhostVector::new(vec![template.int_like(k); len]))
    }

    pub fn entries(&self) -> &[C] {
        &self.entries
    }
    pub fn into_entries(self) -> Vec<C> {
        self.entries
    }
    pub fn len(&self) -> usize {
        self.entries.len()
    }
    pub fn is_empty(&self) -> bool {
        false
    }
    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn ghost(&self) -> GhostVector<C> {
        ghost(self)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        unghost(&self.ghost().add(&o.ghost()))
    }

    pub fn neg(&self) -> Result<Self> {
        unghost(&self.ghost().neg())
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        unghost(&self.ghost().add(&o.ghost().neg()))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        unghost(&self.ghost().mul(&o.ghost()))
    }

    /// `F`: ghost shift `⟨φ_1, φ_2, …⟩`, one entry shorter.
    pub fn frobenius(&self) -> Result<Self> {
        if self.len() < 2 {
            return Err(Error::InvalidInput("Frobenius needs length at least 2".into()));
        }
        unghost(&GhostVector::new(self.ghost().entries[1..].to_vec()))
    }

    /// `V`: `(0, λ_0, …, λ_m)`, one entry longer.
    pub fn verschiebung(&self) -> Self {
        let mut e = Vec::with_capacity(self.len() + 1);
        e.push(self.entries[0].zero_like());
        e.extend(self.entries.iter().cloned());
        Self::new(e)
    }

    /// `V` followed by truncation back to the same length.
    pub fn verschiebung_trunc(&self) -> Self {
        let mut v = self.verschiebung();
        v.entries.pop();
        v
    }

    /// First `len` entries (the projection `W_m → W_{len-1}`).
    pub fn truncate(&self, len: usize) -> Self {
        Self::new(self.entries[..len.min(self.len())].to_vec())
    }

    /// `ℓ = m - k` where `k` is the first entry nonzero modulo `p`; `None` for `-∞`.
    pub fn length(&self) -> Option<u32> {
        let m = self.len() as u32 - 1;
        self.entries
            .iter()
            .position(|e| match e.valuation() {
                Valuation::Finite(v) => v < Q::from(1),
                Valuation::Zero { .. } => false,
            })
            .map(|k| m - k as u32)
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> WittVector<D> {
        WittVector::new(self.entries.iter().map(f).collect())
    }
}

fn check_lift_input(h: &[BigRational], b: &ExtElement) -> Result<()> {
    let p = b.p();
    if let Some((i, c)) = h.iter().enumerate().find(|(_, c)| !c.is_zero() && vp_rat(c, p).unwrap() < 0) {
        return Err(Error::IntegralityViolation(format!("h coefficient {i} = {}", fmt_rat(c))));
    }
    match b.valuation() {
        Valuation::Finite(v) if v > Q::zero() => Ok(()),
        Valuation::Zero { .. } => Ok(()),
        _ => Err(Error::InvalidInput("canonical lifts need v(b) > 0".into())),
    }
}

/// `[h(b)] = unghost⟨h(b), h(P(b)), …, h(P^{(m)}(b))⟩` in `W_m`, with `P` the
/// Lubin-Tate series attached to the ring of `b`.
pub fn canonical_lift(h: &[BigRational], b: &ExtElement, m: u32) -> Result<WittVector<ExtElement>> {
    check_lift_input(h, b)?;
    let ring = b.ring().clone();
    let lt = ring.lubin_tate().ok_or(Error::LevelRaiseRequired(ring.level()))?;
    let pc: Vec<ExtElement> = lt.coeffs.iter().map(|c| ExtElement::from_rational(&ring, c)).collect();
    let hc: Vec<ExtElement> = h.iter().map(|c| ExtElement::from_rational(&ring, c)).collect();
    let mut x = b.clone();
    let mut g = Vec::with_capacity(m as usize + 1);
    for j in 0..=m {
        if j > 0 {
            x = poly_eval(&pc, &x);
        }
        g.push(poly_eval(&hc, &x));
    }
    unghost(&GhostVector::new(g))
}

/// `r = v_p(h(0))` and a check that `[h(b)]` has non-unit entries before index
/// `r` and a unit at `r`. `None` when `h(0) = 0`, in which case every entry must
/// be a non-unit.
pub fn key_valuation_profile(h: &[BigRational], b: &ExtElement, m: u32) -> Result<Option<u32>> {
    let lift = canonical_lift(h, b, m)?;
    let unit = |e: &ExtElement| e.valuation() == Valuation::Finite(Q::zero());
    let h0 = h.first().cloned().unwrap_or_else(BigRational::zero);
    if h0.is_zero() {
        if let Some(i) = lift.entries().iter().position(unit) {
            return Err(Error::PatternViolation(format!("entry {i} is a unit although h(0) = 0")));
        }
        return Ok(None);
    }
    let r = vp_rat(&h0, b.p()).unwrap();
    if r < 0 {
        return Err(Error::IntegralityViolation(fmt_rat(&h0)));
    }
    let r = r as u32;
    for (i, e) in lift.entries().iter().enumerate() {
        let i = i as u32;
        if i < r && unit(e) {
            return Err(Error::PatternViolation(format!("entry {i} is a unit before index {r}")));
        }
        if i == r && !unit(e) {
            return Err(Error::PatternViolation(format!("entry {r} is not a unit")));
        }
    }
    Ok(Some(r))
}

/// Splits `k > 0` as `n·p^m` with `n` prime to `p`.
pub fn split_p(k: u64, p: u32) -> (u64, u32) {
    let mut n = k;
    let mut m = 0;
    while n.is_multiple_of(p as u64) {
        n /= p as u64;
        m += 1;
    }
    (n, m)
}

/// A co-monomial `λT^{-d}`, `d = n p^m`, inside `W_s` of the Laurent ring.
/// `lambda` holds the last `min(s, m) + 1` entries of `λ` (the ones that
/// survive in `W_s`).
#[derive(Clone, Debug)]
pub struct ComonomialBlock<C> {
    pub n: u64,
    pub m: u32,
    pub s: u32,
    pub lambda: WittVector<C>,
}

impl<C: Coeff> PartialEq for ComonomialBlock<C> {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.m == o.m && self.s == o.s && self.lambda == o.lambda
    }
}

impl<C: Coeff> ComonomialBlock<C> {
    pub fn d(&self) -> u64 {
        self.n * (self.lambda.entries[0].prime() as u64).pow(self.m)
    }

    pub fn expand(&self) -> Result<WittVector<LaurentSeries<C>>> {
        comonomial(&self.lambda, self.n, self.m, self.s)
    }
}

/// `(0, …, 0, λ_0T^{-n}, λ_1T^{-np}, …, λ_mT^{-d})` in `W_s`; when `m > s` only
/// `λ_{m-s}, …, λ_m` survive. `λ` may be given at full length `m + 1` or
/// already cut to `min(s, m) + 1`.
pub fn comonomial<C: Coeff>(lambda: &WittVector<C>, n: u64, m: u32, s: u32) -> Result<WittVector<LaurentSeries<C>>> {
    if n == 0 {
        return Err(Error::DegreeNotPositive);
    }
    let t = &lambda.entries[0];
    let p = t.prime() as u64;
    if n.is_multiple_of(p) {
        return Err(Error::InvalidInput(format!("n = {n} is divisible by p")));
    }
    let keep = m.min(s) as usize + 1;
    let lam: &[C] = if lambda.len() == keep {
        &lambda.entries
    } else if lambda.len() == m as usize + 1 {
        &lambda.entries[m as usize + 1 - keep..]
    } else {
        return Err(Error::InvalidInput(format!("λ has length {}, expected {} or {}", lambda.len(), m + 1, keep)));
    };
    let first_exp = m.saturating_sub(s);
    let offset = s.saturating_sub(m) as usize;
    let mut entries = vec![LaurentSeries::exact_zero(t); s as usize + 1];
    for (i, l) in lam.iter().enumerate() {
        let deg = -((n * p.pow(first_exp + i as u32)) as i64);
        entries[offset + i] = LaurentSeries::monomial(l.clone(), deg);
    }
    Ok(WittVector::new(entries))
}

#[derive(Clone, Debug)]
pub struct Decomposition<C> {
    pub s: u32,
    /// Keyed by `d`.
    pub blocks: BTreeMap<u64, ComonomialBlock<C>>,
    pub constant: WittVector<C>,
    pub positive: WittVector<LaurentSeries<C>>,
}

impl<C: Coeff> Decomposition<C> {
    /// Witt sum of all pieces.
    pub fn reassemble(&self) -> Result<WittVector<LaurentSeries<C>>> {
        let mut acc = self.constant.map(|c| LaurentSeries::constant(c.clone()));
        acc = acc.add(&self.positive)?;
        for b in self.blocks.values() {
            acc = acc.add(&b.expand()?)?;
        }
        Ok(acc)
    }
}

fn merge_block<C: Coeff>(blocks: &mut BTreeMap<u64, ComonomialBlock<C>>, d: u64, b: ComonomialBlock<C>) -> Result<()> {
    match blocks.remove(&d) {
        None => {
            blocks.insert(d, b);
        }
        Some(old) => {
            let lambda = old.lambda.add(&b.lambda)?;
            blocks.insert(d, ComonomialBlock { lambda, ..old });
        }
    }
    Ok(())
}

/// Splits a Witt vector over the Laurent ring into co-monomial blocks, a
/// constant vector and a vector over `T·O[[T]]`, by induction on the length:
/// `f = Σ_i [c_i T^i] + V(g)` where `c_i T^i` runs over the terms of `f_0`.
pub fn decompose<C: Coeff>(f: &WittVector<LaurentSeries<C>>) -> Result<Decomposition<C>> {
    let tmpl = f.entries[0].template().clone();
    let p = tmpl.prime();
    let s = f.len() as u32 - 1;
    let len = f.len();
    let f0 = &f.entries[0];
    let mut blocks = BTreeMap::new();
    let mut constant = WittVector::zero(&tmpl, len);
    let mut positive = WittVector::zero(&LaurentSeries::exact_zero(&tmpl), len);
    for (i, c) in f0.terms() {
        if *i < 0 {
            let (n, k) = split_p(i.unsigned_abs(), p);
            let b = ComonomialBlock { n, m: s + k, s, lambda: WittVector::teichmuller(c.clone(), len) };
            merge_block(&mut blocks, b.d(), b)?;
        } else if *i == 0 {
            constant = constant.add(&WittVector::teichmuller(c.clone(), len))?;
        } else {
            positive = positive.add(&WittVector::teichmuller(LaurentSeries::monomial(c.clone(), *i), len))?;
        }
    }
    if s == 0 {
        return Ok(Decomposition { s, blocks, constant, positive });
    }
    // ghost of (f_0, 0, …) - Σ [c_i T^i]
    let mut g = Vec::with_capacity(len);
    let mut f0pow = f0.clone();
    let mut q = 1u64;
    for n in 0..len {
        if n > 0 {
            f0pow = f0pow.pow(p as u64);
            q *= p as u64;
        }
        let mut sum = LaurentSeries::exact_zero(&tmpl);
        for (i, c) in f0.terms() {
            sum = sum.add(&LaurentSeries::monomial(c.pow(q), i * q as i64));
        }
        g.push(f0pow.sub(&sum));
    }
    let rem = unghost(&GhostVector::new(g))?;
    debug_assert!(rem.entries[0].is_zero());
    let tail = WittVector::new(rem.entries[1..].to_vec()).add(&WittVector::new(f.entries[1..].to_vec()))?;
    let sub = decompose(&tail)?;
    for (d, b) in sub.blocks {
        let lambda = if b.m >= s { b.lambda.verschiebung() } else { b.lambda };
        merge_block(&mut blocks, d, ComonomialBlock { n: b.n, m: b.m, s, lambda })?;
    }
    constant = constant.add(&sub.constant.verschiebung())?;
    positive = positive.add(&sub.positive.verschiebung())?;
    Ok(Decomposition { s, blocks, constant, positive })
}
