//! Rank-one operators `∂ − g(T)` with `∂ = T d/dT`: iterated matrices, radius
//! estimates, the solvability criterion, irregularity and class keys.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeff::Coeff;
use crate::error::{Error, Result};
use crate::padic_core::{make_tower, pi_at, ExtElement, Ring, Valuation, Q};
use crate::rational::{fmt_rat, vp_rat};
use crate::series::LaurentSeries;
use crate::witt::{split_p, unghost, ComonomialBlock, GhostVector, WittVector};

/// The `i = 0` coefficient of `g`.
#[derive(Clone, Debug, PartialEq)]
pub enum Exponent {
    Rational(BigRational),
    Padic(ExtElement),
}

impl Exponent {
    pub fn zero() -> Self {
        Exponent::Rational(BigRational::zero())
    }

    pub fn to_element(&self, ring: &Ring) -> Result<ExtElement> {
        match self {
            Exponent::Rational(q) => Ok(ExtElement::from_rational(ring, q)),
            Exponent::Padic(x) => x.embed(ring),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Exponent::Rational(q) => q.is_zero(),
            Exponent::Padic(x) => x.is_zero(),
        }
    }

    fn add(&self, o: &Self, ring: &Ring) -> Result<Self> {
        match (self, o) {
            (Exponent::Rational(a), Exponent::Rational(b)) => Ok(Exponent::Rational(a + b)),
            _ => Ok(Exponent::Padic(self.to_element(ring)?.add(&o.to_element(ring)?))),
        }
    }

    fn neg(&self) -> Self {
        match self {
            Exponent::Rational(a) => Exponent::Rational(-a),
            Exponent::Padic(x) => Exponent::Padic(x.neg()),
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational(q) => write!(f, "{}", fmt_rat(q)),
            Exponent::Padic(x) => write!(f, "{x:?}"),
        }
    }
}

/// `∂ − g(T)`, `g = a0 + Σ_{i≠0} a_i T^i` over a finite window.
#[derive(Clone, Debug)]
pub struct RankOneOperator {
    pub ring: Ring,
    pub coeffs: BTreeMap<i64, ExtElement>,
    pub a0: Exponent,
}

impl RankOneOperator {
    /// Drops zero coefficients; a degree-0 entry in `coeffs` is folded into `a0`.
    pub fn new(ring: &Ring, coeffs: impl IntoIterator<Item = (i64, ExtElement)>, a0: Exponent) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut a0 = a0;
        for (i, c) in coeffs {
            let c = c.embed(ring)?;
            if i == 0 {
                a0 = a0.add(&Exponent::Padic(c), ring)?;
                continue;
            }
            if !c.is_zero() {
                map.insert(i, c);
            }
        }
        Ok(RankOneOperator { ring: ring.clone(), coeffs: map, a0 })
    }

    /// The trivial operator `∂`.
    pub fn trivial(ring: &Ring) -> Self {
        RankOneOperator { ring: ring.clone(), coeffs: BTreeMap::new(), a0: Exponent::zero() }
    }

    pub fn p(&self) -> u32 {
        self.ring.p()
    }

    pub fn coeff(&self, i: i64) -> ExtElement {
        self.coeffs.get(&i).cloned().unwrap_or_else(|| ExtElement::zero(&self.ring))
    }

    /// `g(T)` as an exact Laurent polynomial.
    pub fn g(&self) -> Result<LaurentSeries<ExtElement>> {
        let zero = ExtElement::zero(&self.ring);
        let mut terms: Vec<(i64, ExtElement)> = self.coeffs.iter().map(|(i, c)| (*i, c.clone())).collect();
        if !self.a0.is_zero() {
            terms.push((0, self.a0.to_element(&self.ring)?));
        }
        Ok(LaurentSeries::polynomial(&zero, terms))
    }

    pub fn negative_part(&self) -> Self {
        self.filtered(|i| i < 0)
    }

    pub fn positive_part(&self) -> Self {
        self.filtered(|i| i > 0)
    }

    fn filtered(&self, keep: impl Fn(i64) -> bool) -> Self {
        RankOneOperator {
            ring: self.ring.clone(),
            coeffs: self.coeffs.iter().filter(|(i, _)| keep(**i)).map(|(i, c)| (*i, c.clone())).collect(),
            a0: Exponent::zero(),
        }
    }

    /// Same operator over a ring higher in the tower.
    pub fn embed(&self, ring: &Ring) -> Result<Self> {
        let coeffs = self.coeffs.iter().map(|(i, c)| Ok((*i, c.embed(ring)?))).collect::<Result<_>>()?;
        let a0 = match &self.a0 {
            Exponent::Padic(x) => Exponent::Padic(x.embed(ring)?),
            q => q.clone(),
        };
        Ok(RankOneOperator { ring: ring.clone(), coeffs, a0 })
    }

    /// Coefficientwise agreement at working precision.
    pub fn eq_to_prec(&self, o: &Self) -> bool {
        let keys: std::collections::BTreeSet<i64> = self.coeffs.keys().chain(o.coeffs.keys()).copied().collect();
        let a0_eq = match (&self.a0, &o.a0) {
            (Exponent::Rational(a), Exponent::Rational(b)) => a == b,
            _ => match (self.a0.to_element(&self.ring), o.a0.to_element(&self.ring)) {
                (Ok(a), Ok(b)) => a.eq_to_prec(&b),
                _ => false,
            },
        };
        a0_eq && keys.iter().all(|i| self.coeff(*i).eq_to_prec(&o.coeff(*i)))
    }
}

fn vp_i64(i: i64, p: u32) -> i64 {
    split_p(i.unsigned_abs(), p).1 as i64
}

/// `g_{[1]} = g/T`, `g_{[s+1]} = d/dT g_{[s]} + g_{[s]} g_{[1]}`.
pub fn iterate_matrices(op: &RankOneOperator, count: usize) -> Result<Vec<LaurentSeries<ExtElement>>> {
    if count == 0 {
        return Err(Error::InvalidInput("need at least one iterate".into()));
    }
    let g1 = op.g()?.shift(-1);
    let mut out = Vec::with_capacity(count);
    out.push(g1.clone());
    for _ in 1..count {
        let prev = out.last().unwrap();
        let next = prev.derivative().add(&prev.mul(&g1));
        if !next.is_exact() && next.hi() < next.lo() {
            return Err(Error::WindowExhausted);
        }
        out.push(next);
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RadiusEstimate {
    /// Valuation of `Ray(M, ρ)`, i.e. `-log_p` of the radius.
    pub valuation: Q,
    /// `|g|_ρ > 1`, in which case the value is exact.
    pub small_radius: bool,
    /// Iterates used for the estimate.
    pub window: (usize, usize),
}

/// Radius of convergence at `ρ = p^r`, `r <= 0`, in valuation form.
///
/// When `|g|_ρ > 1` the exact value `ωρ|g|_ρ^{-1}` is returned. Otherwise the
/// terms `1/(p−1) − v_ρ(g_{[k]})/k` are formed at `k = p^j <= S`, where
/// `|k!|^{1/k}` is close to `ω`; small `k` overshoot, so the least term is
/// taken, capped by `ρ`.
pub fn ray_estimate(op: &RankOneOperator, r: Q, count: usize) -> Result<RadiusEstimate> {
    if r > Q::zero() {
        return Err(Error::InvalidRadius);
    }
    if count < 8 {
        return Err(Error::InvalidInput("at least 8 iterates are needed".into()));
    }
    let p = op.p() as usize;
    let omega = Q::new(1, p as i64 - 1);
    let g = op.g()?;
    let mut top = p;
    while top * p <= count {
        top *= p;
    }
    let window = (p, top);
    let Valuation::Finite(gv) = g.gauss_val(-r).value else {
        return Ok(RadiusEstimate { valuation: -r, small_radius: false, window });
    };
    if gv < Q::zero() {
        return Ok(RadiusEstimate { valuation: omega - r - gv, small_radius: true, window: (1, 1) });
    }
    let iterates = iterate_matrices(op, top)?;
    let mut best: Option<Q> = None;
    let mut k = p;
    while k <= top {
        if let Valuation::Finite(v) = iterates[k - 1].gauss_val(-r).value {
            let t = omega - v / Q::from(k as i64);
            best = Some(best.map_or(t, |b| b.min(t)));
        }
        k *= p;
    }
    let valuation = best.map_or(-r, |b| b.max(-r));
    Ok(RadiusEstimate { valuation, small_radius: false, window })
}

/// Where an unghost step left the integers.
#[derive(Clone, Debug, PartialEq)]
pub struct IntegralityWitness {
    pub index: usize,
    pub valuation: Q,
}

fn unghost_verdict(ghost: Vec<ExtElement>) -> Result<std::result::Result<WittVector<ExtElement>, IntegralityWitness>> {
    match unghost(&GhostVector::new(ghost)) {
        Ok(w) => Ok(Ok(w)),
        Err(Error::NotIntegral { index, valuation }) => Ok(Err(IntegralityWitness { index, valuation })),
        Err(e) => Err(e),
    }
}

/// Trailing zero ghost components appended to each positive family.
pub const POSITIVE_EXTENSION: usize = 2;

#[derive(Clone, Debug)]
pub struct PositiveFamily {
    pub n: u64,
    pub ghost: Vec<ExtElement>,
    pub lambda: std::result::Result<WittVector<ExtElement>, IntegralityWitness>,
}

#[derive(Clone, Debug)]
pub struct PositiveReport {
    pub solvable: bool,
    /// Degree of a coefficient with `|a_i| > 1`, which rules out solvability.
    pub small_radius_violation: Option<i64>,
    pub families: Vec<PositiveFamily>,
}

/// Criterion for the part of `g` in positive degrees: `φ_{n,m} = a_{np^m}/n`
/// must unghost to an integral vector for every `n` prime to `p`.
pub fn solve_positive(op: &RankOneOperator) -> Result<PositiveReport> {
    let p = op.p();
    let pos: Vec<(i64, &ExtElement)> = op.coeffs.range(1..).map(|(i, c)| (*i, c)).collect();
    for (i, c) in &pos {
        if let Valuation::Finite(v) = c.valuation() {
            if v < Q::zero() {
                return Ok(PositiveReport { solvable: false, small_radius_violation: Some(*i), families: Vec::new() });
            }
        }
    }
    let mut support: BTreeMap<u64, u32> = BTreeMap::new();
    for (i, _) in &pos {
        let (n, m) = split_p(*i as u64, p);
        let e = support.entry(n).or_insert(0);
        *e = (*e).max(m);
    }
    let mut families = Vec::new();
    let mut solvable = true;
    for (n, top) in support {
        let mut ghost = Vec::new();
        for m in 0..=top {
            let i = n as i64 * (p as i64).pow(m);
            ghost.push(op.coeff(i).div_int(n as i64)?);
        }
        for _ in 0..POSITIVE_EXTENSION {
            ghost.push(ExtElement::zero(&op.ring));
        }
        let lambda = unghost_verdict(ghost.clone())?;
        solvable &= lambda.is_ok();
        families.push(PositiveFamily { n, ghost, lambda });
    }
    Ok(PositiveReport { solvable, small_radius_violation: None, families })
}

#[derive(Clone, Debug)]
pub struct StrippedTail {
    pub op: RankOneOperator,
    pub removed: Vec<i64>,
    /// `−Σ a_i T^i / i` over the removed degrees.
    pub witness_log: LaurentSeries<ExtElement>,
}

/// Removes the degrees `i <= -1` with `v(a_i/i) − i·r > 1/(p−1)`: there the
/// antiderivative's exponential converges on `ρ <= |T|`, `ρ = p^r`.
/// Coefficients of other degrees are kept as they are.
pub fn strip_small_tail(op: &RankOneOperator, r: Q) -> Result<StrippedTail> {
    if r > Q::zero() {
        return Err(Error::InvalidRadius);
    }
    let p = op.p();
    let omega = Q::new(1, p as i64 - 1);
    let mut kept = op.clone();
    let mut removed = Vec::new();
    let mut witness = Vec::new();
    for (i, c) in op.coeffs.range(..0) {
        let Valuation::Finite(v) = c.valuation() else { continue };
        let t = v - Q::from(vp_i64(*i, p)) - Q::from(*i) * r;
        if t > omega {
            kept.coeffs.remove(i);
            removed.push(*i);
            witness.push((*i, c.div_int(*i)?.neg()));
        }
    }
    let witness_log = LaurentSeries::polynomial(&ExtElement::zero(&op.ring), witness);
    Ok(StrippedTail { op: kept, removed, witness_log })
}

#[derive(Clone, Debug)]
pub struct NegativeOptions {
    /// Log radius for the small-tail test; `None` skips stripping.
    pub strip_radius: Option<Q>,
    /// Lower bound for every block's top index `M`.
    pub override_m: Option<u32>,
}

impl Default for NegativeOptions {
    fn default() -> Self {
        NegativeOptions { strip_radius: Some(Q::zero()), override_m: None }
    }
}

#[derive(Clone, Debug)]
pub struct NegativeBlock {
    pub n: u64,
    pub m: u32,
    pub ghost: Vec<ExtElement>,
    pub lambda: std::result::Result<WittVector<ExtElement>, IntegralityWitness>,
    /// `n·p^ℓ(λ̄)`, `0` when `λ` reduces to zero; `None` if not integral.
    pub contribution: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct NegativeReport {
    pub solvable: bool,
    /// Ring the blocks live in (raised when the input level was too low).
    pub ring: Ring,
    pub stripped: Vec<i64>,
    pub witness_log: LaurentSeries<ExtElement>,
    pub blocks: Vec<NegativeBlock>,
    /// Integral blocks as co-monomials at ambient length `ring.level() + 1`.
    pub decomposition: Vec<ComonomialBlock<ExtElement>>,
}

/// Ring at `level` in the same tower, or an error when no `P` is attached.
pub fn raise_level(ring: &Ring, level: u32) -> Result<Ring> {
    if ring.level() >= level && ring.lubin_tate().is_some() {
        return Ok(ring.clone());
    }
    let lt = ring.lubin_tate().ok_or(Error::LevelRaiseRequired(level))?;
    make_tower(lt, level.max(ring.level()), ring.budget())
}

/// Criterion for the negative part by pure-pattern ghost inversion:
/// `φ_j = −a_{−np^j}/(n π_{M−j})`, `j = 0..M`, unghosted in `W_M`.
pub fn solve_negative(op: &RankOneOperator, opts: &NegativeOptions) -> Result<NegativeReport> {
    let p = op.p();
    let neg = op.negative_part();
    let (neg, stripped, witness_log) = match opts.strip_radius {
        Some(r) => {
            let s = strip_small_tail(&neg, r)?;
            (s.op, s.removed, s.witness_log)
        }
        None => (neg, Vec::new(), LaurentSeries::exact_zero(&ExtElement::zero(&op.ring))),
    };
    let mut support: BTreeMap<u64, u32> = BTreeMap::new();
    for i in neg.coeffs.keys() {
        let (n, m) = split_p(i.unsigned_abs(), p);
        let e = support.entry(n).or_insert(0);
        *e = (*e).max(m).max(opts.override_m.unwrap_or(0));
    }
    let needed = support.values().copied().max().unwrap_or(0);
    let ring = if support.is_empty() { op.ring.clone() } else { raise_level(&op.ring, needed)? };
    let neg = neg.embed(&ring)?;
    let s = ring.level();
    let mut blocks = Vec::new();
    let mut decomposition = Vec::new();
    let mut solvable = true;
    for (n, top) in support {
        let mut ghost = Vec::with_capacity(top as usize + 1);
        for j in 0..=top {
            let a = neg.coeff(-(n as i64) * (p as i64).pow(j));
            let den = pi_at(&ring, top - j)?.mul_int(n as i64);
            ghost.push(a.neg().div(&den)?);
        }
        let lambda = unghost_verdict(ghost.clone())?;
        let contribution = match &lambda {
            Ok(l) => {
                decomposition.push(ComonomialBlock { n, m: top, s, lambda: l.clone() });
                Some(residue_length(l).map_or(0, |ell| n * (p as u64).pow(ell)))
            }
            Err(_) => {
                solvable = false;
                None
            }
        };
        blocks.push(NegativeBlock { n, m: top, ghost, lambda, contribution });
    }
    Ok(NegativeReport { solvable, ring, stripped, witness_log, blocks, decomposition })
}

/// `ℓ` of the image of `λ` in `W(k)`: `m − k` with `k` the first unit entry.
pub fn residue_length(lambda: &WittVector<ExtElement>) -> Option<u32> {
    let m = lambda.len() as u32 - 1;
    lambda
        .entries()
        .iter()
        .position(|e| e.valuation() == Valuation::Finite(Q::zero()))
        .map(|k| m - k as u32)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModerateReport {
    pub in_zp: bool,
    /// `a0 ∈ Z_(p)`; unknown for digit-stream input.
    pub in_z_localized: Option<bool>,
    pub in_z: Option<bool>,
    pub solvable: bool,
    pub trivial: Option<bool>,
    /// Least `h >= 1` with `(p^h − 1)a0 ∈ Z`.
    pub frobenius_order: Option<u64>,
    /// `Π([q_i]_{r_i} − 1)` over `b = Π q_i^{r_i}`; `None` if too large to write down.
    pub tower_bound: Option<BigUint>,
    /// Whether `(p^bound − 1)a0 ∈ Z` actually holds.
    pub tower_bound_valid: Option<bool>,
}

const TOWER_BITS: u64 = 1 << 16;

fn factor(mut b: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= b {
        let mut r = 0;
        while b.is_multiple_of(q) {
            b /= q;
            r += 1;
        }
        if r > 0 {
            out.push((q, r));
        }
        q += 1;
    }
    if b > 1 {
        out.push((b, 1));
    }
    out
}

/// `[q]_r = q^{q^{⋯}}`, `r` levels.
fn tower(q: u64, r: u32) -> Option<BigUint> {
    let mut t = BigUint::from(q);
    for _ in 1..r {
        let e = t.to_u32()?;
        if (e as u64) * (64 - q.leading_zeros() as u64) > TOWER_BITS {
            return None;
        }
        t = BigUint::from(q).pow(e);
    }
    Some(t)
}

fn multiplicative_order(p: u64, b: u64) -> Option<u64> {
    if b == 1 {
        return Some(1);
    }
    if b.gcd(&p) != 1 {
        return None;
    }
    let mut x = p % b;
    for h in 1..=b {
        if x == 1 {
            return Some(h);
        }
        x = ((x as u128 * p as u128) % b as u128) as u64;
    }
    None
}

/// Membership tests and Frobenius order for the exponent `a0`.
pub fn moderate(a0: &Exponent, p: u32) -> ModerateReport {
    match a0 {
        Exponent::Padic(x) => {
            let in_zp = x.valuation().lower_bound() >= Q::zero();
            ModerateReport {
                in_zp,
                in_z_localized: None,
                in_z: None,
                solvable: in_zp,
                trivial: None,
                frobenius_order: None,
                tower_bound: None,
                tower_bound_valid: None,
            }
        }
        Exponent::Rational(q) => {
            let in_zp = q.is_zero() || vp_rat(q, p).unwrap() >= 0;
            let b = q.denom().abs();
            let in_z = b.is_one();
            let (order, bound, valid) = match b.to_u64() {
                Some(b) if in_zp => {
                    let order = multiplicative_order(p as u64, b);
                    let bound = factor(b).into_iter().try_fold(BigUint::one(), |acc, (q, r)| {
                        tower(q, r).map(|t| acc * (t - BigUint::one()))
                    });
                    let valid = bound.as_ref().map(|h| {
                        BigUint::from(p).modpow(h, &BigUint::from(b)) == BigUint::one() % BigUint::from(b)
                    });
                    (order, bound, valid)
                }
                _ => (None, None, None),
            };
            ModerateReport {
                in_zp,
                in_z_localized: Some(in_zp),
                in_z: Some(in_z),
                solvable: in_zp,
                trivial: Some(in_z),
                frobenius_order: order,
                tower_bound: bound,
                tower_bound_valid: valid,
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolvabilityReport {
    pub solvable: bool,
    pub a0_status: ModerateReport,
    pub positive: PositiveReport,
    pub negative: NegativeReport,
    /// Set when solvable.
    pub irregularity: Option<u64>,
}

/// Splits `g = g⁻ + a0 + g⁺` and conjoins the three verdicts.
pub fn analyze(op: &RankOneOperator, opts: &NegativeOptions) -> Result<SolvabilityReport> {
    let a0_status = moderate(&op.a0, op.p());
    let positive = solve_positive(&op.positive_part())?;
    let negative = solve_negative(op, opts)?;
    let solvable = a0_status.solvable && positive.solvable && negative.solvable;
    let irregularity = solvable.then(|| negative.blocks.iter().filter_map(|b| b.contribution).max().unwrap_or(0));
    Ok(SolvabilityReport { solvable, a0_status, positive, negative, irregularity })
}

pub fn irregularity(report: &SolvabilityReport) -> Result<u64> {
    report.irregularity.ok_or(Error::NotSolvable)
}

/// `∂ − g` with `g = a0 + ∂_{T,log} e_{p^s}(f⁻, 1)`, built block by block:
/// a block `(n, m)` with twist `t = min(m, s)` and `k = n p^{m−t}` contributes
/// `a_{−kp^j} = −k π_{t−j} φ_j(λ)`.
pub fn build_l(ring: &Ring, a0: Exponent, blocks: &[ComonomialBlock<ExtElement>]) -> Result<RankOneOperator> {
    let p = ring.p() as u64;
    let mut coeffs: BTreeMap<i64, ExtElement> = BTreeMap::new();
    for b in blocks {
        let t = b.m.min(b.s);
        if ring.level() < t {
            return Err(Error::LevelTooLow { needed: t, have: ring.level() });
        }
        if b.lambda.len() != t as usize + 1 {
            return Err(Error::InvalidInput(format!("block λ has length {}, expected {}", b.lambda.len(), t + 1)));
        }
        let k = b.n * p.pow(b.m - t);
        let lambda = b.lambda.entries().iter().map(|c| c.embed(ring)).collect::<Result<Vec<_>>>()?;
        let phi = WittVector::new(lambda).ghost();
        for (j, f) in phi.entries().iter().enumerate() {
            let deg = -((k * p.pow(j as u32)) as i64);
            let c = pi_at(ring, t - j as u32)?.mul(f).mul_int(-(k as i64));
            let e = coeffs.entry(deg).or_insert_with(|| ExtElement::zero(ring));
            *e = e.add(&c);
        }
    }
    RankOneOperator::new(ring, coeffs, a0)
}

/// `∂ − (g_1 + g_2)`.
pub fn tensor(a: &RankOneOperator, b: &RankOneOperator) -> Result<RankOneOperator> {
    if !a.ring.same_as(&b.ring) {
        return Err(Error::InvalidInput("operators live over different rings".into()));
    }
    let mut coeffs = a.coeffs.clone();
    for (i, c) in &b.coeffs {
        let e = coeffs.entry(*i).or_insert_with(|| ExtElement::zero(&a.ring));
        *e = e.add(c);
    }
    RankOneOperator::new(&a.ring, coeffs, a.a0.add(&b.a0, &a.ring)?)
}

/// `∂ + g`, the dual operator.
pub fn dual(op: &RankOneOperator) -> RankOneOperator {
    RankOneOperator {
        ring: op.ring.clone(),
        coeffs: op.coeffs.iter().map(|(i, c)| (*i, c.neg())).collect(),
        a0: op.a0.neg(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExponentKey {
    /// Representative in `[0, 1)`.
    Rational(String),
    Digits(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueBlock {
    /// Effective twist `ℓ` after removing leading zero residues.
    pub twist: u32,
    /// `λ̄_k, …, λ̄_M` in `F_p`, the first entry nonzero.
    pub residues: Vec<u32>,
}

/// Class of a solvable operator under the implemented normalizations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationKey {
    pub a0: ExponentKey,
    pub blocks: BTreeMap<u64, ResidueBlock>,
}

impl ClassificationKey {
    pub fn is_trivial(&self) -> bool {
        self.blocks.is_empty() && self.a0 == ExponentKey::Rational("0".into())
    }
}

fn exponent_key(a0: &Exponent) -> ExponentKey {
    match a0 {
        Exponent::Rational(q) => ExponentKey::Rational(fmt_rat(&(q - q.floor()))),
        Exponent::Padic(x) => {
            let digits = x.ring().budget().n_digits as i64;
            ExponentKey::Digits(x.coefficients(digits).iter().map(fmt_rat).collect())
        }
    }
}

/// `a0 mod Z` and, per `n`, the residue vector of `λ_n` with leading zeros
/// removed (a `V`-shift of a co-monomial does not change its class).
pub fn classify(op: &RankOneOperator, opts: &NegativeOptions) -> Result<ClassificationKey> {
    let report = analyze(op, opts)?;
    if !report.solvable {
        return Err(Error::NotSolvable);
    }
    let mut blocks = BTreeMap::new();
    for b in &report.negative.blocks {
        let lambda = b.lambda.as_ref().expect("solvable report has integral blocks");
        let res: Vec<u32> = lambda.entries().iter().map(|e| e.residue()).collect();
        if let Some(k) = res.iter().position(|r| *r != 0) {
            blocks.insert(b.n, ResidueBlock { twist: b.m - k as u32, residues: res[k..].to_vec() });
        }
    }
    Ok(ClassificationKey { a0: exponent_key(&op.a0), blocks })
}
