//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_rank_one::lubin_tate::{bracket, group_law, LubinTateData, MvSeries};
use padic_rank_one::padic_core::{
    is_eisenstein, make_tower, newton_polygon, pi_at, poly_eval, ExtElement, PrecisionBudget, Ring, TowerRing, Valuation, Q,
};
use padic_rank_one::rational::{qpoly, rat, vp_rat};
use padic_rank_one::series::{artin_hasse_universal, e_minus_blocks, eval_at_1, growth_slope, theta, GrowthClass, DEFAULT_TAIL_FRACTION};
use padic_rank_one::solvability::{
    analyze, build_l, irregularity, ray_estimate, solve_negative, strip_small_tail, Exponent, NegativeOptions, RankOneOperator,
};
use padic_rank_one::witt::{decompose, ComonomialBlock, WittVector};
use padic_rank_one::PRational;

type Outcome = Result<String, String>;

type Law = fn(&[WittVector<ExtElement>; 3]) -> (WittVector<ExtElement>, WittVector<ExtElement>);
type Criterion = (u32, &'static str, u64, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn budget(p: u32, digits: u32, guard: u32) -> PrecisionBudget {
    PrecisionBudget::new(p, digits, guard).expect("valid budget")
}

fn tower(lt: &LubinTateData, s: u32, digits: u32) -> Ring {
    make_tower(lt, s, budget(lt.p, digits, 6)).expect("tower")
}

fn tail_fraction() -> Q {
    Q::new(DEFAULT_TAIL_FRACTION.0, DEFAULT_TAIL_FRACTION.1)
}

fn random_element(rng: &mut ChaCha8Rng, ring: &Ring, bound: i64) -> ExtElement {
    let cs: Vec<BigRational> = (0..ring.e()).map(|_| rat(rng.gen_range(0..bound))).collect();
    ExtElement::from_coeffs(ring, &cs)
}

fn random_unit(rng: &mut ChaCha8Rng, ring: &Ring) -> ExtElement {
    let p = ring.p() as i64;
    let u = rng.gen_range(1..p) + p * rng.gen_range(0..50);
    ExtElement::from_i64(ring, u)
}

fn criterion_1() -> Outcome {
    for p in [2u32, 3, 5] {
        let e = artin_hasse_universal(p, 200).map_err(|e| e.to_string())?;
        ensure(e.len() > 200, || format!("p={p}: only {} coefficients", e.len()))?;
        for (k, c) in e.iter().enumerate() {
            ensure(c.is_zero() || vp_rat(c, p).unwrap() >= 0, || format!("p={p}: coefficient {k} has p in its denominator"))?;
        }
    }
    Ok("degrees 0..=200, p in {2,3,5}".into())
}

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut trials = 0;
    for p in [2u32, 3, 5] {
        let ring = TowerRing::zp(budget(p, 20, 8));
        let modulus = (p as i64).pow(8);
        let rand_vec = |rng: &mut ChaCha8Rng, len: usize| {
            WittVector::new((0..len).map(|_| ExtElement::from_bigint(&ring, &BigInt::from(rng.gen_range(0..modulus)))).collect())
        };
        let laws: [(&str, Law); 5] = [
            ("add assoc", |[a, b, c]| (a.add(b).unwrap().add(c).unwrap(), a.add(&b.add(c).unwrap()).unwrap())),
            ("add comm", |[a, b, _]| (a.add(b).unwrap(), b.add(a).unwrap())),
            ("mul assoc", |[a, b, c]| (a.mul(b).unwrap().mul(c).unwrap(), a.mul(&b.mul(c).unwrap()).unwrap())),
            ("mul comm", |[a, b, _]| (a.mul(b).unwrap(), b.mul(a).unwrap())),
            ("distrib", |[a, b, c]| (a.mul(&b.add(c).unwrap()).unwrap(), a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap())),
        ];
        for (name, law) in laws {
            for _ in 0..200 {
                let len = rng.gen_range(1..=4);
                let v = [rand_vec(&mut rng, len), rand_vec(&mut rng, len), rand_vec(&mut rng, len)];
                let (x, y) = law(&v);
                ensure(x.ghost() == y.ghost(), || format!("p={p}: {name} fails for {v:?}"))?;
                trials += 1;
            }
        }
        for _ in 0..200 {
            let len = rng.gen_range(1..=4);
            let w = WittVector::new((0..len).map(|_| PRational::int(p, rng.gen_range(-1000..1000))).collect());
            let fv = w.verschiebung().frobenius().map_err(|e| e.to_string())?;
            let pw = w.mul(&WittVector::from_int(&PRational::int(p, 0), p as i64, len).unwrap()).unwrap();
            ensure(fv == pw, || format!("p={p}: FV != p for {w:?}"))?;
            trials += 1;
        }
    }
    Ok(format!("{trials} trials, zero failures"))
}

fn criterion_3() -> Outcome {
    let mut checks = 0;
    for p in [2u32, 3] {
        for lt in [LubinTateData::simple(p), LubinTateData::cyclotomic(p)] {
            let zp = TowerRing::zp(budget(p, 20, 6));
            for s in 0..=2u32 {
                let ring = tower(&lt, s, 20);
                let phi = ring.modulus();
                ensure(is_eisenstein(phi, p), || format!("p={p} s={s}: Φ_s not Eisenstein"))?;
                let coeffs: Vec<ExtElement> = phi.iter().map(|c| ExtElement::from_rational(&zp, c)).collect();
                let np = newton_polygon(&coeffs).map_err(|e| e.to_string())?;
                let expect = Q::new(1, (p as i64).pow(s) * (p as i64 - 1));
                ensure(np == vec![(expect, ring.e())], || format!("p={p} s={s}: Newton polygon {np:?}"))?;
                let pc: Vec<ExtElement> = lt.coeffs.iter().map(|c| ExtElement::from_rational(&ring, c)).collect();
                for j in 0..=s {
                    let pj = pi_at(&ring, j).unwrap();
                    let v = Q::new(1, (p as i64).pow(j) * (p as i64 - 1));
                    ensure(pj.valuation() == Valuation::Finite(v), || format!("p={p} s={s}: v(π_{j}) = {}", pj.valuation()))?;
                    let image = poly_eval(&pc, &pj);
                    let below = if j == 0 { ExtElement::zero(&ring) } else { pi_at(&ring, j - 1).unwrap() };
                    ensure(image.sub(&below).valuation().lower_bound() >= Q::from(20), || format!("p={p} s={s}: P(π_{j}) mismatch"))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} torsion relations, Newton slopes exact"))
}

fn trunc(f: Vec<BigRational>, n: usize) -> Vec<BigRational> {
    let mut f = f;
    f.resize(n + 1, BigRational::zero());
    qpoly::trim(f)
}

fn criterion_4() -> Outcome {
    let n = 12u32;
    for p in [2u32, 3] {
        let cyc = LubinTateData::cyclotomic(p);
        let g = group_law(&cyc, n).map_err(|e| e.to_string())?;
        let (x, y) = (MvSeries::var(2, n, 0), MvSeries::var(2, n, 1));
        let expect = x.add(&y).add(&x.mul(&y));
        ensure(g.g.sub(&expect).is_zero(), || format!("p={p}: cyclotomic group law differs from X+Y+XY"))?;

        let simple = LubinTateData::simple(p);
        let g = group_law(&simple, n).map_err(|e| e.to_string())?;
        let lhs = g.g.apply(&simple.coeffs);
        let rhs = g.g.substitute(&[x.apply(&simple.coeffs), y.apply(&simple.coeffs)]);
        ensure(lhs.sub(&rhs).is_zero(), || format!("p={p}: endomorphism residual nonzero"))?;

        for lt in [&simple, &cyc] {
            let w = bracket(&lt.w, lt, lt, n).map_err(|e| e.to_string())?;
            ensure(trunc(w, n as usize) == trunc(lt.coeffs.clone(), n as usize), || format!("p={p}: [w] != P"))?;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for k in 0..20 {
        let p = if k % 2 == 0 { 2u32 } else { 3 };
        let lt = if k % 4 < 2 { LubinTateData::simple(p) } else { LubinTateData::cyclotomic(p) };
        let rnd = |rng: &mut ChaCha8Rng| {
            let mut den = rng.gen_range(1..6i64);
            while den % p as i64 == 0 {
                den += 1;
            }
            BigRational::new(rng.gen_range(-9..10i64).into(), den.into())
        };
        let (a, b) = (rnd(&mut rng), rnd(&mut rng));
        let ba = bracket(&a, &lt, &lt, n).map_err(|e| e.to_string())?;
        let bb = bracket(&b, &lt, &lt, n).map_err(|e| e.to_string())?;
        let comp = trunc(qpoly::compose(&ba, &bb), n as usize);
        let bab = trunc(bracket(&(&a * &b), &lt, &lt, n).map_err(|e| e.to_string())?, n as usize);
        ensure(comp == bab, || format!("p={p}: [a]∘[b] != [ab] for a={a}, b={b}"))?;
    }
    Ok("degree 12; 20 random (a,b)".into())
}

fn theta_m0(p: u32, w: i64, hi: i64) -> Result<padic_rank_one::series::LaurentSeries<ExtElement>, String> {
    let lt = LubinTateData::with_uniformizer(p, rat(w)).map_err(|e| e.to_string())?;
    let b = PrecisionBudget::for_truncation(p, 20, hi as u32, 0).map_err(|e| e.to_string())?;
    let ring = make_tower(&lt, 0, b).map_err(|e| e.to_string())?;
    let l = WittVector::new(vec![ExtElement::one(&ring)]);
    theta(&l, &l, 1, hi).map_err(|e| e.to_string())
}

fn criterion_5() -> Outcome {
    let hi = 200;
    let mut detail = Vec::new();
    for p in [2u32, 3, 5] {
        let th = theta_m0(p, p as i64, hi)?;
        let rep = growth_slope(&th, tail_fraction()).map_err(|e| e.to_string())?;
        let thr = Q::new(1, 2 * p as i64 * (p as i64 - 1));
        let slope = rep.slope.ok_or_else(|| format!("p={p}: no tail"))?;
        ensure(slope >= thr && rep.classification == GrowthClass::Overconvergent, || {
            format!("p={p}, w=p: slope {slope} below {thr}")
        })?;
        detail.push(format!("w={p}: slope {slope}"));
    }
    let th = theta_m0(3, 6, hi)?;
    let rep = growth_slope(&th, tail_fraction()).map_err(|e| e.to_string())?;
    let min = rep.min_tail_val.ok_or("w=6: empty tail")?;
    let slope = rep.slope.unwrap_or(Q::zero());
    ensure(min < Q::one() && slope < Q::new(1, 12) && rep.classification != GrowthClass::Overconvergent, || {
        format!("p=3, w=6: min tail {min}, slope {slope}")
    })?;
    detail.push(format!("p=3 w=6: min tail {min}, slope {slope}"));
    Ok(detail.join("; "))
}

fn criterion_6() -> Outcome {
    let opts = NegativeOptions::default();
    for p in [2u32, 3, 5] {
        let lt = LubinTateData::simple(p);
        let r0 = tower(&lt, 0, 20);
        let pi0 = pi_at(&r0, 0).unwrap();
        let dwork = RankOneOperator::new(&r0, [(-1, pi0.neg())], Exponent::zero()).unwrap();
        let rep = analyze(&dwork, &opts).map_err(|e| e.to_string())?;
        ensure(rep.solvable && irregularity(&rep) == Ok(1), || format!("p={p}: Dwork operator {:?}", rep.irregularity))?;

        let r1 = tower(&lt, 1, 20);
        let e1 = RankOneOperator::new(&r1, [(-1, pi_at(&r1, 1).unwrap().neg()), (-(p as i64), pi_at(&r1, 0).unwrap().neg())], Exponent::zero()).unwrap();
        let rep = analyze(&e1, &opts).map_err(|e| e.to_string())?;
        ensure(rep.solvable && irregularity(&rep) == Ok(p as u64), || format!("p={p}: E_1 operator {:?}", rep.irregularity))?;

        let t = RankOneOperator::new(&r0, [(1, ExtElement::one(&r0))], Exponent::zero()).unwrap();
        let rep = analyze(&t, &opts).map_err(|e| e.to_string())?;
        let fam = &rep.positive.families[0];
        let witness = fam.lambda.as_ref().err().cloned();
        ensure(!rep.solvable && witness.as_ref().is_some_and(|w| w.index == 1 && w.valuation == Q::from(-1)), || {
            format!("p={p}: g = T gave {witness:?}")
        })?;

        let pt = RankOneOperator::new(&r0, [(1, pi0.clone())], Exponent::zero()).unwrap();
        ensure(analyze(&pt, &opts).map_err(|e| e.to_string())?.solvable, || format!("p={p}: g = π_0T not solvable"))?;
    }
    Ok("p in {2,3,5}".into())
}

fn criterion_7() -> Outcome {
    let p = 3u32;
    let ring = tower(&LubinTateData::simple(p), 0, 20);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut tested, mut nonsolvable, mut residue_zero) = (0, 0, 0);
    while tested < 100 {
        let terms: Vec<(i64, ExtElement)> = (0..rng.gen_range(1..=4))
            .map(|_| {
                let deg = -rng.gen_range(1..=9i64);
                let v = rng.gen_range(0..3u32);
                let c = rng.gen_range(1..20i64) * (p as i64).pow(v);
                (deg, ExtElement::from_i64(&ring, c))
            })
            .collect();
        let op = RankOneOperator::new(&ring, terms, Exponent::zero()).unwrap();
        if strip_small_tail(&op, Q::zero()).map_err(|e| e.to_string())?.op.coeffs.is_empty() {
            continue;
        }
        tested += 1;
        let rep = solve_negative(&op, &NegativeOptions::default()).map_err(|e| e.to_string())?;
        if !rep.solvable {
            nonsolvable += 1;
        } else if rep.blocks.iter().all(|b| b.contribution == Some(0)) {
            residue_zero += 1;
        } else {
            return Err(format!("counterexample: {:?}", op.coeffs));
        }
    }
    Ok(format!("{tested} operators: {nonsolvable} non-solvable, {residue_zero} residue-zero"))
}

fn random_blocks(rng: &mut ChaCha8Rng, ring: &Ring, s: u32, ns: &[u64]) -> Vec<ComonomialBlock<ExtElement>> {
    let p = ring.p() as i64;
    loop {
        let mut out = Vec::new();
        for &n in ns {
            if rng.gen_bool(0.3) {
                continue;
            }
            let lambda: Vec<ExtElement> = (0..=s).map(|_| random_element(rng, ring, p.pow(6))).collect();
            if lambda.iter().all(|x| x.is_zero()) {
                continue;
            }
            out.push(ComonomialBlock { n, m: s, s, lambda: WittVector::new(lambda) });
        }
        if !out.is_empty() {
            return out;
        }
    }
}

fn criterion_8() -> Outcome {
    let p = 2u32;
    let lt = LubinTateData::simple(p);
    let rings = [tower(&lt, 0, 20), tower(&lt, 1, 20)];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for trial in 0..50 {
        let s = rng.gen_range(0..=1u32);
        let ring = &rings[s as usize];
        let blocks = random_blocks(&mut rng, ring, s, &[1, 3]);
        let l = build_l(ring, Exponent::zero(), &blocks).map_err(|e| e.to_string())?;
        let rep = solve_negative(&l, &NegativeOptions { strip_radius: None, override_m: Some(s) }).map_err(|e| e.to_string())?;
        ensure(rep.solvable, || format!("trial {trial}: not solvable"))?;
        for b in &blocks {
            let got = rep.decomposition.iter().find(|d| d.n == b.n).ok_or_else(|| format!("trial {trial}: block n={} lost", b.n))?;
            ensure(got.lambda.ghost() == b.lambda.ghost(), || format!("trial {trial}: ghosts differ for n={}", b.n))?;
        }
        let again = build_l(&rep.ring, Exponent::zero(), &rep.decomposition).map_err(|e| e.to_string())?;
        ensure(again.eq_to_prec(&l), || format!("trial {trial}: rebuilt operator differs"))?;
    }
    Ok("50 random f⁻, p=2, s<=1, n in {1,3}".into())
}

fn criterion_9() -> Outcome {
    let hi = 200;
    let th = theta_m0(2, 2, hi)?;
    let rep = growth_slope(&th, tail_fraction()).map_err(|e| e.to_string())?;
    let ev = eval_at_1(&th, &rep).map_err(|e| e.to_string())?;
    let ring = ev.value.ring().clone();
    let one = ExtElement::one(&ring);
    let v = ev.value.add(&one).valuation().lower_bound();
    ensure(v >= Q::from(10), || format!("p=2: v(θ(1) + 1) = {v}"))?;
    ensure(ev.value.mul(&ev.value).sub(&one).valuation().lower_bound() >= Q::from(10), || "p=2: θ(1)^2 != 1".into())?;

    let th = theta_m0(3, 3, hi)?;
    let rep = growth_slope(&th, tail_fraction()).map_err(|e| e.to_string())?;
    let ev = eval_at_1(&th, &rep).map_err(|e| e.to_string())?;
    let ring = ev.value.ring().clone();
    let one = ExtElement::one(&ring);
    ensure(ev.value.pow(3).sub(&one).valuation().lower_bound() >= Q::from(10), || "p=3: θ(1)^3 != 1".into())?;
    ensure(!ev.value.sub(&one).valuation().is_zero(), || "p=3: θ(1) = 1".into())?;
    let xi = ev.value.inv().map_err(|e| e.to_string())?;
    let pi0 = pi_at(&ring, 0).unwrap();
    let gap = xi.sub(&one).sub(&pi0).valuation().lower_bound();
    let vpi = pi0.valuation().lower_bound();
    ensure(gap > vpi, || format!("p=3: v(θ(1)^-1 - 1 - π_0) = {gap} not above v(π_0) = {vpi}"))?;
    Ok(format!("p=2: θ(1) = -1 to valuation {v}; p=3: cube root with v(ξ-1-π_0) = {gap} > {vpi}"))
}

fn criterion_10() -> Outcome {
    for p in [2u32, 3, 5] {
        let ring = tower(&LubinTateData::simple(p), 0, 20);
        let op = RankOneOperator::new(&ring, [], Exponent::Rational(BigRational::new(BigInt::one(), BigInt::from(p)))).unwrap();
        let est = ray_estimate(&op, Q::zero(), 16).map_err(|e| e.to_string())?;
        let expect = Q::new(p as i64, p as i64 - 1);
        ensure(est.valuation == expect, || format!("p={p}: {} != {expect}", est.valuation))?;
    }
    Ok("S = 16, p in {2,3,5}".into())
}

fn criterion_11() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut detail = Vec::new();
    for trial in 0..20 {
        let p = if trial % 2 == 0 { 2u32 } else { 3 };
        let s = 1 + (trial / 2) as u32 % 2;
        let ring = tower(&LubinTateData::simple(p), s, 20);
        let zero = ExtElement::zero(&ring);
        let mut pool: Vec<u64> = (1..=8).filter(|n| n % p as u64 != 0).collect();
        let mut entries = Vec::new();
        let mut expect = 0u64;
        for j in 0..=s {
            if rng.gen_bool(0.3) && j > 0 {
                entries.push(padic_rank_one::series::LaurentSeries::exact_zero(&zero));
                continue;
            }
            let n = pool.remove(rng.gen_range(0..pool.len()));
            let c = random_unit(&mut rng, &ring);
            entries.push(padic_rank_one::series::LaurentSeries::monomial(c, -(n as i64)));
            expect = expect.max(n * (p as u64).pow(s - j));
        }
        let dec = decompose(&WittVector::new(entries)).map_err(|e| e.to_string())?;
        let blocks: Vec<_> = dec.blocks.values().cloned().collect();
        let l = build_l(&ring, Exponent::zero(), &blocks).map_err(|e| e.to_string())?;
        let rep = analyze(&l, &NegativeOptions::default()).map_err(|e| e.to_string())?;
        let irr = irregularity(&rep).map_err(|e| format!("trial {trial}: {e}"))?;
        ensure(irr == expect, || format!("trial {trial} (p={p}, s={s}): Irr {irr}, formula {expect}"))?;
        detail.push(irr.to_string());
    }
    Ok(format!("Irr values {}", detail.join(",")))
}

type Series = padic_rank_one::series::LaurentSeries<ExtElement>;

fn ratio_slope(num: &Series, den: &Series, hi: i64) -> Result<Q, String> {
    let r = num.mul(&den.inv(hi).map_err(|e| e.to_string())?).with_hi(hi);
    let rep = growth_slope(&r, tail_fraction()).map_err(|e| e.to_string())?;
    match (rep.slope, rep.min_tail_val) {
        (None, _) => Ok(Q::from(hi)),
        (Some(sl), Some(m)) if m > Q::zero() => Ok(sl),
        (Some(_), m) => Err(format!("min tail valuation {m:?}")),
    }
}

// Tail slopes of unit-radius ratios stay of order 1/hi; the threshold
// separates them from the overconvergent ones.
fn criterion_12() -> Outcome {
    let p = 2u32;
    let s = 1u32;
    let hi = 200i64;
    let n_max = 3;
    let thr = Q::new(1, 4 * (p as i64).pow(s + 1) * n_max);
    let lt = LubinTateData::simple(p);
    let b = PrecisionBudget::for_truncation(p, 20, hi as u32, s).map_err(|e| e.to_string())?;
    let ring = make_tower(&lt, s, b).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut min_slope = Q::from(hi);
    let mut max_control = Q::from(-hi);
    let perturb = |rng: &mut ChaCha8Rng, base: &ExtElement| {
        let r = random_element(rng, &ring, 16);
        let r = if r.is_zero() { ExtElement::one(&ring) } else { r };
        base.add(&r.mul_int(p as i64))
    };
    let remap = |blocks: &[ComonomialBlock<ExtElement>], f: &mut dyn FnMut(&ExtElement) -> ExtElement| -> Vec<ComonomialBlock<ExtElement>> {
        blocks
            .iter()
            .map(|bl| ComonomialBlock { lambda: WittVector::new(bl.lambda.entries().iter().map(&mut *f).collect()), ..bl.clone() })
            .collect()
    };
    for trial in 0..20 {
        let blocks = random_blocks(&mut rng, &ring, s, &[1, n_max as u64]);
        let base = e_minus_blocks(&blocks, s, &ring, hi).map_err(|e| e.to_string())?;

        let lifted = remap(&blocks, &mut |x| perturb(&mut rng, x));
        let other = e_minus_blocks(&lifted, s, &ring, hi).map_err(|e| e.to_string())?;
        let a = ratio_slope(&other, &base, hi).map_err(|e| format!("trial {trial}, lift: {e}"))?;

        let twisted = remap(&blocks, &mut |x| perturb(&mut rng, &x.pow(p as u64)));
        let ft = e_minus_blocks(&twisted, s, &ring, hi / p as i64).map_err(|e| e.to_string())?.substitute_power(p as u64).with_hi(hi);
        let c = ratio_slope(&ft, &base, hi).map_err(|e| format!("trial {trial}, F-twist: {e}"))?;
        ensure(a >= thr && c >= thr, || format!("trial {trial}: slopes {a}, {c} below {thr}"))?;
        min_slope = min_slope.min(a).min(c);

        if trial % 4 == 0 {
            let one = ExtElement::one(&ring);
            let shifted = remap(&blocks, &mut |x| x.add(&one));
            let ctl = e_minus_blocks(&shifted, s, &ring, hi).map_err(|e| e.to_string())?;
            let r = ctl.mul(&base.inv(hi).map_err(|e| e.to_string())?).with_hi(hi);
            let sl = growth_slope(&r, tail_fraction()).map_err(|e| e.to_string())?.slope.unwrap_or(Q::from(hi));
            ensure(sl < thr, || format!("trial {trial}: unit-shift control has slope {sl}"))?;
            max_control = max_control.max(sl);
        }
    }
    Ok(format!("40 ratios, least slope {min_slope}; unit-shift controls at most {max_control}; threshold {thr}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        (1, "Artin-Hasse integrality", 5, criterion_1),
        (2, "Witt ring laws and FV = p", 10, criterion_2),
        (3, "torsion towers", 5, criterion_3),
        (4, "group law and brackets", 10, criterion_4),
        (5, "overconvergence dichotomy", 30, criterion_5),
        (6, "solvability criterion", 5, criterion_6),
        (7, "unramified corollary", 30, criterion_7),
        (8, "round trip", 30, criterion_8),
        (9, "theta evaluation", 60, criterion_9),
        (10, "moderate radius", 5, criterion_10),
        (11, "irregularity formula", 10, criterion_11),
        (12, "lift and Frobenius invariance", 60, criterion_12),
    ];
    let mut failed = 0;
    for (k, name, limit, run) in criteria {
        let t0 = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t0.elapsed();
        let outcome = match outcome {
            Ok(d) if dt > Duration::from_secs(limit) => Err(format!("{d}; took {dt:.2?}, limit {limit} s")),
            o => o,
        };
        match outcome {
            Ok(d) => println!("criterion {k:>2} PASS {name} ({dt:.2?}): {d}"),
            Err(e) => {
                failed += 1;
                println!("criterion {k:>2} FAIL {name} ({dt:.2?}): {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
