use serde_json::{json, Map, Value};

use padic_rank_one::lubin_tate::{bracket, group_law, iso_test, torsion_equiv};
use padic_rank_one::padic_core::{ExtElement, Ring, Q};
use padic_rank_one::rational::fmt_rat;
use padic_rank_one::series::{artin_hasse_universal, eval_at_1, growth_slope, pi_exponential, theta, LaurentSeries};
use padic_rank_one::solvability::{
    analyze, classify, ray_estimate, ExponentKey, ModerateReport, NegativeOptions, PositiveReport, RankOneOperator, SolvabilityReport,
};
use padic_rank_one::witt::{decompose, unghost, ComonomialBlock, GhostVector, WittVector};
use padic_rank_one::Error;

use crate::encode::{opt_num, q, valuation, witness, Encoder};
use crate::error::CliError;
use crate::job::{element, element_map, elements, lubin_tate_field, p_integral, JobSpec};

/// Flags that tune individual pipelines.
#[derive(Clone, Debug)]
pub struct Tuning {
    pub override_m: Option<u32>,
    pub tail_window: Q,
}

const MAX_THETA_TRUNCATION: i64 = 4096;
const DEFAULT_LAW_DEGREE: u32 = 12;

fn header(job: &JobSpec, truncation: i64) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("p".into(), job.p.to_string().into());
    m.insert("truncation".into(), truncation.to_string().into());
    m
}

fn report(enc: &Encoder, head: Map<String, Value>, body: Value) -> Value {
    let mut m = head;
    if let Value::Object(b) = body {
        m.extend(b);
    }
    enc.finish(Value::Object(m))
}

/// The operator `∂ + Σ c_i T^i - a0` of a job, i.e. `a_i = -c_i`.
pub fn operator(job: &JobSpec, ring: &Ring) -> Result<RankOneOperator, CliError> {
    let coeffs = match job.get("coefficients") {
        Some(v) => element_map(v, job.p, "coefficients")?,
        None => Default::default(),
    };
    let terms: Vec<_> = coeffs
        .iter()
        .map(|(i, c)| (*i, c.resolve(ring).neg()))
        .collect();
    Ok(RankOneOperator::new(ring, terms, job.a0(ring)?)?)
}

fn negative_options(t: &Tuning) -> NegativeOptions {
    NegativeOptions { override_m: t.override_m, ..NegativeOptions::default() }
}

fn moderate_json(m: &ModerateReport) -> Value {
    json!({
        "in_zp": m.in_zp,
        "in_z_localized": m.in_z_localized,
        "in_z": m.in_z,
        "solvable": m.solvable,
        "trivial": m.trivial,
        "frobenius_order": opt_num(m.frobenius_order),
        "tower_bound": opt_num(m.tower_bound.as_ref()),
        "tower_bound_valid": m.tower_bound_valid,
    })
}

fn positive_json(enc: &mut Encoder, r: &PositiveReport) -> Value {
    let families: Vec<Value> = r
        .families
        .iter()
        .map(|f| {
            let mut v = enc.lambda(&f.lambda);
            v["n"] = f.n.to_string().into();
            v["ghost"] = enc.elements(&f.ghost);
            v
        })
        .collect();
    json!({"solvable": r.solvable, "small_radius_violation": opt_num(r.small_radius_violation), "families": families})
}

fn block_json(enc: &mut Encoder, b: &ComonomialBlock<ExtElement>) -> Value {
    json!({"n": b.n.to_string(), "m": b.m.to_string(), "s": b.s.to_string(), "d": b.d().to_string(), "lambda": enc.witt(&b.lambda)})
}

fn solvability_json(enc: &mut Encoder, r: &SolvabilityReport) -> Value {
    let blocks: Vec<Value> = r
        .negative
        .blocks
        .iter()
        .map(|b| {
            let mut v = enc.lambda(&b.lambda);
            v["n"] = b.n.to_string().into();
            v["m"] = b.m.to_string().into();
            v["ghost"] = enc.elements(&b.ghost);
            v["contribution"] = opt_num(b.contribution);
            v
        })
        .collect();
    let decomposition: Vec<Value> = r.negative.decomposition.iter().map(|b| block_json(enc, b)).collect();
    let stripped: Vec<Value> = r.negative.stripped.iter().map(|i| Value::String(i.to_string())).collect();
    json!({
        "solvable": r.solvable,
        "irregularity": opt_num(r.irregularity),
        "a0": moderate_json(&r.a0_status),
        "positive": positive_json(enc, &r.positive),
        "negative": {
            "solvable": r.negative.solvable,
            "level": r.negative.ring.level().to_string(),
            "stripped": stripped,
            "witness_log": enc.series(&r.negative.witness_log),
            "blocks": blocks,
            "decomposition": decomposition,
        },
    })
}

pub fn solvable(job: &JobSpec, t: &Tuning) -> Result<Value, CliError> {
    let ring = job.ring()?;
    let op = operator(job, &ring)?;
    let rep = analyze(&op, &negative_options(t))?;
    let mut enc = Encoder::new(job.precision);
    let body = solvability_json(&mut enc, &rep);
    Ok(report(&enc, header(job, job.truncation), body))
}

pub fn irregularity(job: &JobSpec, t: &Tuning) -> Result<Value, CliError> {
    let ring = job.ring()?;
    let op = operator(job, &ring)?;
    let rep = analyze(&op, &negative_options(t))?;
    let contributions: Map<String, Value> = rep.negative.blocks.iter().map(|b| (b.n.to_string(), opt_num(b.contribution))).collect();
    let enc = Encoder::new(job.precision);
    Ok(report(&enc, header(job, job.truncation), json!({"solvable": rep.solvable, "irregularity": opt_num(rep.irregularity), "contributions": contributions})))
}

pub fn classify_cmd(job: &JobSpec, t: &Tuning) -> Result<Value, CliError> {
    let ring = job.ring()?;
    let op = operator(job, &ring)?;
    let enc = Encoder::new(job.precision);
    let key = match classify(&op, &negative_options(t)) {
        Ok(k) => k,
        Err(Error::NotSolvable) => return Ok(report(&enc, header(job, job.truncation), json!({"solvable": false, "key": null}))),
        Err(e) => return Err(e.into()),
    };
    let a0 = match &key.a0 {
        ExponentKey::Rational(s) => json!({"rational": s}),
        ExponentKey::Digits(d) => json!({"digits": d}),
    };
    let blocks: Map<String, Value> = key
        .blocks
        .iter()
        .map(|(n, b)| (n.to_string(), json!({"twist": b.twist.to_string(), "residues": b.residues.iter().map(|r| r.to_string()).collect::<Vec<_>>()})))
        .collect();
    let body = json!({"solvable": true, "trivial": key.is_trivial(), "key": {"a0": a0, "blocks": blocks}});
    Ok(report(&enc, header(job, job.truncation), body))
}

pub fn radius(job: &JobSpec) -> Result<Value, CliError> {
    let ring = job.ring()?;
    let op = operator(job, &ring)?;
    let r = job.rational_or("r", Q::from(0))?;
    let count = job.uint_or("iterates", 16)? as usize;
    let est = ray_estimate(&op, r, count)?;
    let enc = Encoder::new(job.precision);
    let body = json!({
        "r": q(&r),
        "iterates": count.to_string(),
        "valuation": q(&est.valuation),
        "small_radius": est.small_radius,
        "window": [est.window.0.to_string(), est.window.1.to_string()],
    });
    Ok(report(&enc, header(job, job.truncation), body))
}

pub fn decompose_cmd(job: &JobSpec) -> Result<Value, CliError> {
    let Value::Array(raw) = job.require("witt_series")? else {
        return Err(CliError::validation("witt_series", "expected an array of series"));
    };
    if raw.is_empty() {
        return Err(CliError::validation("witt_series", "empty"));
    }
    let ring = job.ring()?;
    let zero = ExtElement::zero(&ring);
    let mut entries = Vec::new();
    for (k, v) in raw.iter().enumerate() {
        let field = format!("witt_series[{k}]");
        let terms: Vec<_> = element_map(v, job.p, &field)?.iter().map(|(i, c)| (*i, c.resolve(&ring))).collect();
        entries.push(LaurentSeries::polynomial(&zero, terms));
    }
    let dec = decompose(&WittVector::new(entries))?;
    let mut enc = Encoder::new(job.precision);
    let blocks: Vec<Value> = dec.blocks.values().map(|b| block_json(&mut enc, b)).collect();
    let positive: Vec<Value> = dec.positive.entries().iter().map(|f| enc.series(f)).collect();
    let body = json!({"s": dec.s.to_string(), "blocks": blocks, "constant": enc.witt(&dec.constant), "positive": positive});
    Ok(report(&enc, header(job, job.truncation), body))
}

pub fn ah_exp(job: &JobSpec) -> Result<Value, CliError> {
    let n = job.truncation as usize;
    let e = artin_hasse_universal(job.p, n)?;
    let coeffs: Vec<Value> = e.iter().take(n + 1).map(|c| Value::String(fmt_rat(c))).collect();
    let enc = Encoder::new(job.precision);
    Ok(report(&enc, header(job, job.truncation), json!({"coefficients": coeffs})))
}

/// `λ` from the payload and a ring of level at least `len(λ) - 1`.
fn lambda_in(job: &JobSpec, key: &str, truncation: i64) -> Result<(Ring, WittVector<ExtElement>), CliError> {
    let codes = match job.get(key) {
        Some(v) => elements(v, job.p, key)?,
        None => vec![element(&Value::String("1".into()), job.p, key)?],
    };
    if codes.is_empty() {
        return Err(CliError::validation(key, "empty Witt vector"));
    }
    let level = job.level.max(codes.len() as u32 - 1);
    let ring = job.ring_at(level, truncation)?;
    let entries = codes.iter().map(|c| c.resolve(&ring)).collect();
    Ok((ring, WittVector::new(entries)))
}

pub fn pi_exp(job: &JobSpec) -> Result<Value, CliError> {
    let (_, lam) = lambda_in(job, "lambda", job.truncation)?;
    let n = job.uint_or("n", 1)? as u64;
    let f = pi_exponential(&lam, n, job.truncation)?;
    let mut enc = Encoder::new(job.precision);
    let body = json!({"n": n.to_string(), "series": enc.series(&f)});
    Ok(report(&enc, header(job, job.truncation), body))
}

pub fn theta_eval(job: &JobSpec, t: &Tuning) -> Result<Value, CliError> {
    let n = job.uint_or("n", 1)? as u64;
    let mut hi = job.truncation;
    loop {
        let (ring, lam) = lambda_in(job, "lambda", hi)?;
        let lam_f = match job.get("lambda_frob") {
            Some(_) => lambda_in(job, "lambda_frob", hi)?.1,
            None => lam.clone(),
        };
        let th = theta(&lam_f, &lam, n, hi)?;
        let growth = match growth_slope(&th, t.tail_window) {
            Err(Error::WindowTooShort { needed }) if needed > hi && needed <= MAX_THETA_TRUNCATION => {
                hi = needed;
                continue;
            }
            other => other?,
        };
        let ev = match eval_at_1(&th, &growth) {
            Err(Error::WindowTooShort { needed }) if needed > hi && needed <= MAX_THETA_TRUNCATION => {
                hi = needed;
                continue;
            }
            other => other?,
        };
        let m = lam.len() as u32 - 1;
        let one = ExtElement::one(&ring);
        let certified = ev.value.precision();
        let bound = (job.p as u64).pow(m + 2);
        let root_order = (1..=bound).find(|k| {
            let d = ev.value.pow(*k).sub(&one);
            d.is_zero() || d.valuation().lower_bound() >= Q::from(certified)
        });
        let mut enc = Encoder::new(job.precision);
        let body = json!({
            "value": enc.element(&ev.value),
            "root_order": opt_num(root_order),
            "error_bound": q(&ev.error_bound),
            "slope": growth.slope.as_ref().map_or(Value::Null, q),
            "level": ring.level().to_string(),
        });
        return Ok(report(&enc, header(job, hi), body));
    }
}

pub enum WittOp {
    Add,
    Mul,
    Ghost,
    Unghost,
    Frob,
    Versch,
}

pub fn witt(job: &JobSpec, op: WittOp) -> Result<Value, CliError> {
    let ring = job.ring()?;
    let load = |key: &str| -> Result<Vec<ExtElement>, CliError> {
        let codes = elements(job.require(key)?, job.p, key)?;
        if codes.is_empty() {
            return Err(CliError::validation(key, "empty Witt vector"));
        }
        Ok(codes.iter().map(|c| c.resolve(&ring)).collect())
    };
    let x = WittVector::new(load("x")?);
    let mut enc = Encoder::new(job.precision);
    let body = match op {
        WittOp::Add | WittOp::Mul => {
            let y = WittVector::new(load("y")?);
            if y.len() != x.len() {
                return Err(CliError::validation("y", "length differs from x"));
            }
            let r = if matches!(op, WittOp::Add) { x.add(&y)? } else { x.mul(&y)? };
            json!({"result": enc.witt(&r)})
        }
        WittOp::Ghost => json!({"ghost": enc.elements(x.ghost().entries())}),
        WittOp::Unghost => match unghost(&GhostVector::new(x.entries().to_vec())) {
            Ok(w) => json!({"integral": true, "result": enc.witt(&w)}),
            Err(Error::NotIntegral { index, valuation }) => {
                json!({"integral": false, "witness": witness(&padic_rank_one::solvability::IntegralityWitness { index, valuation })})
            }
            Err(e) => return Err(e.into()),
        },
        WittOp::Frob => json!({"result": enc.witt(&x.frobenius()?)}),
        WittOp::Versch => json!({"result": enc.witt(&x.verschiebung())}),
    };
    Ok(report(&enc, header(job, job.truncation), body))
}

pub enum LtOp {
    Validate,
    GroupLaw,
    Bracket,
    Torsion,
    Iso,
}

fn poly_json(cs: &[num_rational::BigRational]) -> Value {
    Value::Array(cs.iter().map(|c| Value::String(fmt_rat(c))).collect())
}

pub fn lt(job: &JobSpec, op: LtOp) -> Result<Value, CliError> {
    let target = match job.get("target") {
        Some(v) => lubin_tate_field(v, job.p, "target")?,
        None => job.lubin_tate.clone(),
    };
    let degree = job.uint_or("degree", DEFAULT_LAW_DEGREE)?;
    let mut enc = Encoder::new(job.precision);
    let lt = &job.lubin_tate;
    let body = match op {
        LtOp::Validate => match job.get("candidate") {
            None => json!({"valid": true, "w": fmt_rat(&lt.w), "P": poly_json(&lt.coeffs)}),
            Some(v) => match lubin_tate_field(v, job.p, "candidate") {
                Ok(c) => json!({"valid": true, "w": fmt_rat(&c.w), "P": poly_json(&c.coeffs)}),
                Err(CliError::Validation { reason, .. }) => json!({"valid": false, "reason": reason}),
                Err(e) => return Err(e),
            },
        },
        LtOp::GroupLaw => {
            let g = group_law(lt, degree)?;
            let terms: Map<String, Value> = g
                .g
                .terms()
                .iter()
                .map(|(e, c)| (e.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","), Value::String(fmt_rat(c))))
                .collect();
            json!({"degree": degree.to_string(), "terms": terms, "invariants_hold": g.check_invariants().is_ok()})
        }
        LtOp::Bracket => {
            let a = p_integral(job.require("a")?, job.p, "a")?;
            let b = bracket(&a, lt, &target, degree)?;
            json!({"a": fmt_rat(&a), "degree": degree.to_string(), "coefficients": poly_json(&b)})
        }
        LtOp::Torsion => {
            let ring = job.ring()?;
            let x = element(job.require("point")?, job.p, "point")?.resolve(&ring);
            let y = torsion_equiv(&x, lt, &target, None)?;
            json!({"image": enc.element(&y), "valuation": valuation(&y.valuation()), "level": ring.level().to_string()})
        }
        LtOp::Iso => json!({"isomorphic": iso_test(lt, &target)}),
    };
    Ok(report(&enc, header(job, job.truncation), body))
}
