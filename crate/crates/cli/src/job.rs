//! Job files: parsing, defaulting and validation.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{Map, Value};

use padic_rank_one::lubin_tate::{validate, LubinTateData};
use padic_rank_one::padic_core::{make_tower, ExtElement, PrecisionBudget, Ring, Q};
use padic_rank_one::rational::{is_prime, parse_rat, vp_rat};
use padic_rank_one::solvability::Exponent;

use crate::error::CliError;

pub const DEFAULT_PRECISION: u32 = 20;
pub const DEFAULT_TRUNCATION: i64 = 64;

/// An element as written in a job file: coefficients of powers of the ring
/// generator `π_s`, lowest first.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementCode(pub Vec<BigRational>);

impl ElementCode {
    pub fn resolve(&self, ring: &Ring) -> ExtElement {
        ExtElement::from_coeffs(ring, &self.0)
    }
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub p: u32,
    pub precision: u32,
    pub truncation: i64,
    pub level: u32,
    pub lubin_tate: LubinTateData,
    pub payload: Map<String, Value>,
}

/// Command-line overrides applied on top of the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision: Option<u32>,
    pub truncation: Option<i64>,
    pub level: Option<u32>,
}

const RESERVED: [&str; 5] = ["p", "precision", "truncation", "level", "lubin_tate"];

pub fn parse_job(text: &str, ov: &Overrides) -> Result<JobSpec, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse { location: format!("line {}, column {}", e.line(), e.column()), message: e.to_string() })?;
    let Value::Object(obj) = value else {
        return Err(CliError::validation("$", "job must be a JSON object"));
    };
    let p = match obj.get("p") {
        None => return Err(CliError::validation("p", "missing")),
        Some(v) => uint(v, "p")?,
    };
    if !is_prime(p) {
        return Err(CliError::validation("p", format!("{p} is not prime")));
    }
    let precision = match ov.precision {
        Some(n) => n,
        None => obj.get("precision").map(|v| uint(v, "precision")).transpose()?.unwrap_or(DEFAULT_PRECISION),
    };
    if precision < 1 {
        return Err(CliError::validation("precision", "must be at least 1"));
    }
    let truncation = match ov.truncation {
        Some(n) => n,
        None => obj.get("truncation").map(|v| uint(v, "truncation")).transpose()?.map(i64::from).unwrap_or(DEFAULT_TRUNCATION),
    };
    if truncation < 1 {
        return Err(CliError::validation("truncation", "must be at least 1"));
    }
    let level = match ov.level {
        Some(s) => s,
        None => obj.get("level").map(|v| uint(v, "level")).transpose()?.unwrap_or(0),
    };
    let lubin_tate = match obj.get("lubin_tate") {
        None => LubinTateData::simple(p),
        Some(v) => lubin_tate_field(v, p, "lubin_tate")?,
    };
    let payload: Map<String, Value> = obj.into_iter().filter(|(k, _)| !RESERVED.contains(&k.as_str())).collect();
    let job = JobSpec { p, precision, truncation, level, lubin_tate, payload };
    job.check_elements()?;
    Ok(job)
}

fn uint(v: &Value, field: &str) -> Result<u32, CliError> {
    let n = match v {
        Value::Number(n) => n.as_u64(),
        Value::String(s) => s.trim().parse::<u64>().ok(),
        _ => None,
    };
    n.and_then(|n| u32::try_from(n).ok()).ok_or_else(|| CliError::validation(field, "expected a nonnegative integer"))
}

pub fn rational(v: &Value, field: &str) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => parse_rat(s).map_err(|e| CliError::validation(field, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
        _ => Err(CliError::validation(field, "expected a rational written as a string")),
    }
}

/// A rational with denominator prime to `p`.
pub fn p_integral(v: &Value, p: u32, field: &str) -> Result<BigRational, CliError> {
    let q = rational(v, field)?;
    if !q.is_zero() && vp_rat(&q, p).unwrap() < 0 {
        return Err(CliError::validation(field, format!("denominator divisible by p = {p}")));
    }
    Ok(q)
}

pub fn element(v: &Value, p: u32, field: &str) -> Result<ElementCode, CliError> {
    match v {
        Value::Array(xs) => Ok(ElementCode(xs.iter().enumerate().map(|(i, x)| p_integral(x, p, &format!("{field}[{i}]"))).collect::<Result<_, _>>()?)),
        _ => Ok(ElementCode(vec![p_integral(v, p, field)?])),
    }
}

pub fn elements(v: &Value, p: u32, field: &str) -> Result<Vec<ElementCode>, CliError> {
    match v {
        Value::Array(xs) => xs.iter().enumerate().map(|(i, x)| element(x, p, &format!("{field}[{i}]"))).collect(),
        _ => Err(CliError::validation(field, "expected an array of elements")),
    }
}

/// `{"degree": element}` maps.
pub fn element_map(v: &Value, p: u32, field: &str) -> Result<BTreeMap<i64, ElementCode>, CliError> {
    let Value::Object(m) = v else {
        return Err(CliError::validation(field, "expected an object keyed by degree"));
    };
    m.iter()
        .map(|(k, x)| {
            let i: i64 = k.trim().parse().map_err(|_| CliError::validation(field, format!("degree {k:?} is not an integer")))?;
            Ok((i, element(x, p, &format!("{field}.{k}"))?))
        })
        .collect()
}

pub fn lubin_tate_field(v: &Value, p: u32, field: &str) -> Result<LubinTateData, CliError> {
    let Value::Object(m) = v else {
        return Err(CliError::validation(field, "expected {\"w\": ..., \"P\": [...]}"));
    };
    let w = match m.get("w") {
        Some(w) => rational(w, &format!("{field}.w"))?,
        None => BigRational::from_integer(p.into()),
    };
    let coeffs = match m.get("P") {
        Some(Value::Array(cs)) => cs.iter().enumerate().map(|(i, c)| rational(c, &format!("{field}.P[{i}]"))).collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(CliError::validation(&format!("{field}.P"), "expected an array of coefficients")),
        None => return LubinTateData::with_uniformizer(p, w).map_err(|e| CliError::validation(field, e.to_string())),
    };
    validate(p, coeffs, w).map_err(|e| CliError::validation(field, e.to_string()))
}

impl JobSpec {
    /// Checks every element-valued payload field for denominators prime to `p`.
    fn check_elements(&self) -> Result<(), CliError> {
        let p = self.p;
        for (k, v) in &self.payload {
            match k.as_str() {
                "coefficients" => {
                    element_map(v, p, k)?;
                }
                "lambda" | "lambda_frob" | "x" | "y" => {
                    elements(v, p, k)?;
                }
                "witt_series" => {
                    let Value::Array(xs) = v else {
                        return Err(CliError::validation(k, "expected an array of series"));
                    };
                    for (i, x) in xs.iter().enumerate() {
                        element_map(x, p, &format!("{k}[{i}]"))?;
                    }
                }
                "point" => {
                    element(v, p, k)?;
                }
                "a0" if v.is_array() => {
                    element(v, p, k)?;
                }
                "a0" | "r" => {
                    rational(v, k)?;
                }
                "a" => {
                    p_integral(v, p, k)?;
                }
                "target" => {
                    lubin_tate_field(v, p, k)?;
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.payload.get(key)
    }

    pub fn require(&self, key: &str) -> Result<&Value, CliError> {
        self.get(key).ok_or_else(|| CliError::validation(key, "missing"))
    }

    pub fn budget(&self, level: u32, truncation: i64) -> Result<PrecisionBudget, CliError> {
        Ok(PrecisionBudget::for_truncation(self.p, self.precision, truncation.max(1) as u32, level)?)
    }

    pub fn ring_at(&self, level: u32, truncation: i64) -> Result<Ring, CliError> {
        Ok(make_tower(&self.lubin_tate, level, self.budget(level, truncation)?)?)
    }

    pub fn ring(&self) -> Result<Ring, CliError> {
        self.ring_at(self.level, self.truncation)
    }

    pub fn a0(&self, ring: &Ring) -> Result<Exponent, CliError> {
        match self.get("a0") {
            None => Ok(Exponent::zero()),
            Some(v) if v.is_array() => Ok(Exponent::Padic(element(v, self.p, "a0")?.resolve(ring))),
            Some(v) => Ok(Exponent::Rational(rational(v, "a0")?)),
        }
    }

    pub fn uint_or(&self, key: &str, default: u32) -> Result<u32, CliError> {
        self.get(key).map(|v| uint(v, key)).transpose().map(|x| x.unwrap_or(default))
    }

    pub fn rational_or(&self, key: &str, default: Q) -> Result<Q, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => {
                let q = rational(v, key)?;
                let (n, d) = (i64::try_from(q.numer()), i64::try_from(q.denom()));
                match (n, d) {
                    (Ok(n), Ok(d)) => Ok(Q::new(n, d)),
                    _ => Err(CliError::validation(key, "too large")),
                }
            }
        }
    }
}
