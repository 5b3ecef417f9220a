//! JSON encoding. Every number is written as a string.

use serde_json::{json, Map, Value};

use padic_rank_one::padic_core::{ExtElement, Valuation, Q};
use padic_rank_one::rational::fmt_rat;
use padic_rank_one::series::LaurentSeries;
use padic_rank_one::solvability::IntegralityWitness;
use padic_rank_one::witt::WittVector;

/// Encodes elements at `digits` digits and records the least precision written.
pub struct Encoder {
    digits: i64,
    achieved: Option<i64>,
}

impl Encoder {
    pub fn new(digits: u32) -> Self {
        Encoder { digits: digits as i64, achieved: None }
    }

    /// A string when the element lies in `Z_p`, else the list of coefficients
    /// of powers of the ring generator.
    pub fn element(&mut self, x: &ExtElement) -> Value {
        let prec = x.precision().min(self.digits);
        self.achieved = Some(self.achieved.map_or(prec, |a| a.min(prec)));
        let mut cs = x.coefficients(self.digits);
        while cs.len() > 1 && cs.last().is_some_and(|c| *c == num_rational::BigRational::from_integer(0.into())) {
            cs.pop();
        }
        if cs.len() == 1 {
            Value::String(fmt_rat(&cs[0]))
        } else {
            Value::Array(cs.iter().map(|c| Value::String(fmt_rat(c))).collect())
        }
    }

    pub fn elements<'a>(&mut self, xs: impl IntoIterator<Item = &'a ExtElement>) -> Value {
        Value::Array(xs.into_iter().map(|x| self.element(x)).collect())
    }

    pub fn witt(&mut self, w: &WittVector<ExtElement>) -> Value {
        self.elements(w.entries())
    }

    pub fn series(&mut self, f: &LaurentSeries<ExtElement>) -> Value {
        let terms: Map<String, Value> = f.terms().iter().map(|(i, c)| (i.to_string(), self.element(c))).collect();
        let hi = if f.is_exact() { Value::Null } else { Value::String(f.hi().to_string()) };
        json!({"lo": f.lo().to_string(), "hi": hi, "terms": terms})
    }

    pub fn lambda(&mut self, l: &Result<WittVector<ExtElement>, IntegralityWitness>) -> Value {
        match l {
            Ok(w) => json!({"integral": true, "lambda": self.witt(w)}),
            Err(w) => json!({"integral": false, "witness": witness(w)}),
        }
    }

    /// Adds `precision` to a report object.
    pub fn finish(&self, mut report: Value) -> Value {
        if let Value::Object(m) = &mut report {
            let p = self.achieved.map_or(Value::String("exact".into()), |a| Value::String(a.to_string()));
            m.insert("precision".into(), p);
        }
        report
    }
}

pub fn q(x: &Q) -> Value {
    Value::String(x.to_string())
}

pub fn valuation(v: &Valuation) -> Value {
    match v {
        Valuation::Finite(x) => q(x),
        Valuation::Zero { bound } => json!({"zero_to_precision": bound.to_string()}),
    }
}

pub fn witness(w: &IntegralityWitness) -> Value {
    json!({"index": w.index.to_string(), "valuation": q(&w.valuation)})
}

pub fn opt_num<T: ToString>(x: Option<T>) -> Value {
    x.map_or(Value::Null, |v| Value::String(v.to_string()))
}

/// `key: value` lines for the scalar fields of a report.
pub fn summary(report: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(m) = report {
        for (k, v) in m {
            let shown = match v {
                Value::String(s) => s.clone(),
                Value::Bool(b) => b.to_string(),
                Value::Null => "none".into(),
                Value::Array(xs) if xs.iter().all(|x| x.is_string()) => {
                    xs.iter().map(|x| x.as_str().unwrap()).collect::<Vec<_>>().join(" ")
                }
                Value::Array(xs) => format!("[{} entries]", xs.len()),
                Value::Object(o) => format!("{{{} fields}}", o.len()),
                Value::Number(n) => n.to_string(),
            };
            out.push_str(&format!("{k}: {shown}\n"));
        }
    }
    out
}
