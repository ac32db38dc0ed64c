//! JSON encodings for diagrams, scalars, algebra elements, arrangements,
//! formal sums and evaluation records. Every `*_to_json` has a matching
//! `*_from_json` that inverts it exactly.

use crate::arrangement::{AffineForm, BiArrangement};
use crate::decoration::DecoratedDiagram;
use crate::diagram::DissectionDiagram;
use crate::hopf::{AlgebraElement, Monomial, Poly, TensorElement};
use crate::numeric::{CPath, EvalRecord};
use crate::reduction::FormalSum;
use crate::scalar::{parse_rational, rational_to_string, Rational, Scalar};
use crate::symbol::ItIntSymbol;
use num_complex::Complex64;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("expected {expected} at `{at}`")]
    Shape { expected: &'static str, at: String },
    #[error("bad rational `{0}`")]
    Rational(String),
    #[error("unknown scalar mode `{0}`")]
    Mode(String),
    #[error("invalid object: {0}")]
    Invalid(String),
}

fn shape(expected: &'static str, at: &str) -> JsonError {
    JsonError::Shape { expected, at: at.to_string() }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, JsonError> {
    v.get(key).ok_or_else(|| shape("field", key))
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().ok_or_else(|| shape("array", at))
}

pub fn rational_to_json(r: &Rational) -> Value {
    Value::String(rational_to_string(r))
}

/// Accepts `"p/q"` strings and JSON integers.
pub fn rational_from_json(v: &Value) -> Result<Rational, JsonError> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| JsonError::Rational(s.clone())),
        Value::Number(n) if n.is_i64() => Ok(crate::scalar::rat(n.as_i64().unwrap_or_default())),
        other => Err(JsonError::Rational(other.to_string())),
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    let value = match s {
        Scalar::Rational(r) => rational_to_json(r),
        Scalar::Gaussian(re, im) => json!([rational_to_json(re), rational_to_json(im)]),
        Scalar::Float(z) => json!([z.re, z.im]),
        Scalar::Formal(m) => {
            Value::Object(m.iter().map(|(k, c)| (k.clone(), rational_to_json(c))).collect())
        }
    };
    json!({ "mode": s.mode().name(), "value": value })
}

pub fn scalar_from_json(v: &Value) -> Result<Scalar, JsonError> {
    let mode = field(v, "mode")?.as_str().ok_or_else(|| shape("string", "mode"))?;
    let value = field(v, "value")?;
    match mode {
        "rational" => Ok(Scalar::Rational(rational_from_json(value)?)),
        "gaussian" => {
            let p = array(value, "value")?;
            if p.len() != 2 {
                return Err(shape("[re, im]", "value"));
            }
            Ok(Scalar::Gaussian(rational_from_json(&p[0])?, rational_from_json(&p[1])?))
        }
        "float" => {
            let p = array(value, "value")?;
            let f = |x: &Value| x.as_f64().ok_or_else(|| shape("number", "value"));
            if p.len() != 2 {
                return Err(shape("[re, im]", "value"));
            }
            Ok(Scalar::Float(Complex64::new(f(&p[0])?, f(&p[1])?)))
        }
        "formal" => {
            let obj = value.as_object().ok_or_else(|| shape("object", "value"))?;
            let mut acc = Scalar::zero(crate::scalar::Mode::Formal);
            for (k, c) in obj {
                acc = acc.add(&Scalar::symbol(k).scale(&rational_from_json(c)?));
            }
            Ok(acc)
        }
        m => Err(JsonError::Mode(m.to_string())),
    }
}

pub fn diagram_to_json(d: &DissectionDiagram) -> Value {
    let parent: Map<String, Value> = (1..=d.degree()).map(|i| (i.to_string(), json!(d.parent(i)))).collect();
    json!({ "degree": d.degree(), "parent": parent })
}

pub fn diagram_from_json(v: &Value) -> Result<DissectionDiagram, JsonError> {
    let n = field(v, "degree")?.as_u64().ok_or_else(|| shape("integer", "degree"))? as usize;
    let p = field(v, "parent")?;
    let mut parent = Vec::with_capacity(n);
    for i in 1..=n {
        let t = match p {
            Value::Object(m) => m.get(&i.to_string()),
            Value::Array(a) => a.get(i - 1),
            _ => return Err(shape("object", "parent")),
        };
        let t = t.and_then(Value::as_u64).ok_or_else(|| shape("integer", "parent"))?;
        parent.push(t as usize);
    }
    if let Value::Object(m) = p {
        if m.len() != n {
            return Err(JsonError::Invalid(format!("parent map has {} entries for degree {n}", m.len())));
        }
    }
    DissectionDiagram::new(parent).map_err(|e| JsonError::Invalid(e.to_string()))
}

/// `{"degree", "parent", "a": [...], "b": [...]}`.
pub fn decorated_to_json(d: &DecoratedDiagram) -> Value {
    let mut v = diagram_to_json(&d.diagram);
    v["a"] = Value::Array(d.a.iter().map(scalar_to_json).collect());
    v["b"] = Value::Array(d.b.iter().map(scalar_to_json).collect());
    v
}

/// A plain diagram (no `a`/`b`) reads as undecorated.
pub fn decorated_from_json(v: &Value) -> Result<DecoratedDiagram, JsonError> {
    let diagram = diagram_from_json(v)?;
    match (v.get("a"), v.get("b")) {
        (None, None) => Ok(DecoratedDiagram::undecorated(diagram)),
        (Some(a), Some(b)) => {
            let a = array(a, "a")?.iter().map(scalar_from_json).collect::<Result<_, _>>()?;
            let b = array(b, "b")?.iter().map(scalar_from_json).collect::<Result<_, _>>()?;
            DecoratedDiagram::new(diagram, a, b).map_err(|e| JsonError::Invalid(e.to_string()))
        }
        _ => Err(JsonError::Invalid("decorations need both `a` and `b`".into())),
    }
}

/// Coefficients by ascending power of x.
pub fn poly_to_json(p: &Poly) -> Value {
    Value::Array(p.coefficients().iter().map(rational_to_json).collect())
}

pub fn poly_from_json(v: &Value) -> Result<Poly, JsonError> {
    match v {
        Value::Array(c) => Ok(Poly::from_coefficients(c.iter().map(rational_from_json).collect::<Result<_, _>>()?)),
        other => Ok(Poly::constant(rational_from_json(other)?)),
    }
}

fn monomial_to_json(m: &Monomial) -> Value {
    Value::Array(m.factors().iter().map(decorated_to_json).collect())
}

fn monomial_from_json(v: &Value) -> Result<Monomial, JsonError> {
    let f: Vec<DecoratedDiagram> = array(v, "monomial")?.iter().map(decorated_from_json).collect::<Result<_, _>>()?;
    Ok(Monomial::from_factors(f))
}

pub fn algebra_to_json(e: &AlgebraElement) -> Value {
    Value::Array(
        e.terms
            .iter()
            .map(|(m, c)| json!({ "coefficient": poly_to_json(c), "monomial": monomial_to_json(m) }))
            .collect(),
    )
}

pub fn algebra_from_json(v: &Value) -> Result<AlgebraElement, JsonError> {
    let mut e = AlgebraElement::zero();
    for t in array(v, "element")? {
        e.add_term(monomial_from_json(field(t, "monomial")?)?, &poly_from_json(field(t, "coefficient")?)?);
    }
    Ok(e)
}

pub fn tensor_to_json(t: &TensorElement) -> Value {
    Value::Array(
        t.terms
            .iter()
            .map(|((l, r), c)| {
                json!({ "coefficient": poly_to_json(c), "left": monomial_to_json(l), "right": monomial_to_json(r) })
            })
            .collect(),
    )
}

pub fn tensor_from_json(v: &Value) -> Result<TensorElement, JsonError> {
    let mut t = TensorElement::zero();
    for x in array(v, "tensor")? {
        t.add_term(
            monomial_from_json(field(x, "left")?)?,
            monomial_from_json(field(x, "right")?)?,
            &poly_from_json(field(x, "coefficient")?)?,
        );
    }
    Ok(t)
}

fn form_to_json(f: &AffineForm) -> Value {
    let mut row: Vec<Value> = f.coeffs.iter().map(rational_to_json).collect();
    row.push(scalar_to_json(&f.constant));
    Value::Array(row)
}

fn form_from_json(v: &Value, n: usize) -> Result<AffineForm, JsonError> {
    let row = array(v, "form")?;
    if row.len() != n + 1 {
        return Err(JsonError::Invalid(format!("form of length {} in dimension {n}", row.len())));
    }
    Ok(AffineForm {
        coeffs: row[..n].iter().map(rational_from_json).collect::<Result<_, _>>()?,
        constant: scalar_from_json(&row[n])?,
    })
}

/// `{"n", "L": [[c_1..c_n, c_0], …], "M": […]}` with c_0 a scalar record.
pub fn arrangement_to_json(a: &BiArrangement) -> Value {
    json!({
        "n": a.dim,
        "L": a.l.iter().map(form_to_json).collect::<Vec<_>>(),
        "M": a.m.iter().map(form_to_json).collect::<Vec<_>>(),
    })
}

pub fn arrangement_from_json(v: &Value) -> Result<BiArrangement, JsonError> {
    let n = field(v, "n")?.as_u64().ok_or_else(|| shape("integer", "n"))? as usize;
    let read = |k: &str| -> Result<Vec<AffineForm>, JsonError> {
        array(field(v, k)?, k)?.iter().map(|f| form_from_json(f, n)).collect()
    };
    Ok(BiArrangement { dim: n, l: read("L")?, m: read("M")? })
}

pub fn symbol_to_json(s: &ItIntSymbol) -> Value {
    json!({
        "a0": scalar_to_json(&s.a0),
        "word": s.word.iter().map(scalar_to_json).collect::<Vec<_>>(),
        "a_end": scalar_to_json(&s.a_end),
    })
}

pub fn symbol_from_json(v: &Value) -> Result<ItIntSymbol, JsonError> {
    Ok(ItIntSymbol::new(
        scalar_from_json(field(v, "a0")?)?,
        array(field(v, "word")?, "word")?.iter().map(scalar_from_json).collect::<Result<_, _>>()?,
        scalar_from_json(field(v, "a_end")?)?,
    ))
}

pub fn formal_sum_to_json(s: &FormalSum) -> Value {
    Value::Array(s.iter().map(|(sym, c)| json!({ "coeff": c, "symbol": symbol_to_json(sym) })).collect())
}

pub fn formal_sum_from_json(v: &Value) -> Result<FormalSum, JsonError> {
    let mut s = FormalSum::new();
    for t in array(v, "sum")? {
        let c = field(t, "coeff")?.as_i64().ok_or_else(|| shape("integer", "coeff"))?;
        s.add_term(symbol_from_json(field(t, "symbol")?)?, c);
    }
    Ok(s)
}

fn complex_to_json(z: Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn path_to_json(p: &CPath) -> Value {
    json!({
        "clearance": p.clearance,
        "waypoints": p.waypoints.iter().map(|z| complex_to_json(*z)).collect::<Vec<_>>(),
    })
}

pub fn eval_record_to_json(r: &EvalRecord) -> Value {
    json!({
        "value": complex_to_json(r.value),
        "class": crate::numeric::CLASS_NOTE,
        "terms": r.terms.iter().map(|t| json!({
            "coeff": t.coeff,
            "symbol": symbol_to_json(&t.symbol),
            "path": path_to_json(&t.path),
            "value": complex_to_json(t.value),
        })).collect::<Vec<_>>(),
    })
}

/// Variable assignments `{"a1": scalar, …}` for substitution.
pub fn values_from_json(v: &Value) -> Result<BTreeMap<String, Scalar>, JsonError> {
    let obj = v.as_object().ok_or_else(|| shape("object", "values"))?;
    obj.iter().map(|(k, x)| Ok((k.clone(), scalar_from_json(x)?))).collect()
}
