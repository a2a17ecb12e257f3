//! JSON encodings shared by the store and the command-line tool.
//!
//! Rationals are `[num, den]` pairs. Each integer is a JSON number when it
//! fits in an `i64` and a decimal string otherwise, so no precision is lost
//! in readers that parse numbers as doubles only for small values.
//!
//! A class is a list of terms
//! `{"coeff": [num, den], "kappas": [[exps]...], "psis": {"point": [exps]}, "blocks": [[points]...]}`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::charclass::CharClassMonomial;
use crate::error::{Error, Result};
use crate::tautmono::{normalize, Point, PointSet, RawMonomial, TautClass};
use crate::Q;

pub fn int_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(n.to_string()),
    }
}

pub fn json_to_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(num) => num
            .as_i64()
            .map(BigInt::from)
            .or_else(|| num.as_u64().map(BigInt::from))
            .ok_or_else(|| Error::Record(format!("not an integer: {num}"))),
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| Error::Record(format!("not an integer: {s:?}"))),
        other => Err(Error::Record(format!("not an integer: {other}"))),
    }
}

pub fn rational_to_json(q: &Q) -> Value {
    Value::Array(vec![int_to_json(q.numer()), int_to_json(q.denom())])
}

pub fn json_to_rational(v: &Value) -> Result<Q> {
    match v.as_array().map(|a| a.as_slice()) {
        Some([n, d]) => {
            let (n, d) = (json_to_int(n)?, json_to_int(d)?);
            if d.is_zero() {
                return Err(Error::Record("zero denominator".into()));
            }
            Ok(Q::new(n, d))
        }
        _ => Err(Error::Record(format!("expected [num, den], found {v}"))),
    }
}

/// One term of a class in the interchange schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: Value,
    pub kappas: Vec<CharClassMonomial>,
    pub psis: BTreeMap<Point, CharClassMonomial>,
    pub blocks: Vec<Vec<Point>>,
}

pub fn class_to_json(a: &TautClass<Q>) -> Vec<TermJson> {
    a.terms()
        .iter()
        .map(|(m, c)| TermJson {
            coeff: rational_to_json(c),
            kappas: m.kappas().to_vec(),
            psis: m.psis().clone(),
            blocks: m.blocks().to_vec(),
        })
        .collect()
}

/// `[[kappa factor exponent vectors...], num, den]` per term, the layout
/// used by relation records.
pub fn kappa_poly_to_json(p: &crate::kappa_poly::KappaPolynomial<Q>) -> Value {
    Value::Array(
        p.terms()
            .iter()
            .map(|(m, c)| {
                let factors = serde_json::to_value(m.factors()).expect("monomials serialize");
                Value::Array(vec![factors, int_to_json(c.numer()), int_to_json(c.denom())])
            })
            .collect(),
    )
}

/// Rebuilds a class; terms need not be canonical, they are renormalized.
pub fn class_from_json(
    params: crate::charclass::RingParams,
    points: PointSet,
    terms: &[TermJson],
) -> Result<TautClass<Q>> {
    let mut out = TautClass::zero(params, points.clone());
    for t in terms {
        for c in t.kappas.iter().chain(t.psis.values()) {
            if c.d() != params.d() {
                return Err(Error::MonomialShape {
                    found: c.exponents().len(),
                    expected: params.d() as usize,
                });
            }
        }
        let raw = RawMonomial {
            coeff: json_to_rational(&t.coeff)?,
            kappas: t.kappas.clone(),
            psis: t.psis.iter().map(|(p, c)| (*p, c.clone())).collect(),
            pis: t.blocks.clone(),
        };
        if let Some((c, m)) = normalize(&params, &points, raw)? {
            let single = TautClass::from_terms(params, points.clone(), [(m, c)]);
            out = &out + &single;
        }
    }
    Ok(out)
}
