use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::charclass::{self, CharClassMonomial, RingParams};
use crate::error::{Error, Result};
use crate::expr::{self, Context};
use crate::json::{json_to_rational, rational_to_json};
use crate::kappa_poly::{KappaMonomial, KappaPolynomial};
use crate::pushforward::push_to_base;
use crate::tautmono::{PointSet, TautClass, TautMonomial};
use crate::Q;

use super::{binomial_closed_form, omega_a, relation_product, relation_square};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schema {
    Square,
    Product,
    OmegaPower,
    PullbackPontryagin,
    BinomialDecompose,
}

/// Inputs that determine a relation. Which fields are set depends on the
/// schema; [`RelationRecord::regenerate`] documents the combinations.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multiplier: Option<TautMonomial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    /// Expressions on `{1..n} + {s}`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classes: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pontryagin_index: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monomials: Option<Vec<CharClassMonomial>>,
}

/// A kappa polynomial asserted to vanish, stored content-normalized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationRecord {
    pub schema: Schema,
    pub g: u32,
    pub d: u32,
    pub degree: u32,
    pub provenance: Provenance,
    pub poly: KappaPolynomial<Q>,
}

impl RelationRecord {
    pub fn new(schema: Schema, params: RingParams, provenance: Provenance, poly: &KappaPolynomial<Q>) -> Self {
        let poly = poly.content_normalized();
        RelationRecord {
            schema,
            g: params.g(),
            d: params.d(),
            degree: poly.homogeneous_degree().unwrap_or(0),
            provenance,
            poly,
        }
    }

    pub fn params(&self) -> RingParams {
        *self.poly.params()
    }

    fn missing(&self, field: &str) -> Error {
        Error::Record(format!("{:?} record lacks provenance field {field}", self.schema))
    }

    fn multiplier_class(&self, points: &PointSet) -> Result<TautClass<Q>> {
        let params = self.params();
        match &self.provenance.multiplier {
            None => Ok(TautClass::one(params, points.clone())),
            Some(m) => TautClass::from_raw(params, points.clone(), m.to_raw(Q::from_integer(1.into()))),
        }
    }

    /// Recomputes the polynomial from the provenance alone:
    ///
    /// * `omega_power`: `n`, `a`, `exponent`, optional `multiplier`;
    /// * `square`: `n`, one class, `exponent`, optional `multiplier`;
    /// * `product`: `n`, two classes, `exponent`, optional `multiplier`;
    /// * `binomial_decompose`: `k`;
    /// * `pullback_pontryagin`: `pontryagin_index` and two monomials.
    pub fn regenerate(&self) -> Result<KappaPolynomial<Q>> {
        let params = self.params();
        let prov = &self.provenance;
        let poly = match self.schema {
            Schema::OmegaPower => {
                let a = prov.a.as_ref().ok_or_else(|| self.missing("a"))?;
                let n = prov.n.ok_or_else(|| self.missing("n"))?;
                let exponent = prov.exponent.ok_or_else(|| self.missing("exponent"))?;
                if a.len() != n as usize {
                    return Err(Error::Record("length of a differs from n".into()));
                }
                let base = omega_a::<Q>(params, a)?.base;
                let mult = self.multiplier_class(base.points())?;
                push_to_base(&base.pow(exponent).checked_mul(&mult)?)
            }
            Schema::Square | Schema::Product => {
                let n = prov.n.ok_or_else(|| self.missing("n"))?;
                let exponent = prov.exponent.ok_or_else(|| self.missing("exponent"))?;
                let classes = prov.classes.as_ref().ok_or_else(|| self.missing("classes"))?;
                let target = PointSet::first_n(n);
                let ctx = Context::new(params, target.with_star());
                let parsed = classes
                    .iter()
                    .map(|text| expr::parse::<Q>(&ctx, text).map_err(|e| Error::Record(e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                let rel = match (self.schema, parsed.as_slice()) {
                    (Schema::Square, [a]) => relation_square(a, &target)?,
                    (Schema::Product, [a, b]) => relation_product(a, b, &target)?,
                    _ => return Err(Error::Record("wrong number of classes".into())),
                };
                let mult = self.multiplier_class(&target)?;
                push_to_base(&rel.base.pow(exponent).checked_mul(&mult)?)
            }
            Schema::BinomialDecompose => {
                let k = prov.k.ok_or_else(|| self.missing("k"))?;
                binomial_closed_form::<Q>(params, k)
            }
            Schema::PullbackPontryagin => {
                let i = prov.pontryagin_index.ok_or_else(|| self.missing("pontryagin_index"))?;
                let ms = prov.monomials.as_ref().ok_or_else(|| self.missing("monomials"))?;
                let [m, m2] = ms.as_slice() else {
                    return Err(Error::Record("expected two monomials".into()));
                };
                let p = charclass::make(&params, &[(charclass::Generator::Pontryagin(i), 1)])?;
                KappaPolynomial::<Q>::kappa(params, &p.mul(m))
                    .mul(&KappaPolynomial::kappa(params, m2))
                    .sub(&KappaPolynomial::kappa(params, m).mul(&KappaPolynomial::kappa(params, &p.mul(m2))))
            }
        };
        Ok(poly.content_normalized())
    }

    /// Whether the provenance reproduces the stored polynomial exactly.
    pub fn check_provenance(&self) -> Result<bool> {
        Ok(self.regenerate()? == self.poly)
    }

    pub fn to_latex(&self) -> String {
        format!("{} = 0", self.poly.to_latex())
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("records serialize")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::Record(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct RecordJson {
    schema: Schema,
    g: u32,
    d: u32,
    degree: u32,
    provenance: Provenance,
    /// `[[kappa factor exponent vectors...], num, den]` per term.
    poly: Vec<(Vec<CharClassMonomial>, Value, Value)>,
}

impl Serialize for RelationRecord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let poly = self
            .poly
            .terms()
            .iter()
            .map(|(m, c)| {
                let [n, d] = match rational_to_json(c) {
                    Value::Array(v) => <[Value; 2]>::try_from(v).expect("pair"),
                    _ => unreachable!("rationals encode as pairs"),
                };
                (m.factors().to_vec(), n, d)
            })
            .collect();
        RecordJson {
            schema: self.schema,
            g: self.g,
            d: self.d,
            degree: self.degree,
            provenance: self.provenance.clone(),
            poly,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RelationRecord {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RecordJson::deserialize(de)?;
        let params = RingParams::new(raw.g, raw.d).map_err(D::Error::custom)?;
        let mut poly = KappaPolynomial::zero(params);
        for (factors, n, d) in raw.poly {
            if factors.iter().any(|c| c.d() != raw.d || !c.exceeds_fiber()) {
                return Err(D::Error::custom("kappa factor does not match d"));
            }
            let c = json_to_rational(&Value::Array(vec![n, d])).map_err(D::Error::custom)?;
            poly.add_term(KappaMonomial::new(factors), c);
        }
        Ok(RelationRecord {
            schema: raw.schema,
            g: raw.g,
            d: raw.d,
            degree: raw.degree,
            provenance: raw.provenance,
            poly,
        })
    }
}
