//! Relation schemas.
//!
//! Both fundamental schemas start from classes on `M_g^{I + extra}` whose
//! pushforward to `M_g^I` vanishes:
//!
//! * `P = push(a * a)` satisfies `P^{g+1} = 0` when `a` has even degree;
//! * `P = push(a * b)` satisfies `P^{2g+1} = 0` when `a` has even degree.
//!
//! Everything else here instantiates them: the classes `Omega(c)` and
//! `Omega_A`, the ideal they generate after pushing to the base, the binomial
//! identities expressing `kappa_{e^j}` through lower classes, and the
//! relations coming from Pontryagin classes pulled back from the base.
//! Integral factors such as `(2g+1)!` are irrelevant over `Q` and dropped.

mod irw;
mod record;

pub use irw::{generate_irw, multipliers, IrwConfig, Multiplier};
pub use record::{Provenance, RelationRecord, Schema};

use std::collections::BTreeSet;

use crate::charclass::{self, BasisKind, CharClassMonomial, RingParams};
use crate::error::{Error, Result};
use crate::kappa_poly::KappaPolynomial;
use crate::pushforward::{push_down, push_forget, push_to_base};
use crate::scalar::Scalar;
use crate::tautmono::{Point, PointSet, TautClass};
use crate::Q;

/// `base^exponent = 0` on `M_g^I`.
#[derive(Clone, Debug, PartialEq)]
pub struct FundamentalRelation<S> {
    pub base: TautClass<S>,
    pub exponent: u32,
}

impl<S: Scalar> FundamentalRelation<S> {
    /// `base^exponent` as a class.
    pub fn expand(&self) -> TautClass<S> {
        self.base.pow(self.exponent)
    }

    /// `push_to_base(base^exponent * multiplier)`, a kappa relation.
    pub fn to_base(&self, multiplier: &TautClass<S>) -> Result<KappaPolynomial<S>> {
        Ok(push_to_base(&self.expand().checked_mul(multiplier)?))
    }
}

fn require_vanishing_push<S: Scalar>(a: &TautClass<S>, target: &PointSet) -> Result<()> {
    let pushed = push_down(a, target)?;
    if pushed.is_zero() {
        Ok(())
    } else {
        Err(Error::NonzeroPushforward {
            target: target.to_string(),
            push: crate::expr::print(&crate::expr::Context::new(*a.params(), target.clone()), &pushed),
        })
    }
}

fn require_even<S: Scalar>(a: &TautClass<S>) -> Result<()> {
    match a.degrees().into_iter().find(|deg| deg % 2 == 1) {
        Some(odd) => Err(Error::OddDegree(odd)),
        None => Ok(()),
    }
}

/// `P = push(a^2)` to `target`, with `P^{g+1} = 0`.
pub fn relation_square<S: Scalar>(a: &TautClass<S>, target: &PointSet) -> Result<FundamentalRelation<S>> {
    require_vanishing_push(a, target)?;
    require_even(a)?;
    Ok(FundamentalRelation {
        base: push_down(&(a * a), target)?,
        exponent: a.params().g() + 1,
    })
}

/// `P = push(a * b)` to `target`, with `P^{2g+1} = 0`. Only `a` needs even
/// degree.
pub fn relation_product<S: Scalar>(
    a: &TautClass<S>,
    b: &TautClass<S>,
    target: &PointSet,
) -> Result<FundamentalRelation<S>> {
    require_vanishing_push(a, target)?;
    require_vanishing_push(b, target)?;
    require_even(a)?;
    Ok(FundamentalRelation {
        base: push_down(&a.checked_mul(b)?, target)?,
        exponent: 2 * a.params().g() + 1,
    })
}

/// `chi^2 push(c^2) - 2 q chi push(psi(e)_* c) + q^2 kappa_{e^2}` where
/// `q = push(c)`, for `c` of degree `2d` on `I + {*}`. This is
/// `push((chi c - q psi(e)_*)^2)`, so `Omega^{g+1} = 0`.
pub fn omega<S: Scalar>(c: &TautClass<S>) -> Result<FundamentalRelation<S>> {
    let params = *c.params();
    let points = c.points().clone();
    points.require(Point::STAR)?;
    let base_points = points.without(Point::STAR);
    let exponent = params.g() + 1;
    if c.is_zero() {
        return Ok(FundamentalRelation {
            base: TautClass::zero(params, base_points),
            exponent,
        });
    }
    let fiber = params.fiber_degree();
    if c.homogeneous_degree() != Some(fiber) {
        return Err(Error::NotHomogeneous {
            expected: fiber,
            found: c.degrees().into_iter().collect(),
        });
    }
    let pushed = push_forget(c)?;
    let q = pushed.as_scalar().ok_or_else(|| {
        Error::NonScalarPushforward(crate::expr::print(
            &crate::expr::Context::new(params, base_points.clone()),
            &pushed,
        ))
    })?;
    let chi = S::from_int(params.chi());
    let e = CharClassMonomial::euler_power(&params, 1);
    let psi_e = TautClass::psi(params, points.clone(), e.clone(), Point::STAR)?;
    let kappa_e2 = TautClass::kappa(params, base_points, e.pow(2));

    let square = push_forget(&(c * c))?.scale(&(chi.clone() * chi.clone()));
    let cross = push_forget(&(&psi_e * c))?.scale(&(S::from_int(2) * q.clone() * chi));
    let tail = kappa_e2.scale(&(q.clone() * q));
    Ok(FundamentalRelation {
        base: &(&square - &cross) + &tail,
        exponent,
    })
}

/// `c_A = sum_i A_i pi_{i*}` on `{1..n} + {*}`, `n = |A|`.
pub fn class_a<S: Scalar>(params: RingParams, a: &[i64]) -> Result<TautClass<S>> {
    if a.is_empty() {
        return Err(Error::EmptyVector);
    }
    let points = PointSet::first_n(a.len() as u32).with_star();
    let mut c = TautClass::zero(params, points.clone());
    for (i, &ai) in a.iter().enumerate() {
        if ai != 0 {
            let pi = TautClass::pi(params, points.clone(), &[Point(i as u32 + 1), Point::STAR])?;
            c = &c + &pi.scale(&S::from_int(ai));
        }
    }
    Ok(c)
}

/// `Omega_A = Omega(c_A)` on `{1..n}`.
pub fn omega_a<S: Scalar>(params: RingParams, a: &[i64]) -> Result<FundamentalRelation<S>> {
    omega(&class_a(params, a)?)
}

/// `sum_{i=0}^{g+1} C(g+1, i) kappa_{e^{i+k}} (kappa_{e^2} / ((chi-2) chi))^{g+1-i}`
/// with `kappa_1 = 0` and `kappa_e = chi`.
pub fn binomial_closed_form<S: Scalar>(params: RingParams, k: u32) -> KappaPolynomial<S> {
    let g = params.g();
    let chi = S::from_int(params.chi());
    let denom = (chi.clone() - S::from_int(2)) * chi;
    let ratio = KappaPolynomial::kappa_euler(params, 2).scale(&(S::one() / denom));
    let mut out = KappaPolynomial::zero(params);
    for i in 0..=g + 1 {
        let term = KappaPolynomial::kappa_euler(params, i + k)
            .mul(&ratio.pow(g + 1 - i))
            .scale(&S::binomial(g + 1, i));
        out = out.add(&term);
    }
    out
}

/// The same relation obtained from `relation_square(chi pi_{1*} - psi(e)_*)`
/// on `{1}`: expand `P^{g+1} psi(e)_1^k / ((chi-2) chi)^{g+1}` and push to
/// the base.
pub fn binomial_via_square<S: Scalar>(params: RingParams, k: u32) -> Result<KappaPolynomial<S>> {
    let target = PointSet::first_n(1);
    let points = target.with_star();
    let e = CharClassMonomial::euler_power(&params, 1);
    let chi = S::from_int(params.chi());
    let pi = TautClass::pi(params, points.clone(), &[Point(1), Point::STAR])?;
    let psi_e = TautClass::psi(params, points, e.clone(), Point::STAR)?;
    let a = &pi.scale(&chi) - &psi_e;
    let rel = relation_square(&a, &target)?;
    let multiplier = TautClass::psi(params, target, e.pow(k), Point(1))?;
    let denom = ((chi.clone() - S::from_int(2)) * chi).pow_u32(rel.exponent);
    Ok(rel.to_base(&multiplier)?.scale(&(S::one() / denom)))
}

/// Binomial relation for `(g, k)` as a record; both derivations are computed
/// and must agree exactly.
pub fn binomial_decompose(params: RingParams, k: u32) -> Result<RelationRecord> {
    let closed = binomial_closed_form::<Q>(params, k);
    let routed = binomial_via_square::<Q>(params, k)?;
    assert_eq!(closed, routed, "binomial relation derivations disagree");
    Ok(RelationRecord::new(
        Schema::BinomialDecompose,
        params,
        Provenance {
            k: Some(k),
            exponent: Some(params.g() + 1),
            ..Provenance::default()
        },
        &closed,
    ))
}

/// `kappa_{p_i m} kappa_{m'} - kappa_m kappa_{p_i m'}` for `i` below
/// `ceil((d+1)/4)`, where those `p_i` are pulled back from the base. Pairs
/// `m < m'` range over all monomials; only relations of degree at most
/// `degree_max` are returned, content-normalized and deduplicated.
pub fn pullback_pontryagin_relations(params: RingParams, degree_max: u32) -> Vec<RelationRecord> {
    let d = params.d();
    let fiber = params.fiber_degree();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for i in 1..params.small_basis_start().min(d) {
        let p = charclass::make(&params, &[(charclass::Generator::Pontryagin(i), 1)])
            .expect("index below d");
        // 4i + deg m + deg m' - 4d <= degree_max
        let budget = match (degree_max + 2 * fiber).checked_sub(4 * i) {
            Some(b) => b,
            None => continue,
        };
        let monomials = charclass::enumerate_range(&params, 0, budget, BasisKind::Large);
        for (x, m) in monomials.iter().enumerate() {
            for m2 in &monomials[x + 1..] {
                let degree = 4 * i + m.degree() + m2.degree();
                if degree < 2 * fiber || degree - 2 * fiber > degree_max {
                    continue;
                }
                let left = KappaPolynomial::<Q>::kappa(params, &p.mul(m))
                    .mul(&KappaPolynomial::kappa(params, m2));
                let right = KappaPolynomial::<Q>::kappa(params, m)
                    .mul(&KappaPolynomial::kappa(params, &p.mul(m2)));
                let rel = left.sub(&right).content_normalized();
                if rel.is_zero() || !seen.insert(rel.clone()) {
                    continue;
                }
                out.push(RelationRecord::new(
                    Schema::PullbackPontryagin,
                    params,
                    Provenance {
                        pontryagin_index: Some(i),
                        monomials: Some(vec![m.clone(), m2.clone()]),
                        ..Provenance::default()
                    },
                    &rel,
                ));
            }
        }
    }
    out.sort_by(|a, b| a.degree.cmp(&b.degree).then_with(|| a.poly.cmp(&b.poly)));
    out
}

/// The lowest-degree relation `kappa_{p_s^2}^{g+1} = 0`, from
/// `a = psi(p_s)_*` on the empty point set.
pub fn lowest_relation(params: RingParams) -> Result<(FundamentalRelation<Q>, RelationRecord)> {
    let s = params.small_basis_start();
    // p_d is e^2, which `make` rewrites
    let ps = charclass::make(&params, &[(charclass::Generator::Pontryagin(s), 1)])?;
    let points = PointSet::empty().with_star();
    let a = TautClass::<Q>::psi(params, points.clone(), ps.clone(), Point::STAR)?;
    let rel = relation_square(&a, &PointSet::empty())?;
    let poly = push_to_base(&rel.expand());
    let text = crate::expr::print(&crate::expr::Context::new(params, points), &a);
    let record = RelationRecord::new(
        Schema::Square,
        params,
        Provenance {
            n: Some(0),
            classes: Some(vec![text]),
            exponent: Some(rel.exponent),
            ..Provenance::default()
        },
        &poly,
    );
    Ok((rel, record))
}
