//! Generators of the kappa ring modulo nilpotents.
//!
//! For `p, q` of degree above `2d`, centering `psi(p)_*` and `psi(q)_*` and
//! applying the product schema shows that
//!
//! ```text
//! N_{p,q} = kappa_{pq} - kappa_{ep} kappa_q / chi - kappa_{eq} kappa_p / chi
//!           + kappa_{e^2} kappa_p kappa_q / chi^2
//! ```
//!
//! is nilpotent, so `kappa_{pq}` lies in the ideal `(kappa_p, kappa_q)` up
//! to nilpotents. Iterating, every `kappa_c` is generated modulo the radical
//! by the `kappa_{p_i}` and `kappa_{p_i e}`.

use crate::charclass::{CharClassMonomial, Generator, RingParams};
use crate::error::{Error, Result};
use crate::pushforward::{base_to_kappa, center};
use crate::relgen::{relation_product, relation_square};
use crate::tautmono::{Point, PointSet, TautClass};
use crate::Q;

use super::{KappaMonomial, KappaPolynomial, MembershipCertificate};

/// The set `{kappa_{p_i}, kappa_{p_i e} : 1 <= i <= d}` with `p_d = e^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalGenerators {
    /// All `2d` monomials `p_i` and `p_i e`.
    pub monomials: Vec<CharClassMonomial>,
    /// Kappa generators of positive degree.
    pub kept: Vec<KappaMonomial>,
    /// Monomials whose kappa class has degree `<= 0`.
    pub dropped: Vec<CharClassMonomial>,
}

pub fn radical_generator_set(params: &RingParams) -> RadicalGenerators {
    let e = CharClassMonomial::euler_power(params, 1);
    let mut monomials = Vec::new();
    for i in 1..=params.d() {
        let p = crate::charclass::make(params, &[(Generator::Pontryagin(i), 1)])
            .expect("index at most d");
        monomials.push(p);
    }
    let with_e: Vec<CharClassMonomial> = monomials.iter().map(|p| p.mul(&e)).collect();
    monomials.extend(with_e);

    let mut kept = Vec::new();
    let mut dropped = Vec::new();
    for c in &monomials {
        if c.exceeds_fiber() {
            kept.push(KappaMonomial::generator(c.clone()));
        } else {
            log::warn!("kappa({c}) has non-positive degree and is dropped from the generator set");
            dropped.push(c.clone());
        }
    }
    RadicalGenerators {
        monomials,
        kept,
        dropped,
    }
}

/// Outcome of [`decomposability_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposability {
    pub p: CharClassMonomial,
    pub q: CharClassMonomial,
    /// `N_{p,q}` from the closed formula.
    pub nilpotent: KappaPolynomial<Q>,
    /// `g + 1` when `p = q`, else `2g + 1`.
    pub exponent: u32,
    /// `N_{p,q}^{exponent}`, the relation produced by the schema.
    pub relation: KappaPolynomial<Q>,
    /// `kappa_{pq} - N_{p,q}`; every term is divisible by `kappa_p` or `kappa_q`.
    pub ideal_part: KappaPolynomial<Q>,
    /// Whether the schema computation reproduced the closed formula.
    pub schema_agrees: bool,
    /// `N^{2g+1}` written as `N^{2g+1-exponent}` times the relation.
    pub certificate: MembershipCertificate<Q>,
}

impl Decomposability {
    /// Every term of `ideal_part` contains `kappa_p` or `kappa_q`.
    pub fn ideal_part_in_ideal(&self) -> bool {
        let kp = KappaMonomial::generator(self.p.clone());
        let kq = KappaMonomial::generator(self.q.clone());
        self.ideal_part
            .terms()
            .keys()
            .all(|m| m.factors().contains(&kp.factors()[0]) || m.factors().contains(&kq.factors()[0]))
    }

    pub fn is_certified(&self) -> bool {
        self.schema_agrees
            && self.ideal_part_in_ideal()
            && self.certificate.is_success()
            && self.certificate.verify(std::slice::from_ref(&self.relation))
    }
}

/// Nilpotence certificate for `N_{p,q}`.
pub fn decomposability_check(
    params: &RingParams,
    p: &CharClassMonomial,
    q: &CharClassMonomial,
) -> Result<Decomposability> {
    for c in [p, q] {
        if !c.exceeds_fiber() {
            return Err(Error::LowDegree {
                monomial: c.to_string(),
                degree: c.degree(),
            });
        }
    }
    let params = *params;
    let chi = Q::from_integer(params.chi().into());
    let e = CharClassMonomial::euler_power(&params, 1);
    let kappa = |c: &CharClassMonomial| KappaPolynomial::<Q>::kappa(params, c);

    let kp = kappa(p);
    let kq = kappa(q);
    let ideal_part = kappa(&e.mul(p))
        .mul(&kq)
        .scale(&(Q::from_integer(1.into()) / chi.clone()))
        .add(&kappa(&e.mul(q)).mul(&kp).scale(&(Q::from_integer(1.into()) / chi.clone())))
        .sub(
            &kappa(&e.pow(2))
                .mul(&kp)
                .mul(&kq)
                .scale(&(Q::from_integer(1.into()) / (chi.clone() * chi))),
        );
    let nilpotent = kappa(&p.mul(q)).sub(&ideal_part);

    let points = PointSet::empty().with_star();
    let a = center(&TautClass::<Q>::psi(params, points.clone(), p.clone(), Point::STAR)?)?;
    let b = center(&TautClass::<Q>::psi(params, points, q.clone(), Point::STAR)?)?;
    let base = PointSet::empty();
    let schema = if p == q {
        relation_square(&a, &base)?
    } else {
        relation_product(&a, &b, &base)?
    };
    let schema_agrees = base_to_kappa(&schema.base) == nilpotent;
    let exponent = schema.exponent;
    let relation = nilpotent.pow(exponent);

    let top = 2 * params.g() + 1;
    let target = nilpotent.pow(top);
    let degree = target.homogeneous_degree().unwrap_or(0);
    let cofactor = nilpotent.pow(top - exponent);
    let residual = target.sub(&cofactor.mul(&relation));
    let certificate = MembershipCertificate {
        degree,
        target,
        combination: vec![(0, cofactor)],
        residual,
    };

    Ok(Decomposability {
        p: p.clone(),
        q: q.clone(),
        nilpotent,
        exponent,
        relation,
        ideal_part,
        schema_agrees,
        certificate,
    })
}
