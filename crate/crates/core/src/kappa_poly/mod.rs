//! The graded polynomial ring `Q[kappa_c : deg c > 2d]`.
//!
//! Elements of this ring are formal: a [`KappaPolynomial`] that some schema
//! proves zero is a *relation*, i.e. it lies in the kernel of the map to the
//! cohomology of `BDiff(M_g)`. Degree-wise exact linear algebra over these
//! relations lives in [`span`]; [`linalg`] holds the elimination kernels.

pub mod linalg;
pub mod radical;
pub mod span;

pub use radical::{decomposability_check, radical_generator_set, Decomposability, RadicalGenerators};
pub use span::{is_member, span_in_degree, BasisScope, DegreeSpan, MembershipCertificate};

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::charclass::{self, BasisKind, CharClassMonomial, KappaFold, RingParams};
use crate::scalar::Scalar;
use crate::Q;

/// A product of kappa generators, stored as a sorted multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct KappaMonomial {
    factors: Vec<CharClassMonomial>,
}

impl KappaMonomial {
    pub fn one() -> Self {
        KappaMonomial { factors: Vec::new() }
    }

    /// Factors must each have degree `> 2d`.
    pub fn new(mut factors: Vec<CharClassMonomial>) -> Self {
        debug_assert!(factors.iter().all(|c| c.exceeds_fiber()));
        factors.sort();
        KappaMonomial { factors }
    }

    pub fn generator(c: CharClassMonomial) -> Self {
        Self::new(vec![c])
    }

    /// `kappa_i = kappa_{e^{i+1}}`, `i >= 1`.
    pub fn kappa_index(params: &RingParams, i: u32) -> Self {
        Self::generator(CharClassMonomial::euler_power(params, i + 1))
    }

    pub fn factors(&self) -> &[CharClassMonomial] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self, params: &RingParams) -> u32 {
        let fiber = params.fiber_degree();
        self.factors.iter().map(|c| c.degree() - fiber).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Self::new(factors)
    }

    pub fn has_pontryagin(&self) -> bool {
        self.factors.iter().any(|c| c.has_pontryagin())
    }

    /// Indices `i` of `kappa_i = kappa_{e^{i+1}}`, or `None` if a factor
    /// involves a Pontryagin class.
    pub fn euler_indices(&self) -> Option<Vec<u32>> {
        self.factors
            .iter()
            .map(|c| c.as_euler_power().map(|k| k - 1))
            .collect()
    }

    pub fn to_latex(&self) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut out = String::new();
        let mut i = 0;
        while i < self.factors.len() {
            let c = &self.factors[i];
            let mut mult = 1;
            while i + mult < self.factors.len() && &self.factors[i + mult] == c {
                mult += 1;
            }
            match c.as_euler_power() {
                Some(k) => out.push_str(&format!("\\kappa_{{{}}}", k - 1)),
                None => out.push_str(&format!("\\kappa_{{{}}}", c.to_latex())),
            }
            if mult > 1 {
                out.push_str(&format!("^{{{mult}}}"));
            }
            i += mult;
        }
        out
    }
}

/// Parseable form, `kappa(e^2)*kappa(p1*e)`.
impl fmt::Display for KappaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (i, c) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "kappa({c})")?;
        }
        Ok(())
    }
}

/// Result of interpreting `kappa_c` for an arbitrary monomial `c`.
pub(crate) fn fold_kappa<S: Scalar>(params: &RingParams, c: &CharClassMonomial) -> Option<(S, Option<CharClassMonomial>)> {
    match c.kappa_fold() {
        KappaFold::Zero => None,
        KappaFold::EulerCharacteristic => Some((S::from_int(params.chi()), None)),
        KappaFold::Keep => Some((S::one(), Some(c.clone()))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct KappaPolynomial<S> {
    params: RingParams,
    terms: BTreeMap<KappaMonomial, S>,
}

impl<S: Scalar> KappaPolynomial<S> {
    pub fn zero(params: RingParams) -> Self {
        KappaPolynomial {
            params,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(params: RingParams, c: S) -> Self {
        Self::monomial(params, KappaMonomial::one(), c)
    }

    pub fn one(params: RingParams) -> Self {
        Self::constant(params, S::one())
    }

    pub fn monomial(params: RingParams, m: KappaMonomial, c: S) -> Self {
        let mut p = Self::zero(params);
        p.add_term(m, c);
        p
    }

    /// `kappa_c` with the folding conventions: zero below degree `2d`,
    /// `chi` for `c = e`.
    pub fn kappa(params: RingParams, c: &CharClassMonomial) -> Self {
        match fold_kappa::<S>(&params, c) {
            None => Self::zero(params),
            Some((s, None)) => Self::constant(params, s),
            Some((s, Some(c))) => Self::monomial(params, KappaMonomial::generator(c), s),
        }
    }

    /// `kappa_{e^k}`; so `kappa_euler(k + 1)` is `kappa_k`.
    pub fn kappa_euler(params: RingParams, k: u32) -> Self {
        Self::kappa(params, &CharClassMonomial::euler_power(&params, k))
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn terms(&self) -> &BTreeMap<KappaMonomial, S> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &KappaMonomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, m: KappaMonomial, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn degrees(&self) -> Vec<u32> {
        let mut degs: Vec<u32> = self.terms.keys().map(|m| m.degree(&self.params)).collect();
        degs.sort_unstable();
        degs.dedup();
        degs
    }

    pub fn homogeneous_degree(&self) -> Option<u32> {
        match self.degrees().as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        KappaPolynomial {
            params: self.params,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree(&self.params) == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.params);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.params, other.params, "kappa polynomials over different rings");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.params, other.params, "kappa polynomials over different rings");
        let mut out = Self::zero(self.params);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &KappaMonomial) -> Self {
        let mut out = Self::zero(self.params);
        for (m1, c) in &self.terms {
            out.add_term(m1.mul(m), c.clone());
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.params);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Scaled so the greatest monomial has coefficient one.
    pub fn monic(&self) -> Self {
        match self.terms.iter().next_back() {
            None => self.clone(),
            Some((_, lead)) => {
                let inv = S::one() / lead.clone();
                self.scale(&inv)
            }
        }
    }

    pub fn has_pontryagin(&self) -> bool {
        self.terms.keys().any(|m| m.has_pontryagin())
    }

    /// Rewrites every factor as `kappa_i`, keyed by the sorted index list.
    /// `None` if any factor involves a Pontryagin class.
    pub fn euler_index_form(&self) -> Option<BTreeMap<Vec<u32>, S>> {
        self.terms
            .iter()
            .map(|(m, c)| m.euler_indices().map(|idx| (idx, c.clone())))
            .collect()
    }

    /// Builds a Pontryagin-free polynomial in `kappa_i` on the given ring.
    pub fn from_euler_index_form(params: RingParams, form: &BTreeMap<Vec<u32>, S>) -> Self {
        let mut out = Self::zero(params);
        for (idx, c) in form {
            let factors = idx
                .iter()
                .map(|&i| CharClassMonomial::euler_power(&params, i + 1))
                .collect();
            out.add_term(KappaMonomial::new(factors), c.clone());
        }
        out
    }

    /// Same polynomial on a ring with another `d`; only defined when no
    /// Pontryagin class occurs.
    pub fn transport(&self, params: RingParams) -> Option<Self> {
        if params.g() != self.params.g() {
            return None;
        }
        self.euler_index_form()
            .map(|form| Self::from_euler_index_form(params, &form))
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let text = c.to_string();
            let (neg, abs) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coeff = latex_coefficient(&abs);
            if m.is_one() {
                out.push_str(&coeff);
            } else {
                if coeff != "1" {
                    out.push_str(&coeff);
                }
                out.push_str(&m.to_latex());
            }
        }
        out
    }
}

fn latex_coefficient(abs: &str) -> String {
    match abs.split_once('/') {
        Some((n, d)) => format!("\\frac{{{n}}}{{{d}}}"),
        None => abs.to_string(),
    }
}

/// Parseable text, greatest monomial first.
impl<S: Scalar> fmt::Display for KappaPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let text = c.to_string();
            let (neg, abs) = match text.strip_prefix('-') {
                Some(rest) => (true, rest.to_string()),
                None => (false, text),
            };
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                f.write_str(&abs)?;
            } else if abs == "1" {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl KappaPolynomial<Q> {
    /// Integer coefficients with gcd one and a positive coefficient on the
    /// greatest monomial.
    pub fn content_normalized(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
            .collect();
        let gcd = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
        let lead_negative = ints.last().map(|n| n.is_negative()).unwrap_or(false);
        let sign = if lead_negative { -BigInt::one() } else { BigInt::one() };
        let mut out = Self::zero(self.params);
        for ((m, _), n) in self.terms.iter().zip(ints) {
            out.add_term(m.clone(), Q::from_integer(n * &sign / &gcd));
        }
        out
    }
}

/// All kappa monomials of degree exactly `degree`, ascending.
pub fn kp_basis(params: &RingParams, degree: u32) -> Vec<KappaMonomial> {
    basis_from_generators(params, degree, |_| true)
}

/// Monomials in `kappa_i = kappa_{e^{i+1}}` only.
pub fn kp_basis_euler(params: &RingParams, degree: u32) -> Vec<KappaMonomial> {
    basis_from_generators(params, degree, |m| !m.has_pontryagin())
}

fn basis_from_generators(
    params: &RingParams,
    degree: u32,
    keep: impl Fn(&CharClassMonomial) -> bool,
) -> Vec<KappaMonomial> {
    let fiber = params.fiber_degree();
    let generators: Vec<CharClassMonomial> =
        charclass::enumerate_range(params, fiber + 1, fiber + degree, BasisKind::Large)
            .into_iter()
            .filter(|c| keep(c))
            .collect();
    let weights: Vec<u32> = generators.iter().map(|c| c.degree() - fiber).collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn rec(
        start: usize,
        remaining: u32,
        gens: &[CharClassMonomial],
        weights: &[u32],
        chosen: &mut Vec<CharClassMonomial>,
        out: &mut Vec<KappaMonomial>,
    ) {
        if remaining == 0 {
            out.push(KappaMonomial::new(chosen.clone()));
            return;
        }
        for i in start..gens.len() {
            if weights[i] <= remaining {
                chosen.push(gens[i].clone());
                rec(i, remaining - weights[i], gens, weights, chosen, out);
                chosen.pop();
            }
        }
    }
    rec(0, degree, &generators, &weights, &mut chosen, &mut out);
    out.sort();
    out
}
