use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use crate::charclass::{CharClassMonomial, RingParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{normalize, Point, PointSet, RawMonomial, TautMonomial};

/// A `S`-linear combination of canonical monomials on a fixed point set.
///
/// Stored coefficients are never zero. Classes may be inhomogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautClass<S> {
    params: RingParams,
    points: PointSet,
    terms: BTreeMap<TautMonomial, S>,
}

impl<S: Scalar> TautClass<S> {
    pub fn zero(params: RingParams, points: PointSet) -> Self {
        TautClass {
            params,
            points,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(params: RingParams, points: PointSet, c: S) -> Self {
        let mut class = Self::zero(params, points);
        class.add_term(TautMonomial::one(), c);
        class
    }

    pub fn one(params: RingParams, points: PointSet) -> Self {
        Self::scalar(params, points, S::one())
    }

    /// The Euler characteristic as a constant class.
    pub fn chi(params: RingParams, points: PointSet) -> Self {
        let chi = S::from_int(params.chi());
        Self::scalar(params, points, chi)
    }

    pub fn from_raw(params: RingParams, points: PointSet, raw: RawMonomial<S>) -> Result<Self> {
        let mut class = Self::zero(params, points);
        if let Some((c, m)) = normalize(&class.params, &class.points, raw)? {
            class.add_term(m, c);
        }
        Ok(class)
    }

    /// `kappa_c`, pulled back from the base.
    pub fn kappa(params: RingParams, points: PointSet, c: CharClassMonomial) -> Self {
        let mut raw = RawMonomial::scalar(S::one());
        raw.kappas.push(c);
        Self::from_raw(params, points, raw).expect("kappa classes involve no points")
    }

    /// `psi(c)_p`.
    pub fn psi(params: RingParams, points: PointSet, c: CharClassMonomial, p: Point) -> Result<Self> {
        let mut raw = RawMonomial::scalar(S::one());
        raw.psis.push((p, c));
        Self::from_raw(params, points, raw)
    }

    /// `pi_S`.
    pub fn pi(params: RingParams, points: PointSet, subset: &[Point]) -> Result<Self> {
        let mut raw = RawMonomial::scalar(S::one());
        raw.pis.push(subset.to_vec());
        Self::from_raw(params, points, raw)
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn points(&self) -> &PointSet {
        &self.points
    }

    pub fn terms(&self) -> &BTreeMap<TautMonomial, S> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of the unit monomial if that is the only term (or zero).
    pub fn as_scalar(&self) -> Option<S> {
        match self.terms.len() {
            0 => Some(S::zero()),
            1 => self.terms.get(&TautMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn coefficient(&self, m: &TautMonomial) -> S {
        self.terms.get(m).cloned().unwrap_or_else(S::zero)
    }

    pub(crate) fn add_term(&mut self, m: TautMonomial, c: S) {
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

    pub(crate) fn add_raw(&mut self, raw: RawMonomial<S>) -> Result<()> {
        if let Some((c, m)) = normalize(&self.params, &self.points, raw)? {
            self.add_term(m, c);
        }
        Ok(())
    }

    /// Degrees of all terms.
    pub fn degrees(&self) -> BTreeSet<u32> {
        self.terms.keys().map(|m| m.degree(&self.params)).collect()
    }

    /// `Some(deg)` if every term has degree `deg`; `None` for zero or mixed.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let degs = self.degrees();
        if degs.len() == 1 {
            degs.into_iter().next()
        } else {
            None
        }
    }

    pub fn homogeneous_part(&self, degree: u32) -> Self {
        TautClass {
            params: self.params,
            points: self.points.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree(&self.params) == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn has_pontryagin(&self) -> bool {
        self.terms.keys().any(|m| m.has_pontryagin())
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.params != other.params {
            return Err(Error::ParamsMismatch);
        }
        if self.points != other.points {
            return Err(Error::PointSetMismatch {
                left: self.points.to_string(),
                right: other.points.to_string(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.params, self.points.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let raw = m1.product_raw(m2, c1.clone() * c2.clone());
                out.add_raw(raw).expect("product of canonical monomials is valid");
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.params, self.points.clone());
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v.clone() * c.clone());
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.params, self.points.clone());
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Renames points along a bijection of the point set and renormalizes.
    pub fn relabel(&self, sigma: &BTreeMap<Point, Point>) -> Result<Self> {
        let image: BTreeSet<Point> = self.points.iter().map(|p| *sigma.get(&p).unwrap_or(&p)).collect();
        if image.len() != self.points.len()
            || sigma.keys().any(|p| !self.points.contains(*p))
            || image.iter().any(|p| !self.points.contains(*p))
        {
            return Err(Error::NotABijection);
        }
        let map = |p: Point| *sigma.get(&p).unwrap_or(&p);
        let mut out = Self::zero(self.params, self.points.clone());
        for (m, c) in &self.terms {
            let mut raw = m.to_raw(c.clone());
            for (p, _) in raw.psis.iter_mut() {
                *p = map(*p);
            }
            for block in raw.pis.iter_mut() {
                for p in block.iter_mut() {
                    *p = map(*p);
                }
            }
            out.add_raw(raw)?;
        }
        Ok(out)
    }

    /// Pullback along the forgetful map `M_g^J -> M_g^I`.
    pub fn lift(&self, target: &PointSet) -> Result<Self> {
        if !self.points.is_subset(target) {
            return Err(Error::NotASubset {
                from: self.points.to_string(),
                to: target.to_string(),
            });
        }
        Ok(TautClass {
            params: self.params,
            points: target.clone(),
            terms: self.terms.clone(),
        })
    }

    pub(crate) fn from_terms(
        params: RingParams,
        points: PointSet,
        terms: impl IntoIterator<Item = (TautMonomial, S)>,
    ) -> Self {
        let mut out = Self::zero(params, points);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }
}

impl<S: Scalar> Neg for &TautClass<S> {
    type Output = TautClass<S>;
    fn neg(self) -> TautClass<S> {
        self.scale(&-S::one())
    }
}

impl<S: Scalar> Neg for TautClass<S> {
    type Output = TautClass<S>;
    fn neg(self) -> TautClass<S> {
        -&self
    }
}

/// Operators panic on mismatched point sets; use the `checked_*` methods
/// where that can happen.
impl<S: Scalar> Add for &TautClass<S> {
    type Output = TautClass<S>;
    fn add(self, rhs: Self) -> TautClass<S> {
        self.checked_add(rhs).expect("compatible classes")
    }
}

impl<S: Scalar> Sub for &TautClass<S> {
    type Output = TautClass<S>;
    fn sub(self, rhs: Self) -> TautClass<S> {
        self.checked_sub(rhs).expect("compatible classes")
    }
}

impl<S: Scalar> Mul for &TautClass<S> {
    type Output = TautClass<S>;
    fn mul(self, rhs: Self) -> TautClass<S> {
        self.checked_mul(rhs).expect("compatible classes")
    }
}

impl<S: Scalar> Add for TautClass<S> {
    type Output = TautClass<S>;
    fn add(self, rhs: Self) -> TautClass<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for TautClass<S> {
    type Output = TautClass<S>;
    fn sub(self, rhs: Self) -> TautClass<S> {
        &self - &rhs
    }
}

impl<S: Scalar> Mul for TautClass<S> {
    type Output = TautClass<S>;
    fn mul(self, rhs: Self) -> TautClass<S> {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    struct Ctx {
        params: RingParams,
        points: PointSet,
    }

    impl Ctx {
        fn new(labels: &[u32]) -> Self {
            Ctx {
                params: RingParams::new(3, 1).unwrap(),
                points: PointSet::from_labels(labels.iter().copied()).with_star(),
            }
        }
        fn e(&self, k: u32) -> CharClassMonomial {
            CharClassMonomial::euler_power(&self.params, k)
        }
        fn kappa(&self, k: u32) -> TautClass<Q> {
            TautClass::kappa(self.params, self.points.clone(), self.e(k))
        }
        fn psi(&self, k: u32, p: Point) -> TautClass<Q> {
            TautClass::psi(self.params, self.points.clone(), self.e(k), p).unwrap()
        }
        fn pi(&self, s: &[Point]) -> TautClass<Q> {
            TautClass::pi(self.params, self.points.clone(), s).unwrap()
        }
        fn c(&self, v: Q) -> TautClass<Q> {
            TautClass::scalar(self.params, self.points.clone(), v)
        }
    }

    #[test]
    fn additive_laws() {
        let cx = Ctx::new(&[1]);
        let a = &cx.kappa(2) + &cx.pi(&[Point(1), Point::STAR]);
        let zero = TautClass::zero(cx.params, cx.points.clone());
        assert_eq!(&a + &zero, a);
        assert!((&a - &a).is_zero());
        let five = &cx.kappa(2).scale(&q(2, 1)) + &cx.kappa(2).scale(&q(3, 1));
        assert_eq!(five, cx.kappa(2).scale(&q(5, 1)));
    }

    #[test]
    fn mismatched_point_sets() {
        let a = Ctx::new(&[1]).kappa(2);
        let b = Ctx::new(&[1, 2]).kappa(2);
        assert!(matches!(a.checked_add(&b), Err(Error::PointSetMismatch { .. })));
        assert!(matches!(a.checked_mul(&b), Err(Error::PointSetMismatch { .. })));
    }

    #[test]
    fn worked_square() {
        // (chi pi_{1*} - psi(e)_*)^2 with chi = -4
        let cx = Ctx::new(&[1]);
        let star = Point::STAR;
        let chi = cx.c(Q::from_int(cx.params.chi()));
        let a = &(&chi * &cx.pi(&[Point(1), star])) - &cx.psi(1, star);
        let sq = &a * &a;
        let pi_psi = &cx.pi(&[Point(1), star]) * &cx.psi(1, Point(1));
        let expected = &(&pi_psi.scale(&Q::from_int(16)) - &pi_psi.scale(&Q::from_int(2 * -4)))
            + &cx.psi(2, star);
        assert_eq!(sq, expected);
        assert_eq!(sq.homogeneous_degree(), Some(4));
    }

    #[test]
    fn unit_and_power() {
        let cx = Ctx::new(&[1, 2]);
        let a = &cx.pi(&[Point(1), Point(2)]) + &cx.psi(1, Point(2));
        let one = TautClass::one(cx.params, cx.points.clone());
        assert_eq!(&a * &one, a);
        assert_eq!(a.pow(3), &(&a * &a) * &a);
        assert_eq!(a.pow(0), one);
    }

    #[test]
    fn triple_product_merge() {
        let cx = Ctx::new(&[1, 2, 3]);
        let p12 = cx.pi(&[Point(1), Point(2)]);
        let p13 = cx.pi(&[Point(1), Point(3)]);
        let prod = &(&p12 * &p13) * &p12;
        let expected = &cx.pi(&[Point(1), Point(2), Point(3)]) * &cx.psi(1, Point(1));
        assert_eq!(prod, expected);
    }

    #[test]
    fn relabel_and_lift() {
        let cx = Ctx::new(&[1, 2]);
        let a = &cx.pi(&[Point(1), Point(2)]) * &cx.psi(3, Point(1));
        let swap: BTreeMap<Point, Point> = [(Point(1), Point(2)), (Point(2), Point(1))].into();
        assert_eq!(a.relabel(&swap).unwrap(), a);
        assert_eq!(a.relabel(&BTreeMap::new()).unwrap(), a);
        let bad: BTreeMap<Point, Point> = [(Point(1), Point(2))].into();
        assert_eq!(a.relabel(&bad), Err(Error::NotABijection));

        let base = Ctx::new(&[]);
        let k = TautClass::<Q>::kappa(base.params, PointSet::empty(), base.e(2));
        let lifted = k.lift(&PointSet::first_n(1)).unwrap();
        assert_eq!(lifted.terms(), k.terms());
        assert!(lifted.lift(&PointSet::empty()).is_err());
    }

    #[test]
    fn generic_over_machine_rationals() {
        use num_rational::Rational64;
        let params = RingParams::new(2, 1).unwrap();
        let pts = PointSet::first_n(1).with_star();
        let pi = TautClass::<Rational64>::pi(params, pts.clone(), &[Point(1), Point::STAR]).unwrap();
        let sq = &pi * &pi;
        assert_eq!(sq.homogeneous_degree(), Some(4));
    }
}
