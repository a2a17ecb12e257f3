//! Gysin pushforward along the maps that forget marked points.
//!
//! Forgetting a point `f` acts monomial by monomial:
//!
//! * if `f` lies in a block, the block loses `f` (a two-point block
//!   dissolves) and the coefficient is unchanged; this is the rule
//!   `pi_!(pi_{i f} x) = x|_{f -> i}`;
//! * otherwise the psi factor `psi(c)_f` (unit if absent) becomes `kappa_c`,
//!   which is folded: `kappa_1` and `kappa_c` with `deg c < 2d` vanish,
//!   `kappa_e = chi`.

use std::collections::BTreeMap;

use crate::charclass::{CharClassMonomial, KappaFold};
use crate::error::{Error, Result};
use crate::kappa_poly::{KappaMonomial, KappaPolynomial};
use crate::scalar::Scalar;
use crate::tautmono::{Point, PointSet, TautClass, TautMonomial};

/// The projection `M_g^{source} -> M_g^{target}` forgetting one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForgetMap {
    source: PointSet,
    target: PointSet,
    forgotten: Point,
}

impl ForgetMap {
    pub fn new(source: PointSet, forgotten: Point) -> Result<Self> {
        source.require(forgotten)?;
        Ok(ForgetMap {
            target: source.without(forgotten),
            source,
            forgotten,
        })
    }

    /// Forgets the star point.
    pub fn star(target: PointSet) -> Self {
        ForgetMap {
            source: target.with_star(),
            target,
            forgotten: Point::STAR,
        }
    }

    pub fn source(&self) -> &PointSet {
        &self.source
    }

    pub fn target(&self) -> &PointSet {
        &self.target
    }

    pub fn forgotten(&self) -> Point {
        self.forgotten
    }

    pub fn push<S: Scalar>(&self, a: &TautClass<S>) -> Result<TautClass<S>> {
        if a.points() != &self.source {
            return Err(Error::PointSetMismatch {
                left: a.points().to_string(),
                right: self.source.to_string(),
            });
        }
        push_forget_point(a, self.forgotten)
    }

    pub fn pull<S: Scalar>(&self, b: &TautClass<S>) -> Result<TautClass<S>> {
        b.lift(&self.source)
    }
}

fn forget_monomial(m: &TautMonomial, f: Point) -> Option<(KappaFold, TautMonomial)> {
    let mut blocks: Vec<Vec<Point>> = m.blocks().to_vec();
    let mut psis: BTreeMap<Point, CharClassMonomial> = m.psis().clone();
    let mut kappas: Vec<CharClassMonomial> = m.kappas().to_vec();

    if let Some(pos) = blocks.iter().position(|b| b.contains(&f)) {
        let mut block = blocks.remove(pos);
        let old_rep = block[0];
        block.retain(|p| *p != f);
        if let Some(c) = psis.remove(&old_rep) {
            psis.insert(block[0], c);
        }
        if block.len() >= 2 {
            blocks.push(block);
        }
        return Some((
            KappaFold::Keep,
            TautMonomial::from_parts_unchecked(blocks, psis, kappas),
        ));
    }

    let c = psis.remove(&f)?;
    let fold = c.kappa_fold();
    match fold {
        KappaFold::Zero => None,
        KappaFold::EulerCharacteristic => Some((
            fold,
            TautMonomial::from_parts_unchecked(blocks, psis, kappas),
        )),
        KappaFold::Keep => {
            kappas.push(c);
            Some((
                fold,
                TautMonomial::from_parts_unchecked(blocks, psis, kappas),
            ))
        }
    }
}

/// Pushforward forgetting an arbitrary point `f` of the class's point set.
pub fn push_forget_point<S: Scalar>(a: &TautClass<S>, f: Point) -> Result<TautClass<S>> {
    a.points().require(f)?;
    let params = *a.params();
    let chi = S::from_int(params.chi());
    let mut out = TautClass::zero(params, a.points().without(f));
    for (m, c) in a.terms() {
        if let Some((fold, image)) = forget_monomial(m, f) {
            let coeff = match fold {
                KappaFold::EulerCharacteristic => c.clone() * chi.clone(),
                _ => c.clone(),
            };
            out.add_term(image, coeff);
        }
    }
    Ok(out)
}

/// Pushforward forgetting the star point.
pub fn push_forget<S: Scalar>(a: &TautClass<S>) -> Result<TautClass<S>> {
    push_forget_point(a, Point::STAR)
}

/// Pushforward to `M_g^{target}` forgetting the other points, largest first.
pub fn push_down<S: Scalar>(a: &TautClass<S>, target: &PointSet) -> Result<TautClass<S>> {
    if !target.is_subset(a.points()) {
        return Err(Error::NotASubset {
            from: target.to_string(),
            to: a.points().to_string(),
        });
    }
    let order: Vec<Point> = a.points().iter().rev().filter(|p| !target.contains(*p)).collect();
    push_in_order(a, &order)
}

/// Forgets the listed points in the given order.
pub fn push_in_order<S: Scalar>(a: &TautClass<S>, order: &[Point]) -> Result<TautClass<S>> {
    let mut current = a.clone();
    for &p in order {
        current = push_forget_point(&current, p)?;
    }
    Ok(current)
}

/// Reads a class on the empty point set as a kappa polynomial.
pub fn base_to_kappa<S: Scalar>(a: &TautClass<S>) -> KappaPolynomial<S> {
    debug_assert!(a.points().is_empty());
    let mut out = KappaPolynomial::zero(*a.params());
    for (m, c) in a.terms() {
        debug_assert!(m.blocks().is_empty() && m.psis().is_empty());
        out.add_term(KappaMonomial::new(m.kappas().to_vec()), c.clone());
    }
    out
}

/// Pushforward to the moduli space without marked points.
pub fn push_to_base<S: Scalar>(a: &TautClass<S>) -> KappaPolynomial<S> {
    let base = push_down(a, &PointSet::empty()).expect("the empty set is a subset");
    base_to_kappa(&base)
}

/// Pushforward to the base forgetting points in the given order, which
/// must list every point exactly once.
pub fn push_to_base_in_order<S: Scalar>(a: &TautClass<S>, order: &[Point]) -> Result<KappaPolynomial<S>> {
    let listed = PointSet::from_points(order.iter().copied());
    if &listed != a.points() || listed.len() != order.len() {
        return Err(Error::NotABijection);
    }
    Ok(base_to_kappa(&push_in_order(a, order)?))
}

/// Lifts a kappa polynomial to a class on the given point set.
pub fn kappa_to_class<S: Scalar>(p: &KappaPolynomial<S>, points: &PointSet) -> TautClass<S> {
    let params = *p.params();
    let mut out = TautClass::zero(params, points.clone());
    for (m, c) in p.terms() {
        out.add_term(
            TautMonomial::from_parts_unchecked(Vec::new(), BTreeMap::new(), m.factors().to_vec()),
            c.clone(),
        );
    }
    out
}

/// `a - (1/chi) psi(e)_f lift(push_f a)`, the unique correction of `a` by a
/// multiple of the vertical Euler class whose pushforward vanishes.
pub fn center_at<S: Scalar>(a: &TautClass<S>, f: Point) -> Result<TautClass<S>> {
    let params = *a.params();
    let pushed = push_forget_point(a, f)?;
    if pushed.is_zero() {
        return Ok(a.clone());
    }
    let euler = TautClass::psi(
        params,
        a.points().clone(),
        CharClassMonomial::euler_power(&params, 1),
        f,
    )?;
    let correction = &euler * &pushed.lift(a.points())?;
    let inv_chi = S::one() / S::from_int(params.chi());
    Ok(a - &correction.scale(&inv_chi))
}

/// Centering with respect to the star point.
pub fn center<S: Scalar>(a: &TautClass<S>) -> Result<TautClass<S>> {
    center_at(a, Point::STAR)
}

/// `push(a * lift b) == push(a) * b`, with `a` on `I + {*}` and `b` on `I`.
pub fn push_pull_holds<S: Scalar>(a: &TautClass<S>, b: &TautClass<S>) -> Result<bool> {
    let lifted = b.lift(a.points())?;
    let left = push_forget(&a.checked_mul(&lifted)?)?;
    let right = push_forget(a)?.checked_mul(b)?;
    Ok(left == right)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charclass::{make, Generator, RingParams};
    use crate::tautmono::RawMonomial;
    use crate::Q;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn section_and_unit() {
        let params = RingParams::new(3, 3).unwrap();
        let i = PointSet::first_n(1);
        let pts = i.with_star();
        let pi = TautClass::<Q>::pi(params, pts.clone(), &[Point(1), Point::STAR]).unwrap();
        assert_eq!(push_forget(&pi).unwrap(), TautClass::one(params, i.clone()));
        let one = TautClass::<Q>::one(params, pts.clone());
        assert!(push_forget(&one).unwrap().is_zero());
        let e = CharClassMonomial::euler_power(&params, 1);
        let psi_e = TautClass::<Q>::psi(params, pts, e, Point::STAR).unwrap();
        assert_eq!(
            push_forget(&psi_e).unwrap(),
            TautClass::scalar(params, i, q(-4))
        );
    }

    #[test]
    fn worked_example() {
        let params = RingParams::new(3, 3).unwrap();
        let (i, j, s) = (Point(1), Point(2), Point::STAR);
        let pts = PointSet::from_points([i, j, s]);
        let c = make(&params, &[(Generator::Pontryagin(1), 1), (Generator::Euler, 1)]).unwrap();
        let kappa = make(&params, &[(Generator::Pontryagin(2), 1)]).unwrap();
        let raw = RawMonomial {
            coeff: q(1),
            kappas: vec![kappa.clone()],
            psis: vec![(s, c.clone())],
            pis: vec![vec![i, s], vec![i, s], vec![i, s], vec![j, s], vec![j, s]],
        };
        let a = TautClass::from_raw(params, pts.clone(), raw).unwrap();
        let e = CharClassMonomial::euler_power(&params, 1);
        let expected_raw = RawMonomial {
            coeff: q(1),
            kappas: vec![kappa],
            psis: vec![(i, e.pow(2)), (i, c)],
            pis: vec![vec![i, j], vec![i, j]],
        };
        let expected = TautClass::from_raw(params, pts.without(s), expected_raw).unwrap();
        assert_eq!(push_forget(&a).unwrap(), expected);
    }

    #[test]
    fn base_pushforward() {
        let params = RingParams::new(4, 1).unwrap();
        let pts = PointSet::first_n(2);
        let e2 = CharClassMonomial::euler_power(&params, 2);
        let raw = RawMonomial {
            coeff: q(1),
            kappas: vec![],
            psis: vec![(Point(1), e2.clone())],
            pis: vec![vec![Point(1), Point(2)]],
        };
        let a = TautClass::from_raw(params, pts, raw).unwrap();
        let expected = KappaPolynomial::kappa(params, &e2);
        assert_eq!(push_to_base(&a), expected);
        assert_eq!(
            push_to_base_in_order(&a, &[Point(1), Point(2)]).unwrap(),
            expected
        );
        assert!(push_to_base_in_order(&a, &[Point(1)]).is_err());
    }

    #[test]
    fn centering_kills_pushforward() {
        let params = RingParams::new(3, 3).unwrap();
        let pts = PointSet::first_n(1).with_star();
        let p2 = make(&params, &[(Generator::Pontryagin(2), 1)]).unwrap();
        let a = TautClass::<Q>::psi(params, pts.clone(), p2.clone(), Point::STAR).unwrap();
        let centered = center(&a).unwrap();
        assert!(push_forget(&centered).unwrap().is_zero());
        // psi(p2)_* - psi(e)_* kappa_{p2} / chi
        let e = CharClassMonomial::euler_power(&params, 1);
        let expected = &a
            - &(&TautClass::psi(params, pts.clone(), e, Point::STAR).unwrap()
                * &TautClass::kappa(params, pts.clone(), p2))
                .scale(&(q(1) / q(-4)));
        assert_eq!(centered, expected);

        let p1 = make(&params, &[(Generator::Pontryagin(1), 1)]).unwrap();
        let low = TautClass::<Q>::psi(params, pts, p1, Point::STAR).unwrap();
        assert_eq!(center(&low).unwrap(), low);
    }

    #[test]
    fn forget_map_checks_source() {
        let params = RingParams::new(2, 1).unwrap();
        let map = ForgetMap::star(PointSet::first_n(1));
        let wrong = TautClass::<Q>::one(params, PointSet::first_n(2));
        assert!(map.push(&wrong).is_err());
        assert!(ForgetMap::new(PointSet::first_n(2), Point(3)).is_err());
        let ok = ForgetMap::new(PointSet::first_n(2), Point(1)).unwrap();
        assert_eq!(ok.target(), &PointSet::from_labels([2]));
    }
}
