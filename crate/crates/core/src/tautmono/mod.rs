//! Tautological monomials on `M_g^I` and their canonical form.
//!
//! A monomial in the fundamental classes (kappa classes pulled back from the
//! base, psi classes at marked points, intersection classes `pi_S`) is stored
//! as a coefficient-free [`TautMonomial`]:
//!
//! * intersection classes are merged into pairwise disjoint *blocks*;
//! * every psi factor of a block lives on the block's minimal point;
//! * kappa factors of degree `<= 2d` are folded away.
//!
//! The merge law: a product `pi_{S_1} ... pi_{S_m}` whose subsets are
//! connected through shared points becomes `pi_B * psi(e)^k` on the union
//! `B`, where `k = sum(|S_j| - 1) - (|B| - 1)` counts the redundant
//! identifications. Two subsets sharing a single point merge for free; each
//! redundant identification squares an intersection class, which contributes
//! one Euler class at the coincidence point.

mod class;
mod points;

pub use class::TautClass;
pub use points::{Point, PointSet};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::charclass::{CharClassMonomial, KappaFold, RingParams};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Canonical coefficient-free monomial. Field order fixes the term order:
/// blocks first, then psi exponent vectors, then the sorted kappa multiset.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TautMonomial {
    blocks: Vec<Vec<Point>>,
    psis: BTreeMap<Point, CharClassMonomial>,
    kappas: Vec<CharClassMonomial>,
}

/// An unnormalized product of fundamental classes.
#[derive(Clone, Debug)]
pub struct RawMonomial<S> {
    pub coeff: S,
    pub kappas: Vec<CharClassMonomial>,
    pub psis: Vec<(Point, CharClassMonomial)>,
    pub pis: Vec<Vec<Point>>,
}

impl<S: Scalar> RawMonomial<S> {
    pub fn scalar(coeff: S) -> Self {
        RawMonomial {
            coeff,
            kappas: Vec::new(),
            psis: Vec::new(),
            pis: Vec::new(),
        }
    }
}

impl TautMonomial {
    pub fn one() -> Self {
        TautMonomial {
            blocks: Vec::new(),
            psis: BTreeMap::new(),
            kappas: Vec::new(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.blocks.is_empty() && self.psis.is_empty() && self.kappas.is_empty()
    }

    /// Blocks, each sorted, ordered by minimal element.
    pub fn blocks(&self) -> &[Vec<Point>] {
        &self.blocks
    }

    /// Non-unit psi factors, keyed by point.
    pub fn psis(&self) -> &BTreeMap<Point, CharClassMonomial> {
        &self.psis
    }

    /// Kappa factors, sorted; each has degree `> 2d`.
    pub fn kappas(&self) -> &[CharClassMonomial] {
        &self.kappas
    }

    /// Points that appear in a block or carry a psi factor.
    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.blocks
            .iter()
            .flatten()
            .copied()
            .chain(self.psis.keys().copied())
    }

    pub fn block_of(&self, p: Point) -> Option<&[Point]> {
        self.blocks.iter().find(|b| b.contains(&p)).map(|b| b.as_slice())
    }

    pub fn degree(&self, params: &RingParams) -> u32 {
        let fiber = params.fiber_degree();
        let kappa: u32 = self.kappas.iter().map(|c| c.degree() - fiber).sum();
        let psi: u32 = self.psis.values().map(|c| c.degree()).sum();
        let pi: u32 = self
            .blocks
            .iter()
            .map(|b| fiber * (b.len() as u32 - 1))
            .sum();
        kappa + psi + pi
    }

    pub fn has_pontryagin(&self) -> bool {
        self.psis.values().any(|c| c.has_pontryagin())
            || self.kappas.iter().any(|c| c.has_pontryagin())
    }

    /// Re-expresses this monomial as raw data with the given coefficient.
    pub fn to_raw<S: Scalar>(&self, coeff: S) -> RawMonomial<S> {
        RawMonomial {
            coeff,
            kappas: self.kappas.clone(),
            psis: self.psis.iter().map(|(p, c)| (*p, c.clone())).collect(),
            pis: self.blocks.clone(),
        }
    }

    /// Product of two canonical monomials as raw data.
    pub(crate) fn product_raw<S: Scalar>(&self, other: &Self, coeff: S) -> RawMonomial<S> {
        let mut raw = self.to_raw(coeff);
        raw.kappas.extend(other.kappas.iter().cloned());
        raw.psis
            .extend(other.psis.iter().map(|(p, c)| (*p, c.clone())));
        raw.pis.extend(other.blocks.iter().cloned());
        raw
    }

    /// Builds from already-canonical parts. Only for callers that preserve
    /// the invariants (pushforward removes a point without merging anything).
    pub(crate) fn from_parts_unchecked(
        blocks: Vec<Vec<Point>>,
        psis: BTreeMap<Point, CharClassMonomial>,
        mut kappas: Vec<CharClassMonomial>,
    ) -> Self {
        kappas.sort();
        let mut blocks = blocks;
        blocks.sort();
        TautMonomial {
            blocks,
            psis,
            kappas,
        }
    }
}

/// Disjoint-set forest over a small index range.
struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Canonical form of a raw monomial, or `None` if it vanishes.
pub fn normalize<S: Scalar>(
    params: &RingParams,
    points: &PointSet,
    raw: RawMonomial<S>,
) -> Result<Option<(S, TautMonomial)>> {
    let RawMonomial {
        mut coeff,
        kappas,
        psis,
        pis,
    } = raw;

    for subset in &pis {
        let mut sorted = subset.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() < 2 || sorted.len() != subset.len() {
            return Err(Error::InvalidSubset(subset.clone()));
        }
        for p in subset {
            if !points.contains(*p) {
                return Err(Error::UnknownPoint(*p));
            }
        }
    }
    for (p, _) in &psis {
        if !points.contains(*p) {
            return Err(Error::UnknownPoint(*p));
        }
    }

    let mut kept = Vec::with_capacity(kappas.len());
    for c in kappas {
        match c.kappa_fold() {
            KappaFold::Zero => return Ok(None),
            KappaFold::EulerCharacteristic => coeff = coeff * S::from_int(params.chi()),
            KappaFold::Keep => kept.push(c),
        }
    }
    if coeff.is_zero() {
        return Ok(None);
    }

    // Merge intersection classes: connected components of the hypergraph.
    let labels: Vec<Point> = points.iter().collect();
    let index = |p: Point| labels.binary_search(&p).expect("validated point");
    let mut uf = UnionFind::new(labels.len());
    for subset in &pis {
        let first = index(subset[0]);
        for p in &subset[1..] {
            uf.union(first, index(*p));
        }
    }
    let mut components: BTreeMap<usize, Vec<Point>> = BTreeMap::new();
    let mut involved = vec![false; labels.len()];
    for subset in &pis {
        for p in subset {
            involved[index(*p)] = true;
        }
    }
    for (i, &p) in labels.iter().enumerate() {
        if involved[i] {
            let root = uf.find(i);
            components.entry(root).or_default().push(p);
        }
    }
    let mut excess: BTreeMap<usize, u32> = BTreeMap::new();
    for subset in &pis {
        let root = uf.find(index(subset[0]));
        *excess.entry(root).or_insert(0) += subset.len() as u32 - 1;
    }

    let mut representative = vec![None; labels.len()];
    let mut blocks = Vec::with_capacity(components.len());
    let mut new_psis: BTreeMap<Point, CharClassMonomial> = BTreeMap::new();
    for (root, block) in components {
        // labels are sorted, so block is sorted and block[0] is the minimum
        let rep = block[0];
        for p in &block {
            representative[index(*p)] = Some(rep);
        }
        let k = excess[&root] - (block.len() as u32 - 1);
        if k > 0 {
            new_psis.insert(rep, CharClassMonomial::euler_power(params, k));
        }
        blocks.push(block);
    }
    for (p, c) in psis {
        let target = representative[index(p)].unwrap_or(p);
        new_psis
            .entry(target)
            .and_modify(|acc| *acc = acc.mul(&c))
            .or_insert(c);
    }
    new_psis.retain(|_, c| !c.is_unit());

    kept.sort();
    blocks.sort();
    Ok(Some((
        coeff,
        TautMonomial {
            blocks,
            psis: new_psis,
            kappas: kept,
        },
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Q;

    fn setup() -> (RingParams, PointSet) {
        let params = RingParams::new(3, 3).unwrap();
        let points = PointSet::from_labels([1, 2, 3]).with_star();
        (params, points)
    }

    fn pt(i: u32) -> Point {
        Point(i)
    }

    fn raw(pis: Vec<Vec<Point>>, psis: Vec<(Point, CharClassMonomial)>) -> RawMonomial<Q> {
        RawMonomial {
            coeff: Q::from_int(1),
            kappas: vec![],
            psis,
            pis,
        }
    }

    #[test]
    fn single_point_overlap_merges() {
        let (params, points) = setup();
        let star = Point::STAR;
        let (c, m) = normalize(
            &params,
            &points,
            raw(vec![vec![pt(1), star], vec![pt(2), star]], vec![]),
        )
        .unwrap()
        .unwrap();
        assert_eq!(c, Q::from_int(1));
        assert_eq!(m.blocks(), &[vec![pt(1), pt(2), star]]);
        assert!(m.psis().is_empty());

        let (_, m2) = normalize(
            &params,
            &points,
            raw(vec![vec![pt(1), star], vec![pt(1), pt(2)]], vec![]),
        )
        .unwrap()
        .unwrap();
        assert_eq!(m, m2);
    }

    #[test]
    fn square_gives_euler_class() {
        let (params, points) = setup();
        let (_, m) = normalize(
            &params,
            &points,
            raw(vec![vec![pt(1), pt(2)], vec![pt(2), pt(1)]], vec![]),
        )
        .unwrap()
        .unwrap();
        assert_eq!(m.blocks(), &[vec![pt(1), pt(2)]]);
        assert_eq!(m.psis()[&pt(1)], CharClassMonomial::euler_power(&params, 1));
    }

    #[test]
    fn psi_moves_to_representative() {
        let (params, points) = setup();
        let c = CharClassMonomial::pontryagin_power(&params, 2, 1).unwrap();
        let (_, m) = normalize(
            &params,
            &points,
            raw(vec![vec![pt(1), pt(2)]], vec![(pt(2), c.clone())]),
        )
        .unwrap()
        .unwrap();
        assert_eq!(m.psis().len(), 1);
        assert_eq!(m.psis()[&pt(1)], c);
    }

    #[test]
    fn triangle_has_one_excess() {
        let (params, points) = setup();
        let (_, m) = normalize(
            &params,
            &points,
            raw(
                vec![vec![pt(1), pt(2)], vec![pt(1), pt(3)], vec![pt(1), pt(2)]],
                vec![],
            ),
        )
        .unwrap()
        .unwrap();
        assert_eq!(m.blocks(), &[vec![pt(1), pt(2), pt(3)]]);
        assert_eq!(m.psis()[&pt(1)], CharClassMonomial::euler_power(&params, 1));
        assert_eq!(m.degree(&params), 6 * 3);
    }

    #[test]
    fn errors() {
        let (params, points) = setup();
        assert_eq!(
            normalize(&params, &points, raw(vec![vec![pt(1)]], vec![])).unwrap_err(),
            Error::InvalidSubset(vec![pt(1)])
        );
        assert_eq!(
            normalize(&params, &points, raw(vec![vec![pt(1), pt(1)]], vec![])).unwrap_err(),
            Error::InvalidSubset(vec![pt(1), pt(1)])
        );
        assert_eq!(
            normalize(&params, &points, raw(vec![vec![pt(1), pt(9)]], vec![])).unwrap_err(),
            Error::UnknownPoint(pt(9))
        );
        let e = CharClassMonomial::euler_power(&params, 1);
        assert_eq!(
            normalize(&params, &points, raw(vec![], vec![(pt(7), e)])).unwrap_err(),
            Error::UnknownPoint(pt(7))
        );
    }

    #[test]
    fn kappa_folding_in_normal_form() {
        let (params, points) = setup();
        let mut r = raw(vec![], vec![]);
        r.kappas = vec![CharClassMonomial::euler_power(&params, 1)];
        let (c, m) = normalize(&params, &points, r).unwrap().unwrap();
        assert_eq!(c, Q::from_int(-4));
        assert!(m.is_one());

        let mut r = raw(vec![], vec![]);
        r.kappas = vec![CharClassMonomial::pontryagin_power(&params, 1, 1).unwrap()];
        assert!(normalize(&params, &points, r).unwrap().is_none());
    }
}
