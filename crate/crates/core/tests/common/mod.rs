//! Independent reference implementations used by the integration tests.
//!
//! None of these call the engine's normal form, merge law or pushforward;
//! they work on plain exponent vectors and point sets.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use tautring::kappa_poly::KappaPolynomial;
use tautring::tautmono::{normalize, RawMonomial};
use tautring::{CharClassMonomial, Point, PointSet, RingParams, TautClass, TautMonomial, Q};

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Cohomological degree of an exponent vector `[a0 (e), a1 (p1), ...]`.
pub fn vec_degree(d: usize, exps: &[u32]) -> u32 {
    let mut deg = 2 * d as u32 * exps[0];
    for (i, &a) in exps.iter().enumerate().skip(1) {
        deg += 4 * i as u32 * a;
    }
    deg
}

fn add_vec(acc: &mut [u32], other: &[u32]) {
    for (a, b) in acc.iter_mut().zip(other) {
        *a += b;
    }
}

/// A monomial in oracle form: sorted blocks, psi vectors, sorted kappa vectors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OracleForm {
    pub blocks: Vec<Vec<Point>>,
    pub psis: BTreeMap<Point, Vec<u32>>,
    pub kappas: Vec<Vec<u32>>,
}

impl OracleForm {
    pub fn from_engine(m: &TautMonomial) -> Self {
        let mut kappas: Vec<Vec<u32>> = m.kappas().iter().map(|c| c.exponents().to_vec()).collect();
        kappas.sort();
        let mut blocks: Vec<Vec<Point>> = m
            .blocks()
            .iter()
            .map(|b| {
                let mut b = b.clone();
                b.sort();
                b
            })
            .collect();
        blocks.sort();
        OracleForm {
            blocks,
            psis: m.psis().iter().map(|(p, c)| (*p, c.exponents().to_vec())).collect(),
            kappas,
        }
    }
}

/// Kappa folding by hand: `kappa_c` of degree below `2d` vanishes, `kappa_e`
/// is `chi`, anything else stays.
fn fold_kappa(params: &RingParams, exps: &[u32]) -> Option<Option<Q>> {
    let d = params.d() as usize;
    let deg = vec_degree(d, exps);
    if deg < 2 * d as u32 {
        return None;
    }
    let is_e = exps[0] == 1 && exps[1..].iter().all(|&a| a == 0);
    if is_e {
        Some(Some(q(params.chi())))
    } else {
        Some(None)
    }
}

/// Normal form by random-order rewriting with the three local rules:
///
/// * two intersection classes meeting in one point merge into their union;
/// * if they meet in two or more points `a != b`, then
///   `pi_S pi_T = pi_S pi_{T - b} psi(e)_a`;
/// * a psi class may move between any two points of one intersection class.
///
/// Psi classes are also shuffled at random while rewriting. At the end
/// every psi in a block is collected on the block's minimal point.
pub fn oracle_normalize<R: Rng>(
    params: &RingParams,
    raw: &RawMonomial<Q>,
    rng: &mut R,
) -> Option<(Q, OracleForm)> {
    let d = params.d() as usize;
    let mut coeff = raw.coeff.clone();
    let mut kappas = Vec::new();
    for c in &raw.kappas {
        match fold_kappa(params, c.exponents()) {
            None => return None,
            Some(Some(s)) => coeff *= s,
            Some(None) => kappas.push(c.exponents().to_vec()),
        }
    }
    if coeff.is_zero() {
        return None;
    }
    let mut psis: BTreeMap<Point, Vec<u32>> = BTreeMap::new();
    for (p, c) in &raw.psis {
        add_vec(psis.entry(*p).or_insert_with(|| vec![0; d]), c.exponents());
    }
    let mut pis: Vec<BTreeSet<Point>> = raw.pis.iter().map(|s| s.iter().copied().collect()).collect();

    loop {
        if rng.gen_bool(0.5) {
            shuffle_psi(&pis, &mut psis, rng);
        }
        let mut overlapping = Vec::new();
        for i in 0..pis.len() {
            for j in 0..pis.len() {
                if i != j && !pis[i].is_disjoint(&pis[j]) {
                    overlapping.push((i, j));
                }
            }
        }
        let Some(&(i, j)) = overlapping.choose(rng) else { break };
        let shared: Vec<Point> = pis[i].intersection(&pis[j]).copied().collect();
        if shared.len() == 1 {
            let t = pis[j].clone();
            pis[i].extend(t);
            pis.remove(j);
        } else {
            let b = *shared.choose(rng).unwrap();
            let a = *shared.iter().filter(|&&x| x != b).collect::<Vec<_>>().choose(rng).copied().unwrap();
            pis[j].remove(&b);
            psis.entry(a).or_insert_with(|| vec![0; d])[0] += 1;
            if pis[j].len() == 1 {
                pis.remove(j);
            }
        }
    }

    // blocks are now disjoint
    let mut blocks: Vec<Vec<Point>> = pis.iter().map(|s| s.iter().copied().collect()).collect();
    blocks.sort();
    let mut collected: BTreeMap<Point, Vec<u32>> = BTreeMap::new();
    for (p, v) in psis {
        let target = blocks.iter().find(|b| b.contains(&p)).map(|b| b[0]).unwrap_or(p);
        add_vec(collected.entry(target).or_insert_with(|| vec![0; d]), &v);
    }
    collected.retain(|_, v| v.iter().any(|&a| a > 0));
    kappas.sort();
    Some((
        coeff,
        OracleForm {
            blocks,
            psis: collected,
            kappas,
        },
    ))
}

fn shuffle_psi<R: Rng>(pis: &[BTreeSet<Point>], psis: &mut BTreeMap<Point, Vec<u32>>, rng: &mut R) {
    let movable: Vec<(Point, &BTreeSet<Point>)> = psis
        .keys()
        .flat_map(|p| pis.iter().filter(move |s| s.contains(p)).map(move |s| (*p, s)))
        .collect();
    if let Some((from, set)) = movable.choose(rng) {
        let to = *set.iter().collect::<Vec<_>>().choose(rng).unwrap();
        if to != from {
            let v = psis.remove(from).unwrap();
            let d = v.len();
            add_vec(psis.entry(*to).or_insert_with(|| vec![0; d]), &v);
        }
    }
}

/// Engine normal form in oracle shape.
pub fn engine_form(params: &RingParams, points: &PointSet, raw: RawMonomial<Q>) -> Option<(Q, OracleForm)> {
    normalize(params, points, raw)
        .expect("valid raw monomial")
        .map(|(c, m)| (c, OracleForm::from_engine(&m)))
}

/// Forgetting `f` from an oracle-form monomial, following the integration
/// rules by hand. Returns the coefficient factor and new form, or `None`.
pub fn oracle_push(params: &RingParams, coeff: &Q, form: &OracleForm, f: Point) -> Option<(Q, OracleForm)> {
    let d = params.d() as usize;
    let mut out = form.clone();
    let mut coeff = coeff.clone();
    if let Some(pos) = out.blocks.iter().position(|b| b.contains(&f)) {
        let mut block = out.blocks.remove(pos);
        block.retain(|&p| p != f);
        if let Some(v) = out.psis.remove(&f) {
            // psi at f moves to any remaining point of the block
            add_vec(out.psis.entry(block[0]).or_insert_with(|| vec![0; d]), &v);
        }
        if block.len() >= 2 {
            out.blocks.push(block);
            out.blocks.sort();
        }
        return Some((coeff, out));
    }
    let v = out.psis.remove(&f).unwrap_or_else(|| vec![0; d]);
    match fold_kappa(params, &v) {
        None => None,
        Some(Some(s)) => {
            coeff *= s;
            Some((coeff, out))
        }
        Some(None) => {
            out.kappas.push(v);
            out.kappas.sort();
            Some((coeff, out))
        }
    }
}

/// Pushes every term of a class forward with [`oracle_push`] and sums.
pub fn oracle_push_class(a: &TautClass<Q>, f: Point) -> BTreeMap<OracleForm, Q> {
    let mut out: BTreeMap<OracleForm, Q> = BTreeMap::new();
    for (m, c) in a.terms() {
        if let Some((c2, form)) = oracle_push(a.params(), c, &OracleForm::from_engine(m), f) {
            *out.entry(form).or_insert_with(Q::zero) += c2;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

pub fn class_forms(a: &TautClass<Q>) -> BTreeMap<OracleForm, Q> {
    a.terms()
        .iter()
        .map(|(m, c)| (OracleForm::from_engine(m), c.clone()))
        .collect()
}

/// All exponent vectors of length `d` solving the degree equation, by
/// scanning the full box `0..=D/deg(slot)` in every slot.
pub fn brute_force_monomials(d: usize, degree: u32) -> BTreeSet<Vec<u32>> {
    let slot = |i: usize| if i == 0 { 2 * d as u32 } else { 4 * i as u32 };
    let bounds: Vec<u32> = (0..d).map(|i| degree / slot(i)).collect();
    let mut out = BTreeSet::new();
    let mut cur = vec![0u32; d];
    loop {
        if vec_degree(d, &cur) == degree {
            out.insert(cur.clone());
        }
        let mut i = 0;
        loop {
            if i == d {
                return out;
            }
            if cur[i] < bounds[i] {
                cur[i] += 1;
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Polynomials in `kappa_i = kappa_{e^{i+1}}` keyed by sorted index lists.
pub type IndexPoly = BTreeMap<Vec<u32>, Q>;

fn ip_mul(a: &IndexPoly, b: &IndexPoly) -> IndexPoly {
    let mut out = IndexPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m: Vec<u32> = ma.iter().chain(mb).copied().collect();
            m.sort();
            *out.entry(m).or_insert_with(Q::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `kappa_{e^j}` with `kappa_{e^0} = 0` and `kappa_{e^1} = chi`.
fn kappa_e_power(chi: i64, j: u32) -> IndexPoly {
    match j {
        0 => IndexPoly::new(),
        1 => [(vec![], q(chi))].into_iter().collect(),
        _ => [(vec![j - 1], q(1))].into_iter().collect(),
    }
}

/// `sum_i C(g+1, i) kappa_{e^{i+k}} (kappa_{e^2} / ((chi-2) chi))^{g+1-i}`
/// expanded term by term.
pub fn binomial_oracle(g: u32, k: u32) -> IndexPoly {
    let chi = 2 - 2 * g as i64;
    let scale = Q::one() / q((chi - 2) * chi);
    let mut out = IndexPoly::new();
    for i in 0..=g + 1 {
        let mut term = kappa_e_power(chi, i + k);
        let c = Q::from_integer(binom(g + 1, i)) * num_traits::pow(scale.clone(), (g + 1 - i) as usize);
        for _ in 0..(g + 1 - i) {
            term = ip_mul(&term, &[(vec![1], q(1))].into_iter().collect());
        }
        for (m, v) in term {
            *out.entry(m).or_insert_with(Q::zero) += v * c.clone();
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// Scales so that the coefficient of the greatest monomial is one.
pub fn monic(p: &IndexPoly) -> IndexPoly {
    match p.iter().next_back() {
        None => IndexPoly::new(),
        Some((_, lead)) => {
            let lead = lead.clone();
            p.iter().map(|(m, c)| (m.clone(), c / &lead)).collect()
        }
    }
}

pub fn index_form(p: &KappaPolynomial<Q>) -> IndexPoly {
    p.euler_index_form().expect("no Pontryagin classes")
}

pub fn index_poly(terms: &[(&[u32], Q)]) -> IndexPoly {
    let mut out = IndexPoly::new();
    for (m, c) in terms {
        let mut m = m.to_vec();
        m.sort();
        *out.entry(m).or_insert_with(Q::zero) += c.clone();
    }
    out
}

/// Random product of intersection classes, psi and kappa factors on
/// `points`, with exponents at most 3.
pub fn random_pi_product<R: Rng>(
    params: &RingParams,
    points: &PointSet,
    rng: &mut R,
    max_pis: usize,
) -> RawMonomial<Q> {
    let labels: Vec<Point> = points.iter().collect();
    let d = params.d() as usize;
    let mut raw = RawMonomial::scalar(q(rng.gen_range(1..=4)));
    let random_vec = |rng: &mut R| {
        let mut v = vec![0u32; d];
        let slot = rng.gen_range(0..d);
        v[slot] = rng.gen_range(1..=3);
        if rng.gen_bool(0.3) {
            let s2 = rng.gen_range(0..d);
            v[s2] = rng.gen_range(0..=3);
        }
        CharClassMonomial::from_exponents(params, v).unwrap()
    };
    for _ in 0..rng.gen_range(1..=max_pis) {
        let size = rng.gen_range(2..=labels.len().min(4));
        let mut pts = labels.clone();
        pts.shuffle(rng);
        pts.truncate(size);
        raw.pis.push(pts);
    }
    for _ in 0..rng.gen_range(0..=2) {
        let p = *labels.choose(rng).unwrap();
        raw.psis.push((p, random_vec(rng)));
    }
    if rng.gen_bool(0.3) {
        raw.kappas.push(random_vec(rng));
    }
    raw
}
