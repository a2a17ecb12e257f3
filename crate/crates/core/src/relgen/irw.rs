//! The ideal generated by pushed-down powers of `Omega_A`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::charclass::{self, BasisKind, CharClassMonomial, RingParams};
use crate::error::Result;
use crate::kappa_poly::KappaPolynomial;
use crate::pushforward::push_to_base;
use crate::tautmono::{normalize, Point, PointSet, RawMonomial, TautClass, TautMonomial};
use crate::Q;

use super::{omega_a, Provenance, RelationRecord, Schema};

/// Enumeration bounds. Weights are degrees divided by `2d`, which makes the
/// search identical for every odd `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrwConfig {
    pub g: u32,
    pub d: u32,
    pub n_max: u32,
    pub a_bound: i64,
    /// Largest multiplier weight.
    pub multiplier_weight_max: u32,
    /// Keep only relations of at most this weight.
    pub max_relation_weight: Option<u32>,
    /// Also multiply by psi classes involving Pontryagin classes. The result
    /// is then no longer confined to the ideal generated by `Omega_A` powers
    /// alone, and weights are rounded up.
    pub pontryagin_multipliers: bool,
}

impl IrwConfig {
    pub fn new(g: u32, d: u32, n_max: u32, a_bound: i64) -> Self {
        IrwConfig {
            g,
            d,
            n_max,
            a_bound,
            multiplier_weight_max: 0,
            max_relation_weight: None,
            pontryagin_multipliers: false,
        }
    }
}

/// A multiplier: intersection classes and psi classes, no kappa factors.
pub type Multiplier = TautMonomial;

/// Set partitions of `0..n` as restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(current.clone());
            return;
        }
        for b in 0..current.len() {
            current[b].push(i);
            rec(i + 1, n, current, out);
            current[b].pop();
        }
        current.push(vec![i]);
        rec(i + 1, n, current, out);
        current.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

/// Distributions of at most `budget` into `slots` ordered parts.
fn compositions(slots: usize, budget: u32) -> Vec<Vec<u32>> {
    fn rec(slot: usize, left: u32, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slot == current.len() {
            out.push(current.clone());
            return;
        }
        for k in 0..=left {
            current[slot] = k;
            rec(slot + 1, left - k, current, out);
        }
        current[slot] = 0;
    }
    let mut out = Vec::new();
    rec(0, budget, &mut vec![0; slots], &mut out);
    out
}

/// Multiplier monomials on `{1..n}` of weight at most `weight_max`: a set
/// partition (each block an intersection class) and a psi class at each
/// part's minimal point. Without Pontryagin classes the psi classes are
/// Euler powers. Returns `(weight, monomial)` pairs, sorted.
pub fn multipliers(
    params: &RingParams,
    n: u32,
    weight_max: u32,
    pontryagin: bool,
) -> Vec<(u32, Multiplier)> {
    let fiber = params.fiber_degree();
    let points = PointSet::first_n(n);
    let mut out: BTreeSet<(u32, Multiplier)> = BTreeSet::new();
    let psi_choices: Vec<Vec<CharClassMonomial>> = (0..=weight_max)
        .map(|w| {
            if pontryagin {
                // every monomial whose degree rounds up to weight w
                let lo = if w == 0 { 0 } else { (w - 1) * fiber + 1 };
                charclass::enumerate_range(params, lo, w * fiber, BasisKind::Large)
            } else {
                vec![CharClassMonomial::euler_power(params, w)]
            }
        })
        .collect();
    for partition in set_partitions(n as usize) {
        let block_weight: u32 = partition.iter().map(|b| b.len() as u32 - 1).sum();
        if block_weight > weight_max {
            continue;
        }
        let pis: Vec<Vec<Point>> = partition
            .iter()
            .filter(|b| b.len() >= 2)
            .map(|b| b.iter().map(|&i| Point(i as u32 + 1)).collect())
            .collect();
        let reps: Vec<Point> = partition.iter().map(|b| Point(b[0] as u32 + 1)).collect();
        for weights in compositions(reps.len(), weight_max - block_weight) {
            let mut partial: Vec<Vec<(Point, CharClassMonomial)>> = vec![Vec::new()];
            for (rep, &w) in reps.iter().zip(&weights) {
                let mut next = Vec::new();
                for psis in &partial {
                    for c in &psi_choices[w as usize] {
                        let mut psis = psis.clone();
                        psis.push((*rep, c.clone()));
                        next.push(psis);
                    }
                }
                partial = next;
            }
            for psis in partial {
                let raw = RawMonomial {
                    coeff: Q::from_integer(1.into()),
                    kappas: Vec::new(),
                    psis,
                    pis: pis.clone(),
                };
                if let Some((_, m)) = normalize(params, &points, raw).expect("valid multiplier") {
                    let weight = block_weight + weights.iter().sum::<u32>();
                    out.insert((weight, m));
                }
            }
        }
    }
    out.into_iter().collect()
}

/// Sign representatives of the nonzero vectors in `[-bound, bound]^n`;
/// `Omega_A` is quadratic in `A`, so `A` and `-A` agree.
fn vectors(n: u32, bound: i64) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |x| {
                    let mut v = v.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out.retain(|v| v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0));
    out
}

/// Relations `push_to_base(Omega_A^{g+1} * m)` for `n <= n_max`,
/// `|A_i| <= a_bound` and multipliers `m` within the weight bound.
/// Duplicates (after content normalization) keep their first provenance in
/// the enumeration order `(n, A, multiplier)`.
pub fn generate_irw(config: &IrwConfig) -> Result<Vec<RelationRecord>> {
    let params = RingParams::new(config.g, config.d)?;
    let exponent = params.g() + 1;
    let mut tasks: Vec<(u32, Vec<i64>)> = Vec::new();
    for n in 1..=config.n_max {
        for a in vectors(n, config.a_bound) {
            tasks.push((n, a));
        }
    }
    let multiplier_table: BTreeMap<u32, Vec<(u32, Multiplier)>> = (1..=config.n_max)
        .map(|n| {
            (
                n,
                multipliers(
                    &params,
                    n,
                    config.multiplier_weight_max,
                    config.pontryagin_multipliers,
                ),
            )
        })
        .collect();

    let results: Vec<Result<Vec<RelationRecord>>> = tasks
        .par_iter()
        .map(|(n, a)| {
            let wanted: Vec<&(u32, Multiplier)> = multiplier_table[n]
                .iter()
                .filter(|(w, _)| {
                    let weight = (exponent + w) as i64 - *n as i64;
                    weight >= 0
                        && config
                            .max_relation_weight
                            .is_none_or(|max| weight <= max as i64)
                })
                .collect();
            if wanted.is_empty() {
                return Ok(Vec::new());
            }
            let power = omega_a::<Q>(params, a)?.expand();
            let points = PointSet::first_n(*n);
            let mut records = Vec::new();
            for (_, m) in wanted {
                let mclass = TautClass::from_raw(params, points.clone(), m.to_raw(Q::from_integer(1.into())))?;
                let poly: KappaPolynomial<Q> = push_to_base(&(&power * &mclass));
                if poly.is_zero() {
                    continue;
                }
                records.push(RelationRecord::new(
                    Schema::OmegaPower,
                    params,
                    Provenance {
                        n: Some(*n),
                        a: Some(a.clone()),
                        multiplier: Some(m.clone()),
                        exponent: Some(exponent),
                        ..Provenance::default()
                    },
                    &poly,
                ));
            }
            Ok(records)
        })
        .collect();

    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for batch in results {
        for record in batch? {
            if seen.insert(record.poly.clone()) {
                out.push(record);
            }
        }
    }
    log::info!(
        "generated {} distinct relations from {} vectors",
        out.len(),
        tasks.len()
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_are_bell_numbers() {
        let counts: Vec<usize> = (0..6).map(|n| set_partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn multiplier_weights() {
        let params = RingParams::new(2, 1).unwrap();
        let ms = multipliers(&params, 2, 1, false);
        // 1, psi(e)_1, psi(e)_2, pi_12
        assert_eq!(ms.len(), 4);
        assert_eq!(ms.iter().filter(|(w, _)| *w == 1).count(), 3);
        for (w, m) in &ms {
            assert_eq!(m.degree(&params), w * params.fiber_degree());
        }
    }

    #[test]
    fn sign_representatives() {
        let vs = vectors(2, 1);
        assert_eq!(vs, vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]);
        assert!(vectors(3, 0).is_empty());
    }

    #[test]
    fn zero_bound_gives_nothing() {
        let config = IrwConfig::new(4, 1, 3, 0);
        assert!(generate_irw(&config).unwrap().is_empty());
    }
}
