//! Exact sparse elimination.
//!
//! [`Echelon`] keeps a reduced row echelon basis over any field and can
//! remember, for every basis row, which input rows it was built from.
//! [`fraction_free_echelon`] is a second elimination path over the integers
//! (cross-multiplication followed by content removal), used to cross-check
//! ranks computed over the rationals.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Scalar;
use crate::Q;

pub type SparseRow<S> = BTreeMap<usize, S>;

fn axpy<S: Scalar>(target: &mut SparseRow<S>, factor: &S, row: &SparseRow<S>) {
    for (col, v) in row {
        let add = factor.clone() * v.clone();
        match target.get_mut(col) {
            Some(existing) => {
                let sum = existing.clone() + add;
                if sum.is_zero() {
                    target.remove(col);
                } else {
                    *existing = sum;
                }
            }
            None => {
                if !add.is_zero() {
                    target.insert(*col, add);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
struct BasisRow<S> {
    entries: SparseRow<S>,
    /// Coefficients over input-row origins.
    combo: SparseRow<S>,
}

/// Reduced row echelon basis, built incrementally.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    rows: Vec<BasisRow<S>>,
    pivot_of: BTreeMap<usize, usize>,
    track: bool,
}

/// Outcome of reducing a vector against an [`Echelon`].
#[derive(Clone, Debug)]
pub struct Reduction<S> {
    pub residual: SparseRow<S>,
    /// `target - residual = sum over origins of combo[o] * input_row[o]`
    /// (empty unless origins are tracked).
    pub combo: SparseRow<S>,
}

impl<S: Scalar> Echelon<S> {
    pub fn new(track_origins: bool) -> Self {
        Echelon {
            rows: Vec::new(),
            pivot_of: BTreeMap::new(),
            track: track_origins,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Basis rows ordered by pivot column; each pivot entry is one.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseRow<S>)> {
        self.pivot_of
            .iter()
            .map(move |(&col, &i)| (col, &self.rows[i].entries))
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_of.keys().copied()
    }

    pub fn reduce(&self, target: &SparseRow<S>) -> Reduction<S> {
        let mut residual = target.clone();
        let mut combo = SparseRow::new();
        // Basis rows vanish on every other pivot column, so one pass suffices.
        let hits: Vec<usize> = residual
            .keys()
            .filter(|c| self.pivot_of.contains_key(c))
            .copied()
            .collect();
        for col in hits {
            let Some(factor) = residual.get(&col).cloned() else {
                continue;
            };
            let row = &self.rows[self.pivot_of[&col]];
            axpy(&mut residual, &-factor.clone(), &row.entries);
            if self.track {
                axpy(&mut combo, &factor, &row.combo);
            }
        }
        Reduction { residual, combo }
    }

    /// Adds a row tagged with `origin`; returns whether the rank grew.
    pub fn insert(&mut self, row: &SparseRow<S>, origin: usize) -> bool {
        let Reduction { residual, combo } = self.reduce(row);
        let Some((&pivot, lead)) = residual.iter().next() else {
            return false;
        };
        let inv = S::one() / lead.clone();
        let entries: SparseRow<S> = residual
            .iter()
            .map(|(c, v)| (*c, v.clone() * inv.clone()))
            .collect();
        let combo = if self.track {
            let mut own = SparseRow::new();
            own.insert(origin, S::one());
            axpy(&mut own, &-S::one(), &combo);
            own.into_iter()
                .map(|(c, v)| (c, v * inv.clone()))
                .collect()
        } else {
            SparseRow::new()
        };
        for existing in self.rows.iter_mut() {
            if let Some(factor) = existing.entries.get(&pivot).cloned() {
                axpy(&mut existing.entries, &-factor.clone(), &entries);
                if self.track {
                    axpy(&mut existing.combo, &-factor, &combo);
                }
            }
        }
        self.pivot_of.insert(pivot, self.rows.len());
        self.rows.push(BasisRow { entries, combo });
        true
    }
}

fn primitive_integer_row(row: &SparseRow<Q>) -> BTreeMap<usize, BigInt> {
    let lcm = row
        .values()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: BTreeMap<usize, BigInt> = row
        .iter()
        .map(|(col, c)| (*col, (c * Q::from_integer(lcm.clone())).to_integer()))
        .filter(|(_, n)| !n.is_zero())
        .collect();
    remove_content(ints)
}

fn remove_content(row: BTreeMap<usize, BigInt>) -> BTreeMap<usize, BigInt> {
    let gcd = row.values().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    if gcd.is_zero() || gcd.is_one() {
        return row;
    }
    row.into_iter().map(|(c, n)| (c, n / &gcd)).collect()
}

/// Row echelon form over the integers, never leaving `Z`. Each row is
/// primitive with a positive pivot; rows are ordered by pivot column.
pub fn fraction_free_echelon(rows: &[SparseRow<Q>]) -> Vec<BTreeMap<usize, BigInt>> {
    let mut echelon: BTreeMap<usize, BTreeMap<usize, BigInt>> = BTreeMap::new();
    for row in rows {
        let mut current = primitive_integer_row(row);
        for (&pivot, prow) in echelon.iter() {
            let Some(a) = current.get(&pivot).cloned() else {
                continue;
            };
            let p = &prow[&pivot];
            let mut next: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (c, v) in &current {
                next.insert(*c, v * p);
            }
            for (c, v) in prow {
                let e = next.entry(*c).or_insert_with(BigInt::zero);
                *e -= &a * v;
            }
            next.retain(|_, v| !v.is_zero());
            current = remove_content(next);
        }
        if let Some((&pivot, lead)) = current.iter().next() {
            if lead.is_negative() {
                current = current.into_iter().map(|(c, v)| (c, -v)).collect();
            }
            echelon.insert(pivot, current);
        }
    }
    echelon.into_values().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(usize, i64)]) -> SparseRow<Q> {
        entries
            .iter()
            .map(|&(c, v)| (c, Q::from_integer(v.into())))
            .collect()
    }

    #[test]
    fn rank_and_combination() {
        let rows = vec![
            row(&[(0, 1), (1, 2)]),
            row(&[(0, 2), (1, 4)]),
            row(&[(1, 1), (2, 1)]),
        ];
        let mut ech = Echelon::new(true);
        for (i, r) in rows.iter().enumerate() {
            ech.insert(r, i);
        }
        assert_eq!(ech.rank(), 2);
        assert_eq!(fraction_free_echelon(&rows).len(), 2);

        let target = row(&[(0, 1), (1, 3), (2, 1)]);
        let red = ech.reduce(&target);
        assert!(red.residual.is_empty());
        let mut rebuilt = SparseRow::new();
        for (origin, c) in &red.combo {
            axpy(&mut rebuilt, c, &rows[*origin]);
        }
        assert_eq!(rebuilt, target);

        let outside = row(&[(2, 1)]);
        assert!(!ech.reduce(&outside).residual.is_empty());
    }

    #[test]
    fn fraction_free_stays_integral() {
        let rows = vec![
            row(&[(0, 3), (1, 5), (2, 7)]),
            row(&[(0, 2), (1, 9), (2, 4)]),
            row(&[(0, 5), (1, 14), (2, 11)]),
        ];
        let ff = fraction_free_echelon(&rows);
        assert_eq!(ff.len(), 2);
        for r in &ff {
            let gcd = r.values().fold(BigInt::zero(), |acc, n| acc.gcd(n));
            assert!(gcd.is_one());
        }
    }
}
