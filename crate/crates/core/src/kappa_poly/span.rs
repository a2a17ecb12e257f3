//! Graded pieces of the ideal generated by a set of relations.
//!
//! The degree-`D` piece of the ideal `(r_1, ..., r_k)` is spanned by the
//! products `m * r_j` where `m` runs over kappa monomials of degree
//! `D - deg r_j`. Inhomogeneous relations contribute each homogeneous part
//! separately: the target ring is graded, so every part of a relation is
//! itself a relation.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::charclass::RingParams;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::linalg::{Echelon, SparseRow};
use super::{kp_basis, kp_basis_euler, KappaMonomial, KappaPolynomial};

/// Which kappa monomials serve as cofactors and columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisScope {
    /// Every kappa generator `kappa_c`, `deg c > 2d`.
    Full,
    /// Only `kappa_i = kappa_{e^{i+1}}`.
    Euler,
}

impl BasisScope {
    pub fn basis(self, params: &RingParams, degree: u32) -> Vec<KappaMonomial> {
        match self {
            BasisScope::Full => kp_basis(params, degree),
            BasisScope::Euler => kp_basis_euler(params, degree),
        }
    }
}

/// Row-reduced degree-`D` piece of an ideal.
#[derive(Clone, Debug)]
pub struct DegreeSpan<S> {
    params: RingParams,
    degree: u32,
    scope: BasisScope,
    dimension: usize,
    columns: Vec<KappaMonomial>,
    column_index: BTreeMap<KappaMonomial, usize>,
    echelon: Echelon<S>,
    /// Row origin -> (generator index, cofactor).
    origins: Vec<(usize, KappaMonomial)>,
}

/// `target = (sum cofactor_j * generator_j)_D + residual`, where `(.)_D` is
/// the degree-`D` part. Membership holds iff the residual is zero.
#[derive(Clone, Debug, PartialEq)]
pub struct MembershipCertificate<S> {
    pub degree: u32,
    pub target: KappaPolynomial<S>,
    pub combination: Vec<(usize, KappaPolynomial<S>)>,
    pub residual: KappaPolynomial<S>,
}

impl<S: Scalar> MembershipCertificate<S> {
    pub fn is_success(&self) -> bool {
        self.residual.is_zero()
    }

    /// Re-expands the combination against `generators` and checks the
    /// defining identity exactly.
    pub fn verify(&self, generators: &[KappaPolynomial<S>]) -> bool {
        let params = *self.target.params();
        let mut sum = KappaPolynomial::zero(params);
        for (idx, cofactor) in &self.combination {
            let Some(gen) = generators.get(*idx) else {
                return false;
            };
            sum = sum.add(&cofactor.mul(gen));
        }
        sum.homogeneous_part(self.degree).add(&self.residual) == self.target
    }
}

impl<S: Scalar> DegreeSpan<S> {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn scope(&self) -> BasisScope {
        self.scope
    }

    /// Dimension of the degree-`D` kappa space in this scope.
    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn quotient_dimension(&self) -> usize {
        self.dimension.saturating_sub(self.rank())
    }

    /// Reduced row echelon basis of the span.
    pub fn basis(&self) -> Vec<KappaPolynomial<S>> {
        self.echelon
            .rows()
            .map(|(_, row)| self.row_to_poly(row))
            .collect()
    }

    fn row_to_poly(&self, row: &SparseRow<S>) -> KappaPolynomial<S> {
        let mut p = KappaPolynomial::zero(self.params);
        for (col, c) in row {
            p.add_term(self.columns[*col].clone(), c.clone());
        }
        p
    }

    /// `None` if `p` mentions a monomial no row touches (then `p` is not in
    /// the span unless that part is zero, which `reduce` reports).
    fn poly_to_row(&self, p: &KappaPolynomial<S>) -> (SparseRow<S>, KappaPolynomial<S>) {
        let mut row = SparseRow::new();
        let mut outside = KappaPolynomial::zero(self.params);
        for (m, c) in p.terms() {
            match self.column_index.get(m) {
                Some(&col) => {
                    row.insert(col, c.clone());
                }
                None => outside.add_term(m.clone(), c.clone()),
            }
        }
        (row, outside)
    }

    pub fn contains(&self, p: &KappaPolynomial<S>) -> bool {
        let (row, outside) = self.poly_to_row(p);
        outside.is_zero() && self.echelon.reduce(&row).residual.is_empty()
    }

    /// Certificate for the degree-`D` part of `p` in terms of the original
    /// generator list this span was built from.
    pub fn certificate(&self, p: &KappaPolynomial<S>) -> MembershipCertificate<S> {
        let target = p.homogeneous_part(self.degree);
        let (row, outside) = self.poly_to_row(&target);
        let red = self.echelon.reduce(&row);
        let mut residual = self.row_to_poly(&red.residual);
        residual = residual.add(&outside);
        let mut cofactors: BTreeMap<usize, KappaPolynomial<S>> = BTreeMap::new();
        for (origin, c) in red.combo {
            let (gen, m) = &self.origins[origin];
            cofactors
                .entry(*gen)
                .or_insert_with(|| KappaPolynomial::zero(self.params))
                .add_term(m.clone(), c);
        }
        MembershipCertificate {
            degree: self.degree,
            target,
            combination: cofactors
                .into_iter()
                .filter(|(_, p)| !p.is_zero())
                .collect(),
            residual,
        }
    }
}

/// Builds and row-reduces the degree-`degree` piece of the ideal generated
/// by `generators`. Proportional generators are dropped before elimination.
pub fn span_in_degree<S: Scalar>(
    params: &RingParams,
    generators: &[KappaPolynomial<S>],
    degree: u32,
    scope: BasisScope,
) -> DegreeSpan<S> {
    let mut seen: BTreeMap<Vec<(KappaMonomial, String)>, ()> = BTreeMap::new();
    let mut jobs: Vec<(usize, KappaPolynomial<S>, u32)> = Vec::new();
    for (idx, gen) in generators.iter().enumerate() {
        for part_degree in gen.degrees() {
            if part_degree > degree {
                continue;
            }
            let part = gen.homogeneous_part(part_degree);
            let key: Vec<(KappaMonomial, String)> = part
                .monic()
                .terms()
                .iter()
                .map(|(m, c)| (m.clone(), format!("{c:?}")))
                .collect();
            if seen.insert(key, ()).is_none() {
                jobs.push((idx, part, degree - part_degree));
            }
        }
    }

    let mut cofactor_cache: BTreeMap<u32, Vec<KappaMonomial>> = BTreeMap::new();
    for (_, _, cdeg) in &jobs {
        cofactor_cache
            .entry(*cdeg)
            .or_insert_with(|| scope.basis(params, *cdeg));
    }
    let tasks: Vec<(usize, &KappaPolynomial<S>, &KappaMonomial)> = jobs
        .iter()
        .flat_map(|(idx, part, cdeg)| {
            cofactor_cache[cdeg].iter().map(move |m| (*idx, part, m))
        })
        .collect();
    let products: Vec<(usize, KappaMonomial, KappaPolynomial<S>)> = tasks
        .par_iter()
        .map(|(idx, part, m)| (*idx, (*m).clone(), part.mul_monomial(m)))
        .collect();

    let columns_init = scope.basis(params, degree);
    let dimension = columns_init.len();
    let mut columns = columns_init;
    let mut column_index: BTreeMap<KappaMonomial, usize> = columns
        .iter()
        .enumerate()
        .map(|(i, m)| (m.clone(), i))
        .collect();
    let mut echelon = Echelon::new(true);
    let mut origins = Vec::with_capacity(products.len());
    for (idx, cofactor, product) in products {
        let mut row = SparseRow::new();
        for (m, c) in product.terms() {
            let col = match column_index.get(m) {
                Some(&col) => col,
                None => {
                    columns.push(m.clone());
                    column_index.insert(m.clone(), columns.len() - 1);
                    columns.len() - 1
                }
            };
            row.insert(col, c.clone());
        }
        let origin = origins.len();
        origins.push((idx, cofactor));
        echelon.insert(&row, origin);
    }

    DegreeSpan {
        params: *params,
        degree,
        scope,
        dimension,
        columns,
        column_index,
        echelon,
        origins,
    }
}

/// Decides whether the homogeneous polynomial `p` lies in the degree-`degree`
/// piece of the ideal, returning a certificate either way.
pub fn is_member<S: Scalar>(
    p: &KappaPolynomial<S>,
    generators: &[KappaPolynomial<S>],
    degree: u32,
    scope: BasisScope,
) -> Result<MembershipCertificate<S>> {
    if !p.is_zero() && p.homogeneous_degree() != Some(degree) {
        return Err(Error::NotHomogeneous {
            expected: degree,
            found: p.degrees(),
        });
    }
    let span = span_in_degree(p.params(), generators, degree, scope);
    let cert = span.certificate(p);
    debug_assert!(cert.verify(generators));
    Ok(cert)
}
