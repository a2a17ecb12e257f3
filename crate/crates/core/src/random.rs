//! Seeded random classes for randomized law checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charclass::{CharClassMonomial, RingParams};
use crate::kappa_poly::{KappaMonomial, KappaPolynomial};
use crate::tautmono::{Point, PointSet, RawMonomial, TautClass};
use crate::Q;

/// Generator of small random classes. All sizes are inclusive bounds.
#[derive(Clone, Debug)]
pub struct RandomClasses {
    rng: ChaCha8Rng,
    params: RingParams,
    pub max_exponent: u32,
    pub max_terms: usize,
    pub max_factors: usize,
    pub max_coefficient: i64,
}

impl RandomClasses {
    pub fn new(params: RingParams, seed: u64) -> Self {
        RandomClasses {
            rng: ChaCha8Rng::seed_from_u64(seed),
            params,
            max_exponent: 3,
            max_terms: 3,
            max_factors: 2,
            max_coefficient: 5,
        }
    }

    pub fn params(&self) -> &RingParams {
        &self.params
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coefficient(&mut self) -> Q {
        let num = loop {
            let n = self.rng.gen_range(-self.max_coefficient..=self.max_coefficient);
            if n != 0 {
                break n;
            }
        };
        let den = self.rng.gen_range(1..=3i64);
        Q::new(num.into(), den.into())
    }

    /// Random monomial with at most two nonzero exponents, each at most
    /// `max_exponent`.
    pub fn monomial(&mut self) -> CharClassMonomial {
        let d = self.params.d() as usize;
        let mut exps = vec![0u32; d];
        for _ in 0..self.rng.gen_range(1..=2) {
            let slot = self.rng.gen_range(0..d);
            exps[slot] = self.rng.gen_range(0..=self.max_exponent);
        }
        CharClassMonomial::from_exponents(&self.params, exps).expect("shape matches d")
    }

    /// Random monomial of degree above `2d`, usable as a kappa factor.
    pub fn kappa_monomial(&mut self) -> CharClassMonomial {
        loop {
            let c = self.monomial();
            if c.exceeds_fiber() {
                return c;
            }
        }
    }

    /// Random subset of `points` with at least two elements.
    pub fn subset(&mut self, points: &[Point], max_size: usize) -> Vec<Point> {
        let size = self.rng.gen_range(2..=max_size.min(points.len()).max(2));
        let mut pts = points.to_vec();
        pts.shuffle(&mut self.rng);
        pts.truncate(size);
        pts
    }

    /// Random unnormalized monomial on `points`.
    pub fn raw_monomial(&mut self, points: &PointSet) -> RawMonomial<Q> {
        let labels: Vec<Point> = points.iter().collect();
        let mut raw = RawMonomial::scalar(self.coefficient());
        for _ in 0..self.rng.gen_range(0..=self.max_factors) {
            match self.rng.gen_range(0..3) {
                0 => raw.kappas.push(self.kappa_monomial()),
                1 if !labels.is_empty() => {
                    let p = labels[self.rng.gen_range(0..labels.len())];
                    let c = self.monomial();
                    raw.psis.push((p, c));
                }
                2 if labels.len() >= 2 => {
                    let s = self.subset(&labels, 3);
                    raw.pis.push(s);
                }
                _ => {}
            }
        }
        raw
    }

    pub fn class(&mut self, points: &PointSet) -> TautClass<Q> {
        let mut out = TautClass::zero(self.params, points.clone());
        for _ in 0..self.rng.gen_range(1..=self.max_terms) {
            let raw = self.raw_monomial(points);
            let term = TautClass::from_raw(self.params, points.clone(), raw).expect("valid random monomial");
            out = &out + &term;
        }
        out
    }

    /// A product of `count` random intersection classes on `points`.
    pub fn pi_product(&mut self, points: &PointSet, count: usize, max_size: usize) -> Vec<Vec<Point>> {
        let labels: Vec<Point> = points.iter().collect();
        (0..count).map(|_| self.subset(&labels, max_size)).collect()
    }

    pub fn kappa_poly(&mut self) -> KappaPolynomial<Q> {
        let mut out = KappaPolynomial::zero(self.params);
        for _ in 0..self.rng.gen_range(1..=self.max_terms) {
            let factors = (0..self.rng.gen_range(0..=self.max_factors))
                .map(|_| self.kappa_monomial())
                .collect();
            let c = self.coefficient();
            out.add_term(KappaMonomial::new(factors), c);
        }
        out
    }
}
