//! Monomials in the rational characteristic-class ring of oriented rank-2d
//! bundles, `Q[p_1, ..., p_{d-1}, e]`.
//!
//! A monomial is stored as its exponent vector `[a_0, a_1, ..., a_{d-1}]`
//! where `a_0` is the exponent of the Euler class (degree `2d`) and `a_i` the
//! exponent of the Pontryagin class `p_i` (degree `4i`). The top Pontryagin
//! class `p_d` has no slot: it equals `e^2` and is rewritten on construction,
//! so two monomials are equal exactly when their vectors are.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Genus and fiber half-dimension of `M_g^{2d} = #_g (S^d x S^d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RingParams {
    g: u32,
    d: u32,
}

impl RingParams {
    /// Rejects even `d` and `g < 2`; the Euler characteristic `2 - 2g` is
    /// then strictly negative and can be divided by.
    pub fn new(g: u32, d: u32) -> Result<Self> {
        if d == 0 || d % 2 == 0 {
            return Err(Error::EvenOrZeroD(d));
        }
        if g < 2 {
            return Err(Error::GenusTooSmall(g));
        }
        Ok(RingParams { g, d })
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Euler characteristic `2 - 2g`.
    pub fn chi(&self) -> i64 {
        2 - 2 * i64::from(self.g)
    }

    /// Real dimension `2d` of the fiber.
    pub fn fiber_degree(&self) -> u32 {
        2 * self.d
    }

    /// `ceil((d + 1) / 4)`: the first Pontryagin index kept in the small basis.
    pub fn small_basis_start(&self) -> u32 {
        (self.d + 4) / 4
    }

    /// Same ring with a different fiber dimension.
    pub fn with_d(&self, d: u32) -> Result<Self> {
        RingParams::new(self.g, d)
    }
}

/// A polynomial generator of `H^*(BSO(2d); Q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    Euler,
    /// `p_i`, with `1 <= i <= d`; `p_d` is accepted and rewritten to `e^2`.
    Pontryagin(u32),
}

/// Which monomials [`enumerate`] returns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisKind {
    /// All monomials in `p_1, ..., p_{d-1}, e`.
    Large,
    /// Monomials in `p_s, ..., p_{d-1}, e` with `s = ceil((d+1)/4)`. No
    /// degree filter is applied here; see [`CharClassMonomial::exceeds_fiber`].
    Small,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharClassMonomial {
    exps: Vec<u32>,
}

/// What `kappa_c = pi_!(c)` becomes before it can be kept as a generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KappaFold {
    /// `deg c < 2d` (including `c = 1`): the pushforward lands in negative degree.
    Zero,
    /// `c = e`: the pushforward is the Euler characteristic.
    EulerCharacteristic,
    /// `deg c > 2d`: a genuine kappa class.
    Keep,
}

impl CharClassMonomial {
    pub fn unit(params: &RingParams) -> Self {
        CharClassMonomial {
            exps: vec![0; params.d as usize],
        }
    }

    pub fn euler_power(params: &RingParams, k: u32) -> Self {
        let mut m = Self::unit(params);
        m.exps[0] = k;
        m
    }

    /// `p_i^k`, with `p_d^k` rewritten to `e^{2k}`.
    pub fn pontryagin_power(params: &RingParams, i: u32, k: u32) -> Result<Self> {
        make(params, &[(Generator::Pontryagin(i), k)])
    }

    /// Builds a monomial from an exponent vector `[a_0, ..., a_{d-1}]`.
    pub fn from_exponents(params: &RingParams, exps: Vec<u32>) -> Result<Self> {
        if exps.len() != params.d as usize {
            return Err(Error::MonomialShape {
                found: exps.len(),
                expected: params.d as usize,
            });
        }
        Ok(CharClassMonomial { exps })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn euler_exponent(&self) -> u32 {
        self.exps[0]
    }

    /// Exponent of `p_i` for `1 <= i < d`.
    pub fn pontryagin_exponent(&self, i: u32) -> u32 {
        self.exps.get(i as usize).copied().unwrap_or(0)
    }

    /// Half fiber dimension this monomial was built for.
    pub fn d(&self) -> u32 {
        self.exps.len() as u32
    }

    /// `2d * a_0 + sum 4i * a_i`.
    pub fn degree(&self) -> u32 {
        let d = self.d();
        self.exps
            .iter()
            .enumerate()
            .map(|(i, &a)| if i == 0 { 2 * d * a } else { 4 * i as u32 * a })
            .sum()
    }

    pub fn is_unit(&self) -> bool {
        self.exps.iter().all(|&a| a == 0)
    }

    pub fn has_pontryagin(&self) -> bool {
        self.exps[1..].iter().any(|&a| a > 0)
    }

    /// `Some(k)` if this is `e^k`.
    pub fn as_euler_power(&self) -> Option<u32> {
        if self.has_pontryagin() {
            None
        } else {
            Some(self.exps[0])
        }
    }

    /// Degree strictly above the fiber dimension `2d`.
    pub fn exceeds_fiber(&self) -> bool {
        self.degree() > 2 * self.d()
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        CharClassMonomial {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        CharClassMonomial {
            exps: self.exps.iter().map(|a| a * k).collect(),
        }
    }

    pub fn kappa_fold(&self) -> KappaFold {
        let deg = self.degree();
        let fiber = 2 * self.d();
        if deg < fiber {
            KappaFold::Zero
        } else if deg == fiber {
            // 4 * sum(i a_i) = 2d has no solution for odd d, so only e remains.
            assert_eq!(
                self.as_euler_power(),
                Some(1),
                "degree-2d monomial other than e for odd d"
            );
            KappaFold::EulerCharacteristic
        } else {
            KappaFold::Keep
        }
    }

    /// Whether every Pontryagin factor has index `>= ceil((d+1)/4)`.
    pub fn in_small_generators(&self, params: &RingParams) -> bool {
        let start = params.small_basis_start() as usize;
        self.exps[1..start.min(self.exps.len())]
            .iter()
            .all(|&a| a == 0)
    }

    /// LaTeX body, e.g. `e^{2}p_{1}`; the unit renders as `1`.
    pub fn to_latex(&self) -> String {
        if self.is_unit() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (i, &a) in self.exps.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if i == 0 {
                out.push('e');
            } else {
                out.push_str(&format!("p_{{{i}}}"));
            }
            if a > 1 {
                out.push_str(&format!("^{{{a}}}"));
            }
        }
        out
    }
}

/// Parseable form, e.g. `e^2*p1*p2^3`.
impl fmt::Display for CharClassMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_unit() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &a) in self.exps.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if i == 0 {
                f.write_str("e")?;
            } else {
                write!(f, "p{i}")?;
            }
            if a > 1 {
                write!(f, "^{a}")?;
            }
        }
        Ok(())
    }
}

impl Serialize for CharClassMonomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.exps.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CharClassMonomial {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let exps = Vec::<u32>::deserialize(de)?;
        if exps.is_empty() {
            return Err(serde::de::Error::custom("empty exponent vector"));
        }
        Ok(CharClassMonomial { exps })
    }
}

/// Builds a monomial from generator/exponent pairs. Repeated generators
/// multiply; `p_d^k` becomes `e^{2k}`.
pub fn make(params: &RingParams, raw: &[(Generator, u32)]) -> Result<CharClassMonomial> {
    let d = params.d();
    let mut m = CharClassMonomial::unit(params);
    for &(gen, k) in raw {
        match gen {
            Generator::Euler => m.exps[0] += k,
            Generator::Pontryagin(i) if i == d => m.exps[0] += 2 * k,
            Generator::Pontryagin(i) if i >= 1 && i < d => m.exps[i as usize] += k,
            Generator::Pontryagin(index) => return Err(Error::InvalidGenerator { index, d }),
        }
    }
    Ok(m)
}

/// All monomials of exactly `degree`, ascending lexicographically in the
/// exponent vector.
pub fn enumerate(params: &RingParams, degree: u32, basis: BasisKind) -> Vec<CharClassMonomial> {
    let d = params.d() as usize;
    let slot_degree = |i: usize| if i == 0 { 2 * d as u32 } else { 4 * i as u32 };
    let first_pont = match basis {
        BasisKind::Large => 1,
        BasisKind::Small => params.small_basis_start() as usize,
    };
    let mut out = Vec::new();
    let mut exps = vec![0u32; d];
    fn rec(
        slot: usize,
        remaining: u32,
        exps: &mut Vec<u32>,
        allowed: &dyn Fn(usize) -> bool,
        slot_degree: &dyn Fn(usize) -> u32,
        out: &mut Vec<CharClassMonomial>,
    ) {
        if slot == exps.len() {
            if remaining == 0 {
                out.push(CharClassMonomial { exps: exps.clone() });
            }
            return;
        }
        if !allowed(slot) {
            exps[slot] = 0;
            rec(slot + 1, remaining, exps, allowed, slot_degree, out);
            return;
        }
        let step = slot_degree(slot);
        for a in 0..=remaining / step {
            exps[slot] = a;
            rec(slot + 1, remaining - a * step, exps, allowed, slot_degree, out);
        }
        exps[slot] = 0;
    }
    let allowed = |i: usize| i == 0 || i >= first_pont;
    rec(0, degree, &mut exps, &allowed, &slot_degree, &mut out);
    out.sort();
    out
}

/// All monomials with `lo <= degree <= hi`, grouped by degree.
pub fn enumerate_range(
    params: &RingParams,
    lo: u32,
    hi: u32,
    basis: BasisKind,
) -> Vec<CharClassMonomial> {
    (lo..=hi)
        .filter(|deg| deg % 2 == 0)
        .flat_map(|deg| enumerate(params, deg, basis))
        .collect()
}
