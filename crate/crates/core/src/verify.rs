//! Named checks with known answers.

use std::fmt;

use crate::charclass::{make, CharClassMonomial, Generator, RingParams};
use crate::error::Result;
use crate::kappa_poly::{span_in_degree, BasisScope, KappaMonomial, KappaPolynomial};
use crate::pushforward::center;
use crate::relgen::{
    binomial_closed_form, binomial_via_square, generate_irw, lowest_relation,
    pullback_pontryagin_relations, relation_product, IrwConfig,
};
use crate::tautmono::{Point, PointSet, TautClass};
use crate::Q;

pub const CHECKS: &[&str] = &[
    "g4-relations",
    "lowest-relation-d3",
    "lowest-relation-d5",
    "fin-gen-inner",
    "binomial-g2k0",
    "pullback-d5",
    "d-independence",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckLine {
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub name: String,
    pub lines: Vec<CheckLine>,
}

impl VerifyReport {
    fn new(name: &str) -> Self {
        VerifyReport {
            name: name.to_string(),
            lines: Vec::new(),
        }
    }

    fn push(&mut self, label: impl Into<String>, expected: impl fmt::Display, computed: impl fmt::Display, ok: bool) {
        self.lines.push(CheckLine {
            label: label.into(),
            expected: expected.to_string(),
            computed: computed.to_string(),
            ok,
        });
    }

    fn compare<T: PartialEq + fmt::Display>(&mut self, label: impl Into<String>, expected: &T, computed: &T) {
        let ok = expected == computed;
        self.push(label, expected, computed, ok);
    }

    pub fn passed(&self) -> bool {
        !self.lines.is_empty() && self.lines.iter().all(|l| l.ok)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}: {}", self.name, if self.passed() { "pass" } else { "FAIL" })?;
        for l in &self.lines {
            writeln!(
                f,
                "  [{}] {}\n      expected: {}\n      computed: {}",
                if l.ok { "ok" } else { "FAIL" },
                l.label,
                l.expected,
                l.computed
            )?;
        }
        Ok(())
    }
}

fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

fn kappa_i(params: RingParams, idx: &[u32]) -> KappaMonomial {
    idx.iter()
        .fold(KappaMonomial::one(), |acc, &i| acc.mul(&KappaMonomial::kappa_index(&params, i)))
}

/// Generators used by the genus-four checks.
pub fn g4_config(d: u32) -> IrwConfig {
    let mut config = IrwConfig::new(4, d, 3, 2);
    config.multiplier_weight_max = 1;
    config.max_relation_weight = Some(3);
    config
}

fn g4_relations() -> Result<VerifyReport> {
    let mut report = VerifyReport::new("g4-relations");
    let params = RingParams::new(4, 1)?;
    let gens: Vec<KappaPolynomial<Q>> = generate_irw(&g4_config(1))?.into_iter().map(|r| r.poly).collect();
    let mut target = KappaPolynomial::zero(params);
    target.add_term(kappa_i(params, &[1, 1]), q(3));
    target.add_term(kappa_i(params, &[2]), q(32));
    let span4 = span_in_degree(&params, &gens, 4, BasisScope::Euler);
    report.push("3*kappa_1^2 + 32*kappa_2 in degree 4", "member", if span4.contains(&target) { "member" } else { "not a member" }, span4.contains(&target));
    report.compare("rank in degree 4", &1usize, &span4.rank());
    let span6 = span_in_degree(&params, &gens, 6, BasisScope::Euler);
    for idx in [vec![3], vec![1, 2]] {
        let m = KappaPolynomial::monomial(params, kappa_i(params, &idx), q(1));
        let inside = span6.contains(&m);
        report.push(format!("{m} in degree 6"), "member", if inside { "member" } else { "not a member" }, inside);
    }
    report.compare("rank in degree 6", &3usize, &span6.rank());
    Ok(report)
}

fn lowest(d: u32, g: u32) -> Result<VerifyReport> {
    let mut report = VerifyReport::new(&format!("lowest-relation-d{d}"));
    let params = RingParams::new(g, d)?;
    let (rel, record) = lowest_relation(params)?;
    let s = params.small_basis_start();
    let ps2 = make(&params, &[(Generator::Pontryagin(s), 2)])?;
    let expected = TautClass::<Q>::kappa(params, PointSet::empty(), ps2.clone());
    report.push(
        "push(psi(p_s)^2)",
        format!("kappa({ps2})"),
        crate::expr::print(&crate::expr::Context::new(params, PointSet::empty()), &rel.base),
        rel.base == expected,
    );
    report.compare("exponent", &(g + 1), &rel.exponent);
    report.compare(
        "relation",
        &KappaPolynomial::<Q>::kappa(params, &ps2).pow(g + 1),
        &record.poly,
    );
    Ok(report)
}

/// `psi(p)_1 - kappa_{ep}/chi - psi(e)_1 kappa_p/chi + kappa_{e^2} kappa_p/chi^2` on `{1}`.
pub fn fin_gen_expected(params: RingParams, p: &CharClassMonomial) -> Result<TautClass<Q>> {
    let pts = PointSet::first_n(1);
    let chi = q(params.chi());
    let e = CharClassMonomial::euler_power(&params, 1);
    let kappa = |c: CharClassMonomial| TautClass::<Q>::kappa(params, pts.clone(), c);
    let psi1 = |c: CharClassMonomial| TautClass::<Q>::psi(params, pts.clone(), c, Point(1));
    let mut out = psi1(p.clone())?;
    out = &out - &kappa(e.mul(p)).scale(&(q(1) / chi.clone()));
    out = &out - &(&psi1(e.clone())? * &kappa(p.clone())).scale(&(q(1) / chi.clone()));
    out = &out + &(&kappa(e.pow(2)) * &kappa(p.clone())).scale(&(q(1) / (chi.clone() * chi)));
    Ok(out)
}

/// `relation_product(center(pi_{1*}), center(psi(p)_*))` onto `{1}`.
pub fn fin_gen_computed(params: RingParams, p: &CharClassMonomial) -> Result<TautClass<Q>> {
    let target = PointSet::first_n(1);
    let pts = target.with_star();
    let a = center(&TautClass::<Q>::pi(params, pts.clone(), &[Point(1), Point::STAR])?)?;
    let b = center(&TautClass::<Q>::psi(params, pts, p.clone(), Point::STAR)?)?;
    Ok(relation_product(&a, &b, &target)?.base)
}

fn fin_gen(g: u32) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("fin-gen-inner");
    let params = RingParams::new(g, 3)?;
    let ctx = crate::expr::Context::new(params, PointSet::first_n(1));
    let choices = [
        CharClassMonomial::euler_power(&params, 2),
        make(&params, &[(Generator::Pontryagin(1), 1), (Generator::Euler, 1)])?,
        make(&params, &[(Generator::Pontryagin(2), 1)])?,
    ];
    for p in &choices {
        let expected = fin_gen_expected(params, p)?;
        let computed = fin_gen_computed(params, p)?;
        report.push(
            format!("p = {p}"),
            crate::expr::print(&ctx, &expected),
            crate::expr::print(&ctx, &computed),
            expected == computed,
        );
    }
    Ok(report)
}

fn binomial_g2k0() -> Result<VerifyReport> {
    let mut report = VerifyReport::new("binomial-g2k0");
    let params = RingParams::new(2, 1)?;
    let mut expected = KappaPolynomial::zero(params);
    expected.add_term(kappa_i(params, &[2]), q(1));
    expected.add_term(kappa_i(params, &[1, 1]), q(9) / q(32));
    report.compare("closed form", &expected, &binomial_closed_form::<Q>(params, 0));
    report.compare("via relation_square", &expected, &binomial_via_square::<Q>(params, 0)?);
    Ok(report)
}

fn pullback_d5(g: u32) -> Result<VerifyReport> {
    let mut report = VerifyReport::new("pullback-d5");
    let d5 = RingParams::new(g, 5)?;
    let e = CharClassMonomial::euler_power(&d5, 1);
    let p1 = make(&d5, &[(Generator::Pontryagin(1), 1)])?;
    let target = KappaPolynomial::<Q>::kappa(d5, &e.pow(2).mul(&p1))
        .scale(&q(d5.chi()))
        .sub(&KappaPolynomial::kappa(d5, &e.mul(&p1)).mul(&KappaPolynomial::kappa(d5, &e.pow(2))));
    let rels = pullback_pontryagin_relations(d5, 14);
    let found = rels.iter().any(|r| r.poly == target.content_normalized());
    report.push(
        "d = 5 family",
        format!("contains {target}"),
        format!("{} relations, {}", rels.len(), if found { "found" } else { "missing" }),
        found,
    );
    let d3 = pullback_pontryagin_relations(RingParams::new(g, 3)?, 14);
    report.compare("d = 3 family size", &0usize, &d3.len());
    Ok(report)
}

fn d_independence() -> Result<VerifyReport> {
    let mut report = VerifyReport::new("d-independence");
    let reference: Vec<KappaPolynomial<Q>> = generate_irw(&g4_config(1))?.into_iter().map(|r| r.poly).collect();
    for d in [3, 5] {
        let params = RingParams::new(4, d)?;
        let polys: Vec<KappaPolynomial<Q>> = generate_irw(&g4_config(d))?.into_iter().map(|r| r.poly).collect();
        let transported: Option<Vec<KappaPolynomial<Q>>> = reference.iter().map(|p| p.transport(params)).collect();
        let same = transported.as_ref() == Some(&polys);
        let degrees_scale = reference
            .iter()
            .zip(&polys)
            .all(|(a, b)| b.homogeneous_degree() == a.homogeneous_degree().map(|x| x * d));
        report.push(
            format!("d = {d} against d = 1"),
            format!("{} identical relations", reference.len()),
            format!("{} relations, identical: {same}", polys.len()),
            same && degrees_scale,
        );
    }
    Ok(report)
}

/// Runs a named check. `g` overrides the genus where the check has one.
pub fn run(name: &str, g: Option<u32>) -> Option<Result<VerifyReport>> {
    let report = match name {
        "g4-relations" => g4_relations(),
        "lowest-relation-d3" => lowest(3, g.unwrap_or(2)),
        "lowest-relation-d5" => lowest(5, g.unwrap_or(2)),
        "fin-gen-inner" => fin_gen(g.unwrap_or(2)),
        "binomial-g2k0" => binomial_g2k0(),
        "pullback-d5" => pullback_d5(g.unwrap_or(2)),
        "d-independence" => d_independence(),
        _ => return None,
    };
    Some(report)
}
