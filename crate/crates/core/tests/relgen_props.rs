mod common;

use common::*;
use tautring::expr::{parse, Context};
use tautring::pushforward::center;
use tautring::relgen::{
    binomial_closed_form, binomial_decompose, binomial_via_square, class_a, generate_irw, omega,
    omega_a, pullback_pontryagin_relations, relation_product, relation_square, IrwConfig,
    RelationRecord,
};
use tautring::{Error, KappaPolynomial, Point, PointSet, RingParams, TautClass, Q};

fn vectors(n: usize, bound: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-bound..=bound).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

#[test]
fn omega_is_square_of_shifted_class() {
    for d in [1u32, 3] {
        let params = RingParams::new(3, d).unwrap();
        for n in 1..=2 {
            for a in vectors(n, 2) {
                let c = class_a::<Q>(params, &a).unwrap();
                let qa: i64 = a.iter().sum();
                let pts = c.points().clone();
                let psi_e = TautClass::psi(params, pts, tautring::CharClassMonomial::euler_power(&params, 1), Point::STAR).unwrap();
                let shifted = &c.scale(&q(params.chi())) - &psi_e.scale(&q(qa));
                let sq = relation_square(&shifted, &PointSet::first_n(n as u32)).unwrap();
                let om = omega_a::<Q>(params, &a).unwrap();
                assert_eq!(om.base, sq.base, "A = {a:?}");
                assert_eq!(om.exponent, sq.exponent);
            }
        }
    }
}

#[test]
fn omega_examples() {
    let params = RingParams::new(3, 1).unwrap();
    let chi = params.chi();
    let base = Context::new(params, PointSet::first_n(1));
    let expected = parse::<Q>(&base, &format!("({}-2)*({})*psi(e,1) + kappa(e^2)", chi, chi)).unwrap();
    assert_eq!(omega_a::<Q>(params, &[1]).unwrap().base, expected);

    let pts = PointSet::first_n(1).with_star();
    let sq = relation_square(&parse::<Q>(&Context::new(params, pts.clone()), "chi*pi(1,s) - psi(e,s)").unwrap(), &PointSet::first_n(1)).unwrap();
    assert_eq!(sq.base, expected);
    assert_eq!(sq.exponent, 4);

    assert!(omega(&TautClass::<Q>::zero(params, pts.clone())).unwrap().base.is_zero());
    assert!(omega_a::<Q>(params, &[0, 0]).unwrap().base.is_zero());
    assert!(matches!(omega_a::<Q>(params, &[]), Err(Error::EmptyVector)));
    assert!(omega(&parse::<Q>(&Context::new(params, pts), "pi(1,s)^2").unwrap()).is_err());
}

#[test]
fn preconditions_are_enforced() {
    let params = RingParams::new(2, 3).unwrap();
    let ctx = Context::new(params, PointSet::first_n(1).with_star());
    let target = PointSet::first_n(1);
    let pi = parse::<Q>(&ctx, "pi(1,s)").unwrap();
    assert!(matches!(relation_square(&pi, &target), Err(Error::NonzeroPushforward { .. })));
    let a = center(&pi).unwrap();
    assert!(matches!(relation_product(&a, &pi, &target), Err(Error::NonzeroPushforward { .. })));
    assert_eq!(relation_product(&a, &a, &target).unwrap().exponent, 5);
}

#[test]
fn binomial_routes_and_hand_expansion() {
    for g in 2..=4 {
        let params = RingParams::new(g, 1).unwrap();
        for k in 0..=3 {
            let closed = binomial_closed_form::<Q>(params, k);
            assert_eq!(closed, binomial_via_square::<Q>(params, k).unwrap(), "g={g} k={k}");
            assert_eq!(index_form(&closed), binomial_oracle(g, k), "g={g} k={k}");
            let record = binomial_decompose(params, k).unwrap();
            assert!(record.check_provenance().unwrap());
        }
    }
    // g = 2, k = 0: kappa_2 + 9/32 kappa_1^2
    let g2 = binomial_closed_form::<Q>(RingParams::new(2, 1).unwrap(), 0);
    assert_eq!(monic(&index_form(&g2)), index_poly(&[(&[2], q(1)), (&[1, 1], frac(9, 32))]));
}

#[test]
fn binomial_g3_k1_isolates_kappa_4() {
    let p = index_form(&binomial_closed_form::<Q>(RingParams::new(3, 1).unwrap(), 1));
    assert!(p.contains_key(&vec![4]));
    assert!(p.keys().filter(|m| m.contains(&4)).count() == 1);
}

#[test]
fn records_regenerate_and_round_trip() {
    let mut records: Vec<RelationRecord> = Vec::new();
    let mut cfg = IrwConfig::new(3, 3, 2, 1);
    cfg.multiplier_weight_max = 1;
    records.extend(generate_irw(&cfg).unwrap());
    for d in [5u32, 7] {
        records.extend(pullback_pontryagin_relations(RingParams::new(2, d).unwrap(), 12));
    }
    records.push(binomial_decompose(RingParams::new(3, 1).unwrap(), 2).unwrap());
    records.push(tautring::relgen::lowest_relation(RingParams::new(2, 5).unwrap()).unwrap().1);
    assert!(records.len() > 10);
    for r in &records {
        assert!(r.check_provenance().unwrap(), "{}", r.to_json_line());
        let line = r.to_json_line();
        let back = RelationRecord::from_json_line(&line).unwrap();
        assert_eq!(&back, r);
        assert_eq!(back.to_json_line(), line);
        assert_eq!(r.poly.homogeneous_degree(), Some(r.degree));
    }
}

#[test]
fn irw_is_d_independent_for_genus_three() {
    let polys = |d| {
        let mut cfg = IrwConfig::new(3, d, 2, 2);
        cfg.multiplier_weight_max = 1;
        generate_irw(&cfg).unwrap().into_iter().map(|r| r.poly).collect::<Vec<_>>()
    };
    let reference = polys(1);
    assert!(!reference.is_empty());
    for d in [3u32, 5] {
        let params = RingParams::new(3, d).unwrap();
        let moved: Vec<KappaPolynomial<Q>> = reference.iter().map(|p| p.transport(params).unwrap()).collect();
        assert_eq!(moved, polys(d));
    }
}

#[test]
fn irw_edge_cases() {
    assert!(generate_irw(&IrwConfig::new(3, 1, 3, 0)).unwrap().is_empty());
    let recs = generate_irw(&IrwConfig::new(2, 1, 1, 1)).unwrap();
    assert!(recs.iter().all(|r| !r.poly.is_zero()));
}

#[test]
fn pullback_family_shape() {
    assert!(pullback_pontryagin_relations(RingParams::new(3, 3).unwrap(), 20).is_empty());
    let d7 = pullback_pontryagin_relations(RingParams::new(3, 7).unwrap(), 16);
    assert!(d7.iter().all(|r| r.provenance.pontryagin_index == Some(1)));
}
