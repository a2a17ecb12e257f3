mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::{brute_force_monomials, vec_degree};
use tautring::charclass::{enumerate, make};
use tautring::{BasisKind, CharClassMonomial, Generator, RingParams};

#[test]
fn enumeration_matches_brute_force() {
    for d in [1u32, 3, 5, 7] {
        let params = RingParams::new(2, d).unwrap();
        let s = params.small_basis_start() as usize;
        for degree in 0..=40 {
            let large: BTreeSet<Vec<u32>> = enumerate(&params, degree, BasisKind::Large)
                .iter()
                .map(|m| m.exponents().to_vec())
                .collect();
            let expected = brute_force_monomials(d as usize, degree);
            assert_eq!(large, expected, "d={d} D={degree}");

            let small: BTreeSet<Vec<u32>> = enumerate(&params, degree, BasisKind::Small)
                .iter()
                .map(|m| m.exponents().to_vec())
                .collect();
            let filtered: BTreeSet<Vec<u32>> = expected
                .into_iter()
                .filter(|v| v[1..].iter().enumerate().all(|(i, &a)| a == 0 || i + 1 >= s))
                .collect();
            assert_eq!(small, filtered, "small basis d={d} D={degree}");
        }
    }
}

#[test]
fn known_small_cases() {
    let d1 = RingParams::new(2, 1).unwrap();
    assert_eq!(enumerate(&d1, 6, BasisKind::Large), vec![CharClassMonomial::euler_power(&d1, 3)]);
    let d3 = RingParams::new(2, 3).unwrap();
    let eight: Vec<Vec<u32>> = enumerate(&d3, 8, BasisKind::Small).iter().map(|m| m.exponents().to_vec()).collect();
    assert_eq!(eight.len(), 2);
    assert!(eight.contains(&vec![0, 2, 0]) && eight.contains(&vec![0, 0, 1]));
    assert!(enumerate(&d3, 7, BasisKind::Large).is_empty());
}

#[test]
fn top_pontryagin_class_is_euler_square() {
    for d in [1u32, 3, 5] {
        let params = RingParams::new(3, d).unwrap();
        let pd = make(&params, &[(Generator::Pontryagin(d), 1)]).unwrap();
        assert_eq!(pd, CharClassMonomial::euler_power(&params, 2));
        assert!(make(&params, &[(Generator::Pontryagin(d + 1), 1)]).is_err());
    }
}

fn arb_monomial(d: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0u32..=4, d as usize)
}

proptest! {
    #[test]
    fn degree_is_additive((d, a, b) in prop::sample::select(vec![1u32, 3, 5, 7])
        .prop_flat_map(|d| (Just(d), arb_monomial(d), arb_monomial(d))))
    {
        let params = RingParams::new(2, d).unwrap();
        let ma = CharClassMonomial::from_exponents(&params, a.clone()).unwrap();
        let mb = CharClassMonomial::from_exponents(&params, b).unwrap();
        prop_assert_eq!(ma.degree(), vec_degree(d as usize, &a));
        prop_assert_eq!(ma.mul(&mb).degree(), ma.degree() + mb.degree());
    }

    #[test]
    fn make_is_idempotent(exps in arb_monomial(5)) {
        let params = RingParams::new(2, 5).unwrap();
        let m = CharClassMonomial::from_exponents(&params, exps).unwrap();
        let mut raw = vec![(Generator::Euler, m.euler_exponent())];
        for i in 1..5 {
            raw.push((Generator::Pontryagin(i), m.pontryagin_exponent(i)));
        }
        prop_assert_eq!(make(&params, &raw).unwrap(), m);
    }
}
