use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use exotica_core::fibration::collect_a_powers;
use exotica_core::laurent::LaurentPoly;
use exotica_core::linalg::{determinant, solve};
use exotica_core::rbd::{chain_matrix, cpq_chain, descends, hj_fraction, identify_cpq, CpqLabel, DescentCriterion, PlumbingChain};
use exotica_core::sw::alexander_twist;
use exotica_core::topo::{apply_blow_up, elliptic_surface_numbers};
use exotica_core::word::{eval_word, words_equivalent, GenLetter, Word};

fn letter() -> impl Strategy<Value = GenLetter> {
    prop_oneof![
        Just(GenLetter::APos),
        Just(GenLetter::ANeg),
        Just(GenLetter::BPos),
        Just(GenLetter::BNeg),
    ]
}

fn word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(letter(), 0..max).prop_map(Word::from_letters)
}

fn positive_word(max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(prop_oneof![Just(GenLetter::APos), Just(GenLetter::BPos)], 0..max)
        .prop_map(Word::from_letters)
}

fn coprime_pair() -> impl Strategy<Value = (u64, u64)> {
    (2u64..200, 1u64..200).prop_filter_map("need gcd 1 and q < p", |(p, q)| {
        let q = q % p;
        (q > 0 && num_integer::gcd(p, q) == 1).then_some((p, q))
    })
}

fn univariate() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..=4, -5i64..=5), 0..5).prop_map(|terms| LaurentPoly::univariate("t", &terms))
}

proptest! {
    #[test]
    fn word_times_inverse_is_identity(w in word(40)) {
        prop_assert!(eval_word(&w.concat(&w.inverse())).is_identity());
    }

    #[test]
    fn braid_relation_can_be_inserted_anywhere(u in word(20), v in word(20)) {
        let lhs = u.concat(&"aba".parse().unwrap()).concat(&v);
        let rhs = u.concat(&"bab".parse().unwrap()).concat(&v);
        prop_assert!(words_equivalent(&lhs, &rhs));
    }

    #[test]
    fn compact_form_round_trips(w in word(40)) {
        let back: Word = w.to_compact().parse().unwrap();
        prop_assert!(words_equivalent(&w, &back));
    }

    #[test]
    fn collecting_preserves_value_and_twists(w in positive_word(40)) {
        let f = collect_a_powers(&w).unwrap();
        prop_assert_eq!(f.evaluate(), eval_word(&w));
        prop_assert_eq!(f.twist_count(), w.len() as u64);
        prop_assert_eq!(f.a_power(), w.a_exponent() as u64);
    }

    #[test]
    fn cpq_chain_round_trips((p, q) in coprime_pair()) {
        let label = CpqLabel::new(p, q).unwrap();
        let chain = cpq_chain(label).unwrap();
        prop_assert_eq!(identify_cpq(&chain), Some(label));
        let negated: Vec<i64> = chain.coefficients().iter().map(|c| -c).collect();
        let (num, den) = hj_fraction(&negated).unwrap();
        prop_assert_eq!(num, BigInt::from(p * p));
        prop_assert_eq!(den, BigInt::from(p * q - 1));
        prop_assert_eq!(determinant(&chain_matrix(&chain)).magnitude().clone(), BigInt::from(p * p).magnitude().clone());
    }

    #[test]
    fn descent_routes_agree(
        coeffs in prop::collection::vec(-6i64..=-2, 1..6),
        v in prop::collection::vec(-12i64..=12, 6),
    ) {
        let chain = PlumbingChain::new(coeffs.clone()).unwrap();
        let v = &v[..chain.len()];
        let crit = DescentCriterion::new(&chain);
        prop_assert_eq!(crit.check(v).unwrap(), descends(&chain, v).unwrap());
    }

    #[test]
    fn solve_inverts_the_chain_matrix(
        coeffs in prop::collection::vec(-6i64..=-2, 1..8),
        v in prop::collection::vec(-9i64..=9, 8),
    ) {
        let m = chain_matrix(&PlumbingChain::new(coeffs).unwrap());
        let v = &v[..m.len()];
        let x = solve(&m, v).unwrap();
        for (row, &rhs) in m.iter().zip(v) {
            let lhs: BigRational = row.iter().zip(&x).map(|(&a, xi)| BigRational::from_integer(a.into()) * xi).sum();
            prop_assert_eq!(lhs, BigRational::from_integer(rhs.into()));
        }
    }

    #[test]
    fn polynomial_product_commutes_and_evaluates(f in univariate(), g in univariate()) {
        prop_assert_eq!(f.mul(&g), g.mul(&f));
        prop_assert_eq!(f.mul(&g).eval_at_one(), f.eval_at_one() * g.eval_at_one());
        let minus_one = LaurentPoly::constant(vec!["t".into()], -1).unwrap();
        prop_assert_eq!(f.add(&g.mul(&minus_one)).add(&g), f);
    }

    #[test]
    fn twist_knots_have_symmetric_normalised_alexander_polynomials(n in 1u64..500) {
        let d = alexander_twist(n).unwrap();
        prop_assert_eq!(d.eval_at_one(), BigInt::from(1));
        prop_assert!(d.is_conjugation_symmetric(1));
        prop_assert!(!d.is_zero());
    }

    #[test]
    fn blow_ups_shift_characteristic_numbers(n in 1u64..6, k in 1u64..30) {
        let base = elliptic_surface_numbers(n).unwrap();
        let c = apply_blow_up(&base, k).unwrap();
        prop_assert_eq!(c.e(), base.e() + k as i64);
        prop_assert_eq!(c.sigma(), base.sigma() - k as i64);
        prop_assert_eq!(c.b2_plus(), base.b2_plus());
        prop_assert_eq!(c.b2_minus(), base.b2_minus() + k);
        prop_assert!(apply_blow_up(&base, 0).is_err());
    }
}
