mod common;

use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use gkcalc_core::ktheory::class_with;
use gkcalc_core::normalizer::standard_form;
use gkcalc_core::oracle::{InvariantVector, Oracle};
use gkcalc_core::levelone::S1Element;
use gkcalc_core::{Rational, Scalar};

use common::{algebra, corpus, extra, random_s1, trace_character};

const ALGEBRAS: [(&str, bool); 6] = [("C", false), ("CM2", false), ("Cz", false), ("M2z", false), ("Lz", false), ("Cw", true)];

fn oracle(index: usize) -> Oracle {
    let (name, from_extra) = ALGEBRAS[index];
    let ws = if from_extra { extra() } else { corpus() };
    Oracle::new(&algebra(&ws, name)).expect("fixture algebras are decidable")
}

fn key(o: &Oracle, z: &S1Element) -> InvariantVector {
    class_with(o, z).expect("valid element").key().expect("decidable").clone()
}

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=9, -20i64..=20, 1i64..=9)
        .prop_map(|(a, b, c, d)| Scalar::new(Rational::new(a, b), Rational::new(c, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_arithmetic_is_exact(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!((a.clone() + b.clone()) - b.clone(), a.clone());
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b.clone() + a.clone() * c.clone());
        prop_assert_eq!((a.clone() * b.clone()).conj(), a.conj() * b.conj());
        if !a.is_zero() {
            let inv = num_traits::Inv::inv(a.clone()).expect("nonzero scalar is invertible");
            prop_assert_eq!(a.clone() * inv, Scalar::one());
        }
    }

    #[test]
    fn scalar_text_round_trips(a in scalar()) {
        prop_assert_eq!(a.to_string().parse::<Scalar>().expect("display parses"), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_is_additive(index in 0..ALGEBRAS.len(), seed: u64) {
        let o = oracle(index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_s1(&mut rng, &o), random_s1(&mut rng, &o));
        let sum = x.direct_sum(&y).expect("same target");
        prop_assert_eq!(key(&o, &sum), &key(&o, &x) + &key(&o, &y));
        prop_assert!(key(&o, &x.direct_sum(&x.negate()).unwrap()).is_zero());
    }

    #[test]
    fn direct_sum_is_commutative_and_associative(index in 0..ALGEBRAS.len(), seed: u64) {
        let o = oracle(index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y, z) = (random_s1(&mut rng, &o), random_s1(&mut rng, &o), random_s1(&mut rng, &o));
        prop_assert_eq!(key(&o, &x.direct_sum(&y).unwrap()), key(&o, &y.direct_sum(&x).unwrap()));
        let left = x.direct_sum(&y).unwrap().direct_sum(&z).unwrap();
        let right = x.direct_sum(&y.direct_sum(&z).unwrap()).unwrap();
        prop_assert_eq!(key(&o, &left), key(&o, &right));
        prop_assert_eq!(key(&o, &x.pad(2)), key(&o, &x));
        prop_assert_eq!(key(&o, &x.compact()), key(&o, &x));
    }

    #[test]
    fn class_is_invariant_under_coordinate_permutation(index in 0..ALGEBRAS.len(), seed: u64) {
        let o = oracle(index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_s1(&mut rng, &o);
        let mut perm: Vec<usize> = (0..x.size()).collect();
        perm.shuffle(&mut rng);
        let y = x.restrict(&perm);
        prop_assert!(y.check().is_ok());
        prop_assert_eq!(key(&o, &y), key(&o, &x));
        prop_assert_eq!(trace_character(&o, &y), trace_character(&o, &x));
    }

    #[test]
    fn equal_keys_have_equal_trace_characters(index in 0..ALGEBRAS.len(), seed: u64) {
        let o = oracle(index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, y) = (random_s1(&mut rng, &o), random_s1(&mut rng, &o));
        if key(&o, &x) == key(&o, &y) {
            prop_assert_eq!(trace_character(&o, &x), trace_character(&o, &y));
        } else {
            prop_assert_ne!(trace_character(&o, &x), trace_character(&o, &y));
        }
    }

    #[test]
    fn standard_form_is_standard_and_keeps_the_class(index in 0..ALGEBRAS.len(), seed: u64) {
        let o = oracle(index);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_s1(&mut rng, &o);
        let level = x.as_level_one();
        let (s, cert) = standard_form(&level).expect("standard form exists");
        prop_assert!(s.is_standard());
        prop_assert!(cert.verify(&level, &s).is_ok());
        prop_assert_eq!(key(&o, &s), key(&o, &x));
        let (again, _) = standard_form(&s.as_level_one()).expect("standard form exists");
        prop_assert_eq!(key(&o, &again), key(&o, &s));
    }
}
