//! Randomized invariants on small substitutions.

use std::collections::BTreeSet;

use hpisot::algebra::linalg::{kernel, mat_vec, rank};
use hpisot::algebra::{minimal_polynomial_of_dilatation, IntPolynomial, NumberField, Rationals};
use hpisot::coincidence::semigroup::{brute_force_cr, coincidence_rank, is_stable_tuple, quotient_substitution};
use hpisot::cohomology::{cohomology_report, CohomologyOptions};
use hpisot::cover::{build_triple_cover, lift_word, CoverSpec};
use hpisot::measure::cylinder_measure_value;
use hpisot::regularity::tile_geometry;
use hpisot::{catalog, Substitution, Word};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// Rules over 2 or 3 letters, each of length 1 to 4.
fn substitution() -> impl Strategy<Value = Substitution> {
    (2usize..=3).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0..n, 1..=4), n)
            .prop_map(move |rules| Substitution::new(names(n), rules).unwrap())
    })
}

fn primitive() -> impl Strategy<Value = Substitution> {
    substitution().prop_filter("primitive", |s| s.is_primitive().primitive)
}

/// Primitive rules of a common length 2 or 3.
fn constant_length() -> impl Strategy<Value = Substitution> {
    (2usize..=3, 2usize..=3)
        .prop_flat_map(|(n, len)| {
            prop::collection::vec(prop::collection::vec(0..n, len), n)
                .prop_map(move |rules| Substitution::new(names(n), rules).unwrap())
        })
        .prop_filter("primitive", |s| s.is_primitive().primitive)
}

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig::with_cases(n)
}

proptest! {
    #![proptest_config(cases(64))]

    #[test]
    fn column_sums_are_rule_lengths(s in substitution()) {
        let sums: Vec<BigInt> = s.abelianization().column_sums();
        let lens: Vec<BigInt> = s.rule_lengths().into_iter().map(BigInt::from).collect();
        prop_assert_eq!(sums, lens);
    }

    #[test]
    fn iteration_is_a_morphism(s in substitution(), a in 0usize..3, m in 0usize..3, n in 0usize..3) {
        let a = a % s.size();
        let inner = s.iterate(a, n).unwrap();
        let outer: Word = inner.iter().flat_map(|&b| s.iterate(b, m).unwrap()).collect();
        prop_assert_eq!(s.iterate(a, m + n).unwrap(), outer);
    }

    #[test]
    fn abelianization_of_powers(s in substitution(), n in 1u32..=5) {
        let p = s.power(n as usize).unwrap();
        prop_assert_eq!(p.abelianization(), s.abelianization().pow(n));
    }

    #[test]
    fn language_is_factorial_and_extendable(s in primitive(), k in 1usize..=3) {
        let short: BTreeSet<Word> = s.words_of_length(k).unwrap().into_iter().collect();
        let long = s.words_of_length(k + 1).unwrap();
        let prefixes: BTreeSet<Word> = long.iter().map(|w| w[..k].to_vec()).collect();
        let suffixes: BTreeSet<Word> = long.iter().map(|w| w[1..].to_vec()).collect();
        prop_assert_eq!(&prefixes, &short);
        prop_assert_eq!(&suffixes, &short);
    }

    #[test]
    fn coincidence_rank_agrees_with_columns(s in constant_length()) {
        let r = coincidence_rank(&s).unwrap();
        prop_assert_eq!(r.stable_tuple.len(), r.cr);
        prop_assert!(is_stable_tuple(&s, &r.stable_tuple, 3).unwrap());
        let brute = brute_force_cr(&s, 5).unwrap();
        prop_assert!(brute >= r.cr);
        if r.witness_power <= 5 {
            prop_assert_eq!(brute, r.cr);
        }
    }

    #[test]
    fn quotient_is_idempotent(s in constant_length()) {
        let q = quotient_substitution(&s).unwrap();
        prop_assert_eq!(quotient_substitution(&q).unwrap(), q);
    }

    #[test]
    fn cohomology_bounds(s in primitive()) {
        let pisot = minimal_polynomial_of_dilatation(&s).unwrap();
        let c = cohomology_report(&s, &pisot, CohomologyOptions::default());
        prop_assume!(c.is_ok());
        let c = c.unwrap();
        prop_assert!(c.conditions_consistent);
        if pisot.is_pisot {
            prop_assert!(c.dim_h1 >= pisot.degree);
        }
    }

    #[test]
    fn letter_measures_sum_to_one(s in primitive()) {
        let pisot = minimal_polynomial_of_dilatation(&s).unwrap();
        prop_assume!(pisot.is_pisot);
        let g = tile_geometry(&s, &pisot).unwrap();
        let total = (0..s.size())
            .map(|a| cylinder_measure_value(&s, &g, &[a]).unwrap())
            .fold(g.field.zero(), |acc, m| acc.add(&m));
        prop_assert_eq!(total, g.field.one());
    }

    #[test]
    fn kernel_vectors_are_annihilated(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..=4)) {
        let m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let ker = kernel(&Rationals, &m, 4);
        prop_assert_eq!(ker.len(), 4 - rank(&Rationals, &m));
        for v in &ker {
            prop_assert!(mat_vec(&Rationals, &m, v).iter().all(Zero::is_zero));
        }
    }
}

fn fields() -> Vec<std::sync::Arc<NumberField>> {
    [&[-1i64, -1, 1][..], &[-1, -1, -1, 1], &[-27, -45, -33, 1]]
        .iter()
        .map(|c| NumberField::new(IntPolynomial::from_i64(c)).unwrap())
        .collect()
}

proptest! {
    #![proptest_config(cases(48))]

    #[test]
    fn field_axioms(f in 0usize..3, xs in prop::collection::vec(rational(), 9)) {
        let field = &fields()[f];
        let d = field.degree();
        let el = |i: usize| field.element(xs[i * 3..i * 3 + d].to_vec());
        let (a, b, c) = (el(0), el(1), el(2));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        let prod = a.mul(&b).mul(&c).pow(3);
        prop_assert_eq!(prod.coords().len(), d);
        if !a.is_zero() {
            prop_assert_eq!(a.mul(&a.inv().unwrap()), field.one());
        }
        let numeric = a.to_f64() * b.to_f64();
        prop_assert!((a.mul(&b).to_f64() - numeric).abs() <= 1e-9 * (1.0 + numeric.abs()));
    }

    #[test]
    fn lifts_commute_with_substitution(start in 0usize..500, len in 1usize..=8, i in 1u8..=3) {
        let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus/covers/length_nine_cover_spec.json")).unwrap();
        let spec = CoverSpec::from_json(&text).unwrap();
        let base = &spec.base;
        let cover = build_triple_cover(&spec).unwrap();
        let word = base.any_fixed_point_prefix(600).unwrap().word;
        let w = &word[start..start + len];
        let lifted = lift_word(base, w, i, &spec.assignment).unwrap();
        let image = lift_word(base, &base.apply(w), i, &spec.assignment).unwrap();
        prop_assert_eq!(cover.apply(&lifted), image);
        prop_assert_eq!(&cover, &catalog::length_nine_cover());
    }
}
