//! Invariants checked on every catalog substitution.

use std::collections::BTreeSet;

use hpisot::algebra::linalg::rank;
use hpisot::algebra::{minimal_polynomial_of_dilatation, Rationals};
use hpisot::catalog;
use hpisot::coincidence::pure_core::pure_core;
use hpisot::coincidence::semigroup::{brute_force_cr, coincidence_rank, is_stable_tuple, quotient_substitution};
use hpisot::cohomology::{
    build_transition_complex, cech_h1_dimension, cohomology_report, edge_dynamics, eventual_range, eventual_rank,
    CohomologyOptions,
};
use hpisot::cover::cover_from_matrix;
use hpisot::measure::{companion_matrix, companion_limit_vector, cylinder_measure_value};
use hpisot::regularity::{default_patches, tile_geometry, ErpFitter};
use hpisot::IntegerMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

fn to_rational(m: &IntegerMatrix) -> Vec<Vec<BigRational>> {
    m.rows()
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect()
}

#[test]
fn min_poly_divides_char_poly_and_norm_sign() {
    for (name, s) in catalog::all() {
        let r = minimal_polynomial_of_dilatation(&s).unwrap();
        assert!(r.min_poly.divides(&r.char_poly), "{name}");
        let sign = if r.degree.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
        assert_eq!(r.norm, sign * &r.a0, "{name}");
        assert_eq!(r.degree, r.min_poly.deg(), "{name}");
    }
}

#[test]
fn edge_map_permutes_eventual_range() {
    for (name, s) in catalog::all() {
        let c = build_transition_complex(&s).unwrap();
        let m = edge_dynamics(&s, &c).unwrap();
        let er = eventual_range(&c, &m);
        let idx: BTreeSet<usize> = er.er_edges.iter().map(|&t| c.edge_index(t).unwrap()).collect();
        let images: BTreeSet<usize> = idx.iter().map(|&e| m.image[e]).collect();
        assert_eq!(idx, images, "{name}: not a bijection of the eventual range");
        for &e in &idx {
            let mut x = e;
            for _ in 0..er.fixing_power {
                x = m.image[x];
            }
            assert_eq!(x, e, "{name}: fixing power does not fix edge {e}");
        }
    }
}

#[test]
fn eventual_rank_is_stable() {
    for (name, s) in catalog::all() {
        let a = s.abelianization();
        let n = a.size() as u32;
        let r = eventual_rank(&a).unwrap();
        assert_eq!(r, rank(&Rationals, &to_rational(&a.pow(n))), "{name}");
        assert_eq!(r, rank(&Rationals, &to_rational(&a.pow(n + 1))), "{name}");
    }
}

#[test]
fn dimension_formula_matches_conditions() {
    for (name, s) in catalog::all() {
        let pisot = minimal_polynomial_of_dilatation(&s).unwrap();
        let c = cohomology_report(&s, &pisot, CohomologyOptions::default()).unwrap();
        assert!(c.conditions_consistent, "{name}");
        let all_three = c.three_conditions.iter().all(|&b| b);
        assert_eq!(c.dim_h1 == c.degree, all_three, "{name}");
        if pisot.is_pisot {
            assert!(c.dim_h1 >= pisot.degree, "{name}: dim H1 < d");
        }
    }
}

#[test]
fn rewriting_invariance() {
    let s = catalog::length_nine_cover();
    let one = cech_h1_dimension(&s).unwrap().dim_h1;
    let two = cech_h1_dimension(&s.power(2).unwrap()).unwrap().dim_h1;
    assert_eq!(one, two);
}

#[test]
fn coincidence_rank_matches_brute_force() {
    for (name, s) in catalog::all() {
        if s.constant_length().is_none() || s.size() > 6 {
            continue;
        }
        let r = coincidence_rank(&s).unwrap();
        assert_eq!(r.cr, brute_force_cr(&s, 4).unwrap(), "{name}");
        assert_eq!(r.stable_tuple.len(), r.cr, "{name}");
        assert!(is_stable_tuple(&s, &r.stable_tuple, 3).unwrap(), "{name}");
    }
}

#[test]
fn quotient_is_idempotent() {
    for (name, s) in catalog::all() {
        if s.constant_length().is_none() {
            continue;
        }
        let q = quotient_substitution(&s).unwrap();
        assert_eq!(quotient_substitution(&q).unwrap(), q, "{name}");
    }
}

#[test]
fn pure_core_is_a_fixed_point() {
    for (name, s) in catalog::all() {
        let pisot = minimal_polynomial_of_dilatation(&s).unwrap();
        if pisot.degree != 1 {
            continue;
        }
        let pc = pure_core(&s, &pisot).unwrap();
        let again = pure_core(&pc.core, &minimal_polynomial_of_dilatation(&pc.core).unwrap()).unwrap();
        assert_eq!(again.height, 1, "{name}");
        assert_eq!(again.core, pc.core, "{name}");
    }
}

#[test]
fn coincidence_rank_primes_divide_dilatation() {
    for (name, s) in catalog::all() {
        let pisot = minimal_polynomial_of_dilatation(&s).unwrap();
        if pisot.degree != 1 || s.constant_length().is_none() {
            continue;
        }
        let c = cohomology_report(&s, &pisot, CohomologyOptions::default()).unwrap();
        if !c.homological_pisot {
            continue;
        }
        let n = pisot.a0.abs().to_u64().unwrap();
        let cr = coincidence_rank(&s).unwrap().cr as u64;
        for p in 2..=cr {
            let prime = (2..p).all(|q| p % q != 0);
            if prime && cr.is_multiple_of(p) {
                assert_eq!(n % p, 0, "{name}: prime {p} of cr = {cr} does not divide {n}");
            }
        }
    }
}

#[test]
fn companion_limit_vectors() {
    for (name, s) in catalog::all() {
        let field = minimal_polynomial_of_dilatation(&s).unwrap().field;
        let r = companion_limit_vector(&field).unwrap();
        let c = companion_matrix(field.min_poly());
        let lambda = field.lambda();
        for (i, row) in c.iter().enumerate() {
            let cr = row
                .iter()
                .zip(&r)
                .fold(field.zero(), |acc, (cij, rj)| acc.add(&field.from_int(cij.clone()).mul(rj)));
            assert_eq!(cr, lambda.mul(&r[i]), "{name}: row {i}");
        }
        let dot = r
            .iter()
            .enumerate()
            .fold(field.zero(), |acc, (j, rj)| acc.add(&lambda.pow(j as u32).mul(rj)));
        assert_eq!(dot, field.one(), "{name}");
    }
}

/// Share of the length covered by the union of occurrences of `p`.
fn empirical_measure(lengths: &[f64], word: &[usize], p: &[usize]) -> f64 {
    let mut covered = vec![false; word.len()];
    for i in 0..=word.len() - p.len() {
        if word[i..i + p.len()] == *p {
            covered[i..i + p.len()].iter_mut().for_each(|c| *c = true);
        }
    }
    let total: f64 = word.iter().map(|&c| lengths[c]).sum();
    let hit: f64 = word.iter().zip(&covered).filter(|(_, &c)| c).map(|(&a, _)| lengths[a]).sum();
    hit / total
}

#[test]
fn measures_partition_and_match_frequencies() {
    for (name, s) in catalog::all() {
        let pisot = minimal_polynomial_of_dilatation(&s).unwrap();
        if !pisot.is_pisot {
            continue;
        }
        let g = tile_geometry(&s, &pisot).unwrap();
        let field = &g.field;
        let letters: Vec<_> = (0..s.size())
            .map(|a| cylinder_measure_value(&s, &g, &[a]).unwrap())
            .collect();
        let sum = letters.iter().fold(field.zero(), |acc, m| acc.add(m));
        assert_eq!(sum, field.one(), "{name}");
        let lengths: Vec<f64> = g.lengths.iter().map(|l| l.to_f64()).collect();
        let word = s.any_fixed_point_prefix(100_000).unwrap().word;
        let mut patches: Vec<Vec<usize>> = (0..s.size()).map(|a| vec![a]).collect();
        patches.extend(s.words_of_length(2).unwrap());
        for p in &patches {
            let exact = cylinder_measure_value(&s, &g, p).unwrap();
            let v = exact.to_f64();
            assert!(v > 0.0 && v < 1.0, "{name}: {}", s.display_word(p));
            let e = empirical_measure(&lengths, &word, p);
            assert!((v - e).abs() < 1e-2, "{name}: {} exact {v} empirical {e}", s.display_word(p));
        }
    }
}

#[test]
fn letter_functionals_conserve_length() {
    for (name, s) in catalog::all() {
        let pisot = minimal_polynomial_of_dilatation(&s).unwrap();
        let c = cohomology_report(&s, &pisot, CohomologyOptions::default()).unwrap();
        if !c.homological_pisot {
            continue;
        }
        let g = tile_geometry(&s, &pisot).unwrap();
        let mut fitter = ErpFitter::new(&s, &g, &pisot.a0, 10_000).unwrap();
        let alphas: Vec<Vec<BigRational>> = (0..s.size())
            .map(|a| fitter.fit(&[a]).unwrap().alphas.expect("exact fit"))
            .collect();
        let lambda = g.field.lambda();
        for i in 0..pisot.degree {
            let total = (0..s.size()).fold(g.field.zero(), |acc, a| acc.add(&g.lengths[a].scale(&alphas[a][i])));
            assert_eq!(total, g.base_length.mul(&lambda.pow(i as u32)), "{name}: coordinate {i}");
        }
        for p in default_patches(&s, None).unwrap() {
            let fit = fitter.fit(&p).unwrap();
            assert!(fit.in_z_one_over_a0(), "{name}: {}", fit.patch_display);
        }
    }
}

#[test]
fn generated_covers_have_the_claimed_structure() {
    for (m0, k) in [(catalog::fibonacci().abelianization(), 3), (catalog::tribonacci().abelianization(), 4)] {
        let e = cover_from_matrix(&m0, k).unwrap();
        assert!(e.validation.all_passed());
        assert!(e.checks.block_structure);
        assert!(e.checks.eigenvalues_contained);
        assert!(e.checks.rank <= e.checks.rank_bound);
        assert_eq!(e.checks.rank_bound, m0.size() + 2);
    }
}

#[test]
fn reconstruction_of_lengths() {
    for (name, s) in catalog::all() {
        let pisot = minimal_polynomial_of_dilatation(&s).unwrap();
        if !pisot.is_pisot {
            continue;
        }
        let g = tile_geometry(&s, &pisot).unwrap();
        let lambda = g.field.lambda();
        let word = s.any_fixed_point_prefix(200).unwrap().word;
        for len in [1, 7, 50, 200] {
            let x = g.word_length(&word[..len]);
            let c = g.coordinates(&x).unwrap();
            assert_eq!(c.len(), pisot.degree);
            let back = c
                .iter()
                .enumerate()
                .fold(g.field.zero(), |acc, (i, ci)| acc.add(&lambda.pow(i as u32).scale(ci)));
            assert_eq!(g.base_length.mul(&back), x, "{name}");
        }
    }
}
