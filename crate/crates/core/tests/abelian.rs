use std::collections::BTreeSet;

use kcalc::{group_from_relations, smith_normal_form, AbelianGroup, IntMatrix, Order};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(entries: &[i64], rows: usize, cols: usize) -> IntMatrix {
    let rows: Vec<Vec<BigInt>> = entries.chunks(cols).take(rows).map(|r| r.iter().map(|&x| x.into()).collect()).collect();
    IntMatrix::from_rows(&rows).unwrap()
}

fn det3(m: &[i64]) -> i64 {
    m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) + m[2] * (m[3] * m[7] - m[4] * m[6])
}

/// Number of cosets of the row lattice of a nonsingular 3x3 matrix, by
/// counting lattice-reduced representatives in the box [0, |det|)^3.
fn coset_count(m: &[i64]) -> u64 {
    let d = det3(m).abs();
    // adjugate rows: y is in the row lattice iff y * adj(M) = 0 mod det
    let adj = [
        m[4] * m[8] - m[5] * m[7],
        m[2] * m[7] - m[1] * m[8],
        m[1] * m[5] - m[2] * m[4],
        m[5] * m[6] - m[3] * m[8],
        m[0] * m[8] - m[2] * m[6],
        m[2] * m[3] - m[0] * m[5],
        m[3] * m[7] - m[4] * m[6],
        m[1] * m[6] - m[0] * m[7],
        m[0] * m[4] - m[1] * m[3],
    ];
    let key = |y: [i64; 3]| -> [i64; 3] {
        let mut out = [0; 3];
        for (j, o) in out.iter_mut().enumerate() {
            *o = (y[0] * adj[j] + y[1] * adj[3 + j] + y[2] * adj[6 + j]).rem_euclid(d);
        }
        out
    };
    let mut seen = BTreeSet::new();
    for a in 0..d {
        for b in 0..d {
            for c in 0..d {
                seen.insert(key([a, b, c]));
            }
        }
    }
    seen.len() as u64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn invariant_factors_form_a_chain(rows in 1usize..5, cols in 1usize..5, entries in prop::collection::vec(-20i64..=20, 16)) {
        let d = smith_normal_form(&matrix(&entries, rows, cols));
        prop_assert_eq!(d.len(), rows.min(cols));
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn quotient_order_is_abs_det(entries in prop::collection::vec(-5i64..=5, 9)) {
        let det = det3(&entries);
        prop_assume!(det != 0);
        let g = group_from_relations(3, &matrix(&entries, 3, 3)).unwrap();
        prop_assert_eq!(g.order(), Some(BigUint::from(det.unsigned_abs())));
        if det.abs() <= 30 {
            prop_assert_eq!(coset_count(&entries), det.unsigned_abs());
        }
    }

    #[test]
    fn canonicalization_is_idempotent(free in 0u64..4, moduli in prop::collection::vec(1u64..200, 0..6)) {
        let g = AbelianGroup::from_invariants(free, &moduli);
        let invariants: Vec<u64> = g.torsion().iter().map(|p| p.prime.pow(p.exponent)).collect();
        prop_assert_eq!(AbelianGroup::from_invariants(g.free_rank(), &invariants), g.clone());
        let json = serde_json_roundtrip(&g);
        prop_assert_eq!(json, g);
    }

    #[test]
    fn free_summands_do_not_change_torsion_primes(rank in 0u64..6, moduli in prop::collection::vec(1u64..500, 0..6)) {
        let g = AbelianGroup::from_invariants(rank % 2, &moduli);
        let expected: BTreeSet<u64> = moduli.iter().flat_map(|&m| kcalc::primes::factor_u64(m).into_iter().map(|(p, _)| p)).collect();
        prop_assert_eq!(g.torsion_primes(), expected.clone());
        prop_assert_eq!(g.direct_sum(&AbelianGroup::free(rank)).torsion_primes(), expected);
    }

    #[test]
    fn element_orders_divide_the_exponent(moduli in prop::collection::vec(2u64..60, 1..4), seed in prop::collection::vec(-100i64..100, 4)) {
        let g = AbelianGroup::from_invariants(0, &moduli);
        let coords: Vec<BigInt> = seed.iter().take(g.num_factors()).map(|&x| x.into()).chain(std::iter::repeat(BigInt::zero())).take(g.num_factors()).collect();
        let x = g.element(coords).unwrap();
        let exponent = g.exponent().unwrap();
        match g.element_order(&x).unwrap() {
            Order::Finite(d) => prop_assert!(exponent.is_multiple_of(&d)),
            Order::Infinite => prop_assert!(false, "torsion group has an element of infinite order"),
        }
        prop_assert!(exponent >= BigUint::one());
    }
}

fn serde_json_roundtrip(g: &AbelianGroup) -> AbelianGroup {
    let text = serde_json::to_string(g).unwrap();
    serde_json::from_str(&text).unwrap()
}

#[test]
fn isomorphism_is_an_equivalence_on_presentations() {
    let presentations = [
        matrix(&[6], 1, 1),
        matrix(&[2, 0, 0, 3], 2, 2),
        matrix(&[3, 0, 0, 2], 2, 2),
        matrix(&[2, 1, 0, 3], 2, 2),
        matrix(&[4], 1, 1),
        matrix(&[2, 0, 0, 2], 2, 2),
    ];
    let groups: Vec<AbelianGroup> = presentations.iter().map(|m| group_from_relations(m.cols(), m).unwrap()).collect();
    for a in &groups {
        assert!(a.is_isomorphic(a));
        for b in &groups {
            assert_eq!(a.is_isomorphic(b), b.is_isomorphic(a));
            for c in &groups {
                if a.is_isomorphic(b) && b.is_isomorphic(c) {
                    assert!(a.is_isomorphic(c));
                }
            }
        }
    }
    assert!(groups[0].is_isomorphic(&groups[1]) && groups[1].is_isomorphic(&groups[3]));
    assert!(!groups[4].is_isomorphic(&groups[5]));
}
