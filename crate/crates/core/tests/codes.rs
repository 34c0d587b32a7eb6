//! Code construction, derivation and catalog against brute-force oracles.

use std::collections::BTreeSet;

use npc_core::codes::{
    bch_dimension, closed_form_max_distance, construct_bch, derive, multiplicative_order,
    Catalog, CatalogQuery, GaloisField, LinearCode, Provenance, Rule,
};
use npc_core::gf2::{rank, BitMatrix};
use proptest::prelude::*;

/// Codewords of `code`, in the coordinates of the matrix it was built from.
fn words(code: &LinearCode) -> BTreeSet<Vec<u8>> {
    let rows = code.generator().to_rows();
    let map = code.column_map();
    (0u32..1 << rows.len())
        .map(|mask| {
            let mut w = vec![0u8; code.n()];
            for (i, row) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (j, &b) in row.iter().enumerate() {
                        w[map[j]] ^= b;
                    }
                }
            }
            w
        })
        .collect()
}

/// Codewords in the systematic coordinates the derivation rules act on.
fn systematic_words(code: &LinearCode) -> BTreeSet<Vec<u8>> {
    let rows = code.generator().to_rows();
    (0u32..1 << rows.len())
        .map(|mask| {
            let mut w = vec![0u8; code.n()];
            for (i, row) in rows.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    for (x, y) in w.iter_mut().zip(row) {
                        *x ^= y;
                    }
                }
            }
            w
        })
        .collect()
}

fn weight(w: &[u8]) -> usize {
    w.iter().filter(|&&b| b == 1).count()
}

fn distance(words: &BTreeSet<Vec<u8>>) -> usize {
    words.iter().map(|w| weight(w)).filter(|&w| w > 0).min().unwrap_or(0)
}

fn random_code() -> impl Strategy<Value = LinearCode> {
    (2usize..=5, 1usize..=4)
        .prop_flat_map(|(k, m)| prop::collection::vec(prop::collection::vec(0u8..=1, k + m), k))
        .prop_filter_map("full rank", |rows| {
            let g = BitMatrix::from_rows(&rows).ok()?;
            (rank(&g) == g.rows())
                .then(|| LinearCode::from_generator(&g, Provenance::Explicit("random".into())).ok())
                .flatten()
        })
}

proptest! {
    #[test]
    fn shorten_keeps_zero_codewords(code in random_code()) {
        let last = code.n() - 1;
        let expected: BTreeSet<Vec<u8>> = systematic_words(&code)
            .into_iter()
            .filter(|w| w[last] == 0)
            .map(|mut w| { w.pop(); w })
            .collect();
        match derive(&code, Rule::Shorten) {
            Ok(short) => {
                prop_assert_eq!(words(&short), expected.clone());
                prop_assert_eq!(short.d_min().value(), distance(&expected));
            }
            Err(_) => prop_assert!(expected.len() == 1 << code.k() || code.k() < 2),
        }
    }

    #[test]
    fn puncture_deletes_a_coordinate(code in random_code()) {
        let expected: BTreeSet<Vec<u8>> = systematic_words(&code)
            .into_iter()
            .map(|mut w| { w.pop(); w })
            .collect();
        if let Ok(p) = derive(&code, Rule::Puncture) {
            prop_assert_eq!(words(&p), expected.clone());
            prop_assert_eq!(p.d_min().value(), distance(&expected));
        }
    }

    #[test]
    fn append_adds_even_parity(code in random_code()) {
        let expected: BTreeSet<Vec<u8>> = systematic_words(&code)
            .into_iter()
            .map(|mut w| { let p = weight(&w) as u8 % 2; w.push(p); w })
            .collect();
        let a = derive(&code, Rule::Append).unwrap();
        prop_assert_eq!(words(&a), expected.clone());
        let d = distance(&systematic_words(&code));
        prop_assert_eq!(a.d_min().value(), d + d % 2);
    }

    #[test]
    fn extend_matches_covering_radius(code in random_code()) {
        let base = systematic_words(&code);
        let n = code.n();
        let radius = (0u32..1 << n)
            .map(|v| {
                let v: Vec<u8> = (0..n).map(|i| (v >> i & 1) as u8).collect();
                base.iter()
                    .map(|w| w.iter().zip(&v).filter(|(a, b)| a != b).count())
                    .min()
                    .unwrap()
            })
            .max()
            .unwrap();
        let e = derive(&code, Rule::Extend).unwrap();
        prop_assert_eq!((e.n(), e.k()), (n + 1, code.k() + 1));
        let d = distance(&base).min(radius + 1);
        prop_assert_eq!(e.d_min().value(), d);
        prop_assert_eq!(distance(&words(&e)), d);
    }

    #[test]
    fn field_multiplication_matches_carryless(degree in 2u32..=8, a in any::<u16>(), b in any::<u16>()) {
        let f = GaloisField::new(degree).unwrap();
        let mask = (1u16 << degree) - 1;
        let (a, b) = (a & mask, b & mask);
        let mut product = 0u32;
        for i in 0..degree {
            if b >> i & 1 == 1 {
                product ^= u32::from(a) << i;
            }
        }
        for bit in (degree..2 * degree).rev() {
            if product >> bit & 1 == 1 {
                product ^= f.polynomial() << (bit - degree);
            }
        }
        let got = f.mul(f.element(a).unwrap(), f.element(b).unwrap()).unwrap();
        prop_assert_eq!(u32::from(got.bits()), product);
    }
}

#[test]
fn bch_codes_meet_designed_distance() {
    for n in [7usize, 15, 31] {
        let mu = multiplicative_order(n).unwrap();
        for d in 2..=closed_form_max_distance(n, mu) {
            let code = construct_bch(n, d).unwrap();
            assert_eq!(code.k(), bch_dimension(n, d, mu).unwrap(), "BCH({n},{d})");
            assert!(code.generator().mul(&code.parity().transpose()).unwrap().is_zero());
            if code.k() <= 16 {
                let exact = distance(&words(&code));
                assert!(exact >= d, "BCH({n},{d}) has distance {exact}");
                assert_eq!(code.d_min().value(), exact);
            }
        }
    }
}

#[test]
fn bch_rejects_bad_lengths() {
    assert!(construct_bch(14, 3).is_err());
    assert!(construct_bch(15, 1).is_err());
    assert!(bch_dimension(15, 3, 5).is_err());
}

#[test]
fn catalog_round_trips_and_filters() {
    let catalog = Catalog::bundled();
    let again = Catalog::parse(&catalog.to_text()).unwrap();
    assert_eq!(&again, catalog);
    let q = CatalogQuery {
        n: Some(15),
        t: Some(2),
        kind: None,
    };
    let hits = catalog.query(&q);
    assert!(!hits.is_empty());
    assert!(hits.iter().all(|e| e.n == 15 && e.d == 3));
    for (entry, code) in catalog.codes() {
        assert_eq!((code.n(), code.k()), (entry.n, entry.k), "{}", entry.parameters());
        assert!(code.d_min().value() >= entry.d, "{}", entry.parameters());
    }
    assert!(Catalog::parse("15 11 three hamming@I bch\n").is_err());
}
