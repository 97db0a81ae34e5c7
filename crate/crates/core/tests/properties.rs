//! Random-input invariants of the series algebra and the expansions.

use proptest::prelude::*;

use group_expansions::expand::Expansion;
use group_expansions::json;
use group_expansions::lie::{dynkin_project, lie_embed, lyndon_words, LiePoly};
use group_expansions::series::Series;
use group_expansions::words::Word;
use group_expansions::{NcSeries, Rat};

const RANK: usize = 2;
const LEVEL: usize = 4;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=4).prop_map(|(p, q)| Rat::new(p.into(), q.into()))
}

fn monomial() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(1u8..=RANK as u8, 1..=LEVEL)
}

/// Series with zero constant term.
fn augmentation_series() -> impl Strategy<Value = NcSeries> {
    prop::collection::vec((monomial(), small_rat()), 0..6).prop_map(|terms| {
        let mut s = Series::zero(RANK, LEVEL);
        for (w, c) in terms {
            s.add_term(w, c);
        }
        s
    })
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=RANK, prop::bool::ANY), 0..=max_len).prop_map(|ls| {
        let letters = ls
            .into_iter()
            .map(|(g, sign)| if sign { g as i32 } else { -(g as i32) })
            .collect();
        Word::new(RANK, letters).unwrap()
    })
}

fn lie_poly() -> impl Strategy<Value = LiePoly> {
    let lyndon: Vec<Vec<u8>> = (1..=LEVEL).flat_map(|d| lyndon_words(RANK, d)).collect();
    prop::collection::vec((0..lyndon.len(), small_rat()), 0..5).prop_map(move |picks| {
        let mut p = LiePoly::zero(RANK);
        for (i, c) in picks {
            p = p
                .add(&LiePoly::from_terms(RANK, vec![(lyndon[i].clone(), c)]).unwrap())
                .unwrap();
        }
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prop_exp_log_round_trip(s in augmentation_series()) {
        let e = s.exp().unwrap();
        prop_assert_eq!(e.log().unwrap(), s);
    }

    #[test]
    fn prop_inverse_is_two_sided(s in augmentation_series()) {
        let g = Series::one(RANK, LEVEL).add(&s).unwrap();
        let inv = g.inverse().unwrap();
        prop_assert_eq!(g.mul(&inv).unwrap(), Series::one(RANK, LEVEL));
        prop_assert_eq!(inv.mul(&g).unwrap(), Series::one(RANK, LEVEL));
    }

    #[test]
    fn prop_coproduct_is_an_algebra_map(a in augmentation_series(), b in augmentation_series()) {
        let ca = a.coproduct();
        let cb = b.coproduct();
        prop_assert_eq!(a.mul(&b).unwrap().coproduct(), ca.mul(&cb).unwrap());
    }

    #[test]
    fn prop_expansions_are_multiplicative(u in word(6), v in word(6), magnus in prop::bool::ANY) {
        let e = if magnus {
            Expansion::magnus(RANK, LEVEL).unwrap()
        } else {
            Expansion::exponential(RANK, LEVEL).unwrap()
        };
        let uv = u.mul(&v).unwrap();
        prop_assert_eq!(
            e.expand(&uv).unwrap(),
            e.expand(&u).unwrap().mul(&e.expand(&v).unwrap()).unwrap()
        );
    }

    #[test]
    fn prop_expansion_of_inverse_is_inverse(w in word(6)) {
        let e = Expansion::exponential(RANK, LEVEL).unwrap();
        prop_assert_eq!(
            e.expand(&w.inverse()).unwrap(),
            e.expand(&w).unwrap().inverse().unwrap()
        );
    }

    #[test]
    fn prop_exp_of_a_lie_element_is_grouplike(p in lie_poly()) {
        let s = lie_embed(&p, LEVEL).unwrap();
        prop_assert!(s.exp().unwrap().is_grouplike());
        // and the embedding is faithful on Lyndon coordinates
        prop_assert_eq!(dynkin_project(&s).unwrap(), p);
    }

    #[test]
    fn prop_series_json_round_trip(s in augmentation_series(), c in small_rat()) {
        let mut g = s;
        g.add_term(vec![], c);
        let v = json::series_to_json(&g);
        prop_assert_eq!(json::series_from_json(&v).unwrap(), g);
    }
}
