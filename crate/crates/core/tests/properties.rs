mod common;

use proptest::prelude::*;

use semre::matcher::{match_dp, match_naive, Matcher};
use semre::oracle::TableOracle;
use semre::syntax::{parse_semre, to_pattern, Alphabet, CharSet, Query, SemRe};

fn arb_semre() -> impl Strategy<Value = SemRe> {
    let leaf = prop_oneof![
        Just(SemRe::Empty),
        Just(SemRe::Epsilon),
        (b'a'..=b'c').prop_map(SemRe::byte),
        proptest::collection::vec(b'a'..=b'd', 0..3).prop_map(|bs| SemRe::set(CharSet::from_bytes(&bs))),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SemRe::cat(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SemRe::alt(a, b)),
            inner.clone().prop_map(SemRe::star),
            (inner, prop_oneof![Just("p"), Just("q")]).prop_map(|(a, q)| SemRe::refine(a, Query::new(q))),
        ]
    })
}

fn table(accept: &[(bool, Vec<u8>)]) -> TableOracle {
    let mut t = TableOracle::new(false);
    for (p, s) in accept {
        t.insert(&Query::new(if *p { "p" } else { "q" }), s, true);
    }
    t
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn print_then_parse_is_identity(r in arb_semre()) {
        let text = to_pattern(&r, Alphabet::Ascii);
        let back = parse_semre(&text).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn engines_agree(
        r in arb_semre(),
        w in proptest::collection::vec(b'a'..=b'c', 0..8),
        accept in proptest::collection::vec((any::<bool>(), proptest::collection::vec(b'a'..=b'c', 0..4)), 0..6),
    ) {
        let o = table(&accept);
        let lazy = Matcher::new(&r, &o).unwrap().is_match(&w, &o).unwrap().matched;
        prop_assert_eq!(lazy, match_dp(&r, &w, &o).unwrap().matched);
        prop_assert_eq!(lazy, match_naive(&r, &w, &o).unwrap());
    }

    #[test]
    fn refinement_never_adds_matches(
        r in arb_semre(),
        w in proptest::collection::vec(b'a'..=b'c', 0..8),
        accept in proptest::collection::vec((any::<bool>(), proptest::collection::vec(b'a'..=b'c', 0..4)), 0..6),
    ) {
        let o = table(&accept);
        let refined = Matcher::new(&r, &o).unwrap().is_match(&w, &o).unwrap().matched;
        let skeleton = r.skeleton();
        let plain = Matcher::new(&skeleton, &o).unwrap().is_match(&w, &o).unwrap().matched;
        prop_assert!(!refined || plain);
    }
}
