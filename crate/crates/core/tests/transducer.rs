mod common;

use common::*;
use infgraph::transducer::{LabelledTransducer, RationalRelation, TransducerEdge};
use infgraph::FiniteAutomaton;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn accepts_matches_path_enumeration(seed in any::<u64>()) {
        let x = binary_alphabet();
        let r = random_relation(&mut rng(seed), &x, 4, false);
        let raw = Raw::of_relation(&r);
        // no ε/ε edges: every path reading a pair of total length n has n edges
        let pairs = raw.pairs(8, 4);
        for u in all_words(2, 4) {
            for v in all_words(2, 4) {
                if u.len() + v.len() > 8 {
                    continue;
                }
                prop_assert_eq!(r.accepts(&u, &v), pairs.contains(&(u.clone(), v.clone())), "{:?} {:?}", u, v);
            }
        }
    }

    #[test]
    fn labelled_arcs_match_paths(seed in any::<u64>()) {
        let x = binary_alphabet();
        let sigma = shared(&["a", "b"]);
        let t = random_labelled(&mut rng(seed), &x, &sigma, 4, false);
        for a in sigma.symbols() {
            let pairs = Raw::of_label(&t, a).pairs(6, 3);
            let rel = t.relation_of(a).unwrap();
            for u in all_words(2, 3) {
                for v in all_words(2, 3) {
                    let expected = pairs.contains(&(u.clone(), v.clone()));
                    prop_assert_eq!(t.accepts_arc(&u, a, &v).unwrap(), expected);
                    prop_assert_eq!(rel.accepts(&u, &v), expected);
                }
            }
        }
    }

    #[test]
    fn image_is_the_set_of_related_words(seed in any::<u64>(), fs in any::<u64>()) {
        let x = binary_alphabet();
        let r = random_relation(&mut rng(seed), &x, 3, false);
        let src = random_fa(&mut rng(fs), &x, 3, false);
        let img = r.image_of(&src).unwrap();
        let pre = r.preimage_of(&src).unwrap();
        for v in all_words(2, 3) {
            // length-bounded witnesses suffice when every edge reads a letter
            let hit = all_words(2, 6).iter().any(|u| src.accepts(u) && r.accepts(u, &v));
            if hit {
                prop_assert!(img.accepts(&v));
            }
            let back = all_words(2, 6).iter().any(|w| src.accepts(w) && r.accepts(&v, w));
            if back {
                prop_assert!(pre.accepts(&v));
            }
        }
    }

    #[test]
    fn compose_is_exact(s1 in any::<u64>(), s2 in any::<u64>()) {
        let x = binary_alphabet();
        let r1 = random_relation(&mut rng(s1), &x, 3, false);
        let r2 = random_relation(&mut rng(s2), &x, 3, false);
        let c = r1.compose(&r2).unwrap();
        let (a, b) = (Raw::of_relation(&r1), Raw::of_relation(&r2));
        for u in all_words(2, 3) {
            for w in all_words(2, 3) {
                prop_assert_eq!(c.accepts(&u, &w), compose_member(&a, &b, &u, &w));
            }
        }
    }

    #[test]
    fn compose_is_associative(s1 in any::<u64>(), s2 in any::<u64>(), s3 in any::<u64>()) {
        let x = binary_alphabet();
        let r1 = random_relation(&mut rng(s1), &x, 2, false);
        let r2 = random_relation(&mut rng(s2), &x, 2, false);
        let r3 = random_relation(&mut rng(s3), &x, 2, false);
        let left = r1.compose(&r2).unwrap().compose(&r3).unwrap();
        let right = r1.compose(&r2.compose(&r3).unwrap()).unwrap();
        for u in all_words(2, 3) {
            for w in all_words(2, 3) {
                prop_assert_eq!(left.accepts(&u, &w), right.accepts(&u, &w));
            }
        }
    }

    #[test]
    fn converse_reverses_pairs_and_composition(s1 in any::<u64>(), s2 in any::<u64>()) {
        let x = binary_alphabet();
        let r1 = random_relation(&mut rng(s1), &x, 3, false);
        let r2 = random_relation(&mut rng(s2), &x, 3, false);
        let c1 = r1.converse();
        let lhs = r1.compose(&r2).unwrap().converse();
        let rhs = r2.converse().compose(&c1).unwrap();
        for u in all_words(2, 3) {
            for v in all_words(2, 3) {
                prop_assert_eq!(c1.accepts(&v, &u), r1.accepts(&u, &v));
                prop_assert_eq!(lhs.accepts(&u, &v), rhs.accepts(&u, &v));
            }
        }
    }

    #[test]
    fn normalization_preserves_relation(seed in any::<u64>()) {
        let x = binary_alphabet();
        let mut g = rng(seed);
        let base = random_relation(&mut g, &x, 3, false);
        // add a long edge so there is something to split
        let mut edges = base.edges().to_vec();
        edges.push(TransducerEdge::new(0, vec![0, 1], vec![1], 0));
        let r = RationalRelation::new(x.clone(), base.num_states(), [0], base.finals().to_vec(), edges).unwrap();
        let n = r.normalize_edges().unwrap();
        prop_assert!(n.is_normalized());
        for u in all_words(2, 4) {
            for v in all_words(2, 4) {
                prop_assert_eq!(n.accepts(&u, &v), r.accepts(&u, &v));
            }
        }
    }
}

#[test]
fn anbncn_relations() {
    let p = rational_file("anbncn.json");
    let t = p.transducer();
    let x = t.vertex_alphabet().clone();
    let w = |s: &str| x.parse_word(s).unwrap();
    let (a, b, c) = (0, 1, 2);
    assert_eq!(t.edges().len(), 11);
    assert!(t.accepts_arc(&w(""), a, &w("0")).unwrap());
    assert!(t.accepts_arc(&w("0"), b, &w("1")).unwrap());
    assert!(t.accepts_arc(&w("1"), c, &w("bot")).unwrap());
    assert!(t.accepts_arc(&w("011"), b, &w("111")).unwrap());
    assert!(!t.accepts_arc(&w("01"), c, &w("0")).unwrap());
    let bc = t.relation_of(b).unwrap().compose(&t.relation_of(c).unwrap()).unwrap();
    assert!(bc.accepts(&w("01"), &w("1")));
    assert!(bc.accepts(&w("0"), &w("bot")));
    assert!(!bc.accepts(&w("01"), &w("bot")));
}

#[test]
fn identity_on_language() {
    let x = binary_alphabet();
    let l = FiniteAutomaton::from_regex(x.clone(), "0*1").unwrap();
    let id = RationalRelation::identity_on(&l);
    for u in all_words(2, 4) {
        for v in all_words(2, 4) {
            assert_eq!(id.accepts(&u, &v), u == v && l.accepts(&u));
        }
    }
}

#[test]
fn labelled_transducer_rejects_bad_input() {
    let x = binary_alphabet();
    let sigma = shared(&["a"]);
    let edge = TransducerEdge::new(0, vec![5], vec![], 0);
    assert!(LabelledTransducer::new(x.clone(), sigma.clone(), 1, [0], Default::default(), vec![edge]).is_err());
    let edge = TransducerEdge::new(0, vec![0], vec![], 3);
    assert!(LabelledTransducer::new(x, sigma, 1, [0], Default::default(), vec![edge]).is_err());
}
