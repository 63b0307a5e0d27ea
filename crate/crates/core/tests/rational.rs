mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use infgraph::graph::Graph;
use infgraph::rational::{simple_paths_substitution, vertex_set, RationalGraphPresentation, TraceQuery};
use infgraph::{FiniteAutomaton, SymbolAlphabet, Word};
use proptest::prelude::*;
use rand::Rng;

/// Words of length `n` reachable from `u` along `word`, computed from raw
/// path enumeration of a length-preserving transducer.
fn trace_front(p: &RationalGraphPresentation, u: &[usize], word: &[usize]) -> BTreeSet<Word> {
    let n = u.len();
    let inside = |w: &Word| p.restriction().is_none_or(|r| nfa_accepts(r, w));
    let pairs: Vec<BTreeSet<(Word, Word)>> =
        p.label_alphabet().symbols().map(|a| Raw::of_label(p.transducer(), a).pairs(n, n)).collect();
    let mut front: BTreeSet<Word> = if inside(&u.to_vec()) { BTreeSet::from([u.to_vec()]) } else { BTreeSet::new() };
    for &a in word {
        front = pairs[a].iter().filter(|(x, y)| front.contains(x) && inside(y)).map(|(_, y)| y.clone()).collect();
    }
    front
}

fn random_presentation(seed: u64) -> RationalGraphPresentation {
    let mut g = rng(seed);
    let x = binary_alphabet();
    let sigma = shared(&["a", "b"]);
    let t = random_labelled(&mut g, &x, &sigma, 3, true);
    let restriction = if g.gen_bool(0.5) { Some(random_fa(&mut g, &x, 2, false)) } else { None };
    RationalGraphPresentation::new(t, restriction).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_membership_matches_explicit_fronts(seed in any::<u64>(), ts in any::<u64>()) {
        let p = random_presentation(seed);
        let x = p.vertex_alphabet().clone();
        let target = random_fa(&mut rng(ts), &x, 2, false);
        for u in all_words(2, 3) {
            for word in all_words(2, 3) {
                let front = trace_front(&p, &u, &word);
                let expected = front.iter().any(|v| nfa_accepts(&target, v));
                let q = TraceQuery { initial: FiniteAutomaton::singleton(x.clone(), &u).unwrap(), target: target.clone(), word: word.clone() };
                prop_assert_eq!(p.trace_member(&q).unwrap(), expected, "{:?} {:?}", u, word);
            }
        }
    }

    #[test]
    fn bounded_view_lists_exactly_the_arcs(seed in any::<u64>()) {
        let p = random_presentation(seed);
        let x = p.vertex_alphabet();
        let sigma = p.label_alphabet();
        let view = p.bounded_view(3).unwrap();
        for u in all_words(2, 3) {
            for v in all_words(2, 3) {
                for a in sigma.symbols() {
                    let has = view.has_arc(&x.display_word(&u), sigma.token(a), &x.display_word(&v));
                    prop_assert_eq!(has, p.arc_exists(&u, a, &v).unwrap());
                }
            }
        }
    }

    #[test]
    fn composition_joins_arcs(s1 in any::<u64>(), s2 in any::<u64>()) {
        let (g, h) = (random_presentation(s1), random_presentation(s2));
        let gh = g.compose_graphs(&h).unwrap();
        let (vg, vh, vgh) = (g.bounded_view(3).unwrap(), h.bounded_view(3).unwrap(), gh.bounded_view(3).unwrap());
        // lengths are preserved, so middle vertices are no longer than the
        // ends; the composite keeps only vertices common to both graphs
        let common = |v: &String| vg.vertices().contains(v) && vh.vertices().contains(v);
        let mut expected = Graph::new();
        for a in vg.arcs() {
            for b in vh.arcs() {
                if a.target == b.source && common(&a.source) && common(&b.target) {
                    expected.add_arc(infgraph::graph::LabelledArc::new(a.source.clone(), format!("{}.{}", a.label, b.label), b.target.clone()));
                }
            }
        }
        prop_assert_eq!(vgh.arcs(), expected.arcs());
    }

    #[test]
    fn inverse_substitution_matches_explicit_walks(seed in any::<u64>()) {
        let p = random_presentation(seed);
        let phi: BTreeMap<String, Vec<String>> = BTreeMap::from([
            ("d".to_string(), vec!["ab".to_string(), "b~".to_string()]),
            ("e".to_string(), vec!["a".to_string()]),
        ]);
        let q = p.inverse_finite_substitution(&phi).unwrap();
        let view = p.bounded_view(3).unwrap();
        // the explicit version needs every label to occur in the view
        prop_assume!(["a", "b"].iter().all(|l| view.arcs().iter().any(|x| x.label == *l)));
        let walk = std::sync::Arc::new(p.label_alphabet().with_bars().unwrap());
        let explicit_phi: BTreeMap<String, FiniteAutomaton> = phi
            .iter()
            .map(|(d, ws)| {
                let words: Vec<Word> = ws.iter().map(|w| walk.parse_word(w).unwrap()).collect();
                (d.clone(), FiniteAutomaton::from_words(walk.clone(), &words).unwrap())
            })
            .collect();
        let expected = view.inverse_substitution_explicit(&explicit_phi, None).unwrap();
        let got = q.bounded_view(3).unwrap();
        prop_assert_eq!(got.arcs(), expected.arcs());
    }
}

#[test]
fn anbncn_traces_are_anbncn() {
    let p = rational_file("anbncn.json");
    let x = p.vertex_alphabet().clone();
    let eps = FiniteAutomaton::epsilon(x.clone());
    let bot = vertex_set(&x, "bot").unwrap();
    let sample = p.trace_language_sample(&eps, &bot, 6).unwrap();
    let shown: Vec<String> = sample.iter().map(|w| p.label_alphabet().format_word(w)).collect();
    assert_eq!(shown, ["abc", "aabbcc"]);
    let q = TraceQuery { initial: eps, target: bot, word: p.label_alphabet().parse_word("aaabbbccc").unwrap() };
    assert!(p.trace_member(&q).unwrap());
}

#[test]
fn anbncn_view_has_twelve_arcs() {
    let p = rational_file("anbncn.json");
    let view = p.bounded_view(3).unwrap();
    let expected = arcs_of(&[
        ("ε", "a", "0"), ("0", "b", "1"), ("1", "c", "bot"),
        ("0", "a", "00"), ("00", "b", "01"), ("01", "b", "11"), ("11", "c", "1"),
        ("00", "a", "000"), ("000", "b", "001"), ("001", "b", "011"), ("011", "b", "111"), ("111", "c", "11"),
    ]);
    assert_eq!(view.arcs(), &expected);
}

#[test]
fn simple_paths_use_each_edge_once() {
    let p = rational_file("anbncn.json");
    let t = p.transducer();
    let paths = simple_paths_substitution(t, 0).unwrap();
    for path in &paths {
        let distinct: BTreeSet<_> = path.iter().collect();
        assert_eq!(distinct.len(), path.len());
        for w in path.windows(2) {
            assert_eq!(t.edges()[w[0]].target, t.edges()[w[1]].source);
        }
    }
    // a: ε/0 then the 0/0 loop, or ε/0 alone
    assert_eq!(paths, vec![vec![3], vec![3, 10]]);
}

#[test]
fn mismatched_alphabets_are_rejected() {
    let p = rational_file("anbncn.json");
    let other = SymbolAlphabet::shared(["0", "1"]).unwrap();
    let q = TraceQuery { initial: FiniteAutomaton::epsilon(other.clone()), target: FiniteAutomaton::epsilon(other), word: vec![] };
    assert!(p.trace_member(&q).is_err());
}
