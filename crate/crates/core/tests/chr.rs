mod common;

use common::*;
use infgraph::chr::{find_matches, from_rational, pcp_encode, pcp_step_bound, to_rational, ChrAxiom, PcpInstance};
use infgraph::graph::{isomorphic, Hyperarc};
use infgraph::rational::RationalGraphPresentation;
use proptest::prelude::*;
use rand::Rng;

fn random_presentation(seed: u64) -> RationalGraphPresentation {
    let mut g = rng(seed);
    let x = binary_alphabet();
    let sigma = shared(&["a", "b"]);
    let t = random_labelled(&mut g, &x, &sigma, 3, false);
    let restriction = if g.gen_bool(0.3) { Some(random_fa(&mut g, &x, 2, false)) } else { None };
    RationalGraphPresentation::new(t, restriction).unwrap()
}

/// Step count after which every arc between vertices of length at most 3
/// has been produced, and the axiom depth that keeps those vertices.
const STEPS: usize = 8;
const DEPTH: usize = 4;

fn hash_within(inst: &PcpInstance, steps: usize) -> bool {
    let g = pcp_encode(inst).unwrap();
    let state = g.generate_state(steps, 0).unwrap();
    state.current.contains(&Hyperarc::new("#", ["0", "1"]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn rational_round_trip_preserves_bounded_views(seed in any::<u64>()) {
        let p = random_presentation(seed);
        let expected = p.bounded_view(3).unwrap();
        let g = from_rational(&p).unwrap();
        prop_assert!(g.validate().is_valid());
        prop_assert!(g.is_tree_separated());
        let view = g.generate(STEPS, DEPTH).unwrap();
        let decoded = view.decoded(3).unwrap();
        prop_assert_eq!(decoded.arcs(), expected.arcs());
        // the decoded view only lists vertices on arcs
        prop_assert!(isomorphic(&with_vertices(&decoded, expected.vertices()), &expected));
        let back = to_rational(&g).unwrap();
        let again = back.bounded_view(3).unwrap();
        prop_assert_eq!(again.arcs(), expected.arcs());
    }

    #[test]
    fn generation_is_monotone_and_unambiguous(seed in any::<u64>()) {
        let p = random_presentation(seed);
        let g = from_rational(&p).unwrap();
        let mut state = g.initial_chr_state().unwrap();
        for _ in 0..5 {
            // every rule matches each occurrence at most once
            for rule in g.rules() {
                for m in find_matches(&state.current, rule).unwrap() {
                    prop_assert_eq!(&m.occurrence.label, &rule.nonterminal);
                }
            }
            let next = g.parallel_step(&state, DEPTH).unwrap();
            let (before, after) = (g.view(state.clone()).graph, g.view(next.clone()).graph);
            prop_assert!(before.is_subgraph_of(&after));
            state = next;
        }
    }

    #[test]
    fn pcp_hash_iff_short_solution(seed in any::<u64>()) {
        let mut r = rng(seed);
        let word = |r: &mut rand_chacha::ChaCha8Rng| -> String {
            (0..r.gen_range(1..=2)).map(|_| if r.gen_bool(0.5) { 'a' } else { 'b' }).collect()
        };
        let pairs: Vec<(String, String)> = (0..r.gen_range(1..=2)).map(|_| (word(&mut r), word(&mut r))).collect();
        let inst = PcpInstance::new(pairs).unwrap();
        let steps = 9;
        // a solution of m indices spelling a word of length l shows at 2m + l + 1
        let expected = pcp_solutions(&inst, 4).iter().any(|(s, w)| 2 * s.len() + w.len() < steps + 1);
        prop_assert_eq!(hash_within(&inst, steps), expected, "{:?}", inst.pairs());
    }
}

#[test]
fn anbncn_chr_round_trip() {
    let p = rational_file("anbncn.json");
    let g = from_rational(&p).unwrap();
    let view = g.generate(6, 8).unwrap();
    assert!(!view.is_truncated(), "{:?}", view.diagnostics);
    assert_eq!(view.decoded(3).unwrap().arcs(), p.bounded_view(3).unwrap().arcs());
    assert_eq!(to_rational(&g).unwrap().bounded_view(3).unwrap(), p.bounded_view(3).unwrap());
}

#[test]
fn shallow_axiom_reports_truncation() {
    let p = rational_file("anbncn.json");
    let g = from_rational(&p).unwrap();
    let view = g.generate(6, 1).unwrap();
    assert!(view.is_truncated());
    assert!(view.diagnostics.iter().any(|d| d.contains("frontier-truncated")), "{:?}", view.diagnostics);
}

#[test]
fn pcp_bound_examples() {
    let inst = PcpInstance::parse("ab:a,b:bb").unwrap();
    assert_eq!(pcp_step_bound(&inst, 2), 9);
    assert!(hash_within(&inst, 9));
    assert!(!hash_within(&inst, 7));
    assert_eq!(pcp_brute_force(&inst, 3), Some(vec![0, 1]));
    let none = PcpInstance::parse("ab:ba").unwrap();
    assert!(!hash_within(&none, 12));
    assert_eq!(pcp_brute_force(&none, 6), None);
}

#[test]
fn pcp_system_is_well_formed() {
    let g = pcp_encode(&PcpInstance::parse("a:ab,b:a").unwrap()).unwrap();
    assert!(g.validate().is_valid());
    let ChrAxiom::Finite(axiom) = g.axiom() else { panic!("finite axiom expected") };
    assert_eq!(axiom.len(), 2);
}
