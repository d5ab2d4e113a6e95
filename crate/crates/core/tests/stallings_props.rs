mod common;

use common::{f2, in_cyclic, products, w};
use proptest::prelude::*;
use relcurr_core::stallings::{check_malnormal_system, compute_L, is_root_closed_bounded, CoreGraph, MalnormalVerdict, RootClosedVerdict};
use relcurr_core::word::Word;

fn graph(gens: &[&str]) -> CoreGraph {
    CoreGraph::from_generators(f2(), &gens.iter().map(|s| w(s)).collect::<Vec<_>>()).unwrap()
}

const DESK: [&[&str]; 5] = [&["a"], &["b"], &["aa", "b"], &["ab"], &["aB"]];

#[test]
fn membership_matches_products_up_to_length_6() {
    for gens in DESK {
        let words: Vec<Word> = gens.iter().map(|s| w(s)).collect();
        let members = products(&words, 6, 6);
        let g = graph(gens);
        for x in f2().reduced_words_up_to(6) {
            assert_eq!(g.contains(&x), members.contains(&x), "{gens:?} {x}");
        }
    }
}

#[test]
fn membership_matches_products_for_larger_subgroups() {
    for gens in [&["abA", "bb"][..], &["aab", "bA"], &["abab", "ba"], &["aaa", "bab", "Ab"]] {
        let words: Vec<Word> = gens.iter().map(|s| w(s)).collect();
        let members = products(&words, 8, 5);
        let g = graph(gens);
        for x in f2().reduced_words_up_to(5) {
            if members.contains(&x) {
                assert!(g.contains(&x), "{gens:?} {x}");
            }
        }
        for b in &words {
            assert!(g.contains(b));
        }
    }
}

#[test]
fn readable_from_traces_the_folded_square() {
    let g = graph(&["aa", "b"]);
    assert!(g.readable_from(0, &w("ab")) == g.read(0, &w("a")).is_some_and(|v| g.readable_from(v, &w("b"))));
}

/// `A ∩ hAh^-1` has no nontrivial element of length at most 6 for every
/// `h` of length at most 3 outside `A`, and likewise across subgroups.
fn bounded_malnormal(gens: &[Word]) -> bool {
    let elements: Vec<Word> = f2().reduced_words_up_to(6).into_iter().skip(1).collect();
    for (i, gi) in gens.iter().enumerate() {
        for (j, gj) in gens.iter().enumerate() {
            for h in f2().reduced_words_up_to(3) {
                if i == j && in_cyclic(gi, &h) {
                    continue;
                }
                let hit = elements
                    .iter()
                    .any(|x| in_cyclic(gi, x) && in_cyclic(gj, &h.inverse().mul(x).mul(&h)));
                if hit {
                    return false;
                }
            }
        }
    }
    true
}

#[test]
fn malnormality_agrees_with_bounded_oracle() {
    for system in [&["a"][..], &["a", "b"], &["ab", "aB"], &["a", "a"], &["aa"], &["a", "baB"], &["ab", "ba"]] {
        let gens: Vec<Word> = system.iter().map(|s| w(s)).collect();
        let graphs: Vec<CoreGraph> = gens.iter().map(|g| CoreGraph::from_generators(f2(), std::slice::from_ref(g)).unwrap()).collect();
        let ok = check_malnormal_system(&graphs) == MalnormalVerdict::Ok;
        assert_eq!(ok, bounded_malnormal(&gens), "{system:?}");
    }
}

#[test]
fn l_matches_ball_oracle() {
    for system in [&["a"][..], &["a", "b"], &["ab", "aB"], &["aab"], &["ab", "aaB"]] {
        let gens: Vec<Word> = system.iter().map(|s| w(s)).collect();
        let graphs: Vec<CoreGraph> = gens.iter().map(|g| CoreGraph::from_generators(f2(), std::slice::from_ref(g)).unwrap()).collect();
        if check_malnormal_system(&graphs) != MalnormalVerdict::Ok {
            continue;
        }
        assert_eq!(compute_L(&graphs).unwrap(), common::ball_l(&gens, 8), "{system:?}");
    }
}

#[test]
fn malnormal_subgroups_are_root_closed() {
    for gens in [&["a"][..], &["ab"], &["aB"], &["aab"], &["aa", "b"], &["abA", "bb"]] {
        let g = graph(gens);
        if check_malnormal_system(std::slice::from_ref(&g)) == MalnormalVerdict::Ok {
            assert_eq!(is_root_closed_bounded(&g, 4, 4).unwrap(), RootClosedVerdict::NoCounterexample, "{gens:?}");
        }
    }
}

fn generator_list() -> impl Strategy<Value = Vec<Word>> {
    let word = prop::collection::vec(0usize..4, 1..5)
        .prop_map(|v| Word::reduce(v.into_iter().map(relcurr_core::word::Letter::from_index)));
    prop::collection::vec(word, 1..4)
}

proptest! {
    #[test]
    fn folding_ignores_generator_order(gens in generator_list(), seed in any::<u64>()) {
        prop_assume!(gens.iter().any(|g| !g.is_empty()));
        let mut shuffled = gens.clone();
        let n = shuffled.len();
        for i in 0..n {
            let j = (seed as usize).wrapping_add(i * 7) % n;
            shuffled.swap(i, j);
        }
        let inverted: Vec<Word> = gens.iter().map(Word::inverse).collect();
        let a = CoreGraph::from_generators(f2(), &gens).unwrap();
        prop_assert_eq!(&a, &CoreGraph::from_generators(f2(), &shuffled).unwrap());
        prop_assert_eq!(&a, &CoreGraph::from_generators(f2(), &inverted).unwrap());
    }

    #[test]
    fn folded_graphs_are_core_plus_spur(gens in generator_list()) {
        prop_assume!(gens.iter().any(|g| !g.is_empty()));
        let g = CoreGraph::from_generators(f2(), &gens).unwrap();
        for v in 0..g.vertex_count() {
            if v != g.basepoint() {
                prop_assert!(g.degree(v) >= 2);
            }
            for l in f2().letters() {
                if let Some(t) = g.follow(v, l) {
                    prop_assert_eq!(g.follow(t, l.inverse()), Some(v));
                }
            }
        }
        for b in &gens {
            prop_assert!(g.contains(b));
        }
        prop_assert_eq!(&CoreGraph::from_generators(f2(), &g.basis()).unwrap(), &g);
    }
}
