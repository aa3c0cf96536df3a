mod common;

use std::collections::VecDeque;

use proptest::prelude::*;
use ptkit::extremal::{gen_ak, indexed_alphabet, pkn, pkn_recursive, pkn_stirling};
use ptkit::kpt::{decompose, is_1pt, is_kpt_oracle, min_k, verify_certificate, MinK, OracleVerdict};
use ptkit::monoid::{
    check_identity, check_identity_exhaustive, evaluate_assignment, kpt_identities, IdentityCheck, TransitionMonoid,
};
use ptkit::pt::{certify_pt_nfa, is_pt, is_pt_min_dfa, is_pt_min_dfa_ums, minimal_dfa, NfaCertificate};
use ptkit::subwords::{canonical_automaton, DEFAULT_CLASS_BUDGET};
use ptkit::Automaton;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{all_words, random_dfa, random_minimal_dfa};

/// Arbitrary NFA: up to `max_states` states, `max_letters` letters, each
/// (state, letter) with a random successor set of size up to 2.
fn random_nfa<R: Rng>(rng: &mut R, max_states: usize, max_letters: usize) -> Automaton {
    let n = rng.gen_range(1..=max_states);
    let m = rng.gen_range(1..=max_letters);
    let alphabet: Vec<String> = (0..m).map(|i| format!("l{i}")).collect();
    let mut a = Automaton::new(alphabet, (0..n).map(|i| format!("s{i}"))).unwrap();
    for p in 0..n {
        for x in 0..m {
            for _ in 0..rng.gen_range(0..=2) {
                a.add_transition(p, x, rng.gen_range(0..n));
            }
        }
        if rng.gen_bool(0.3) {
            a.set_initial(p);
        }
        a.set_accepting(p, rng.gen_bool(0.5));
    }
    if a.initial_states().is_empty() {
        a.set_initial(0);
    }
    a
}

/// Complete NFA whose edges never decrease the state index.
fn random_po_complete_nfa<R: Rng>(rng: &mut R, max_states: usize) -> Automaton {
    let n = rng.gen_range(1..=max_states);
    let m = rng.gen_range(1..=2);
    let alphabet: Vec<String> = (0..m).map(|i| format!("l{i}")).collect();
    let mut a = Automaton::new(alphabet, (0..n).map(|i| format!("s{i}"))).unwrap();
    for p in 0..n {
        for x in 0..m {
            let count = rng.gen_range(1..=2);
            for _ in 0..count {
                let q = if rng.gen_bool(0.5) { p } else { rng.gen_range(p..n) };
                a.add_transition(p, x, q);
            }
        }
        a.set_accepting(p, rng.gen_bool(0.5));
    }
    a.set_initial(0);
    if n > 1 && rng.gen_bool(0.3) {
        a.set_initial(rng.gen_range(1..n));
    }
    a
}

fn random_word<R: Rng>(rng: &mut R, letters: usize, max_len: usize) -> Vec<usize> {
    let len = rng.gen_range(0..=max_len);
    (0..len).map(|_| rng.gen_range(0..letters)).collect()
}

/// Cycle through distinct states, found by colored DFS ignoring self-loops.
fn has_nontrivial_cycle(a: &Automaton) -> bool {
    fn dfs(a: &Automaton, p: usize, color: &mut [u8]) -> bool {
        color[p] = 1;
        for (_, _, q) in a.transitions().filter(|&(x, _, q)| x == p && q != p) {
            if color[q] == 1 || (color[q] == 0 && dfs(a, q, color)) {
                return true;
            }
        }
        color[p] = 2;
        false
    }
    let mut color = vec![0u8; a.num_states()];
    (0..a.num_states()).any(|p| color[p] == 0 && dfs(a, p, &mut color))
}

/// Some word separating states `p` and `q` of a complete DFA, by BFS over
/// pairs.
fn distinguishable(dfa: &Automaton, p: usize, q: usize) -> bool {
    let n = dfa.num_states();
    let mut seen = vec![false; n * n];
    let mut queue = VecDeque::from([(p, q)]);
    seen[p * n + q] = true;
    while let Some((x, y)) = queue.pop_front() {
        if dfa.is_accepting(x) != dfa.is_accepting(y) {
            return true;
        }
        for a in 0..dfa.num_letters() {
            let next = (dfa.step(x, a), dfa.step(y, a));
            if !seen[next.0 * n + next.1] {
                seen[next.0 * n + next.1] = true;
                queue.push_back(next);
            }
        }
    }
    false
}

#[test]
fn determinize_and_minimize_preserve_language() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..300 {
        let a = random_nfa(&mut rng, 5, 3);
        let d = a.determinize();
        assert!(d.is_complete_dfa());
        let m = minimal_dfa(&a);
        for _ in 0..200 {
            let w = random_word(&mut rng, a.num_letters(), 12);
            let want = a.accepts(&w).unwrap();
            assert_eq!(d.accepts(&w).unwrap(), want);
            assert_eq!(m.accepts(&w).unwrap(), want);
        }
        assert!(m.num_states() <= d.num_states());
        if m.num_states() <= 12 {
            for p in 0..m.num_states() {
                for q in p + 1..m.num_states() {
                    assert!(distinguishable(&m, p, q), "states {p} and {q} are equivalent");
                }
            }
        }
        assert_eq!(m.reachable_states().len(), m.num_states());
    }
}

#[test]
fn partial_order_matches_cycle_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ordered = 0;
    for _ in 0..500 {
        let a = random_nfa(&mut rng, 6, 3);
        let po = a.is_partially_ordered();
        assert_eq!(po, !has_nontrivial_cycle(&a));
        assert_eq!(a.depth().is_ok(), po);
        ordered += po as usize;
    }
    assert!(ordered > 20, "only {ordered} partially ordered samples");
}

#[test]
fn determinized_ak_depth() {
    for k in 0..=5 {
        let m = gen_ak(k).determinize().minimize().unwrap();
        assert_eq!(m.depth().unwrap(), (1 << (k + 1)) - 1);
        assert_eq!(gen_ak(k).depth().unwrap(), k);
    }
}

#[test]
fn monoid_is_a_monoid() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let states = rng.gen_range(1..=6);
        let letters = rng.gen_range(1..=2);
        let triangular = rng.gen_bool(0.5);
        let dfa = random_dfa(&mut rng, states, letters, triangular);
        let m = TransitionMonoid::new(&dfa, 100_000).unwrap();
        let size = m.len();
        for x in 0..size {
            assert_eq!(m.multiply(m.identity(), x), x);
            assert_eq!(m.multiply(x, m.identity()), x);
            assert_eq!(m.evaluate_word(m.representative(x)), x);
        }
        let triple = |x: usize, y: usize, z: usize| {
            assert_eq!(m.multiply(m.multiply(x, y), z), m.multiply(x, m.multiply(y, z)));
        };
        if size <= 120 {
            for x in 0..size {
                for y in 0..size {
                    // product acts as "x then y" on states
                    let want: Vec<u32> = m.element_map(x).iter().map(|&q| m.element_map(y)[q as usize]).collect();
                    assert_eq!(m.element_map(m.multiply(x, y)), &want[..]);
                    for z in 0..size {
                        triple(x, y, z);
                    }
                }
            }
        } else {
            for _ in 0..200_000 {
                triple(rng.gen_range(0..size), rng.gen_range(0..size), rng.gen_range(0..size));
            }
        }
    }
}

#[test]
fn identity_checks_agree_with_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    let mut outcomes = [0usize; 2];
    while checked < 200 {
        let dfa = random_minimal_dfa(&mut rng, 4, 2);
        let m = TransitionMonoid::new(&dfa, 10_000).unwrap();
        if m.len().pow(5) > 2_000_000 {
            continue;
        }
        checked += 1;
        for k in 1..=3 {
            for id in kpt_identities(k).unwrap() {
                let fast = check_identity(&m, &id, 1_000_000).unwrap();
                let slow = check_identity_exhaustive(&m, &id, 2_000_000).unwrap();
                assert_eq!(fast == IdentityCheck::Holds, slow == IdentityCheck::Holds, "{id}");
                outcomes[(fast == IdentityCheck::Holds) as usize] += 1;
                if let IdentityCheck::Counterexample(assign) = fast {
                    let (l, r) = evaluate_assignment(&m, &id, &assign);
                    assert_ne!(l, r, "{id} at {assign:?}");
                }
            }
        }
    }
    assert!(outcomes[0] > 0 && outcomes[1] > 0, "{outcomes:?}");
}

#[test]
fn confluence_and_ums_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut pt = 0;
    for _ in 0..500 {
        let dfa = random_minimal_dfa(&mut rng, 6, 3);
        let a = is_pt_min_dfa(&dfa).unwrap();
        assert_eq!(a, is_pt_min_dfa_ums(&dfa).unwrap(), "{}", ptkit::format::write_automaton(&dfa));
        pt += a as usize;
    }
    assert!(pt > 50 && pt < 480, "{pt} PT samples");
}

#[test]
fn nfa_certificate_is_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut certified = 0;
    for _ in 0..500 {
        let a = random_po_complete_nfa(&mut rng, 5);
        assert!(a.is_complete() && a.is_partially_ordered());
        if certify_pt_nfa(&a) == NfaCertificate::Yes {
            certified += 1;
            assert!(is_pt_min_dfa(&a.determinize().minimize().unwrap()).unwrap());
        }
    }
    assert!(certified > 50, "only {certified} certified");
}

#[test]
fn pt_languages_are_depth_pt() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..500 {
        let dfa = random_minimal_dfa(&mut rng, 6, 2);
        let pt = is_pt(&dfa);
        assert_eq!(pt, is_pt_min_dfa(&dfa).unwrap());
        if !pt {
            assert_eq!(min_k(&dfa, DEFAULT_CLASS_BUDGET).unwrap(), MinK::NotPt);
            continue;
        }
        let depth = dfa.depth().unwrap();
        assert_eq!(is_kpt_oracle(&dfa, depth, DEFAULT_CLASS_BUDGET).unwrap(), OracleVerdict::Yes);
        match min_k(&dfa, DEFAULT_CLASS_BUDGET).unwrap() {
            MinK::Exact(k) => assert!(k <= depth),
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn oracle_is_monotone_and_certificates_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let dfa = random_minimal_dfa(&mut rng, 6, 2);
        let mut previous_yes = false;
        for k in 0..=4 {
            match is_kpt_oracle(&dfa, k, DEFAULT_CLASS_BUDGET).unwrap() {
                OracleVerdict::Yes => previous_yes = true,
                OracleVerdict::No(cert) => {
                    assert!(!previous_yes, "yes at a smaller k, no at {k}");
                    assert!(verify_certificate(&dfa, &cert).unwrap());
                    assert_eq!(cert.k, k);
                }
                OracleVerdict::Unknown { .. } => panic!("budget exhausted"),
            }
        }
    }
}

#[test]
fn letter_checks_match_monoid_equations() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut compared = 0;
    for _ in 0..500 {
        let dfa = random_minimal_dfa(&mut rng, 6, 2);
        if !is_pt_min_dfa(&dfa).unwrap() {
            continue;
        }
        let m = TransitionMonoid::new(&dfa, 200).unwrap_or_else(|e| panic!("{e}"));
        let holds = kpt_identities(1)
            .unwrap()
            .iter()
            .all(|id| check_identity_exhaustive(&m, id, 1_000_000).unwrap() == IdentityCheck::Holds);
        assert_eq!(is_1pt(&dfa).unwrap(), holds);
        compared += 1;
    }
    assert!(compared > 100);
}

#[test]
fn decompositions_are_sound() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut done = 0;
    while done < 60 {
        let dfa = random_minimal_dfa(&mut rng, 5, 2);
        let k = match min_k(&dfa, DEFAULT_CLASS_BUDGET).unwrap() {
            MinK::Exact(k) if k <= 3 => k,
            _ => continue,
        };
        done += 1;
        // valid at the least level and one above
        for level in [k, k + 1] {
            let expr = decompose(&dfa, level, DEFAULT_CLASS_BUDGET).unwrap();
            for w in all_words(dfa.num_letters(), 8) {
                assert_eq!(expr.eval(&w), dfa.accepts(&w).unwrap(), "{expr}");
            }
        }
        if k > 0 {
            assert!(decompose(&dfa, k - 1, DEFAULT_CLASS_BUDGET).is_err());
        }
    }
}

#[test]
fn canonical_automata_are_monotone() {
    for (k, n) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2), (3, 3)] {
        let c = canonical_automaton(&indexed_alphabet(n), k, DEFAULT_CLASS_BUDGET).unwrap();
        let a = &c.automaton;
        assert!(a.is_partially_ordered());
        assert_eq!(a.depth().unwrap() as u64, pkn(k as u64, n as u64).unwrap(), "({k},{n})");
        for (p, _, q) in a.transitions() {
            assert!(c.classes[p].is_subset(&c.classes[q]));
        }
    }
}

#[test]
fn three_formulas_for_pkn() {
    for k in 1..=6 {
        for n in 1..=6 {
            let p = pkn(k, n).unwrap();
            assert_eq!(pkn_recursive(k, n).unwrap(), p);
            assert_eq!(pkn_stirling(k, n).unwrap(), p);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_files_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_nfa(&mut rng, 6, 3);
        let text = ptkit::format::write_automaton(&a);
        let back = ptkit::format::parse_automaton(&text).unwrap();
        prop_assert_eq!(ptkit::format::write_automaton(&back), text);
        prop_assert_eq!(back, a);
    }

    #[test]
    fn minimization_is_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = minimal_dfa(&random_nfa(&mut rng, 5, 2));
        prop_assert_eq!(m.minimize().unwrap(), m);
    }
}
