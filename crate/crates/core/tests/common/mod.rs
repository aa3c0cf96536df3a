#![allow(dead_code)]

use ptkit::pt::minimal_dfa;
use ptkit::Automaton;
use rand::Rng;

/// Complete DFA with random transitions. With `triangular`, every edge goes
/// to a state with an index at least as large, so the DFA is partially
/// ordered and PT languages show up often.
pub fn random_dfa<R: Rng>(rng: &mut R, states: usize, letters: usize, triangular: bool) -> Automaton {
    let alphabet: Vec<String> = (0..letters).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let mut a = Automaton::new(alphabet, (0..states).map(|i| format!("q{i}"))).unwrap();
    for p in 0..states {
        for x in 0..letters {
            let lo = if triangular { p } else { 0 };
            // bias toward self-loops in the triangular case
            let q = if triangular && rng.gen_bool(0.4) { p } else { rng.gen_range(lo..states) };
            a.add_transition(p, x, q);
        }
        a.set_accepting(p, rng.gen_bool(0.5));
    }
    a.set_initial(0);
    a
}

/// Random minimal complete DFA over at most `max_letters` letters. The
/// size is drawn uniformly from `1..=max_states`, then DFAs of that size are
/// sampled until one is already minimal.
pub fn random_minimal_dfa<R: Rng>(rng: &mut R, max_states: usize, max_letters: usize) -> Automaton {
    let states = rng.gen_range(1..=max_states);
    let letters = rng.gen_range(1..=max_letters);
    let triangular = rng.gen_bool(0.6);
    let mut best = minimal_dfa(&random_dfa(rng, states, letters, triangular));
    for _ in 0..10_000 {
        if best.num_states() == states {
            break;
        }
        let m = minimal_dfa(&random_dfa(rng, states, letters, triangular));
        if m.num_states() > best.num_states() {
            best = m;
        }
    }
    best
}

/// All words over `n` letters of length at most `max_len`, shortlex.
pub fn all_words(n: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * n);
        for w in &layer {
            for a in 0..n {
                let mut v: Vec<usize> = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Subsequences of `w` of length at most `k`, as a sorted list; quadratic
/// in the number of index subsets and independent of the library.
pub fn brute_subwords(w: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut set = std::collections::BTreeSet::new();
    let m = w.len();
    assert!(m < 24);
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize <= k {
            set.insert((0..m).filter(|i| mask >> i & 1 == 1).map(|i| w[i]).collect::<Vec<_>>());
        }
    }
    set.into_iter().collect()
}
