//! Subsequence embedding, `sub_k` sets and Simon's congruence `~_k`.
//!
//! A `~_k` class is represented by its set of subwords of length at most
//! `k`, stored as a bitset over all words of `Σ^{≤k}` in shortlex order:
//! the words of length `l` occupy a contiguous block, and inside the block
//! a word is addressed by its base-`n` value.

use std::collections::HashSet;

use indexmap::IndexMap;

use crate::automaton::{Automaton, Letter};
use crate::error::{Error, Result};

/// Default limit on the number of `~_k` classes explored.
pub const DEFAULT_CLASS_BUDGET: usize = 2_000_000;

/// Hard cap on `|Σ^{≤k}|`; larger universes are refused.
pub const MAX_UNIVERSE: usize = 1 << 26;

/// True iff `v` is a subsequence of `w`.
pub fn embeds(v: &[Letter], w: &[Letter]) -> bool {
    let mut it = w.iter();
    v.iter().all(|a| it.any(|b| b == a))
}

/// Block offsets of `Σ^{≤k}`: `offsets[l]` is the index of the first word
/// of length `l`, and `offsets[k + 1]` the universe size.
fn offsets(n: usize, k: usize) -> Vec<usize> {
    let mut off = Vec::with_capacity(k + 2);
    let mut acc = 0usize;
    let mut block = 1usize;
    for _ in 0..=k {
        off.push(acc);
        acc = acc
            .checked_add(block)
            .filter(|&s| s <= MAX_UNIVERSE)
            .unwrap_or_else(|| panic!("|Σ^≤k| too large for n = {n}, k = {k}"));
        block = block.saturating_mul(n);
    }
    off.push(acc);
    off
}

/// Number of words of length at most `k` over `n` letters, if it fits the
/// universe cap.
pub fn universe_size(n: usize, k: usize) -> Option<usize> {
    let mut acc = 0usize;
    let mut block = 1usize;
    for _ in 0..=k {
        acc = acc.checked_add(block).filter(|&s| s <= MAX_UNIVERSE)?;
        block = block.saturating_mul(n);
    }
    Some(acc)
}

/// A subword-closed set of words of length at most `k` over `n` letters
/// that contains ε. Equal sets are exactly equal `~_k` classes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubwordSet {
    n: u32,
    k: u32,
    bits: Box<[u64]>,
}

impl SubwordSet {
    /// `sub_k(ε) = {ε}`.
    pub fn epsilon(n: usize, k: usize) -> Self {
        let size = *offsets(n, k).last().unwrap();
        let mut bits = vec![0u64; size.div_ceil(64)].into_boxed_slice();
        bits[0] = 1;
        SubwordSet { n: n as u32, k: k as u32, bits }
    }

    /// `Σ^{≤k}`.
    pub fn full(n: usize, k: usize) -> Self {
        let size = *offsets(n, k).last().unwrap();
        let mut bits = vec![u64::MAX; size.div_ceil(64)].into_boxed_slice();
        if !size.is_multiple_of(64) {
            *bits.last_mut().unwrap() = (1u64 << (size % 64)) - 1;
        }
        SubwordSet { n: n as u32, k: k as u32, bits }
    }

    /// `sub_k(w)`, built letter by letter with [`SubwordSet::successor`].
    pub fn of_word(word: &[Letter], n: usize, k: usize) -> Self {
        word.iter().fold(Self::epsilon(n, k), |s, &a| s.successor(a))
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn alphabet_size(&self) -> usize {
        self.n as usize
    }

    fn test(&self, i: usize) -> bool {
        self.bits[i / 64] >> (i % 64) & 1 == 1
    }

    fn index_of(&self, word: &[Letter]) -> Option<usize> {
        if word.len() > self.k() || word.iter().any(|&a| a >= self.alphabet_size()) {
            return None;
        }
        let off = offsets(self.alphabet_size(), self.k());
        let code = word.iter().fold(0usize, |c, &a| c * self.alphabet_size() + a);
        Some(off[word.len()] + code)
    }

    fn word_at(n: usize, off: &[usize], i: usize) -> Vec<Letter> {
        let len = off.partition_point(|&o| o <= i) - 1;
        let mut code = i - off[len];
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        w
    }

    pub fn contains(&self, word: &[Letter]) -> bool {
        self.index_of(word).is_some_and(|i| self.test(i))
    }

    pub fn len(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.alphabet_size(), self.k())
    }

    pub fn is_subset(&self, other: &SubwordSet) -> bool {
        self.bits.iter().zip(other.bits.iter()).all(|(a, b)| a & !b == 0)
    }

    /// Members in shortlex order.
    pub fn words(&self) -> Vec<Vec<Letter>> {
        let n = self.alphabet_size();
        let off = offsets(n, self.k());
        self.set_indices().map(|i| Self::word_at(n, &off, i)).collect()
    }

    fn set_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(wi, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + t)
            })
        })
    }

    /// The class of `wa` given the class of `w`: adds `ua` for every member
    /// `u` shorter than `k`.
    pub fn successor(&self, letter: Letter) -> Self {
        let n = self.alphabet_size();
        assert!(letter < n, "letter out of range");
        let k = self.k();
        let off = offsets(n, k);
        let mut out = self.clone();
        for i in self.set_indices() {
            if i >= off[k] {
                break;
            }
            let len = off.partition_point(|&o| o <= i) - 1;
            let j = off[len + 1] + (i - off[len]) * n + letter;
            out.bits[j / 64] |= 1 << (j % 64);
        }
        out
    }

    /// Members with no one-letter extension in the set (maximal under ⪯).
    pub fn maximal_elements(&self) -> Vec<Vec<Letter>> {
        let n = self.alphabet_size();
        self.words()
            .into_iter()
            .filter(|u| {
                u.len() == self.k()
                    || !(0..=u.len()).any(|pos| {
                        (0..n).any(|a| {
                            let mut v = u.clone();
                            v.insert(pos, a);
                            self.contains(&v)
                        })
                    })
            })
            .collect()
    }

    /// Minimal words of `Σ^{≤k}` outside the set: every one-letter deletion
    /// lies in the set.
    pub fn minimal_missing(&self) -> Vec<Vec<Letter>> {
        let n = self.alphabet_size();
        let off = offsets(n, self.k());
        (0..*off.last().unwrap())
            .filter(|&i| !self.test(i))
            .map(|i| Self::word_at(n, &off, i))
            .filter(|v| {
                (0..v.len()).all(|pos| {
                    let mut u = v.clone();
                    u.remove(pos);
                    self.contains(&u)
                })
            })
            .collect()
    }

    /// One word per line in shortlex order, ε as `-`.
    pub fn render(&self, alphabet: &[String]) -> String {
        let mut out = String::new();
        for w in self.words() {
            out.push_str(&render_word(alphabet, &w));
            out.push('\n');
        }
        out
    }
}

/// Letters separated by single spaces; ε is `-`.
pub fn render_word(alphabet: &[String], word: &[Letter]) -> String {
    if word.is_empty() {
        return "-".to_string();
    }
    word.iter().map(|&a| alphabet[a].as_str()).collect::<Vec<_>>().join(" ")
}

fn alphabet_bound(words: &[&[Letter]]) -> usize {
    words.iter().flat_map(|w| w.iter()).map(|&a| a + 1).max().unwrap_or(1)
}

/// `sub_k(w)` over the letters `0..n`.
pub fn subwords_up_to_k(word: &[Letter], n: usize, k: usize) -> SubwordSet {
    SubwordSet::of_word(word, n, k)
}

/// `w1 ~_k w2`.
pub fn k_equivalent(w1: &[Letter], w2: &[Letter], k: usize) -> bool {
    if k == 0 {
        return true;
    }
    // subwords longer than both words cannot occur
    let k = k.min(w1.len().max(w2.len()));
    let n = alphabet_bound(&[w1, w2]);
    if universe_size(n, k).is_none() {
        return sparse_subwords(w1, k) == sparse_subwords(w2, k);
    }
    SubwordSet::of_word(w1, n, k) == SubwordSet::of_word(w2, n, k)
}

// Explicit subword sets for instances whose dense universe is too big.
fn sparse_subwords(word: &[Letter], k: usize) -> HashSet<Vec<Letter>> {
    let mut set: HashSet<Vec<Letter>> = HashSet::from([Vec::new()]);
    for &a in word {
        let new: Vec<Vec<Letter>> = set
            .iter()
            .filter(|u| u.len() < k)
            .map(|u| {
                let mut v = u.clone();
                v.push(a);
                v
            })
            .collect();
        set.extend(new);
    }
    set
}

/// Deletes every letter that does not enlarge the class of the prefix
/// before it. The result is `~_k`-equivalent to the input and its prefixes
/// are pairwise non-equivalent.
pub fn reduce_word(word: &[Letter], k: usize) -> Vec<Letter> {
    if k == 0 {
        return Vec::new();
    }
    let n = alphabet_bound(&[word]);
    let mut class = SubwordSet::epsilon(n, k);
    let mut out = Vec::new();
    for &a in word {
        let next = class.successor(a);
        if next != class {
            out.push(a);
            class = next;
        }
    }
    out
}

/// The reachable part of the `~_k`-canonical DFA together with the class
/// represented by each state.
#[derive(Clone, Debug)]
pub struct CanonicalDfa {
    pub automaton: Automaton,
    pub classes: Vec<SubwordSet>,
}

impl CanonicalDfa {
    /// State reached by a word.
    pub fn state_of(&self, word: &[Letter]) -> usize {
        self.automaton.step_word(self.automaton.initial_state(), word)
    }
}

/// Builds the `~_k`-canonical DFA by BFS from `[ε]`. States are named by
/// their shortlex-least access word (`[a.b]`, `[-]` for ε); no state is
/// accepting.
pub fn canonical_automaton(alphabet: &[String], k: usize, budget: usize) -> Result<CanonicalDfa> {
    if alphabet.is_empty() {
        return Err(Error::Contract("canonical automaton needs a nonempty alphabet".into()));
    }
    let n = alphabet.len();
    if universe_size(n, k).is_none() {
        return Err(Error::BudgetExceeded { limit: MAX_UNIVERSE, reached: usize::MAX });
    }
    let mut classes: IndexMap<SubwordSet, (Option<usize>, Letter)> = IndexMap::new();
    classes.insert(SubwordSet::epsilon(n, k), (None, 0));
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < classes.len() {
        let current = classes.get_index(i).unwrap().0.clone();
        let mut row = Vec::with_capacity(n);
        for a in 0..n {
            let next = current.successor(a);
            let id = match classes.get_index_of(&next) {
                Some(id) => id,
                None => {
                    if classes.len() >= budget {
                        return Err(Error::BudgetExceeded { limit: budget, reached: classes.len() + 1 });
                    }
                    classes.insert(next, (Some(i), a));
                    classes.len() - 1
                }
            };
            row.push(id);
        }
        edges.push(row);
        i += 1;
    }

    let access = |mut id: usize| {
        let mut w = Vec::new();
        while let (Some(parent), a) = classes[id] {
            w.push(a);
            id = parent;
        }
        w.reverse();
        w
    };
    let names = (0..classes.len()).map(|id| {
        let w = access(id);
        if w.is_empty() {
            "[-]".to_string()
        } else {
            format!("[{}]", w.iter().map(|&a| alphabet[a].as_str()).collect::<Vec<_>>().join("."))
        }
    });
    let mut automaton = Automaton::new(alphabet.iter().cloned(), names)?;
    for (p, row) in edges.iter().enumerate() {
        for (a, &q) in row.iter().enumerate() {
            automaton.add_transition(p, a, q);
        }
    }
    automaton.set_initial(0);
    Ok(CanonicalDfa { automaton, classes: classes.into_keys().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremal::{gen_wk, gen_wkn};

    // every subsequence of length ≤ k, by enumerating index subsets
    fn brute_sub_k(w: &[Letter], k: usize) -> HashSet<Vec<Letter>> {
        let mut out = HashSet::new();
        for mask in 0u32..(1 << w.len()) {
            if mask.count_ones() as usize <= k {
                out.insert((0..w.len()).filter(|i| mask >> i & 1 == 1).map(|i| w[i]).collect());
            }
        }
        out
    }

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn embedding() {
        assert!(embeds(&[], &[1, 0]));
        assert!(!embeds(&[0, 1], &[1, 0]));
        assert!(embeds(&[0, 1], &[0, 0, 1]));
        assert!(embeds(&[0, 1], &gen_wk(2)));
    }

    #[test]
    fn sub_k_examples() {
        assert_eq!(SubwordSet::of_word(&[], 2, 3).words(), vec![Vec::<usize>::new()]);
        // W_{2,2} = a1 a1 a2 a1 a2 gives all of Σ^{≤2}
        assert!(SubwordSet::of_word(&[0, 0, 1, 0, 1], 2, 2).is_full());
        for m in 0..6 {
            for k in 0..4 {
                assert_eq!(SubwordSet::of_word(&vec![0; m], 1, k).len(), m.min(k) + 1);
            }
        }
    }

    #[test]
    fn sub_k_matches_brute_force() {
        let w = [0, 2, 1, 0, 2, 2, 1];
        for k in 0..=4 {
            let set = SubwordSet::of_word(&w, 3, k);
            let got: HashSet<Vec<Letter>> = set.words().into_iter().collect();
            assert_eq!(got, brute_sub_k(&w, k));
        }
    }

    #[test]
    fn equivalence_examples() {
        assert!(k_equivalent(&[0, 1], &[2], 0));
        assert!(k_equivalent(&[0], &[0, 0], 1));
        assert!(!k_equivalent(&[0], &[0, 0], 2));
        for k in 0..=5 {
            let w = gen_wk(k);
            assert!(k_equivalent(&w, &w[..w.len() - 1], k), "k = {k}");
        }
    }

    #[test]
    fn successor_examples() {
        let eps = SubwordSet::epsilon(2, 2);
        assert_eq!(eps.successor(0).words(), vec![vec![], vec![0]]);
        let ab = SubwordSet::of_word(&[0, 1], 2, 2);
        let abb = ab.successor(1);
        assert_eq!(abb, SubwordSet::of_word(&[0, 1, 1], 2, 2));
        let added: Vec<_> = abb.words().into_iter().filter(|w| !ab.contains(w)).collect();
        assert_eq!(added, vec![vec![1, 1]]);
        let full = SubwordSet::full(2, 2);
        assert_eq!(full.successor(0), full);
    }

    #[test]
    fn antichains() {
        // sub_2(ab) over {a,b}
        let s = SubwordSet::of_word(&[0, 1], 2, 2);
        assert_eq!(s.maximal_elements(), vec![vec![0, 1]]);
        assert_eq!(s.minimal_missing(), vec![vec![0, 0], vec![1, 0], vec![1, 1]]);
        let eps = SubwordSet::epsilon(2, 1);
        assert_eq!(eps.maximal_elements(), vec![Vec::<usize>::new()]);
        assert_eq!(eps.minimal_missing(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn render_uses_dash_for_epsilon() {
        let s = SubwordSet::of_word(&[1], 2, 1);
        assert_eq!(s.render(&names(&["a", "b"])), "-\nb\n");
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(reduce_word(&[0, 0, 0, 0], 2), vec![0, 0]);
        let w22 = gen_wkn(2, 2);
        assert_eq!(reduce_word(&w22, 2), w22);
    }

    #[test]
    fn canonical_examples() {
        let c = canonical_automaton(&names(&["a"]), 1, 100).unwrap();
        assert_eq!(c.automaton.num_states(), 2);
        assert_eq!(c.automaton.state_names(), &["[-]".to_string(), "[a]".to_string()]);
        let c = canonical_automaton(&names(&["a1", "a2"]), 2, 1000).unwrap();
        assert_eq!(c.automaton.depth().unwrap(), 5);
        let c = canonical_automaton(&names(&["a1", "a2", "a3"]), 3, DEFAULT_CLASS_BUDGET).unwrap();
        assert_eq!(c.automaton.depth().unwrap(), 19);
        assert!(matches!(
            canonical_automaton(&names(&["a1", "a2", "a3"]), 3, 10),
            Err(Error::BudgetExceeded { limit: 10, .. })
        ));
    }

    #[test]
    fn canonical_is_monotone() {
        let c = canonical_automaton(&names(&["a", "b", "c"]), 2, 10_000).unwrap();
        assert!(c.automaton.is_partially_ordered());
        for (p, a, q) in c.automaton.transitions() {
            assert!(c.classes[p].is_subset(&c.classes[q]), "{p} -{a}-> {q}");
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn word(n: usize, max: usize) -> impl Strategy<Value = Vec<Letter>> {
            prop::collection::vec(0..n, 0..=max)
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(500))]

            #[test]
            fn equivalence_agrees_with_enumeration(
                (w1, w2) in (1usize..=3).prop_flat_map(|n| (word(n, 10), word(n, 10))),
                k in 0usize..=3,
            ) {
                let brute = brute_sub_k(&w1, k) == brute_sub_k(&w2, k);
                prop_assert_eq!(k_equivalent(&w1, &w2, k), brute);
            }

            #[test]
            fn successor_is_sub_k_of_extension(w in word(3, 10), a in 0usize..3, k in 0usize..=3) {
                let mut wa = w.clone();
                wa.push(a);
                prop_assert_eq!(SubwordSet::of_word(&w, 3, k).successor(a), SubwordSet::of_word(&wa, 3, k));
            }

            #[test]
            fn reduce_keeps_class_and_grows(w in word(3, 14), k in 1usize..=3) {
                let r = reduce_word(&w, k);
                prop_assert!(k_equivalent(&r, &w, k));
                prop_assert!(r.len() <= k * 3usize.pow(k as u32));
                let mut prev = SubwordSet::epsilon(3, k);
                for &a in &r {
                    let next = prev.successor(a);
                    prop_assert!(next != prev);
                    prev = next;
                }
            }

            #[test]
            fn congruence(u in word(2, 9), x in word(2, 5), k in 1usize..=3) {
                // reduce_word collisions give u ~_k reduce(u)
                let v = reduce_word(&u, k);
                let ux: Vec<_> = u.iter().chain(&x).copied().collect();
                let vx: Vec<_> = v.iter().chain(&x).copied().collect();
                let xu: Vec<_> = x.iter().chain(&u).copied().collect();
                let xv: Vec<_> = x.iter().chain(&v).copied().collect();
                prop_assert!(k_equivalent(&ux, &vx, k));
                prop_assert!(k_equivalent(&xu, &xv, k));
            }
        }
    }
}
