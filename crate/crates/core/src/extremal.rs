//! Extremal automata and words.
//!
//! * `A_k`: an NFA of depth `k` whose language is `(k+1)`-PT but not
//!   k-PT, and whose minimal DFA has depth `2^{k+1} - 1`.
//! * `w_k`: the word tracing that long path; dropping its last letter
//!   gives a `~_k`-equivalent word that `A_k` treats differently.
//! * `W_{k,n}`: a longest word over `n` letters containing every word of
//!   length `≤ k` whose prefixes are pairwise non-equivalent; its length is
//!   `P_{k,n} = C(k+n, k) - 1`.

use crate::automaton::{Automaton, Letter};
use crate::error::{Error, Result};
use crate::subwords::{canonical_automaton, CanonicalDfa};

/// Letters `a0 … ak`.
pub fn ak_alphabet(k: usize) -> Vec<String> {
    (0..=k).map(|i| format!("a{i}")).collect()
}

/// Letters `a1 … an`.
pub fn indexed_alphabet(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("a{i}")).collect()
}

/// `A_k`: states `0..=k`, all initial, `0` accepting; state `i` loops on
/// `a_j` for `j < i` and moves under `a_i` to every state below it.
pub fn gen_ak(k: usize) -> Automaton {
    let mut a = Automaton::new(ak_alphabet(k), (0..=k).map(|i| i.to_string())).expect("distinct names");
    for i in 0..=k {
        a.set_initial(i);
        for j in 0..i {
            a.add_transition(i, j, i);
            a.add_transition(i, i, j);
        }
    }
    a.set_accepting(0, true);
    a
}

/// `w_0 = a0`, `w_l = w_{l-1} a_l w_{l-1}`, as letter indices into
/// [`ak_alphabet`].
pub fn gen_wk(k: usize) -> Vec<Letter> {
    let mut w = vec![0];
    for l in 1..=k {
        let prev = w.clone();
        w.push(l);
        w.extend(prev);
    }
    w
}

/// `W_{k,1} = a1^k`, `W_{1,n} = a1 … an`,
/// `W_{k,n} = W_{k,n-1} a_n W_{k-1,n}`, as indices into
/// [`indexed_alphabet`].
pub fn gen_wkn(k: usize, n: usize) -> Vec<Letter> {
    assert!(k >= 1 && n >= 1, "W_{{k,n}} needs k, n ≥ 1");
    // table[i][j] = W_{i,j}, filled row by row
    let mut table: Vec<Vec<Vec<Letter>>> = vec![vec![Vec::new(); n + 1]; k + 1];
    for i in 1..=k {
        for j in 1..=n {
            table[i][j] = if j == 1 {
                vec![0; i]
            } else if i == 1 {
                (0..j).collect()
            } else {
                let mut w = table[i][j - 1].clone();
                w.push(j - 1);
                w.extend_from_slice(&table[i - 1][j]);
                w
            };
        }
    }
    std::mem::take(&mut table[k][n])
}

/// `C(n, r)` with overflow detection.
fn binomial(n: u64, r: u64) -> Option<u64> {
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) is divisible by i + 1 at every step
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `P_{k,n} = C(k+n, k) - 1`.
pub fn pkn(k: u64, n: u64) -> Result<u64> {
    if k == 0 || n == 0 {
        return Err(Error::Contract("P_{k,n} needs k, n ≥ 1".into()));
    }
    let total = k.checked_add(n).ok_or(Error::Overflow("P_{k,n}"))?;
    binomial(total, k).map(|c| c - 1).ok_or(Error::Overflow("P_{k,n}"))
}

/// `P_{k,n}` through `P_{k,n} = P_{k-1,n} + P_{k,n-1} + 1`.
pub fn pkn_recursive(k: u64, n: u64) -> Result<u64> {
    if k == 0 || n == 0 {
        return Err(Error::Contract("P_{k,n} needs k, n ≥ 1".into()));
    }
    let (k, n) = (k as usize, n as usize);
    let mut row: Vec<u64> = (0..=n as u64).collect(); // P_{1,j} = j
    for i in 2..=k {
        let mut next = vec![0u64; n + 1];
        next[1] = i as u64;
        for j in 2..=n {
            next[j] = row[j]
                .checked_add(next[j - 1])
                .and_then(|s| s.checked_add(1))
                .ok_or(Error::Overflow("P_{k,n}"))?;
        }
        row = next;
    }
    Ok(row[n])
}

/// Unsigned Stirling numbers of the first kind `[m, j]` for `m ≤ max`.
pub fn stirling_cycle_table(max: usize) -> Result<Vec<Vec<u128>>> {
    let mut t = vec![vec![0u128; max + 1]; max + 1];
    t[0][0] = 1;
    for m in 1..=max {
        for j in 1..=m {
            // [m, j] = (m-1)[m-1, j] + [m-1, j-1]
            t[m][j] = ((m - 1) as u128)
                .checked_mul(t[m - 1][j])
                .and_then(|x| x.checked_add(t[m - 1][j - 1]))
                .ok_or(Error::Overflow("Stirling cycle numbers"))?;
        }
    }
    Ok(t)
}

/// `P_{k,n} = (1/k!) Σ_{i=1..k} [k+1, i+1] n^i`.
pub fn pkn_stirling(k: u64, n: u64) -> Result<u64> {
    if k == 0 || n == 0 {
        return Err(Error::Contract("P_{k,n} needs k, n ≥ 1".into()));
    }
    let overflow = || Error::Overflow("Stirling form of P_{k,n}");
    let k = usize::try_from(k).map_err(|_| overflow())?;
    if k > 40 {
        return Err(overflow());
    }
    let table = stirling_cycle_table(k + 1)?;
    let mut sum: u128 = 0;
    let mut power: u128 = 1;
    for i in 1..=k {
        power = power.checked_mul(n as u128).ok_or_else(overflow)?;
        let term = table[k + 1][i + 1].checked_mul(power).ok_or_else(overflow)?;
        sum = sum.checked_add(term).ok_or_else(overflow)?;
    }
    let factorial = (1..=k as u128).try_fold(1u128, |f, i| f.checked_mul(i)).ok_or_else(overflow)?;
    if !sum.is_multiple_of(factorial) {
        return Err(Error::Contract("Stirling sum not divisible by k!".into()));
    }
    u64::try_from(sum / factorial).map_err(|_| overflow())
}

/// The `~_k`-canonical DFA over `a1 … an` accepting the classes of the
/// even-length prefixes of `W_{k,n}`. Its minimal DFA has depth `P_{k,n}`.
pub fn gen_tight_depth_dfa(k: usize, n: usize, budget: usize) -> Result<CanonicalDfa> {
    if k == 0 || n == 0 {
        return Err(Error::Contract("tight-depth DFA needs k, n ≥ 1".into()));
    }
    let mut canonical = canonical_automaton(&indexed_alphabet(n), k, budget)?;
    let w = gen_wkn(k, n);
    for len in (0..=w.len()).step_by(2) {
        let q = canonical.state_of(&w[..len]);
        canonical.automaton.set_accepting(q, true);
    }
    Ok(canonical)
}

/// NFA over subsets of the alphabet: `X·a = X ∪ {a}`, from `∅` to `Σ`. It
/// accepts the words containing every letter.
pub fn gen_intersection_nfa(alphabet: &[String]) -> Result<Automaton> {
    let m = alphabet.len();
    if m == 0 {
        return Err(Error::Contract("alphabet must be nonempty".into()));
    }
    if m > 20 {
        return Err(Error::Contract(format!("alphabet of {m} letters is too large (at most 20)")));
    }
    let names = (0..1usize << m).map(|mask| {
        let members: Vec<&str> = (0..m).filter(|i| mask >> i & 1 == 1).map(|i| alphabet[i].as_str()).collect();
        format!("{{{}}}", members.join(","))
    });
    let mut a = Automaton::new(alphabet.iter().cloned(), names)?;
    for mask in 0..1usize << m {
        for letter in 0..m {
            a.add_transition(mask, letter, mask | 1 << letter);
        }
    }
    a.set_initial(0);
    a.set_accepting((1 << m) - 1, true);
    Ok(a)
}
