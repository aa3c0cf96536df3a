//! Piecewise testability: partial order with local confluence on minimal
//! DFAs, the UMS property, and the complete-NFA sufficient condition.

use std::collections::VecDeque;

use crate::automaton::{Automaton, Letter, StateId};
use crate::error::{Error, Result};

/// A triple `(q, a, b)` for which `q·a` and `q·b` have no common
/// successor under `{a, b}*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConfluenceViolation {
    pub state: StateId,
    pub a: Letter,
    pub b: Letter,
}

/// Searches for a violation of local confluence in a complete DFA by a
/// BFS over state pairs driven by synchronized `a`/`b` steps.
pub fn local_confluence_violation(dfa: &Automaton) -> Result<Option<ConfluenceViolation>> {
    dfa.require_complete_dfa()?;
    let n = dfa.num_states();
    let m = dfa.num_letters();
    let mut seen = vec![false; n * n];
    let mut touched = Vec::new();
    for q in 0..n {
        for a in 0..m {
            for b in a + 1..m {
                for &i in &touched {
                    seen[i] = false;
                }
                touched.clear();
                let start = (dfa.step(q, a), dfa.step(q, b));
                let mut queue = VecDeque::from([start]);
                seen[start.0 * n + start.1] = true;
                touched.push(start.0 * n + start.1);
                let mut joined = false;
                while let Some((x, y)) = queue.pop_front() {
                    if x == y {
                        joined = true;
                        break;
                    }
                    for c in [a, b] {
                        let next = (dfa.step(x, c), dfa.step(y, c));
                        let key = next.0 * n + next.1;
                        if !seen[key] {
                            seen[key] = true;
                            touched.push(key);
                            queue.push_back(next);
                        }
                    }
                }
                if !joined {
                    return Ok(Some(ConfluenceViolation { state: q, a, b }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_locally_confluent(dfa: &Automaton) -> Result<bool> {
    Ok(local_confluence_violation(dfa)?.is_none())
}

/// State `state` is not the unique maximal state of its component in the
/// graph restricted to its self-loop letters; `other` is another maximal
/// state of that component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UmsViolation {
    pub state: StateId,
    pub other: StateId,
}

/// Checks the unique-maximal-state property of a partially ordered
/// automaton. Components are taken in the underlying undirected graph.
pub fn ums_violation(automaton: &Automaton) -> Result<Option<UmsViolation>> {
    if !automaton.is_partially_ordered() {
        return Err(Error::NotPartiallyOrdered);
    }
    let n = automaton.num_states();
    let mut undirected: Vec<Vec<StateId>> = Vec::with_capacity(n);
    for p in 0..n {
        let gamma = automaton.self_loop_alphabet(p)?;
        // adjacency of G(A, Σ(p)) in both directions
        for row in undirected.iter_mut() {
            row.clear();
        }
        undirected.resize(n, Vec::new());
        let mut has_exit = vec![false; n];
        for (x, a, y) in automaton.transitions() {
            if x != y && gamma.contains(&a) {
                undirected[x].push(y);
                undirected[y].push(x);
                has_exit[x] = true;
            }
        }
        let mut in_component = vec![false; n];
        in_component[p] = true;
        let mut stack = vec![p];
        while let Some(x) = stack.pop() {
            for &y in &undirected[x] {
                if !in_component[y] {
                    in_component[y] = true;
                    stack.push(y);
                }
            }
        }
        // edges from a component state stay inside the component, so a
        // state is maximal iff it has no proper Γ-successor
        if let Some(other) = (0..n).find(|&x| in_component[x] && !has_exit[x] && x != p) {
            return Ok(Some(UmsViolation { state: p, other }));
        }
        if has_exit[p] {
            // p itself is not maximal; report some maximal state instead
            let other = (0..n).find(|&x| in_component[x] && !has_exit[x]).unwrap_or(p);
            return Ok(Some(UmsViolation { state: p, other }));
        }
    }
    Ok(None)
}

pub fn satisfies_ums(automaton: &Automaton) -> Result<bool> {
    Ok(ums_violation(automaton)?.is_none())
}

/// Piecewise testability of the language of a minimal complete DFA:
/// partially ordered and locally confluent.
pub fn is_pt_min_dfa(dfa: &Automaton) -> Result<bool> {
    dfa.require_complete_dfa()?;
    Ok(dfa.is_partially_ordered() && is_locally_confluent(dfa)?)
}

/// Same question answered through the UMS characterization.
pub fn is_pt_min_dfa_ums(dfa: &Automaton) -> Result<bool> {
    dfa.require_complete_dfa()?;
    Ok(dfa.is_partially_ordered() && satisfies_ums(dfa)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NfaCertificate {
    /// Complete, partially ordered and UMS: the language is PT.
    Yes,
    Inconclusive,
}

/// Sound PT certificate for an NFA that avoids determinization.
pub fn certify_pt_nfa(automaton: &Automaton) -> NfaCertificate {
    if automaton.is_complete()
        && automaton.is_partially_ordered()
        && matches!(satisfies_ums(automaton), Ok(true))
    {
        NfaCertificate::Yes
    } else {
        NfaCertificate::Inconclusive
    }
}

/// Decides piecewise testability of any automaton.
pub fn is_pt(automaton: &Automaton) -> bool {
    if certify_pt_nfa(automaton) == NfaCertificate::Yes {
        return true;
    }
    let min = minimal_dfa(automaton);
    is_pt_min_dfa(&min).expect("minimal DFA is complete")
}

/// Minimal complete DFA of any automaton. Complete DFAs are minimized
/// directly and keep their state names; anything else goes through the
/// subset construction first.
pub fn minimal_dfa(automaton: &Automaton) -> Automaton {
    if automaton.is_complete_dfa() {
        return automaton.minimize().expect("complete DFA");
    }
    automaton.determinize().minimize().expect("subset construction yields a complete DFA")
}
