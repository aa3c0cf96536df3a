//! k-piecewise testability of minimal DFAs.
//!
//! Dedicated deciders exist for `k ≤ 3`. For arbitrary `k` the oracle
//! explores the product of the `~_k`-canonical DFA with the input DFA: the
//! language is k-PT iff every reachable `~_k` class is paired with a single
//! state. A class met with two different states yields a [`Certificate`].

use std::collections::VecDeque;
use std::fmt;

use indexmap::IndexMap;

use crate::automaton::{Automaton, Letter, StateId};
use crate::error::{Error, Result};
use crate::monoid::{check_identity, kpt_identities, Identity, IdentityCheck, TransitionMonoid};
use crate::pt::{is_pt_min_dfa, minimal_dfa};
use crate::subwords::{embeds, k_equivalent, render_word, universe_size, SubwordSet};

/// Two `~_k`-equivalent words leading a minimal DFA to different states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub k: usize,
    pub w1: Vec<Letter>,
    pub w2: Vec<Letter>,
    pub state1: StateId,
    pub state2: StateId,
}

impl Certificate {
    /// Builds a certificate from two words, recording the states they reach.
    pub fn from_words(dfa: &Automaton, k: usize, w1: Vec<Letter>, w2: Vec<Letter>) -> Result<Self> {
        dfa.require_complete_dfa()?;
        dfa.check_word(&w1)?;
        dfa.check_word(&w2)?;
        let i = dfa.initial_state();
        let state1 = dfa.step_word(i, &w1);
        let state2 = dfa.step_word(i, &w2);
        Ok(Certificate { k, w1, w2, state1, state2 })
    }

    /// `k: …`, `w1: …`, `w2: …`, `state1: …`, `state2: …` lines; words are
    /// whitespace-separated letters with ε written `-`.
    pub fn render(&self, dfa: &Automaton) -> String {
        format!(
            "k: {}\nw1: {}\nw2: {}\nstate1: {}\nstate2: {}\n",
            self.k,
            render_word(dfa.alphabet(), &self.w1),
            render_word(dfa.alphabet(), &self.w2),
            dfa.state_name(self.state1),
            dfa.state_name(self.state2),
        )
    }
}

/// Rechecks a certificate against a complete DFA: the words are
/// `~_k`-equivalent, they reach the recorded states, and those differ.
pub fn verify_certificate(dfa: &Automaton, cert: &Certificate) -> Result<bool> {
    dfa.require_complete_dfa()?;
    dfa.check_word(&cert.w1)?;
    dfa.check_word(&cert.w2)?;
    let i = dfa.initial_state();
    let s1 = dfa.step_word(i, &cert.w1);
    let s2 = dfa.step_word(i, &cert.w2);
    Ok(s1 == cert.state1 && s2 == cert.state2 && s1 != s2 && k_equivalent(&cert.w1, &cert.w2, cert.k))
}

/// `L(dfa)` is 0-PT iff the minimal DFA has one state.
pub fn is_0pt(dfa: &Automaton) -> Result<bool> {
    dfa.require_complete_dfa()?;
    Ok(dfa.num_states() == 1)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OnePtViolation {
    /// `p·a ≠ p·aa`
    NotIdempotent { state: StateId, letter: Letter },
    /// `p·ab ≠ p·ba`
    NotCommutative { state: StateId, a: Letter, b: Letter },
}

/// Letter-level 1-PT test on a minimal DFA: every letter is idempotent and
/// every two letters commute, from every state.
pub fn one_pt_violation(dfa: &Automaton) -> Result<Option<OnePtViolation>> {
    dfa.require_complete_dfa()?;
    let m = dfa.num_letters();
    for p in 0..dfa.num_states() {
        for a in 0..m {
            let q = dfa.step(p, a);
            if dfa.step(q, a) != q {
                return Ok(Some(OnePtViolation::NotIdempotent { state: p, letter: a }));
            }
            for b in a + 1..m {
                if dfa.step(q, b) != dfa.step(dfa.step(p, b), a) {
                    return Ok(Some(OnePtViolation::NotCommutative { state: p, a, b }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_1pt(dfa: &Automaton) -> Result<bool> {
    Ok(one_pt_violation(dfa)?.is_none())
}

/// States `i·w` for words `w` containing `letter`.
pub fn reachable_containing(dfa: &Automaton, letter: Letter) -> Result<Vec<StateId>> {
    if !dfa.is_deterministic() {
        return Err(Error::NotDeterministic);
    }
    let n = dfa.num_states();
    let mut seen = vec![[false; 2]; n];
    let start = dfa.initial_state();
    seen[start][0] = true;
    let mut queue = VecDeque::from([(start, false)]);
    while let Some((p, flag)) = queue.pop_front() {
        for a in 0..dfa.num_letters() {
            let f = flag || a == letter;
            for &q in dfa.successors(p, a) {
                if !seen[q][f as usize] {
                    seen[q][f as usize] = true;
                    queue.push_back((q, f));
                }
            }
        }
    }
    Ok((0..n).filter(|&q| seen[q][1]).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoPtViolation {
    NotPiecewiseTestable,
    /// `s·ba ≠ s·aba` for a state `s` reached by a word containing `a`;
    /// `b = None` stands for ε.
    Equation { state: StateId, a: Letter, b: Option<Letter> },
}

/// 2-PT test on a minimal DFA: PT, and `s·ba = s·aba` for every letter `a`,
/// every state `s` reached by a word containing `a` and every
/// `b ∈ Σ ∪ {ε}`.
pub fn two_pt_violation(dfa: &Automaton) -> Result<Option<TwoPtViolation>> {
    if !is_pt_min_dfa(dfa)? {
        return Ok(Some(TwoPtViolation::NotPiecewiseTestable));
    }
    let m = dfa.num_letters();
    for a in 0..m {
        for s in reachable_containing(dfa, a)? {
            let sa = dfa.step(s, a);
            if dfa.step(s, a) != dfa.step(sa, a) {
                return Ok(Some(TwoPtViolation::Equation { state: s, a, b: None }));
            }
            for b in 0..m {
                if dfa.step(dfa.step(s, b), a) != dfa.step(dfa.step(sa, b), a) {
                    return Ok(Some(TwoPtViolation::Equation { state: s, a, b: Some(b) }));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_2pt(dfa: &Automaton) -> Result<bool> {
    Ok(two_pt_violation(dfa)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ThreePt {
    Yes,
    /// An equation of the 3-PT variety fails; the assignment maps each
    /// variable to a word realizing the monoid element.
    No { identity: Option<Identity>, assignment: Vec<(char, Vec<Letter>)> },
    /// The monoid or the assignment space exceeded the budget.
    Unknown,
}

/// 3-PT test on a minimal DFA through the equations of the variety,
/// evaluated on the transition monoid.
pub fn is_3pt(dfa: &Automaton, budget: usize) -> Result<ThreePt> {
    if !is_pt_min_dfa(dfa)? {
        return Ok(ThreePt::No { identity: None, assignment: Vec::new() });
    }
    let monoid = match TransitionMonoid::new(dfa, budget) {
        Ok(m) => m,
        Err(Error::BudgetExceeded { .. }) => return Ok(ThreePt::Unknown),
        Err(e) => return Err(e),
    };
    for identity in kpt_identities(3).expect("3-PT equations") {
        match check_identity(&monoid, &identity, budget) {
            Ok(IdentityCheck::Holds) => {}
            Ok(IdentityCheck::Counterexample(assign)) => {
                let assignment = assign
                    .into_iter()
                    .map(|(v, x)| (v, monoid.representative(x).to_vec()))
                    .collect();
                return Ok(ThreePt::No { identity: Some(identity), assignment });
            }
            Err(Error::BudgetExceeded { .. }) => return Ok(ThreePt::Unknown),
            Err(e) => return Err(e),
        }
    }
    Ok(ThreePt::Yes)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleVerdict {
    Yes,
    No(Certificate),
    /// More than the budgeted number of classes were reachable.
    Unknown { classes: usize },
}

struct Node {
    state: StateId,
    parent: Option<(usize, Letter)>,
}

enum Exploration {
    Functional(IndexMap<SubwordSet, Node>),
    Conflict(Certificate),
    Exhausted(usize),
}

fn access_word(classes: &IndexMap<SubwordSet, Node>, mut id: usize) -> Vec<Letter> {
    let mut w = Vec::new();
    while let Some((parent, a)) = classes[id].parent {
        w.push(a);
        id = parent;
    }
    w.reverse();
    w
}

fn explore(dfa: &Automaton, k: usize, budget: usize) -> Result<Exploration> {
    dfa.require_complete_dfa()?;
    let n = dfa.num_letters().max(1);
    if universe_size(n, k).is_none() {
        return Ok(Exploration::Exhausted(0));
    }
    let mut classes: IndexMap<SubwordSet, Node> = IndexMap::new();
    classes.insert(SubwordSet::epsilon(n, k), Node { state: dfa.initial_state(), parent: None });
    let mut i = 0;
    while i < classes.len() {
        let (class, node) = classes.get_index(i).unwrap();
        let class = class.clone();
        let state = node.state;
        for a in 0..dfa.num_letters() {
            let next_class = class.successor(a);
            let next_state = dfa.step(state, a);
            match classes.get_index_of(&next_class) {
                Some(j) => {
                    if classes[j].state != next_state {
                        let w1 = access_word(&classes, j);
                        let mut w2 = access_word(&classes, i);
                        w2.push(a);
                        return Ok(Exploration::Conflict(Certificate {
                            k,
                            w1,
                            w2,
                            state1: classes[j].state,
                            state2: next_state,
                        }));
                    }
                }
                None => {
                    if classes.len() >= budget {
                        return Ok(Exploration::Exhausted(classes.len() + 1));
                    }
                    classes.insert(next_class, Node { state: next_state, parent: Some((i, a)) });
                }
            }
        }
        i += 1;
    }
    Ok(Exploration::Functional(classes))
}

/// Generic k-PT decision for a minimal complete DFA.
pub fn is_kpt_oracle(dfa: &Automaton, k: usize, budget: usize) -> Result<OracleVerdict> {
    Ok(match explore(dfa, k, budget)? {
        Exploration::Functional(_) => OracleVerdict::Yes,
        Exploration::Conflict(c) => OracleVerdict::No(c),
        Exploration::Exhausted(n) => OracleVerdict::Unknown { classes: n },
    })
}

/// Which procedure produced a k-PT verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    SingleState,
    LetterEquations,
    TwoPtCondition,
    MonoidEquations,
    Oracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::SingleState => "single-state",
            Method::LetterEquations => "letter-equations",
            Method::TwoPtCondition => "two-pt-condition",
            Method::MonoidEquations => "monoid-equations",
            Method::Oracle => "oracle",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KptVerdict {
    Yes,
    No,
    Unknown,
}

/// Decides k-PT on a minimal complete DFA with the cheapest applicable
/// procedure, falling back to the oracle.
pub fn decide_kpt(dfa: &Automaton, k: usize, budget: usize) -> Result<(KptVerdict, Method)> {
    let bool_verdict = |b: bool| if b { KptVerdict::Yes } else { KptVerdict::No };
    match k {
        0 => return Ok((bool_verdict(is_0pt(dfa)?), Method::SingleState)),
        1 => return Ok((bool_verdict(is_1pt(dfa)?), Method::LetterEquations)),
        2 => return Ok((bool_verdict(is_2pt(dfa)?), Method::TwoPtCondition)),
        3 => match is_3pt(dfa, budget)? {
            ThreePt::Yes => return Ok((KptVerdict::Yes, Method::MonoidEquations)),
            ThreePt::No { .. } => return Ok((KptVerdict::No, Method::MonoidEquations)),
            ThreePt::Unknown => {}
        },
        _ => {}
    }
    let verdict = match is_kpt_oracle(dfa, k, budget)? {
        OracleVerdict::Yes => KptVerdict::Yes,
        OracleVerdict::No(_) => KptVerdict::No,
        OracleVerdict::Unknown { .. } => KptVerdict::Unknown,
    };
    Ok((verdict, Method::Oracle))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MinK {
    Exact(usize),
    /// The smallest k lies in `lo..=hi`; `hi` is the depth of the minimal DFA.
    Interval { lo: usize, hi: usize },
    NotPt,
}

/// Smallest k for which the language of any automaton is k-PT. Candidates
/// are scanned upward from 0; the depth of the minimal DFA is an upper
/// bound for PT languages.
pub fn min_k(automaton: &Automaton, budget: usize) -> Result<MinK> {
    let dfa = minimal_dfa(automaton);
    if !is_pt_min_dfa(&dfa)? {
        return Ok(MinK::NotPt);
    }
    let hi = dfa.depth()?;
    for k in 0..=hi {
        match decide_kpt(&dfa, k, budget)?.0 {
            KptVerdict::Yes => return Ok(MinK::Exact(k)),
            KptVerdict::No => {}
            KptVerdict::Unknown if k == hi => return Ok(MinK::Exact(hi)),
            KptVerdict::Unknown => return Ok(MinK::Interval { lo: k, hi }),
        }
    }
    Ok(MinK::Exact(hi))
}

/// A conjunction of pieces and negated pieces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub required: Vec<Vec<Letter>>,
    pub forbidden: Vec<Vec<Letter>>,
}

impl Clause {
    pub fn matches(&self, word: &[Letter]) -> bool {
        self.required.iter().all(|v| embeds(v, word)) && !self.forbidden.iter().any(|v| embeds(v, word))
    }
}

/// A union of clauses over a named alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PieceExpression {
    pub alphabet: Vec<String>,
    pub clauses: Vec<Clause>,
}

impl PieceExpression {
    pub fn eval(&self, word: &[Letter]) -> bool {
        self.clauses.iter().any(|c| c.matches(word))
    }
}

pub fn eval_piece_expression(expr: &PieceExpression, word: &[Letter]) -> bool {
    expr.eval(word)
}

fn spell(alphabet: &[String], v: &[Letter]) -> String {
    if v.is_empty() {
        return "TRUE".to_string();
    }
    v.iter().map(|&a| alphabet[a].as_str()).collect::<Vec<_>>().join(".")
}

/// `(v1 & v2 & !u1) | (...)`; an unconstrained clause is `TRUE` and the
/// empty union is `FALSE`.
impl fmt::Display for PieceExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("FALSE");
        }
        let rendered: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let mut lits: Vec<String> = c.required.iter().map(|v| spell(&self.alphabet, v)).collect();
                lits.extend(c.forbidden.iter().map(|v| format!("!{}", spell(&self.alphabet, v))));
                if lits.is_empty() {
                    "TRUE".to_string()
                } else {
                    format!("({})", lits.join(" & "))
                }
            })
            .collect();
        f.write_str(&rendered.join(" | "))
    }
}

/// Writes `L(dfa)` as a union of `~_k` classes, each described by the
/// maximal subwords it must contain and the minimal words it must avoid.
pub fn decompose(dfa: &Automaton, k: usize, budget: usize) -> Result<PieceExpression> {
    let classes = match explore(dfa, k, budget)? {
        Exploration::Functional(classes) => classes,
        Exploration::Conflict(_) => {
            return Err(Error::Contract(format!("language is not {k}-piecewise testable")));
        }
        Exploration::Exhausted(n) => return Err(Error::BudgetExceeded { limit: budget, reached: n }),
    };
    let clauses = classes
        .iter()
        .filter(|(_, node)| dfa.is_accepting(node.state))
        .map(|(class, _)| Clause {
            required: class.maximal_elements().into_iter().filter(|v| !v.is_empty()).collect(),
            forbidden: class.minimal_missing(),
        })
        .collect();
    Ok(PieceExpression { alphabet: dfa.alphabet().to_vec(), clauses })
}

/// Minimizes first, then decomposes.
pub fn decompose_automaton(automaton: &Automaton, k: usize, budget: usize) -> Result<PieceExpression> {
    decompose(&minimal_dfa(automaton), k, budget)
}
