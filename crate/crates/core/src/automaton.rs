//! Finite automata over a named alphabet.
//!
//! A single [`Automaton`] type covers both NFAs and DFAs: determinism is a
//! property that is checked, never stored. States and letters carry opaque
//! string names and are addressed internally by dense indices.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

/// Index of a letter in an automaton's alphabet.
pub type Letter = usize;
/// Index of a state of an automaton.
pub type StateId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Vec<String>,
    states: Vec<String>,
    // delta[state][letter] is sorted and deduplicated
    delta: Vec<Vec<Vec<StateId>>>,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
}

impl Automaton {
    /// Creates an automaton without transitions, initial or accepting states.
    pub fn new<A, S>(alphabet: A, states: S) -> Result<Self>
    where
        A: IntoIterator,
        A::Item: Into<String>,
        S: IntoIterator,
        S::Item: Into<String>,
    {
        let alphabet: Vec<String> = alphabet.into_iter().map(Into::into).collect();
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        check_unique("letter", &alphabet)?;
        check_unique("state", &states)?;
        let n = states.len();
        let m = alphabet.len();
        Ok(Automaton {
            alphabet,
            states,
            delta: vec![vec![Vec::new(); m]; n],
            initial: Vec::new(),
            accepting: vec![false; n],
        })
    }

    pub fn add_transition(&mut self, from: StateId, letter: Letter, to: StateId) {
        assert!(from < self.states.len() && to < self.states.len(), "state out of range");
        assert!(letter < self.alphabet.len(), "letter out of range");
        let targets = &mut self.delta[from][letter];
        if let Err(pos) = targets.binary_search(&to) {
            targets.insert(pos, to);
        }
    }

    pub fn set_initial(&mut self, state: StateId) {
        assert!(state < self.states.len(), "state out of range");
        if let Err(pos) = self.initial.binary_search(&state) {
            self.initial.insert(pos, state);
        }
    }

    pub fn set_accepting(&mut self, state: StateId, accepting: bool) {
        self.accepting[state] = accepting;
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_letters(&self) -> usize {
        self.alphabet.len()
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, state: StateId) -> &str {
        &self.states[state]
    }

    pub fn letter_name(&self, letter: Letter) -> &str {
        &self.alphabet[letter]
    }

    pub fn state_index(&self, name: &str) -> Result<StateId> {
        self.states
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownState(name.to_string()))
    }

    pub fn letter_index(&self, name: &str) -> Result<Letter> {
        self.alphabet
            .iter()
            .position(|s| s == name)
            .ok_or_else(|| Error::UnknownLetter(name.to_string()))
    }

    pub fn initial_states(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, state: StateId) -> bool {
        self.accepting[state]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.states.len()).filter(move |&q| self.accepting[q])
    }

    pub fn successors(&self, state: StateId, letter: Letter) -> &[StateId] {
        &self.delta[state][letter]
    }

    /// All transitions `(from, letter, to)` in index order.
    pub fn transitions(&self) -> impl Iterator<Item = (StateId, Letter, StateId)> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, ts)| ts.iter().map(move |&q| (p, a, q)))
        })
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().flatten().map(Vec::len).sum()
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() == 1 && self.delta.iter().flatten().all(|ts| ts.len() <= 1)
    }

    /// Every state has at least one successor under every letter.
    pub fn is_complete(&self) -> bool {
        self.delta.iter().flatten().all(|ts| !ts.is_empty())
    }

    pub fn is_complete_dfa(&self) -> bool {
        self.initial.len() == 1 && self.delta.iter().flatten().all(|ts| ts.len() == 1)
    }

    pub(crate) fn require_complete_dfa(&self) -> Result<()> {
        if !self.is_deterministic() {
            return Err(Error::NotDeterministic);
        }
        if !self.is_complete() {
            return Err(Error::NotComplete);
        }
        Ok(())
    }

    /// The unique initial state of a DFA. Panics on automata with several.
    pub fn initial_state(&self) -> StateId {
        assert_eq!(self.initial.len(), 1, "automaton must have exactly one initial state");
        self.initial[0]
    }

    /// Successor in a complete DFA.
    #[inline]
    pub fn step(&self, state: StateId, letter: Letter) -> StateId {
        self.delta[state][letter][0]
    }

    /// Runs a word from `state` in a complete DFA.
    pub fn step_word(&self, state: StateId, word: &[Letter]) -> StateId {
        word.iter().fold(state, |q, &a| self.step(q, a))
    }

    pub fn check_word(&self, word: &[Letter]) -> Result<()> {
        match word.iter().find(|&&a| a >= self.alphabet.len()) {
            Some(a) => Err(Error::UnknownLetter(format!("#{a}"))),
            None => Ok(()),
        }
    }

    /// Translates letter names into indices.
    pub fn parse_word<S: AsRef<str>>(&self, letters: &[S]) -> Result<Vec<Letter>> {
        letters.iter().map(|s| self.letter_index(s.as_ref())).collect()
    }

    pub fn word_names(&self, word: &[Letter]) -> Vec<&str> {
        word.iter().map(|&a| self.alphabet[a].as_str()).collect()
    }

    /// The set `I·w`, sorted.
    pub fn run(&self, word: &[Letter]) -> Result<Vec<StateId>> {
        self.check_word(word)?;
        Ok(self.run_from(&self.initial, word))
    }

    fn run_from(&self, start: &[StateId], word: &[Letter]) -> Vec<StateId> {
        let mut current = vec![false; self.states.len()];
        for &q in start {
            current[q] = true;
        }
        for &a in word {
            let mut next = vec![false; self.states.len()];
            for (q, _) in current.iter().enumerate().filter(|(_, &on)| on) {
                for &r in &self.delta[q][a] {
                    next[r] = true;
                }
            }
            current = next;
        }
        (0..self.states.len()).filter(|&q| current[q]).collect()
    }

    pub fn accepts(&self, word: &[Letter]) -> Result<bool> {
        Ok(self.run(word)?.into_iter().any(|q| self.accepting[q]))
    }

    /// Σ(p): letters with a self-loop at `p`.
    pub fn self_loop_alphabet(&self, state: StateId) -> Result<Vec<Letter>> {
        if state >= self.states.len() {
            return Err(Error::UnknownState(format!("#{state}")));
        }
        Ok((0..self.alphabet.len())
            .filter(|&a| self.delta[state][a].binary_search(&state).is_ok())
            .collect())
    }

    /// Subset construction over the reachable subsets. The result is a
    /// complete DFA in which the empty subset (if reachable) acts as sink.
    /// States are named `{p,q,...}` after their members.
    pub fn determinize(&self) -> Automaton {
        let start = self.initial.clone();
        let mut index: HashMap<Vec<StateId>, StateId> = HashMap::new();
        let mut subsets = vec![start.clone()];
        index.insert(start, 0);
        let mut edges: Vec<Vec<StateId>> = Vec::new();
        let mut i = 0;
        while i < subsets.len() {
            let mut row = Vec::with_capacity(self.alphabet.len());
            for a in 0..self.alphabet.len() {
                let next = self.run_from(&subsets[i], &[a]);
                let id = match index.get(&next) {
                    Some(&id) => id,
                    None => {
                        let id = subsets.len();
                        index.insert(next.clone(), id);
                        subsets.push(next);
                        id
                    }
                };
                row.push(id);
            }
            edges.push(row);
            i += 1;
        }
        let names = subsets.iter().map(|s| {
            let members: Vec<&str> = s.iter().map(|&q| self.states[q].as_str()).collect();
            format!("{{{}}}", members.join(","))
        });
        let mut dfa = Automaton::new(self.alphabet.clone(), names)
            .expect("subset names are distinct");
        for (p, row) in edges.iter().enumerate() {
            for (a, &q) in row.iter().enumerate() {
                dfa.add_transition(p, a, q);
            }
            dfa.accepting[p] = subsets[p].iter().any(|&q| self.accepting[q]);
        }
        dfa.set_initial(0);
        dfa
    }

    /// Routes every missing transition to a fresh non-accepting sink. An
    /// automaton that is already complete is returned unchanged.
    pub fn complete_with_sink(&self) -> Automaton {
        if self.is_complete() {
            return self.clone();
        }
        let mut name = "sink".to_string();
        while self.states.contains(&name) {
            name.push('\'');
        }
        let mut out = self.clone();
        let sink = out.states.len();
        out.states.push(name);
        out.accepting.push(false);
        out.delta.push(vec![vec![sink]; self.alphabet.len()]);
        for row in out.delta.iter_mut() {
            for ts in row.iter_mut() {
                if ts.is_empty() {
                    ts.push(sink);
                }
            }
        }
        out
    }

    /// States reachable from the initial states, in BFS order (letters
    /// explored in alphabet order).
    pub fn reachable_states(&self) -> Vec<StateId> {
        let mut seen = vec![false; self.states.len()];
        let mut order = Vec::new();
        let mut queue = VecDeque::new();
        for &q in &self.initial {
            if !seen[q] {
                seen[q] = true;
                queue.push_back(q);
            }
        }
        while let Some(p) = queue.pop_front() {
            order.push(p);
            for ts in &self.delta[p] {
                for &q in ts {
                    if !seen[q] {
                        seen[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        order
    }

    /// Minimal complete DFA by Moore partition refinement. Unreachable
    /// states are dropped; each block is named after its first member in
    /// BFS order and the result is numbered in BFS order from the initial
    /// state.
    pub fn minimize(&self) -> Result<Automaton> {
        self.require_complete_dfa()?;
        let reach = self.reachable_states();
        let mut local = vec![usize::MAX; self.states.len()];
        for (i, &q) in reach.iter().enumerate() {
            local[q] = i;
        }
        let m = self.alphabet.len();
        let succ: Vec<Vec<usize>> = reach
            .iter()
            .map(|&q| (0..m).map(|a| local[self.step(q, a)]).collect())
            .collect();

        let mut block: Vec<usize> = reach.iter().map(|&q| self.accepting[q] as usize).collect();
        let mut count = {
            let mut b = block.clone();
            b.sort_unstable();
            b.dedup();
            b.len()
        };
        // normalize so that ids are 0..count
        if count == 1 {
            block.iter_mut().for_each(|b| *b = 0);
        }
        loop {
            let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
            let mut next = Vec::with_capacity(block.len());
            for (i, row) in succ.iter().enumerate() {
                let mut sig = Vec::with_capacity(m + 1);
                sig.push(block[i]);
                sig.extend(row.iter().map(|&j| block[j]));
                let fresh = ids.len();
                next.push(*ids.entry(sig).or_insert(fresh));
            }
            let new_count = ids.len();
            block = next;
            if new_count == count {
                break;
            }
            count = new_count;
        }

        // number blocks in BFS order of the quotient
        let mut order: Vec<usize> = Vec::new();
        let mut renum = vec![usize::MAX; count];
        let mut rep = vec![usize::MAX; count];
        let mut queue = VecDeque::new();
        renum[block[0]] = 0;
        rep[0] = 0;
        order.push(block[0]);
        queue.push_back(0usize);
        while let Some(i) = queue.pop_front() {
            for a in 0..m {
                let j = succ[i][a];
                let b = block[j];
                if renum[b] == usize::MAX {
                    renum[b] = order.len();
                    rep[order.len()] = j;
                    order.push(b);
                    queue.push_back(j);
                }
            }
        }
        let names = (0..count).map(|n| self.states[reach[rep[n]]].clone());
        let mut dfa = Automaton::new(self.alphabet.clone(), names)?;
        for n in 0..count {
            let i = rep[n];
            for a in 0..m {
                dfa.add_transition(n, a, renum[block[succ[i][a]]]);
            }
            dfa.accepting[n] = self.accepting[reach[i]];
        }
        dfa.set_initial(0);
        Ok(dfa)
    }

    /// Topological order of the transition graph with self-loops removed,
    /// or `None` when a nontrivial cycle exists.
    fn topological_order(&self) -> Option<Vec<StateId>> {
        let n = self.states.len();
        let out = self.proper_successors();
        let mut indegree = vec![0usize; n];
        for targets in &out {
            for &q in targets {
                indegree[q] += 1;
            }
        }
        let mut stack: Vec<StateId> = (0..n).filter(|&q| indegree[q] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(p) = stack.pop() {
            order.push(p);
            for &q in &out[p] {
                indegree[q] -= 1;
                if indegree[q] == 0 {
                    stack.push(q);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Distinct successors of each state, ignoring self-loops.
    fn proper_successors(&self) -> Vec<Vec<StateId>> {
        self.delta
            .iter()
            .enumerate()
            .map(|(p, row)| {
                let mut targets: Vec<StateId> =
                    row.iter().flatten().copied().filter(|&q| q != p).collect();
                targets.sort_unstable();
                targets.dedup();
                targets
            })
            .collect()
    }

    /// True iff the reachability relation is a partial order, i.e. the only
    /// cycles are self-loops.
    pub fn is_partially_ordered(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Number of transitions on a longest path of the self-loop-free
    /// transition graph. Defined only for partially ordered automata.
    pub fn depth(&self) -> Result<usize> {
        let order = self.topological_order().ok_or(Error::Cyclic)?;
        let out = self.proper_successors();
        let mut longest = vec![0usize; self.states.len()];
        for &p in order.iter().rev() {
            longest[p] = out[p].iter().map(|&q| longest[q] + 1).max().unwrap_or(0);
        }
        Ok(longest.into_iter().max().unwrap_or(0))
    }
}

fn check_unique(kind: &'static str, names: &[String]) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for name in names {
        if !seen.insert(name.as_str()) {
            return Err(Error::Duplicate { kind, name: name.clone() });
        }
    }
    Ok(())
}
