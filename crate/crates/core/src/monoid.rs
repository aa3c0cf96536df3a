//! Transition monoids of complete DFAs and equation checking on them.

use std::collections::HashMap;
use std::fmt;

use crate::automaton::{Automaton, Letter};
use crate::error::{Error, Result};

/// Default limit on monoid elements and on evaluated variable assignments.
pub const DEFAULT_MONOID_BUDGET: usize = 1_000_000;

// Largest monoid for which the full multiplication table is cached.
const TABLE_LIMIT: usize = 2048;

/// The monoid of state maps generated by the letters of a complete DFA.
///
/// Element 0 is the identity. Every element carries the shortlex-least
/// word that produces it. The product `x * y` is "first `x`, then `y`",
/// matching concatenation of words.
#[derive(Clone, Debug)]
pub struct TransitionMonoid {
    maps: Vec<Box<[u32]>>,
    words: Vec<Vec<Letter>>,
    index: HashMap<Box<[u32]>, usize>,
    generators: Vec<usize>,
    table: Option<Vec<u32>>,
}

impl TransitionMonoid {
    pub fn new(dfa: &Automaton, budget: usize) -> Result<Self> {
        dfa.require_complete_dfa()?;
        let n = dfa.num_states();
        let identity: Box<[u32]> = (0..n as u32).collect();
        let letter_maps: Vec<Box<[u32]>> = (0..dfa.num_letters())
            .map(|a| (0..n).map(|q| dfa.step(q, a) as u32).collect())
            .collect();

        let mut maps = vec![identity.clone()];
        let mut words = vec![Vec::new()];
        let mut index = HashMap::new();
        index.insert(identity, 0usize);
        let mut i = 0;
        while i < maps.len() {
            for (a, g) in letter_maps.iter().enumerate() {
                let next: Box<[u32]> = maps[i].iter().map(|&q| g[q as usize]).collect();
                if !index.contains_key(&next) {
                    if maps.len() >= budget {
                        return Err(Error::BudgetExceeded { limit: budget, reached: maps.len() + 1 });
                    }
                    index.insert(next.clone(), maps.len());
                    let mut w = words[i].clone();
                    w.push(a);
                    words.push(w);
                    maps.push(next);
                }
            }
            i += 1;
        }
        let generators = letter_maps.iter().map(|g| index[g]).collect();
        let mut monoid = TransitionMonoid { maps, words, index, generators, table: None };
        if monoid.len() <= TABLE_LIMIT {
            let size = monoid.len();
            let mut table = Vec::with_capacity(size * size);
            for x in 0..size {
                for y in 0..size {
                    table.push(monoid.compose(x, y) as u32);
                }
            }
            monoid.table = Some(table);
        }
        Ok(monoid)
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn identity(&self) -> usize {
        0
    }

    /// Element generated by a letter.
    pub fn generator(&self, letter: Letter) -> usize {
        self.generators[letter]
    }

    pub fn element_map(&self, x: usize) -> &[u32] {
        &self.maps[x]
    }

    /// Shortlex-least word realizing the element.
    pub fn representative(&self, x: usize) -> &[Letter] {
        &self.words[x]
    }

    fn compose(&self, x: usize, y: usize) -> usize {
        let g = &self.maps[y];
        let m: Box<[u32]> = self.maps[x].iter().map(|&q| g[q as usize]).collect();
        self.index[&m]
    }

    #[inline]
    pub fn multiply(&self, x: usize, y: usize) -> usize {
        match &self.table {
            Some(t) => t[x * self.maps.len() + y] as usize,
            None => self.compose(x, y),
        }
    }

    /// Element realized by a word.
    pub fn evaluate_word(&self, word: &[Letter]) -> usize {
        word.iter().fold(0, |x, &a| self.multiply(x, self.generators[a]))
    }

    /// `x^ω`: the idempotent power of `x`.
    pub fn idempotent_power(&self, x: usize) -> usize {
        let mut p = x;
        loop {
            let pp = self.multiply(p, p);
            if pp == p {
                return p;
            }
            p = self.multiply(p, x);
        }
    }

    /// True iff every cyclic subgroup is trivial (`x^ω = x^{ω+1}`).
    pub fn is_aperiodic(&self) -> bool {
        (0..self.len()).all(|x| {
            let e = self.idempotent_power(x);
            self.multiply(e, x) == e
        })
    }
}

/// A term: a word over single-letter variables.
pub type Term = Vec<char>;

/// An equation `lhs = rhs` between terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    /// Parses `lhs=rhs` where each side is a sequence of lowercase
    /// variables, parenthesized groups and `^n` powers, e.g. `(xy)^3=(yx)^3`.
    pub fn parse(text: &str) -> Result<Self> {
        let (l, r) = text
            .split_once('=')
            .ok_or_else(|| Error::Contract(format!("identity `{text}` has no `=`")))?;
        Ok(Identity { lhs: parse_term(l)?, rhs: parse_term(r)? })
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<char> {
        let mut vars = Vec::new();
        for &c in self.lhs.iter().chain(&self.rhs) {
            if !vars.contains(&c) {
                vars.push(c);
            }
        }
        vars
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |t: &Term| if t.is_empty() { "1".to_string() } else { t.iter().collect() };
        write!(f, "{}={}", side(&self.lhs), side(&self.rhs))
    }
}

fn parse_term(text: &str) -> Result<Term> {
    fn group(chars: &[char], pos: &mut usize, text: &str) -> Result<Term> {
        let bad = |msg: &str| Error::Contract(format!("bad term `{text}`: {msg}"));
        let mut out = Vec::new();
        while *pos < chars.len() {
            let c = chars[*pos];
            let mut piece = match c {
                'a'..='z' => {
                    *pos += 1;
                    vec![c]
                }
                '1' if out.is_empty() && chars.len() == 1 => {
                    *pos += 1;
                    Vec::new()
                }
                '(' => {
                    *pos += 1;
                    let inner = group(chars, pos, text)?;
                    if chars.get(*pos) != Some(&')') {
                        return Err(bad("unbalanced parenthesis"));
                    }
                    *pos += 1;
                    inner
                }
                ')' => return Ok(out),
                c if c.is_whitespace() => {
                    *pos += 1;
                    continue;
                }
                _ => return Err(bad("unexpected character")),
            };
            if chars.get(*pos) == Some(&'^') {
                *pos += 1;
                let start = *pos;
                while *pos < chars.len() && chars[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                let n: usize = chars[start..*pos]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| bad("missing exponent"))?;
                piece = piece.repeat(n);
            }
            out.extend(piece);
        }
        Ok(out)
    }
    let chars: Vec<char> = text.trim().chars().collect();
    let mut pos = 0;
    let term = group(&chars, &mut pos, text)?;
    if pos != chars.len() {
        return Err(Error::Contract(format!("bad term `{text}`: unbalanced parenthesis")));
    }
    Ok(term)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IdentityCheck {
    Holds,
    /// A violating assignment, variable by variable.
    Counterexample(Vec<(char, usize)>),
}

/// Variables occurring exactly once on each side, kept only while their
/// order agrees on both sides. They need not be enumerated: see
/// [`check_identity`].
fn linear_variables(identity: &Identity) -> Vec<char> {
    let count = |t: &Term, c: char| t.iter().filter(|&&x| x == c).count();
    let mut linear = Vec::new();
    let mut last = None;
    for &c in &identity.lhs {
        if count(&identity.lhs, c) == 1 && count(&identity.rhs, c) == 1 {
            let r = identity.rhs.iter().position(|&x| x == c).unwrap();
            if last.is_none_or(|l| r > l) {
                linear.push(c);
                last = Some(r);
            }
        }
    }
    linear
}

#[derive(Clone, Copy)]
enum Parent {
    Unseen,
    // entered the stage from a pair (or, at stage 0, a state) of the previous one
    Start(u32),
    Step(u32, u32),
}

/// Search over pairs of states, one stage per segment between linear
/// variables.
struct PairSearch<'m> {
    monoid: &'m TransitionMonoid,
    n: usize,
    stages: Vec<Vec<Parent>>,
    members: Vec<Vec<u32>>,
}

impl<'m> PairSearch<'m> {
    fn new(monoid: &'m TransitionMonoid, linear: usize) -> Self {
        let n = monoid.element_map(0).len();
        PairSearch {
            monoid,
            n,
            stages: vec![vec![Parent::Unseen; n * n]; linear + 1],
            members: vec![Vec::new(); linear + 1],
        }
    }

    fn reset(&mut self) {
        for (stage, members) in self.stages.iter_mut().zip(&mut self.members) {
            for &p in members.iter() {
                stage[p as usize] = Parent::Unseen;
            }
            members.clear();
        }
    }

    fn visit(&mut self, stage: usize, pair: usize, parent: Parent) -> bool {
        if matches!(self.stages[stage][pair], Parent::Unseen) {
            self.stages[stage][pair] = parent;
            self.members[stage].push(pair as u32);
            true
        } else {
            false
        }
    }

    /// `lseg[i]`, `rseg[i]`: values of the i-th segments of both sides.
    /// Returns values of the linear variables that break the identity.
    fn run(&mut self, lseg: &[usize], rseg: &[usize]) -> Option<Vec<usize>> {
        self.reset();
        let n = self.n;
        let last = lseg.len() - 1;
        let (l0, r0) = (self.monoid.element_map(lseg[0]), self.monoid.element_map(rseg[0]));
        for q in 0..n {
            self.visit(0, l0[q] as usize * n + r0[q] as usize, Parent::Start(q as u32));
        }
        for stage in 0..last {
            // close under synchronized letters
            let mut i = 0;
            while i < self.members[stage].len() {
                let pair = self.members[stage][i] as usize;
                let (p1, p2) = (pair / n, pair % n);
                for &g in &self.monoid.generators {
                    let m = self.monoid.element_map(g);
                    let next = m[p1] as usize * n + m[p2] as usize;
                    self.visit(stage, next, Parent::Step(pair as u32, g as u32));
                }
                i += 1;
            }
            let (lm, rm) = (self.monoid.element_map(lseg[stage + 1]), self.monoid.element_map(rseg[stage + 1]));
            for i in 0..self.members[stage].len() {
                let pair = self.members[stage][i] as usize;
                let next = lm[pair / n] as usize * n + rm[pair % n] as usize;
                self.visit(stage + 1, next, Parent::Start(pair as u32));
            }
        }
        let bad = self.members[last].iter().map(|&p| p as usize).find(|&p| p / n != p % n)?;
        // walk back, collecting the word applied at each earlier stage
        let mut values = vec![0; last];
        let mut pair = bad;
        for stage in (0..=last).rev() {
            let mut gens = Vec::new();
            loop {
                match self.stages[stage][pair] {
                    Parent::Step(prev, g) => {
                        gens.push(g as usize);
                        pair = prev as usize;
                    }
                    Parent::Start(prev) => {
                        if stage < last {
                            values[stage] = gens.iter().rev().fold(0, |x, &g| self.monoid.multiply(x, g));
                        }
                        pair = prev as usize;
                        break;
                    }
                    Parent::Unseen => unreachable!("visited pairs have parents"),
                }
            }
        }
        Some(values)
    }
}

/// Decides whether `identity` holds in the monoid.
///
/// Variables occurring once on each side in the same relative order are
/// quantified by a reachability search over pairs of states; the others
/// are enumerated, and `budget` bounds the number of their assignments.
pub fn check_identity(monoid: &TransitionMonoid, identity: &Identity, budget: usize) -> Result<IdentityCheck> {
    let vars = identity.variables();
    let linear = linear_variables(identity);
    let enumerated: Vec<char> = vars.iter().copied().filter(|c| !linear.contains(c)).collect();
    let size = monoid.len();
    let total = (0..enumerated.len()).try_fold(1usize, |acc, _| acc.checked_mul(size));
    match total {
        Some(t) if t <= budget => {}
        _ => return Err(Error::BudgetExceeded { limit: budget, reached: total.unwrap_or(usize::MAX) }),
    }
    let split = |term: &Term| {
        let mut segs = vec![Vec::new()];
        for &c in term {
            if linear.contains(&c) {
                segs.push(Vec::new());
            } else {
                segs.last_mut().unwrap().push(enumerated.iter().position(|&v| v == c).unwrap());
            }
        }
        segs
    };
    let (lsegs, rsegs) = (split(&identity.lhs), split(&identity.rhs));
    let eval = |seg: &[usize], values: &[usize]| seg.iter().fold(0, |x, &v| monoid.multiply(x, values[v]));
    let mut search = PairSearch::new(monoid, linear.len());

    let mut values = vec![0usize; enumerated.len()];
    loop {
        let lv: Vec<usize> = lsegs.iter().map(|s| eval(s, &values)).collect();
        let rv: Vec<usize> = rsegs.iter().map(|s| eval(s, &values)).collect();
        let failure = if linear.is_empty() {
            (lv[0] != rv[0]).then(Vec::new)
        } else {
            search.run(&lv, &rv)
        };
        if let Some(linear_values) = failure {
            let assignment = vars
                .iter()
                .map(|&c| match linear.iter().position(|&v| v == c) {
                    Some(i) => (c, linear_values[i]),
                    None => (c, values[enumerated.iter().position(|&v| v == c).unwrap()]),
                })
                .collect();
            return Ok(IdentityCheck::Counterexample(assignment));
        }
        if !odometer(&mut values, size) {
            return Ok(IdentityCheck::Holds);
        }
    }
}

fn odometer(values: &mut [usize], size: usize) -> bool {
    for v in values.iter_mut() {
        *v += 1;
        if *v < size {
            return true;
        }
        *v = 0;
    }
    false
}

/// Reference check: evaluates both sides under every assignment of all
/// variables.
pub fn check_identity_exhaustive(
    monoid: &TransitionMonoid,
    identity: &Identity,
    budget: usize,
) -> Result<IdentityCheck> {
    let vars = identity.variables();
    let size = monoid.len();
    let total = (0..vars.len()).try_fold(1usize, |acc, _| acc.checked_mul(size));
    match total {
        Some(t) if t <= budget => {}
        _ => return Err(Error::BudgetExceeded { limit: budget, reached: total.unwrap_or(usize::MAX) }),
    }
    let slot = |c: char| vars.iter().position(|&v| v == c).unwrap();
    let lhs: Vec<usize> = identity.lhs.iter().map(|&c| slot(c)).collect();
    let rhs: Vec<usize> = identity.rhs.iter().map(|&c| slot(c)).collect();
    let eval = |term: &[usize], values: &[usize]| term.iter().fold(0, |x, &v| monoid.multiply(x, values[v]));
    let mut values = vec![0usize; vars.len()];
    loop {
        if eval(&lhs, &values) != eval(&rhs, &values) {
            return Ok(IdentityCheck::Counterexample(vars.iter().copied().zip(values).collect()));
        }
        if !odometer(&mut values, size) {
            return Ok(IdentityCheck::Holds);
        }
    }
}

/// Evaluates both sides of `identity` under `assignment`.
pub fn evaluate_assignment(monoid: &TransitionMonoid, identity: &Identity, assignment: &[(char, usize)]) -> (usize, usize) {
    let value = |c: char| assignment.iter().find(|&&(v, _)| v == c).map(|&(_, x)| x).unwrap_or(0);
    let eval = |t: &Term| t.iter().fold(0, |x, &c| monoid.multiply(x, value(c)));
    (eval(&identity.lhs), eval(&identity.rhs))
}

/// Equations defining the varieties of 1-, 2- and 3-piecewise testable
/// languages.
pub fn kpt_identities(k: usize) -> Option<Vec<Identity>> {
    let eqs: &[&str] = match k {
        1 => &["x=xx", "xy=yx"],
        2 => &["xyzx=xyxzx", "(xy)^2=(yx)^2"],
        3 => &["(xy)^3=(yx)^3", "xzyxvxwy=xzxyxvxwy", "ywxvxyzx=ywxvxyxzx"],
        _ => return None,
    };
    Some(eqs.iter().map(|e| Identity::parse(e).expect("built-in identity")).collect())
}
