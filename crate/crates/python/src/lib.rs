//! Python bindings for `ptkit`.
//!
//! Words are lists of letter names. Budget exhaustion raises
//! `ptkit.BudgetExceeded`; every other library error raises `ValueError`.

use std::collections::HashMap;

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use ::ptkit as core;
use core::kpt::{self, KptVerdict, MinK, OracleVerdict};
use core::subwords::DEFAULT_CLASS_BUDGET;

create_exception!(ptkit, BudgetExceeded, PyRuntimeError);

fn to_py(e: core::Error) -> PyErr {
    match e {
        core::Error::BudgetExceeded { .. } => BudgetExceeded::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

/// Interns letter names in order of first appearance.
fn intern(words: &[&[String]]) -> Vec<Vec<usize>> {
    let mut ids: HashMap<&str, usize> = HashMap::new();
    words
        .iter()
        .map(|w| {
            w.iter()
                .map(|a| {
                    let next = ids.len();
                    *ids.entry(a.as_str()).or_insert(next)
                })
                .collect()
        })
        .collect()
}

#[pyclass(name = "Automaton", module = "ptkit", skip_from_py_object)]
#[derive(Clone)]
struct PyAutomaton {
    inner: core::Automaton,
}

impl PyAutomaton {
    fn word(&self, word: Vec<String>) -> PyResult<Vec<usize>> {
        self.inner.parse_word(&word).map_err(to_py)
    }

    fn names(&self, word: &[usize]) -> Vec<String> {
        self.inner.word_names(word).into_iter().map(str::to_string).collect()
    }

    fn min_dfa(&self) -> core::Automaton {
        core::pt::minimal_dfa(&self.inner)
    }
}

#[pymethods]
impl PyAutomaton {
    /// Builds an automaton from letter names, state names, `(src, letter,
    /// dst)` triples, initial and accepting state names.
    #[new]
    #[pyo3(signature = (alphabet, states, transitions, initial, accepting))]
    fn new(
        alphabet: Vec<String>,
        states: Vec<String>,
        transitions: Vec<(String, String, String)>,
        initial: Vec<String>,
        accepting: Vec<String>,
    ) -> PyResult<Self> {
        let mut a = core::Automaton::new(alphabet, states).map_err(to_py)?;
        for (p, x, q) in transitions {
            let p = a.state_index(&p).map_err(to_py)?;
            let x = a.letter_index(&x).map_err(to_py)?;
            let q = a.state_index(&q).map_err(to_py)?;
            a.add_transition(p, x, q);
        }
        for q in initial {
            let q = a.state_index(&q).map_err(to_py)?;
            a.set_initial(q);
        }
        for q in accepting {
            let q = a.state_index(&q).map_err(to_py)?;
            a.set_accepting(q, true);
        }
        Ok(PyAutomaton { inner: a })
    }

    /// Parses the text file format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        core::format::parse_automaton(text).map(|inner| PyAutomaton { inner }).map_err(to_py)
    }

    fn to_str(&self) -> String {
        core::format::write_automaton(&self.inner)
    }

    fn __str__(&self) -> String {
        self.to_str()
    }

    fn __repr__(&self) -> String {
        format!("Automaton(states={}, letters={})", self.inner.num_states(), self.inner.num_letters())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    #[getter]
    fn alphabet(&self) -> Vec<String> {
        self.inner.alphabet().to_vec()
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.inner.state_names().to_vec()
    }

    #[getter]
    fn num_states(&self) -> usize {
        self.inner.num_states()
    }

    fn is_deterministic(&self) -> bool {
        self.inner.is_deterministic()
    }

    fn is_complete(&self) -> bool {
        self.inner.is_complete()
    }

    /// Names of the states reached by `word` from the initial states.
    fn run(&self, word: Vec<String>) -> PyResult<Vec<String>> {
        let w = self.word(word)?;
        let reached = self.inner.run(&w).map_err(to_py)?;
        Ok(reached.into_iter().map(|q| self.inner.state_name(q).to_string()).collect())
    }

    fn accepts(&self, word: Vec<String>) -> PyResult<bool> {
        let w = self.word(word)?;
        self.inner.accepts(&w).map_err(to_py)
    }

    fn determinize(&self) -> Self {
        PyAutomaton { inner: self.inner.determinize() }
    }

    /// Minimal complete DFA of the language.
    fn minimize(&self) -> Self {
        PyAutomaton { inner: self.min_dfa() }
    }

    fn complete_with_sink(&self) -> Self {
        PyAutomaton { inner: self.inner.complete_with_sink() }
    }

    fn is_partially_ordered(&self) -> bool {
        self.inner.is_partially_ordered()
    }

    /// Length of a longest simple path; raises ValueError when cyclic.
    fn depth(&self) -> PyResult<usize> {
        self.inner.depth().map_err(to_py)
    }

    fn satisfies_ums(&self) -> PyResult<bool> {
        core::pt::satisfies_ums(&self.inner).map_err(to_py)
    }

    fn is_pt(&self) -> bool {
        core::pt::is_pt(&self.inner)
    }

    /// `True`, `False`, or `None` when the budget ran out.
    #[pyo3(signature = (k, budget = DEFAULT_CLASS_BUDGET))]
    fn is_kpt(&self, k: usize, budget: usize) -> PyResult<Option<bool>> {
        let (verdict, _) = kpt::decide_kpt(&self.min_dfa(), k, budget).map_err(to_py)?;
        Ok(match verdict {
            KptVerdict::Yes => Some(true),
            KptVerdict::No => Some(false),
            KptVerdict::Unknown => None,
        })
    }

    /// `(tag, lo, hi)` with tag `exact` (lo == hi), `interval` or `not-pt`
    /// (no bounds).
    #[pyo3(signature = (budget = DEFAULT_CLASS_BUDGET))]
    fn min_k(&self, budget: usize) -> PyResult<(String, Option<usize>, Option<usize>)> {
        Ok(match kpt::min_k(&self.inner, budget).map_err(to_py)? {
            MinK::Exact(k) => ("exact".into(), Some(k), Some(k)),
            MinK::Interval { lo, hi } => ("interval".into(), Some(lo), Some(hi)),
            MinK::NotPt => ("not-pt".into(), None, None),
        })
    }

    /// Two ~k-equivalent words reaching different states of the minimal
    /// DFA, or `None` when the language is k-PT.
    #[pyo3(signature = (k, budget = DEFAULT_CLASS_BUDGET))]
    fn witness(&self, k: usize, budget: usize) -> PyResult<Option<(Vec<String>, Vec<String>)>> {
        let dfa = self.min_dfa();
        match kpt::is_kpt_oracle(&dfa, k, budget).map_err(to_py)? {
            OracleVerdict::Yes => Ok(None),
            OracleVerdict::No(c) => Ok(Some((self.names(&c.w1), self.names(&c.w2)))),
            OracleVerdict::Unknown { classes } => {
                Err(BudgetExceeded::new_err(format!("{classes} classes exceed budget {budget}")))
            }
        }
    }

    /// Checks that `w1 ~k w2` and that they reach different states.
    fn verify(&self, k: usize, w1: Vec<String>, w2: Vec<String>) -> PyResult<bool> {
        let dfa = self.min_dfa();
        let (w1, w2) = (self.word(w1)?, self.word(w2)?);
        let cert = kpt::Certificate::from_words(&dfa, k, w1, w2).map_err(to_py)?;
        kpt::verify_certificate(&dfa, &cert).map_err(to_py)
    }

    /// Boolean combination of pieces, rendered as text.
    #[pyo3(signature = (k, budget = DEFAULT_CLASS_BUDGET))]
    fn decompose(&self, k: usize, budget: usize) -> PyResult<String> {
        kpt::decompose_automaton(&self.inner, k, budget).map(|e| e.to_string()).map_err(to_py)
    }
}

#[pyfunction]
fn gen_ak(k: usize) -> PyAutomaton {
    PyAutomaton { inner: core::extremal::gen_ak(k) }
}

#[pyfunction]
fn gen_wk(k: usize) -> Vec<String> {
    let sigma = core::extremal::ak_alphabet(k);
    core::extremal::gen_wk(k).into_iter().map(|a| sigma[a].clone()).collect()
}

#[pyfunction]
fn gen_wkn(k: usize, n: usize) -> PyResult<Vec<String>> {
    if k == 0 || n == 0 {
        return Err(PyValueError::new_err("k and n must be positive"));
    }
    let sigma = core::extremal::indexed_alphabet(n);
    Ok(core::extremal::gen_wkn(k, n).into_iter().map(|a| sigma[a].clone()).collect())
}

#[pyfunction]
fn gen_intersection_nfa(alphabet: Vec<String>) -> PyResult<PyAutomaton> {
    core::extremal::gen_intersection_nfa(&alphabet).map(|inner| PyAutomaton { inner }).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (k, n, budget = DEFAULT_CLASS_BUDGET))]
fn canonical_automaton(k: usize, n: usize, budget: usize) -> PyResult<PyAutomaton> {
    let sigma = core::extremal::indexed_alphabet(n);
    core::subwords::canonical_automaton(&sigma, k, budget)
        .map(|c| PyAutomaton { inner: c.automaton })
        .map_err(to_py)
}

#[pyfunction]
fn pkn(k: u64, n: u64) -> PyResult<u64> {
    core::extremal::pkn(k, n).map_err(to_py)
}

#[pyfunction]
fn pkn_stirling(k: u64, n: u64) -> PyResult<u64> {
    core::extremal::pkn_stirling(k, n).map_err(to_py)
}

/// Is `v` a (scattered) subword of `w`?
#[pyfunction]
fn embeds(v: Vec<String>, w: Vec<String>) -> bool {
    let ws = intern(&[&v, &w]);
    core::subwords::embeds(&ws[0], &ws[1])
}

#[pyfunction]
fn k_equivalent(w1: Vec<String>, w2: Vec<String>, k: usize) -> bool {
    let ws = intern(&[&w1, &w2]);
    core::subwords::k_equivalent(&ws[0], &ws[1], k)
}

/// Subwords of `word` of length at most `k` over `alphabet`, in shortlex
/// order.
#[pyfunction]
fn subwords(word: Vec<String>, alphabet: Vec<String>, k: usize) -> PyResult<Vec<Vec<String>>> {
    let index: HashMap<&str, usize> = alphabet.iter().enumerate().map(|(i, a)| (a.as_str(), i)).collect();
    let w = word
        .iter()
        .map(|a| index.get(a.as_str()).copied().ok_or_else(|| PyValueError::new_err(format!("unknown letter `{a}`"))))
        .collect::<PyResult<Vec<_>>>()?;
    if core::subwords::universe_size(alphabet.len(), k).is_none() {
        return Err(PyValueError::new_err("subword universe too large"));
    }
    let set = core::subwords::subwords_up_to_k(&w, alphabet.len(), k);
    Ok(set.words().into_iter().map(|u| u.into_iter().map(|a| alphabet[a].clone()).collect()).collect())
}

#[pymodule]
fn ptkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyAutomaton>()?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_function(wrap_pyfunction!(gen_ak, m)?)?;
    m.add_function(wrap_pyfunction!(gen_wk, m)?)?;
    m.add_function(wrap_pyfunction!(gen_wkn, m)?)?;
    m.add_function(wrap_pyfunction!(gen_intersection_nfa, m)?)?;
    m.add_function(wrap_pyfunction!(canonical_automaton, m)?)?;
    m.add_function(wrap_pyfunction!(pkn, m)?)?;
    m.add_function(wrap_pyfunction!(pkn_stirling, m)?)?;
    m.add_function(wrap_pyfunction!(embeds, m)?)?;
    m.add_function(wrap_pyfunction!(k_equivalent, m)?)?;
    m.add_function(wrap_pyfunction!(subwords, m)?)?;
    Ok(())
}
