use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown letter `{0}`")]
    UnknownLetter(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate {kind} `{name}`")]
    Duplicate { kind: &'static str, name: String },
    #[error("automaton is not deterministic")]
    NotDeterministic,
    #[error("automaton is not complete")]
    NotComplete,
    #[error("automaton is not partially ordered")]
    NotPartiallyOrdered,
    #[error("automaton has a nontrivial cycle; depth is only defined for partially ordered automata")]
    Cyclic,
    #[error("budget exceeded: limit {limit}, reached {reached}")]
    BudgetExceeded { limit: usize, reached: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
    #[error("{0}")]
    Contract(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
