//! Piecewise testability of regular languages.
//!
//! The crate decides whether the language of a finite automaton is
//! piecewise testable (a boolean combination of "contains `v` as a
//! subsequence" languages) and, for a given `k`, whether pieces of length
//! at most `k` suffice. It finds the least such `k`, emits and checks
//! certificates against k-piecewise testability, rewrites k-PT languages
//! as boolean combinations of pieces, and generates the extremal automata
//! and words that show the gap between `k` and the depth of minimal DFAs.
//!
//! ```
//! use ptkit::{extremal, kpt, subwords};
//!
//! let a2 = extremal::gen_ak(2);
//! assert_eq!(kpt::min_k(&a2, subwords::DEFAULT_CLASS_BUDGET).unwrap(), kpt::MinK::Exact(3));
//! assert_eq!(extremal::pkn(6, 6).unwrap(), 923);
//! ```

pub mod automaton;
pub mod cli;
pub mod error;
pub mod extremal;
pub mod format;
pub mod kpt;
pub mod monoid;
pub mod pt;
pub mod subwords;

pub use automaton::{Automaton, Letter, StateId};
pub use error::{Error, Result};
pub use kpt::{Certificate, MinK, OracleVerdict, PieceExpression};
pub use subwords::SubwordSet;
