//! Command-line front end.
//!
//! Reports are `key: value` lines (or one JSON object with `--json`).
//! Commands whose answer is a single value (`pkn`, `min-k`, `depth`) print
//! the bare value, and commands producing an automaton or a word print it
//! in the file format of [`crate::format`].
//!
//! Exit codes: 0 yes/success, 1 no, 2 input or contract error, 3 unknown
//! because a budget was exhausted.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use crate::automaton::Automaton;
use crate::error::{Error, Result};
use crate::extremal;
use crate::format::{parse_automaton, parse_certificate, parse_word, write_automaton, write_word};
use crate::kpt::{self, Certificate, KptVerdict, MinK, OracleVerdict};
use crate::monoid::{check_identity, kpt_identities, IdentityCheck, TransitionMonoid, DEFAULT_MONOID_BUDGET};
use crate::pt::{self, minimal_dfa, NfaCertificate};
use crate::subwords::{canonical_automaton, DEFAULT_CLASS_BUDGET};

pub const EXIT_YES: u8 = 0;
pub const EXIT_NO: u8 = 1;
pub const EXIT_ERROR: u8 = 2;
pub const EXIT_UNKNOWN: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "ptkit", version, about = "Piecewise testability of regular languages")]
struct Cli {
    /// Emit one JSON object instead of `key: value` lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sizes, determinism, completeness and depth of an automaton.
    Info { file: PathBuf },
    /// Subset construction.
    Determinize { file: PathBuf },
    /// Minimal complete DFA.
    Minimize { file: PathBuf },
    /// Is the language piecewise testable?
    IsPt { file: PathBuf },
    /// Is the language k-piecewise testable?
    IsKpt {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CLASS_BUDGET)]
        budget: usize,
    },
    /// Least k for which the language is k-piecewise testable.
    MinK {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CLASS_BUDGET)]
        budget: usize,
    },
    /// Certificate that the language is not k-piecewise testable.
    Witness {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CLASS_BUDGET)]
        budget: usize,
    },
    /// Check a certificate given as two words or as a certificate file.
    Verify {
        file: PathBuf,
        #[arg(long, required_unless_present = "certificate")]
        k: Option<usize>,
        /// Whitespace-separated letters, `-` for the empty word.
        #[arg(long, allow_hyphen_values = true, requires = "w2")]
        w1: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "w1")]
        w2: Option<String>,
        #[arg(long, conflicts_with_all = ["w1", "w2", "k"])]
        certificate: Option<PathBuf>,
    },
    /// Boolean combination of pieces of length at most k.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_CLASS_BUDGET)]
        budget: usize,
    },
    /// The ~k-canonical DFA over letters a1..aN.
    Canonical {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        letters: usize,
        #[arg(long, default_value_t = DEFAULT_CLASS_BUDGET)]
        budget: usize,
    },
    /// Depth of a partially ordered automaton.
    Depth { file: PathBuf },
    /// Transition monoid of the minimal DFA.
    Monoid {
        file: PathBuf,
        /// Check the equations of the k-PT variety (k = 1, 2 or 3).
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        check_identities: Option<u8>,
        #[arg(long, default_value_t = DEFAULT_MONOID_BUDGET)]
        budget: usize,
    },
    /// Generate extremal automata and words.
    #[command(subcommand)]
    Gen(Generate),
    /// P(k,n) = C(k+n, k) - 1.
    Pkn {
        k: u64,
        n: u64,
        /// Evaluate through Stirling cycle numbers instead.
        #[arg(long)]
        stirling: bool,
    },
}

#[derive(Subcommand, Debug)]
enum Generate {
    /// NFA A_K (the (K+1)-PT, not K-PT language of depth K).
    Ak { k: usize },
    /// Word w_K over a0..aK.
    Wk { k: usize },
    /// Word W_{K,N} over a1..aN.
    Wkn { k: usize, n: usize },
    /// Subset NFA for the words containing all of a1..aN.
    Cap { n: usize },
    /// Canonical DFA whose minimal DFA has depth P(K,N).
    Tight {
        k: usize,
        n: usize,
        #[arg(long, default_value_t = DEFAULT_CLASS_BUDGET)]
        budget: usize,
    },
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

struct Report {
    fields: Vec<(&'static str, Value)>,
    // printed verbatim instead of the fields in text mode
    text: Option<String>,
    code: u8,
}

impl Report {
    fn fields(code: u8, fields: Vec<(&'static str, Value)>) -> Self {
        Report { fields, text: None, code }
    }

    fn text(code: u8, key: &'static str, text: String) -> Self {
        Report { fields: vec![(key, Value::String(text.clone()))], text: Some(text), code }
    }

    fn value(code: u8, key: &'static str, value: Value) -> Self {
        let text = plain(&value);
        Report { fields: vec![(key, value)], text: Some(text), code }
    }

    fn render(&self, as_json: bool) -> String {
        if as_json {
            let obj: Map<String, Value> = self.fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect();
            return format!("{}\n", Value::Object(obj));
        }
        let mut out = match &self.text {
            Some(t) => t.clone(),
            None => self.fields.iter().map(|(k, v)| format!("{k}: {}\n", plain(v))).collect(),
        };
        if !out.ends_with('\n') {
            out.push('\n');
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Bool(true) => "yes".into(),
        Value::Bool(false) => "no".into(),
        other => other.to_string(),
    }
}

fn yes_no(b: bool) -> u8 {
    if b {
        EXIT_YES
    } else {
        EXIT_NO
    }
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Contract(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Error::Contract(format!("{}: {e}", path.display())))
}

fn load(path: &PathBuf) -> Result<Automaton> {
    parse_automaton(&read_input(path)?).map_err(|e| match e {
        Error::Parse { line, message } => {
            let name = if path.as_os_str() == "-" { "<stdin>".into() } else { path.display().to_string() };
            Error::Contract(format!("{name}:{line}: {message}"))
        }
        other => other,
    })
}

fn budget_report(limit: usize, reached: usize, key: &'static str) -> Report {
    Report::fields(
        EXIT_UNKNOWN,
        vec![(key, json!("unknown")), ("budget", json!(limit)), ("reached", json!(reached))],
    )
}

fn execute(command: Command) -> Result<Report> {
    Ok(match command {
        Command::Info { file } => {
            let a = load(&file)?;
            let depth = match a.depth() {
                Ok(d) => json!(d),
                Err(_) => json!("cyclic"),
            };
            Report::fields(
                EXIT_YES,
                vec![
                    ("states", json!(a.num_states())),
                    ("letters", json!(a.num_letters())),
                    ("transitions", json!(a.num_transitions())),
                    ("initial", json!(a.initial_states().len())),
                    ("accepting", json!(a.accepting_states().count())),
                    ("deterministic", json!(a.is_deterministic())),
                    ("complete", json!(a.is_complete())),
                    ("partially-ordered", json!(a.is_partially_ordered())),
                    ("depth", depth),
                ],
            )
        }
        Command::Determinize { file } => {
            Report::text(EXIT_YES, "automaton", write_automaton(&load(&file)?.determinize()))
        }
        Command::Minimize { file } => {
            Report::text(EXIT_YES, "automaton", write_automaton(&minimal_dfa(&load(&file)?)))
        }
        Command::IsPt { file } => {
            let a = load(&file)?;
            let (verdict, method) = if pt::certify_pt_nfa(&a) == NfaCertificate::Yes {
                (true, "nfa-ums")
            } else {
                (pt::is_pt_min_dfa(&minimal_dfa(&a))?, "minimal-dfa")
            };
            Report::fields(yes_no(verdict), vec![("pt", json!(verdict)), ("method", json!(method))])
        }
        Command::IsKpt { file, k, budget } => {
            let dfa = minimal_dfa(&load(&file)?);
            let (verdict, method) = kpt::decide_kpt(&dfa, k, budget)?;
            let (text, code) = match verdict {
                KptVerdict::Yes => ("yes", EXIT_YES),
                KptVerdict::No => ("no", EXIT_NO),
                KptVerdict::Unknown => ("unknown", EXIT_UNKNOWN),
            };
            Report::fields(
                code,
                vec![("k-pt", json!(text)), ("k", json!(k)), ("method", json!(method.to_string()))],
            )
        }
        Command::MinK { file, budget } => match kpt::min_k(&load(&file)?, budget)? {
            MinK::Exact(k) => Report::value(EXIT_YES, "min-k", json!(k)),
            MinK::NotPt => Report::value(EXIT_NO, "min-k", json!("not-pt")),
            MinK::Interval { lo, hi } => Report {
                fields: vec![("min-k", json!("unknown")), ("lo", json!(lo)), ("hi", json!(hi))],
                text: Some(format!("[{lo}, {hi}]")),
                code: EXIT_UNKNOWN,
            },
        },
        Command::Witness { file, k, budget } => {
            let dfa = minimal_dfa(&load(&file)?);
            match kpt::is_kpt_oracle(&dfa, k, budget)? {
                OracleVerdict::No(cert) => certificate_report(&dfa, &cert),
                OracleVerdict::Yes => Report::fields(EXIT_NO, vec![("witness", json!("none")), ("k", json!(k))]),
                OracleVerdict::Unknown { classes } => budget_report(budget, classes, "witness"),
            }
        }
        Command::Verify { file, k, w1, w2, certificate } => {
            let dfa = minimal_dfa(&load(&file)?);
            let cert = match (certificate, k, w1, w2) {
                (Some(path), _, _, _) => parse_certificate(&read_input(&path)?, &dfa)?,
                (None, Some(k), Some(w1), Some(w2)) => {
                    let w1 = parse_word(&w1, dfa.alphabet())?;
                    let w2 = parse_word(&w2, dfa.alphabet())?;
                    Certificate::from_words(&dfa, k, w1, w2)?
                }
                _ => return Err(Error::Contract("verify needs --k, --w1 and --w2, or --certificate".into())),
            };
            let ok = kpt::verify_certificate(&dfa, &cert)?;
            Report::fields(
                yes_no(ok),
                vec![
                    ("valid", json!(ok)),
                    ("k", json!(cert.k)),
                    ("state1", json!(dfa.state_name(cert.state1))),
                    ("state2", json!(dfa.state_name(cert.state2))),
                ],
            )
        }
        Command::Decompose { file, k, budget } => {
            let dfa = minimal_dfa(&load(&file)?);
            match kpt::decompose(&dfa, k, budget) {
                Ok(expr) => Report::text(EXIT_YES, "expression", expr.to_string()),
                Err(Error::BudgetExceeded { limit, reached }) => budget_report(limit, reached, "expression"),
                Err(Error::Contract(msg)) => Report::fields(EXIT_NO, vec![("expression", json!("none")), ("reason", json!(msg))]),
                Err(e) => return Err(e),
            }
        }
        Command::Canonical { k, letters, budget } => {
            if letters == 0 {
                return Err(Error::Contract("--letters must be at least 1".into()));
            }
            match canonical_automaton(&extremal::indexed_alphabet(letters), k, budget) {
                Ok(c) => Report::text(EXIT_YES, "automaton", write_automaton(&c.automaton)),
                Err(Error::BudgetExceeded { limit, reached }) => budget_report(limit, reached, "automaton"),
                Err(e) => return Err(e),
            }
        }
        Command::Depth { file } => match load(&file)?.depth() {
            Ok(d) => Report::value(EXIT_YES, "depth", json!(d)),
            Err(Error::Cyclic) => Report::value(EXIT_NO, "depth", json!("cyclic")),
            Err(e) => return Err(e),
        },
        Command::Monoid { file, check_identities, budget } => monoid_report(&load(&file)?, check_identities, budget)?,
        Command::Gen(g) => generate(g)?,
        Command::Pkn { k, n, stirling } => {
            let v = if stirling { extremal::pkn_stirling(k, n)? } else { extremal::pkn(k, n)? };
            Report::value(EXIT_YES, "pkn", json!(v))
        }
    })
}

fn certificate_report(dfa: &Automaton, cert: &Certificate) -> Report {
    Report {
        fields: vec![
            ("k", json!(cert.k)),
            ("w1", json!(write_word(&cert.w1, dfa.alphabet()))),
            ("w2", json!(write_word(&cert.w2, dfa.alphabet()))),
            ("state1", json!(dfa.state_name(cert.state1))),
            ("state2", json!(dfa.state_name(cert.state2))),
        ],
        text: Some(cert.render(dfa)),
        code: EXIT_YES,
    }
}

fn monoid_report(a: &Automaton, check: Option<u8>, budget: usize) -> Result<Report> {
    let dfa = minimal_dfa(a);
    let monoid = match TransitionMonoid::new(&dfa, budget) {
        Ok(m) => m,
        Err(Error::BudgetExceeded { limit, reached }) => return Ok(budget_report(limit, reached, "elements")),
        Err(e) => return Err(e),
    };
    let mut fields = vec![("elements", json!(monoid.len())), ("aperiodic", json!(monoid.is_aperiodic()))];
    let mut code = EXIT_YES;
    if let Some(k) = check {
        let mut results = Map::new();
        for identity in kpt_identities(k as usize).expect("k in 1..=3") {
            let verdict = match check_identity(&monoid, &identity, budget) {
                Ok(IdentityCheck::Holds) => "holds".to_string(),
                Ok(IdentityCheck::Counterexample(assign)) => {
                    code = code.max(EXIT_NO);
                    let parts: Vec<String> = assign
                        .iter()
                        .map(|&(v, x)| {
                            let w = monoid.representative(x);
                            format!("{v}={}", if w.is_empty() { "1".into() } else { dfa.word_names(w).join(".") })
                        })
                        .collect();
                    format!("fails at {}", parts.join(", "))
                }
                Err(Error::BudgetExceeded { .. }) => {
                    code = EXIT_UNKNOWN;
                    "unknown".to_string()
                }
                Err(e) => return Err(e),
            };
            results.insert(identity.to_string(), json!(verdict));
        }
        let text: Vec<String> = results.iter().map(|(k, v)| format!("{k} {}", plain(v))).collect();
        fields.push(("identities", Value::Object(results)));
        let mut report = Report::fields(code, fields);
        let mut body: String = report.fields[..2].iter().map(|(k, v)| format!("{k}: {}\n", plain(v))).collect();
        for line in text {
            body.push_str(&format!("identity: {line}\n"));
        }
        report.text = Some(body);
        return Ok(report);
    }
    Ok(Report::fields(code, fields))
}

fn generate(g: Generate) -> Result<Report> {
    Ok(match g {
        Generate::Ak { k } => Report::text(EXIT_YES, "automaton", write_automaton(&extremal::gen_ak(k))),
        Generate::Wk { k } => {
            Report::text(EXIT_YES, "word", write_word(&extremal::gen_wk(k), &extremal::ak_alphabet(k)))
        }
        Generate::Wkn { k, n } => {
            if k == 0 || n == 0 {
                return Err(Error::Contract("W_{k,n} needs k, n ≥ 1".into()));
            }
            Report::text(EXIT_YES, "word", write_word(&extremal::gen_wkn(k, n), &extremal::indexed_alphabet(n)))
        }
        Generate::Cap { n } => Report::text(
            EXIT_YES,
            "automaton",
            write_automaton(&extremal::gen_intersection_nfa(&extremal::indexed_alphabet(n))?),
        ),
        Generate::Tight { k, n, budget } => match extremal::gen_tight_depth_dfa(k, n, budget) {
            Ok(c) => Report::text(EXIT_YES, "automaton", write_automaton(&c.automaton)),
            Err(Error::BudgetExceeded { limit, reached }) => budget_report(limit, reached, "automaton"),
            Err(e) => return Err(e),
        },
    })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: text, code }
            } else {
                Outcome { stdout: text, stderr: String::new(), code }
            };
        }
    };
    match execute(cli.command) {
        Ok(report) => Outcome { stdout: report.render(cli.json), stderr: String::new(), code: report.code },
        Err(e) => Outcome { stdout: String::new(), stderr: format!("error: {e}\n"), code: EXIT_ERROR },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> Outcome {
        run(std::iter::once("ptkit").chain(args.iter().copied()))
    }

    #[test]
    fn pkn_prints_bare_value() {
        assert_eq!(call(&["pkn", "6", "6"]), Outcome { stdout: "923\n".into(), stderr: String::new(), code: 0 });
        assert_eq!(call(&["pkn", "3", "3", "--stirling"]).stdout, "19\n");
        assert_eq!(call(&["--json", "pkn", "2", "2"]).stdout, "{\"pkn\":5}\n");
        assert_eq!(call(&["pkn", "0", "2"]).code, EXIT_ERROR);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(call(&["frobnicate"]).code, EXIT_ERROR);
        assert_eq!(call(&["is-kpt", "missing-file.aut", "--k", "1"]).code, EXIT_ERROR);
        assert_eq!(call(&["--help"]).code, EXIT_YES);
    }

    #[test]
    fn generators() {
        assert_eq!(call(&["gen", "wk", "1"]).stdout, "a0 a1 a0\n");
        assert_eq!(call(&["gen", "wkn", "2", "2"]).stdout, "a1 a1 a2 a1 a2\n");
        let ak = call(&["gen", "ak", "1"]).stdout;
        assert_eq!(ak, "alphabet: a0 a1\nstates: 0 1\ninitial: 0 1\naccepting: 0\n1 a0 1\n1 a1 0\n");
        assert_eq!(call(&["gen", "cap", "2"]).stdout.lines().nth(1), Some("states: {} {a1} {a2} {a1,a2}"));
    }
}
