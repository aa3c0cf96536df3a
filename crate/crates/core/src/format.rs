//! Text formats: automaton files, word lines and certificates.
//!
//! An automaton file has four header lines with whitespace-separated
//! tokens followed by one transition `src letter dst` per line:
//!
//! ```text
//! # A_1
//! alphabet: a0 a1
//! states: 0 1
//! initial: 0 1
//! accepting: 0
//! 1 a0 1
//! 1 a1 0
//! ```
//!
//! `#` starts a comment and blank lines are ignored. `alphabet:` and
//! `states:` are required; `initial:` and `accepting:` default to empty.
//! Duplicate transitions collapse.

use crate::automaton::{Automaton, Letter};
use crate::error::{Error, Result};
use crate::kpt::Certificate;
use crate::subwords::render_word;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut alphabet: Option<(usize, Vec<String>)> = None;
    let mut states: Option<(usize, Vec<String>)> = None;
    let mut initial: Option<(usize, Vec<String>)> = None;
    let mut accepting: Option<(usize, Vec<String>)> = None;
    let mut transitions: Vec<(usize, [String; 3])> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, rest)) = line.split_once(':') {
            let slot = match key.trim() {
                "alphabet" => &mut alphabet,
                "states" => &mut states,
                "initial" => &mut initial,
                "accepting" => &mut accepting,
                other => return Err(parse_error(line_no, format!("unknown header `{other}`"))),
            };
            if slot.is_some() {
                return Err(parse_error(line_no, format!("repeated header `{}`", key.trim())));
            }
            *slot = Some((line_no, rest.split_whitespace().map(str::to_string).collect()));
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.as_slice() {
            [p, a, q] => transitions.push((line_no, [p.to_string(), a.to_string(), q.to_string()])),
            _ => {
                return Err(parse_error(
                    line_no,
                    format!("expected `src letter dst`, found {} tokens", tokens.len()),
                ))
            }
        }
    }

    let (alpha_line, alphabet) = alphabet.ok_or_else(|| parse_error(0, "missing `alphabet:` header"))?;
    let (states_line, states) = states.ok_or_else(|| parse_error(0, "missing `states:` header"))?;
    let mut automaton = Automaton::new(alphabet, states).map_err(|e| {
        let line = match &e {
            Error::Duplicate { kind: "letter", .. } => alpha_line,
            _ => states_line,
        };
        parse_error(line, e.to_string())
    })?;

    let state = |a: &Automaton, line: usize, name: &str| {
        a.state_index(name).map_err(|_| parse_error(line, format!("undeclared state `{name}`")))
    };
    if let Some((line, names)) = initial {
        for name in names {
            let q = state(&automaton, line, &name)?;
            automaton.set_initial(q);
        }
    }
    if let Some((line, names)) = accepting {
        for name in names {
            let q = state(&automaton, line, &name)?;
            automaton.set_accepting(q, true);
        }
    }
    for (line, [p, a, q]) in transitions {
        let p = state(&automaton, line, &p)?;
        let q = state(&automaton, line, &q)?;
        let a = automaton
            .letter_index(&a)
            .map_err(|_| parse_error(line, format!("undeclared letter `{a}`")))?;
        automaton.add_transition(p, a, q);
    }
    Ok(automaton)
}

/// Canonical serialization: headers in fixed order, states in index order,
/// transitions sorted by source, letter and target.
pub fn write_automaton(automaton: &Automaton) -> String {
    let mut out = String::new();
    let join = |xs: Vec<&str>| xs.join(" ");
    let line = |key: &str, body: String| {
        if body.is_empty() {
            format!("{key}:\n")
        } else {
            format!("{key}: {body}\n")
        }
    };
    out.push_str(&line("alphabet", join(automaton.alphabet().iter().map(String::as_str).collect())));
    out.push_str(&line("states", join(automaton.state_names().iter().map(String::as_str).collect())));
    out.push_str(&line(
        "initial",
        join(automaton.initial_states().iter().map(|&q| automaton.state_name(q)).collect()),
    ));
    out.push_str(&line(
        "accepting",
        join(automaton.accepting_states().map(|q| automaton.state_name(q)).collect()),
    ));
    for (p, a, q) in automaton.transitions() {
        out.push_str(&format!(
            "{} {} {}\n",
            automaton.state_name(p),
            automaton.letter_name(a),
            automaton.state_name(q)
        ));
    }
    out
}

/// A whitespace-separated letter sequence; `-` (or a blank line) is ε.
pub fn parse_word(line: &str, alphabet: &[String]) -> Result<Vec<Letter>> {
    let line = line.trim();
    if line.is_empty() || line == "-" {
        return Ok(Vec::new());
    }
    line.split_whitespace()
        .map(|tok| {
            alphabet
                .iter()
                .position(|a| a == tok)
                .ok_or_else(|| Error::UnknownLetter(tok.to_string()))
        })
        .collect()
}

pub fn write_word(word: &[Letter], alphabet: &[String]) -> String {
    render_word(alphabet, word)
}

/// One word per non-comment line.
pub fn parse_words(text: &str, alphabet: &[String]) -> Result<Vec<Vec<Letter>>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim_start().starts_with('#'))
        .map(|(i, l)| parse_word(l, alphabet).map_err(|e| parse_error(i + 1, e.to_string())))
        .collect()
}

/// Reads the `k:`, `w1:` and `w2:` lines of a certificate and recomputes
/// the states reached in `dfa`; recorded `state1:`/`state2:` lines, when
/// present, must name those states.
pub fn parse_certificate(text: &str, dfa: &Automaton) -> Result<Certificate> {
    let mut k = None;
    let mut w1 = None;
    let mut w2 = None;
    let mut recorded = [None, None];
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| parse_error(line_no, "expected `key: value`"))?;
        let word = || parse_word(value, dfa.alphabet()).map_err(|e| parse_error(line_no, e.to_string()));
        match key.trim() {
            "k" => k = Some(value.trim().parse::<usize>().map_err(|e| parse_error(line_no, e.to_string()))?),
            "w1" => w1 = Some(word()?),
            "w2" => w2 = Some(word()?),
            "state1" => recorded[0] = Some((line_no, value.trim().to_string())),
            "state2" => recorded[1] = Some((line_no, value.trim().to_string())),
            other => return Err(parse_error(line_no, format!("unknown key `{other}`"))),
        }
    }
    let k = k.ok_or_else(|| parse_error(0, "missing `k:`"))?;
    let w1 = w1.ok_or_else(|| parse_error(0, "missing `w1:`"))?;
    let w2 = w2.ok_or_else(|| parse_error(0, "missing `w2:`"))?;
    let mut cert = Certificate::from_words(dfa, k, w1, w2)?;
    for (slot, rec) in recorded.into_iter().enumerate() {
        if let Some((line, name)) = rec {
            let q = dfa.state_index(&name).map_err(|e| parse_error(line, e.to_string()))?;
            if slot == 0 {
                cert.state1 = q;
            } else {
                cert.state2 = q;
            }
        }
    }
    Ok(cert)
}
