//! Line-oriented machine text format.
//!
//! ```text
//! # comment
//! speed <name> <rational>      declare a meta-signal
//! rule <name>+ -> <name>*      collision rule (at least two inputs)
//! blank <name>+                declared blank crossing (outputs = inputs)
//! init <rational> <name>       initial placement
//! ```
//!
//! Rationals are `[-]p` or `[-]p/q` with `q > 0`. Emission is canonical:
//! `speed` lines sorted by (speed, name), rule lines with inputs and
//! outputs sorted by speed, `rule` lines before `blank` lines, `init`
//! lines sorted by position, all fractions reduced. Parsing the canonical
//! emission reproduces the machine exactly.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::config::Configuration;
use crate::machine::{
    is_valid_identifier, MetaSignal, RuleSpec, SignalId, SignalMachine,
};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnknownDirective(String),
    MissingField(&'static str),
    BadRational(String),
    BadIdentifier(String),
    MissingArrow,
    ExtraArrow,
    TooFewRuleInputs,
    DuplicateNameInSet(String),
    UndeclaredSignal(String),
    DuplicateInitPosition(String),
    UnexpectedDirective(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnknownDirective(d) => write!(f, "unknown directive `{d}`"),
            ParseErrorKind::MissingField(what) => write!(f, "missing {what}"),
            ParseErrorKind::BadRational(s) => write!(f, "invalid rational `{s}`"),
            ParseErrorKind::BadIdentifier(s) => write!(f, "invalid identifier `{s}`"),
            ParseErrorKind::MissingArrow => write!(f, "rule line has no `->`"),
            ParseErrorKind::ExtraArrow => write!(f, "rule line has more than one `->`"),
            ParseErrorKind::TooFewRuleInputs => {
                write!(f, "rule needs at least two input meta-signals")
            }
            ParseErrorKind::DuplicateNameInSet(n) => {
                write!(f, "duplicate meta-signal `{n}` in rule set")
            }
            ParseErrorKind::UndeclaredSignal(n) => {
                write!(f, "undeclared meta-signal `{n}`")
            }
            ParseErrorKind::DuplicateInitPosition(p) => {
                write!(f, "duplicate init position {p}")
            }
            ParseErrorKind::UnexpectedDirective(d) => {
                write!(f, "directive `{d}` not allowed here")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

/// Parses a machine text, returning the machine and, when `init` lines
/// are present, the initial configuration.
pub fn parse_machine(
    text: &str,
) -> Result<(SignalMachine, Option<Configuration>), ParseError> {
    let lines = logical_lines(text);

    // First pass: declared meta-signal names, so rule and init lines can
    // be checked in order regardless of where the speed lines sit.
    let mut signals: Vec<MetaSignal> = Vec::new();
    let mut declared: HashMap<String, ()> = HashMap::new();
    for (line_no, tokens) in &lines {
        if tokens[0] == "speed" {
            if tokens.len() != 3 {
                return Err(err(*line_no, ParseErrorKind::MissingField("`speed <name> <rational>`")));
            }
            let name = tokens[1];
            if !is_valid_identifier(name) {
                return Err(err(*line_no, ParseErrorKind::BadIdentifier(name.to_string())));
            }
            let speed = parse_rational(tokens[2])
                .map_err(|_| err(*line_no, ParseErrorKind::BadRational(tokens[2].to_string())))?;
            signals.push(MetaSignal::new(name, speed));
            declared.insert(name.to_string(), ());
        }
    }

    let mut rules: Vec<RuleSpec> = Vec::new();
    let mut inits: Vec<(usize, Rational, String)> = Vec::new();
    for (line_no, tokens) in &lines {
        match tokens[0] {
            "speed" => {}
            "rule" => {
                let body = &tokens[1..];
                let arrows = body.iter().filter(|t| **t == "->").count();
                if arrows == 0 {
                    return Err(err(*line_no, ParseErrorKind::MissingArrow));
                }
                if arrows > 1 {
                    return Err(err(*line_no, ParseErrorKind::ExtraArrow));
                }
                let split = body.iter().position(|t| *t == "->").unwrap();
                let inputs = check_set(*line_no, &body[..split], &declared)?;
                let outputs = check_set(*line_no, &body[split + 1..], &declared)?;
                if inputs.len() < 2 {
                    return Err(err(*line_no, ParseErrorKind::TooFewRuleInputs));
                }
                rules.push(RuleSpec::new(inputs, outputs));
            }
            "blank" => {
                let inputs = check_set(*line_no, &tokens[1..], &declared)?;
                if inputs.len() < 2 {
                    return Err(err(*line_no, ParseErrorKind::TooFewRuleInputs));
                }
                rules.push(RuleSpec::blank(inputs));
            }
            "init" => {
                if tokens.len() != 3 {
                    return Err(err(*line_no, ParseErrorKind::MissingField("`init <rational> <name>`")));
                }
                let position = parse_rational(tokens[1])
                    .map_err(|_| err(*line_no, ParseErrorKind::BadRational(tokens[1].to_string())))?;
                let name = tokens[2].to_string();
                if !declared.contains_key(&name) {
                    return Err(err(*line_no, ParseErrorKind::UndeclaredSignal(name)));
                }
                inits.push((*line_no, position, name));
            }
            other => {
                return Err(err(*line_no, ParseErrorKind::UnknownDirective(other.to_string())));
            }
        }
    }

    let machine = SignalMachine::new(signals, rules).map_err(|e| {
        // Construction errors not caught above can only be duplicate
        // names inside one rule set, already checked per line; map any
        // residue onto line 0 to stay total.
        err(0, ParseErrorKind::UnknownDirective(e.to_string()))
    })?;

    let config = if inits.is_empty() {
        None
    } else {
        let mut config = Configuration::new();
        for (line_no, position, name) in inits {
            let id = machine.id_by_name(&name).unwrap();
            config.place(position.clone(), id).map_err(|_| {
                err(
                    line_no,
                    ParseErrorKind::DuplicateInitPosition(format_rational(&position)),
                )
            })?;
        }
        Some(config)
    };

    Ok((machine, config))
}

/// Parses a text of `init` lines against an existing machine.
pub fn parse_init(machine: &SignalMachine, text: &str) -> Result<Configuration, ParseError> {
    let mut config = Configuration::new();
    for (line_no, tokens) in logical_lines(text) {
        if tokens[0] != "init" {
            return Err(err(
                line_no,
                ParseErrorKind::UnexpectedDirective(tokens[0].to_string()),
            ));
        }
        if tokens.len() != 3 {
            return Err(err(line_no, ParseErrorKind::MissingField("`init <rational> <name>`")));
        }
        let position = parse_rational(tokens[1])
            .map_err(|_| err(line_no, ParseErrorKind::BadRational(tokens[1].to_string())))?;
        let id = machine
            .id_by_name(tokens[2])
            .ok_or_else(|| err(line_no, ParseErrorKind::UndeclaredSignal(tokens[2].to_string())))?;
        config.place(position.clone(), id).map_err(|_| {
            err(
                line_no,
                ParseErrorKind::DuplicateInitPosition(format_rational(&position)),
            )
        })?;
    }
    Ok(config)
}

/// Emits the canonical text form of a machine and optional configuration.
pub fn emit_machine(machine: &SignalMachine, config: Option<&Configuration>) -> String {
    let mut out = String::new();
    for s in machine.signals() {
        out.push_str(&format!("speed {} {}\n", s.name, format_rational(&s.speed)));
    }
    let names = |ids: &[SignalId]| -> String {
        ids.iter()
            .map(|&id| machine.name(id))
            .collect::<Vec<_>>()
            .join(" ")
    };
    for rule in machine.rules().iter().filter(|r| !r.blank) {
        let lhs = names(&rule.inputs);
        if rule.outputs.is_empty() {
            out.push_str(&format!("rule {lhs} ->\n"));
        } else {
            out.push_str(&format!("rule {lhs} -> {}\n", names(&rule.outputs)));
        }
    }
    for rule in machine.rules().iter().filter(|r| r.blank) {
        out.push_str(&format!("blank {}\n", names(&rule.inputs)));
    }
    if let Some(config) = config {
        for (position, signal) in config.iter() {
            out.push_str(&format!(
                "init {} {}\n",
                format_rational(position),
                machine.name(signal)
            ));
        }
    }
    out
}

fn check_set(
    line_no: usize,
    tokens: &[&str],
    declared: &HashMap<String, ()>,
) -> Result<Vec<String>, ParseError> {
    let mut names = Vec::with_capacity(tokens.len());
    for t in tokens {
        if !is_valid_identifier(t) {
            return Err(err(line_no, ParseErrorKind::BadIdentifier(t.to_string())));
        }
        if !declared.contains_key(*t) {
            return Err(err(line_no, ParseErrorKind::UndeclaredSignal(t.to_string())));
        }
        if names.iter().any(|n: &String| n == t) {
            return Err(err(line_no, ParseErrorKind::DuplicateNameInSet(t.to_string())));
        }
        names.push(t.to_string());
    }
    Ok(names)
}

/// Splits input into non-empty, comment-stripped token lines, keeping
/// 1-based line numbers.
fn logical_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if !tokens.is_empty() {
            lines.push((i + 1, tokens));
        }
    }
    lines
}
