//! Signal machine model: meta-signals, collision rules, validation.
//!
//! A machine is a finite list of meta-signals (name + exact rational
//! speed) and a set of collision rules. A rule rewrites the set of
//! meta-signals meeting at a point (at least two, pairwise distinct
//! speeds) into a set emitted from that point (possibly empty). Meetings
//! with no declared rule default to a blank crossing: every signal
//! continues unaffected.
//!
//! Blank rules may also be declared explicitly, mirroring the collision
//! tables of the reference constructions. Declared-blank rules take part
//! in resolution like any other rule but are excluded from the non-blank
//! rule count reported by [`SignalMachine::stats`].

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::rational::{format_rational, Rational};

/// Index of a meta-signal within its machine.
///
/// Meta-signals are stored sorted by (speed, name), so the numeric order
/// of ids is also the canonical (speed, name) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignalId(pub usize);

/// A named signal kind with an exact rational speed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetaSignal {
    pub name: String,
    pub speed: Rational,
}

impl MetaSignal {
    pub fn new(name: impl Into<String>, speed: Rational) -> Self {
        MetaSignal {
            name: name.into(),
            speed,
        }
    }
}

/// A collision rule over resolved signal ids.
///
/// `inputs` and `outputs` are kept sorted in id order (i.e. by speed).
/// `blank` marks rules declared as blank crossings; such rules always
/// satisfy `outputs == inputs` by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionRule {
    pub inputs: Vec<SignalId>,
    pub outputs: Vec<SignalId>,
    pub blank: bool,
}

impl CollisionRule {
    /// True when the rule rewrites its inputs to themselves, i.e. the
    /// signals cross unaffected. Holds for every declared-blank rule and
    /// may also hold for a rule declared with explicit outputs.
    pub fn is_crossing(&self) -> bool {
        self.inputs == self.outputs
    }
}

/// A rule given by meta-signal names, before resolution against a machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSpec {
    pub inputs: Vec<String>,
    pub outputs: Vec<String>,
    pub blank: bool,
}

impl RuleSpec {
    pub fn new<I, O, S, T>(inputs: I, outputs: O) -> Self
    where
        I: IntoIterator<Item = S>,
        O: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        RuleSpec {
            inputs: inputs.into_iter().map(Into::into).collect(),
            outputs: outputs.into_iter().map(Into::into).collect(),
            blank: false,
        }
    }

    /// A declared blank crossing; the outputs are implied by the inputs.
    pub fn blank<I, S>(inputs: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let inputs: Vec<String> = inputs.into_iter().map(Into::into).collect();
        RuleSpec {
            outputs: inputs.clone(),
            inputs,
            blank: true,
        }
    }
}

/// Errors raised while assembling a machine from parts.
///
/// These cover conditions the resolved representation cannot express;
/// everything representable is reported by [`SignalMachine::validate`]
/// instead.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("meta-signal name `{0}` is not a valid identifier")]
    InvalidName(String),
    #[error("rule references undeclared meta-signal `{0}`")]
    UnknownSignal(String),
    #[error("duplicate meta-signal `{0}` in rule input set")]
    DuplicateRuleInput(String),
    #[error("duplicate meta-signal `{0}` in rule output set")]
    DuplicateRuleOutput(String),
    #[error("rule input set {0} has fewer than two meta-signals")]
    TooFewInputs(String),
}

/// A violated machine invariant, reported as data by the validator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateSignalName { name: String },
    NonDistinctInputSpeeds { rule: String },
    NonDistinctOutputSpeeds { rule: String },
    DuplicateRuleInputSet { inputs: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateSignalName { name } => {
                write!(f, "duplicate meta-signal name `{name}`")
            }
            Violation::NonDistinctInputSpeeds { rule } => {
                write!(f, "non-distinct input speeds in rule {rule}")
            }
            Violation::NonDistinctOutputSpeeds { rule } => {
                write!(f, "non-distinct output speeds in rule {rule}")
            }
            Violation::DuplicateRuleInputSet { inputs } => {
                write!(f, "duplicate rule input set {inputs}")
            }
        }
    }
}

/// Error returned by [`SignalMachine::resolve`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("a collision needs at least two signals")]
    TooFewInputs,
    #[error("signals with equal speed cannot meet: {0}")]
    NonDistinctSpeeds(String),
}

/// Where a resolved collision outcome came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleSource {
    /// A declared rule; `blank` is its declaration flag.
    Declared { index: usize, blank: bool },
    /// No rule matched: the signals cross unaffected.
    DefaultBlank,
}

/// Outcome of resolving a meeting set against the rule table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub outputs: Vec<SignalId>,
    pub source: RuleSource,
}

impl Resolution {
    /// True for blank outcomes: a declared-blank rule or a lookup miss.
    pub fn is_blank(&self) -> bool {
        match self.source {
            RuleSource::Declared { blank, .. } => blank,
            RuleSource::DefaultBlank => true,
        }
    }
}

/// Counts reported by [`SignalMachine::stats`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MachineStats {
    pub meta_signals: usize,
    pub non_blank_rules: usize,
}

/// A signal machine: meta-signals plus a deterministic rule table.
///
/// Construction normalizes the representation: signals sorted by
/// (speed, name), rule input/output sets sorted by signal id, rules
/// sorted by (blank, inputs, outputs). Two machines built from the same
/// parts in any order therefore compare equal.
#[derive(Debug, Clone)]
pub struct SignalMachine {
    signals: Vec<MetaSignal>,
    rules: Vec<CollisionRule>,
    index: HashMap<Vec<SignalId>, usize>,
}

impl PartialEq for SignalMachine {
    fn eq(&self, other: &Self) -> bool {
        self.signals == other.signals && self.rules == other.rules
    }
}

impl Eq for SignalMachine {}

pub fn is_valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl SignalMachine {
    /// Builds a machine from meta-signals and name-based rules.
    ///
    /// Fails on unrepresentable rules (unknown names, duplicate names in
    /// one set, fewer than two inputs). Semantic invariants that the
    /// representation can hold in violated form are left to
    /// [`SignalMachine::validate`].
    pub fn new(
        mut signals: Vec<MetaSignal>,
        rule_specs: Vec<RuleSpec>,
    ) -> Result<Self, MachineError> {
        for s in &signals {
            if !is_valid_identifier(&s.name) {
                return Err(MachineError::InvalidName(s.name.clone()));
            }
        }
        signals.sort_by(|a, b| a.speed.cmp(&b.speed).then_with(|| a.name.cmp(&b.name)));

        let mut by_name: HashMap<&str, SignalId> = HashMap::new();
        for (i, s) in signals.iter().enumerate() {
            // First declaration wins; duplicates are reported by validate().
            by_name.entry(&s.name).or_insert(SignalId(i));
        }

        let mut rules = Vec::with_capacity(rule_specs.len());
        for spec in &rule_specs {
            let inputs = resolve_set(&by_name, &spec.inputs, true)?;
            let outputs = resolve_set(&by_name, &spec.outputs, false)?;
            if inputs.len() < 2 {
                return Err(MachineError::TooFewInputs(format_names(
                    &spec.inputs,
                )));
            }
            rules.push(CollisionRule {
                inputs,
                outputs,
                blank: spec.blank,
            });
        }
        rules.sort_by(|a, b| {
            a.blank
                .cmp(&b.blank)
                .then_with(|| a.inputs.cmp(&b.inputs))
                .then_with(|| a.outputs.cmp(&b.outputs))
        });

        let mut index = HashMap::with_capacity(rules.len());
        for (i, r) in rules.iter().enumerate() {
            // First rule wins on duplicate input sets; validate() reports them.
            index.entry(r.inputs.clone()).or_insert(i);
        }

        Ok(SignalMachine {
            signals,
            rules,
            index,
        })
    }

    pub fn signals(&self) -> &[MetaSignal] {
        &self.signals
    }

    pub fn rules(&self) -> &[CollisionRule] {
        &self.rules
    }

    pub fn name(&self, id: SignalId) -> &str {
        &self.signals[id.0].name
    }

    pub fn speed(&self, id: SignalId) -> &Rational {
        &self.signals[id.0].speed
    }

    pub fn id_by_name(&self, name: &str) -> Option<SignalId> {
        self.signals
            .iter()
            .position(|s| s.name == name)
            .map(SignalId)
    }

    /// Renders a signal set as `{a, b, c}` for reports and errors.
    pub fn set_display(&self, ids: &[SignalId]) -> String {
        let names: Vec<&str> = ids.iter().map(|&id| self.name(id)).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// Checks every representable invariant and reports all violations.
    /// An empty report means the machine is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();

        let mut seen: HashMap<&str, usize> = HashMap::new();
        for s in &self.signals {
            *seen.entry(s.name.as_str()).or_insert(0) += 1;
        }
        let mut dup_names: Vec<&str> = seen
            .iter()
            .filter(|(_, &n)| n > 1)
            .map(|(&name, _)| name)
            .collect();
        dup_names.sort_unstable();
        for name in dup_names {
            violations.push(Violation::DuplicateSignalName {
                name: name.to_string(),
            });
        }

        for rule in &self.rules {
            if !distinct_speeds(self, &rule.inputs) {
                violations.push(Violation::NonDistinctInputSpeeds {
                    rule: self.rule_display(rule),
                });
            }
            if !distinct_speeds(self, &rule.outputs) {
                violations.push(Violation::NonDistinctOutputSpeeds {
                    rule: self.rule_display(rule),
                });
            }
        }

        for (i, rule) in self.rules.iter().enumerate() {
            if self.rules[i + 1..].iter().any(|r| r.inputs == rule.inputs)
                && self.rules[..i].iter().all(|r| r.inputs != rule.inputs)
            {
                violations.push(Violation::DuplicateRuleInputSet {
                    inputs: self.set_display(&rule.inputs),
                });
            }
        }

        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// Resolves a meeting set: the declared rule when one matches the
    /// exact input set, otherwise a blank crossing.
    pub fn resolve(&self, inputs: &[SignalId]) -> Result<Resolution, ResolveError> {
        if inputs.len() < 2 {
            return Err(ResolveError::TooFewInputs);
        }
        let mut key: Vec<SignalId> = inputs.to_vec();
        key.sort_unstable();
        key.dedup();
        if key.len() != inputs.len() || !distinct_speeds(self, &key) {
            return Err(ResolveError::NonDistinctSpeeds(self.set_display(&key)));
        }
        match self.index.get(&key) {
            Some(&i) => Ok(Resolution {
                outputs: self.rules[i].outputs.clone(),
                source: RuleSource::Declared {
                    index: i,
                    blank: self.rules[i].blank,
                },
            }),
            None => Ok(Resolution {
                outputs: key,
                source: RuleSource::DefaultBlank,
            }),
        }
    }

    /// Meta-signal count and declared non-blank rule count.
    ///
    /// Declared-blank rules are excluded; a rule declared with explicit
    /// outputs counts even when those outputs happen to equal its inputs.
    pub fn stats(&self) -> MachineStats {
        MachineStats {
            meta_signals: self.signals.len(),
            non_blank_rules: self.rules.iter().filter(|r| !r.blank).count(),
        }
    }

    fn rule_display(&self, rule: &CollisionRule) -> String {
        format!(
            "{} -> {}",
            self.set_display(&rule.inputs),
            self.set_display(&rule.outputs)
        )
    }
}

fn resolve_set(
    by_name: &HashMap<&str, SignalId>,
    names: &[String],
    input: bool,
) -> Result<Vec<SignalId>, MachineError> {
    let mut ids = Vec::with_capacity(names.len());
    for name in names {
        let id = *by_name
            .get(name.as_str())
            .ok_or_else(|| MachineError::UnknownSignal(name.clone()))?;
        if ids.contains(&id) {
            return Err(if input {
                MachineError::DuplicateRuleInput(name.clone())
            } else {
                MachineError::DuplicateRuleOutput(name.clone())
            });
        }
        ids.push(id);
    }
    ids.sort_unstable();
    Ok(ids)
}

fn distinct_speeds(machine: &SignalMachine, ids: &[SignalId]) -> bool {
    // ids are sorted, and id order follows (speed, name) order, so equal
    // speeds are adjacent.
    ids.windows(2)
        .all(|w| machine.speed(w[0]) != machine.speed(w[1]))
}

fn format_names(names: &[String]) -> String {
    format!("{{{}}}", names.join(", "))
}

/// Renders a speed for error messages and reports.
pub fn speed_display(speed: &Rational) -> String {
    format_rational(speed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn two_signal_machine(rules: Vec<RuleSpec>) -> SignalMachine {
        SignalMachine::new(
            vec![
                MetaSignal::new("a", int(1)),
                MetaSignal::new("b", int(-1)),
            ],
            rules,
        )
        .unwrap()
    }

    #[test]
    fn duplicate_rule_input_set_is_reported() {
        let m = two_signal_machine(vec![
            RuleSpec::new(["a", "b"], ["a"]),
            RuleSpec::new(["a", "b"], ["b"]),
        ]);
        let report = m.validate();
        assert_eq!(
            report,
            vec![Violation::DuplicateRuleInputSet {
                inputs: "{b, a}".to_string()
            }]
        );
    }

    #[test]
    fn non_distinct_input_speeds_are_reported() {
        let m = SignalMachine::new(
            vec![MetaSignal::new("a", int(1)), MetaSignal::new("b", int(1))],
            vec![RuleSpec::new(["a", "b"], Vec::<String>::new())],
        )
        .unwrap();
        let report = m.validate();
        assert_eq!(report.len(), 1);
        assert!(matches!(
            report[0],
            Violation::NonDistinctInputSpeeds { .. }
        ));
    }

    #[test]
    fn resolve_falls_back_to_blank_crossing() {
        let m = two_signal_machine(vec![]);
        let a = m.id_by_name("a").unwrap();
        let b = m.id_by_name("b").unwrap();
        let r = m.resolve(&[a, b]).unwrap();
        assert!(r.is_blank());
        let mut expect = vec![a, b];
        expect.sort_unstable();
        assert_eq!(r.outputs, expect);
    }

    #[test]
    fn resolve_rejects_equal_speeds() {
        let m = SignalMachine::new(
            vec![MetaSignal::new("a", int(1)), MetaSignal::new("b", int(1))],
            vec![],
        )
        .unwrap();
        let a = m.id_by_name("a").unwrap();
        let b = m.id_by_name("b").unwrap();
        assert!(matches!(
            m.resolve(&[a, b]),
            Err(ResolveError::NonDistinctSpeeds(_))
        ));
    }

    #[test]
    fn duplicate_name_in_rule_is_a_construction_error() {
        let err = SignalMachine::new(
            vec![
                MetaSignal::new("a", int(1)),
                MetaSignal::new("b", int(0)),
            ],
            vec![RuleSpec::new(["a", "a"], ["b"])],
        )
        .unwrap_err();
        assert_eq!(err, MachineError::DuplicateRuleInput("a".to_string()));
    }

    #[test]
    fn stats_exclude_declared_blank_rules_only() {
        let m = SignalMachine::new(
            vec![
                MetaSignal::new("a", int(1)),
                MetaSignal::new("b", int(0)),
                MetaSignal::new("c", int(-1)),
            ],
            vec![
                RuleSpec::new(["a", "b"], ["c"]),
                RuleSpec::blank(["a", "c"]),
                // Self-output rule declared as non-blank still counts.
                RuleSpec::new(["b", "c"], ["b", "c"]),
            ],
        )
        .unwrap();
        let stats = m.stats();
        assert_eq!(stats.meta_signals, 3);
        assert_eq!(stats.non_blank_rules, 2);
    }

    #[test]
    fn construction_is_order_insensitive() {
        let m1 = SignalMachine::new(
            vec![MetaSignal::new("a", int(1)), MetaSignal::new("b", int(-1))],
            vec![
                RuleSpec::new(["a", "b"], ["a"]),
                RuleSpec::blank(["b", "a"]),
            ],
        )
        .unwrap();
        let m2 = SignalMachine::new(
            vec![MetaSignal::new("b", int(-1)), MetaSignal::new("a", int(1))],
            vec![
                RuleSpec::blank(["a", "b"]),
                RuleSpec::new(["b", "a"], ["a"]),
            ],
        )
        .unwrap();
        assert_eq!(m1, m2);
    }
}
