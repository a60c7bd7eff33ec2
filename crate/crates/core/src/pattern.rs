//! Periodic pattern generators: a finite seed emitting an infinite
//! periodic sequence of signals.
//!
//! A bouncer runs back and forth between two borders drifting right at
//! speed 1. Each time it reaches the front border a pattern signal is
//! emitted; crossing the rear border re-spawns it. The border index
//! records the position in the pattern, so the generator adds one
//! bouncer plus one border per pattern letter (k+1 meta-signals, 2k
//! rules). The first letter appears at the first bounce, saving a
//! pre-placed signal.
//!
//! With rear border at 0, bouncer at d/2 and front border at d, the
//! first emission lands at 3d/2 and successive emissions are spaced 2d.
//!
//! The unequal-spacing variant keeps a single border meta-signal and
//! moves the pattern index into the bouncer, with distinct way and back
//! phases per letter (2k+1 meta-signals, 2k rules). The back speeds are
//! chosen so consecutive emissions land exactly at the requested gaps.

use num_traits::Zero;
use thiserror::Error;

use crate::config::Configuration;
use crate::machine::{is_valid_identifier, MachineError, MetaSignal, RuleSpec, SignalMachine};
use crate::rational::{int, Rational};

/// An equal-spacing generator request: the pattern letters (speed-0
/// meta-signals declared by the caller) and the border spacing `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternSpec {
    pub emitted: Vec<String>,
    pub spacing: Rational,
}

/// An unequal-spacing request: `gaps[i]` is the exact distance between
/// emission `i` and emission `i+1` (cyclically).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnequalPatternSpec {
    pub emitted: Vec<String>,
    pub gaps: Vec<Rational>,
}

/// Added meta-signals, rules and initial placements of a generator.
/// The rules reference the caller's pattern letters by name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternFragment {
    pub signals: Vec<MetaSignal>,
    pub rules: Vec<RuleSpec>,
    pub placements: Vec<(Rational, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("the emitted sequence must not be empty")]
    EmptySequence,
    #[error("`{0}` is not a valid meta-signal identifier")]
    BadName(String),
    #[error("emitted name `{0}` collides with a generator signal")]
    ReservedName(String),
    #[error("duplicate emitted name `{0}`")]
    DuplicateName(String),
    #[error("spacing must be positive")]
    NonPositiveSpacing,
    #[error("need one gap per emitted letter ({expected}), got {got}")]
    GapCount { expected: usize, got: usize },
    #[error("gaps must be positive")]
    NonPositiveGap,
}

fn check_names(emitted: &[String], reserved: &dyn Fn(&str) -> bool) -> Result<(), PatternError> {
    if emitted.is_empty() {
        return Err(PatternError::EmptySequence);
    }
    for (i, name) in emitted.iter().enumerate() {
        if !is_valid_identifier(name) {
            return Err(PatternError::BadName(name.clone()));
        }
        if reserved(name) {
            return Err(PatternError::ReservedName(name.clone()));
        }
        if emitted[..i].contains(name) {
            return Err(PatternError::DuplicateName(name.clone()));
        }
    }
    Ok(())
}

/// Builds the equal-spacing generator: bouncer `boun` (speed 2), borders
/// `bord_1 ..= bord_k` (speed 1), rules
/// {boun, bord_i} -> {mu_(i+1), bord_(i+1)} and
/// {bord_i, mu_i} -> {mu_i, bord_(i+1), boun}, and the seed placements
/// rear `bord_1` at 0, `boun` at d/2, front `bord_k` at d.
pub fn build_pattern_generator(spec: &PatternSpec) -> Result<PatternFragment, PatternError> {
    let k = spec.emitted.len();
    check_names(&spec.emitted, &|name| {
        name == "boun" || (name.starts_with("bord_") && name[5..].parse::<usize>().is_ok())
    })?;
    if spec.spacing <= Rational::zero() {
        return Err(PatternError::NonPositiveSpacing);
    }

    let bord = |i: usize| format!("bord_{}", i + 1);
    let mut signals = vec![MetaSignal::new("boun", int(2))];
    for i in 0..k {
        signals.push(MetaSignal::new(bord(i), int(1)));
    }

    let mut rules = Vec::with_capacity(2 * k);
    for i in 0..k {
        let next = (i + 1) % k;
        // Front bounce: emit the next letter, advance the border phase.
        rules.push(RuleSpec::new(
            ["boun".to_string(), bord(i)],
            [spec.emitted[next].clone(), bord(next)],
        ));
        // Rear crossing: the border passes the letter it recorded and the
        // bouncer re-spawns.
        rules.push(RuleSpec::new(
            [bord(i), spec.emitted[i].clone()],
            [spec.emitted[i].clone(), bord(next), "boun".to_string()],
        ));
    }

    let placements = vec![
        (int(0), bord(0)),
        (&spec.spacing / int(2), "boun".to_string()),
        (spec.spacing.clone(), bord(k - 1)),
    ];

    Ok(PatternFragment {
        signals,
        rules,
        placements,
    })
}

/// Builds the unequal-spacing generator: one border meta-signal `bord`
/// (speed 1), way phases `way_i` (speed 2) and back phases `back_i`
/// whose speeds realize the requested gaps exactly.
pub fn build_pattern_generator_unequal(
    spec: &UnequalPatternSpec,
) -> Result<PatternFragment, PatternError> {
    let k = spec.emitted.len();
    check_names(&spec.emitted, &|name| {
        name == "bord"
            || ((name.starts_with("way_") && name[4..].parse::<usize>().is_ok())
                || (name.starts_with("back_") && name[5..].parse::<usize>().is_ok()))
    })?;
    if spec.gaps.len() != k {
        return Err(PatternError::GapCount {
            expected: k,
            got: spec.gaps.len(),
        });
    }
    if spec.gaps.iter().any(|g| g <= &Rational::zero()) {
        return Err(PatternError::NonPositiveGap);
    }

    // Border gap g = min(gaps)/3 keeps every back speed strictly inside
    // (0, 1), away from the generator's other speeds.
    let g = spec.gaps.iter().min().unwrap() / int(3);
    let way = |i: usize| format!("way_{}", i + 1);
    let back = |i: usize| format!("back_{}", i + 1);

    let mut signals = vec![MetaSignal::new("bord", int(1))];
    let mut rules = Vec::with_capacity(2 * k);
    for i in 0..k {
        // In the frame drifting with the borders, a cycle spends
        // g / (w - 1) rising and g / (1 - b) falling; with w = 2 the gap
        // between emissions i and i+1 is g + g / (1 - b_i).
        let b = int(1) - &g / (&spec.gaps[i] - &g);
        signals.push(MetaSignal::new(way(i), int(2)));
        signals.push(MetaSignal::new(back(i), b));
        rules.push(RuleSpec::new(
            [way(i), "bord".to_string()],
            [spec.emitted[i].clone(), "bord".to_string(), back(i)],
        ));
        rules.push(RuleSpec::new(
            [back(i), "bord".to_string()],
            ["bord".to_string(), way((i + 1) % k)],
        ));
    }

    let placements = vec![
        (int(0), "bord".to_string()),
        (&g / int(2), way(0)),
        (g.clone(), "bord".to_string()),
    ];

    Ok(PatternFragment {
        signals,
        rules,
        placements,
    })
}

/// Assembles a standalone machine: the pattern letters as speed-0
/// meta-signals plus the fragment, with the fragment's placements as the
/// initial configuration.
pub fn assemble_pattern_machine(
    emitted: &[String],
    fragment: &PatternFragment,
) -> Result<(SignalMachine, Configuration), MachineError> {
    let mut signals: Vec<MetaSignal> = emitted
        .iter()
        .map(|name| MetaSignal::new(name.clone(), int(0)))
        .collect();
    signals.extend(fragment.signals.iter().cloned());
    let machine = SignalMachine::new(signals, fragment.rules.clone())?;
    let mut config = Configuration::new();
    for (position, name) in &fragment.placements {
        let id = machine
            .id_by_name(name)
            .expect("fragment placements name fragment signals");
        config
            .place(position.clone(), id)
            .expect("fragment placements are distinct");
    }
    Ok((machine, config))
}

/// Convenience: emissions recorded in a diagram, in time order, as
/// (letter name index into `emitted`, position).
pub fn emissions(
    diagram: &crate::engine::SpaceTimeDiagram,
    machine: &SignalMachine,
    emitted: &[String],
) -> Vec<(usize, Rational)> {
    let letter_ids: Vec<Option<crate::machine::SignalId>> =
        emitted.iter().map(|n| machine.id_by_name(n)).collect();
    let mut out = Vec::new();
    for event in &diagram.events {
        // An emission event creates a letter that was not among the
        // inputs (the rear-border crossing re-emits the same letter).
        for (index, id) in letter_ids.iter().enumerate() {
            let Some(id) = *id else { continue };
            if event.outputs.contains(&id) && !event.inputs.contains(&id) {
                out.push((index, event.position.clone()));
            }
        }
    }
    out
}
