//! Radius-1 cellular automata: reference interpreter and the
//! three-signals-per-state encoding into a signal machine.
//!
//! Cells sit at integer positions. Each state `s` gets three meta-signals
//! `s_L`, `s`, `s_R` with speeds -1, 0 and 1; every local table entry
//! `f(s, t, u) = v` becomes the rule {s_R, t, u_L} -> {v_L, v, v_R}. For
//! rule 110 this gives 6 meta-signals and 8 rules.
//!
//! The engine runs finite configurations, so infinite periodic
//! backgrounds are replaced by a dependency cone: to read `T` correct
//! steps over a window, the window is extended by `T` background cells on
//! each side. The movers start at offsets of 1/4 around their cell, so
//! interior cells update in exact three-way collisions at times 3/4,
//! 7/4, ...; boundary corruption moves inward one cell per step and never
//! reaches the valid region.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use thiserror::Error;

use crate::config::Configuration;
use crate::engine::SpaceTimeDiagram;
use crate::machine::{MetaSignal, RuleSpec, SignalId, SignalMachine};
use crate::rational::{int, ratio};

/// A cell state, named `0..states` in text form.
pub type State = usize;

/// A radius-1 cellular automaton: a finite state set and a total local
/// function over state triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellularAutomaton {
    states: usize,
    /// Row-major table indexed by `(left * states + cell) * states + right`.
    table: Vec<State>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaError {
    #[error("a cellular automaton needs at least one state")]
    NoStates,
    #[error("local table has {got} entries, expected {expected}")]
    WrongTableSize { got: usize, expected: usize },
    #[error("state {0} out of range")]
    StateOutOfRange(State),
}

impl CellularAutomaton {
    pub fn new(states: usize, table: Vec<State>) -> Result<Self, CaError> {
        if states == 0 {
            return Err(CaError::NoStates);
        }
        let expected = states * states * states;
        if table.len() != expected {
            return Err(CaError::WrongTableSize {
                got: table.len(),
                expected,
            });
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= states) {
            return Err(CaError::StateOutOfRange(bad));
        }
        Ok(CellularAutomaton { states, table })
    }

    /// The elementary CA with the given Wolfram code.
    pub fn elementary(code: u8) -> Self {
        let mut table = vec![0; 8];
        for left in 0..2usize {
            for cell in 0..2usize {
                for right in 0..2usize {
                    let neighborhood = (left << 2) | (cell << 1) | right;
                    table[(left * 2 + cell) * 2 + right] = ((code >> neighborhood) & 1) as State;
                }
            }
        }
        CellularAutomaton { states: 2, table }
    }

    pub fn states(&self) -> usize {
        self.states
    }

    pub fn local(&self, left: State, cell: State, right: State) -> State {
        self.table[(left * self.states + cell) * self.states + right]
    }

    /// Meta-signal name for a static cell-state signal.
    pub fn state_name(&self, state: State) -> String {
        if self.states == 2 {
            if state == 0 {
                "zero".to_string()
            } else {
                "one".to_string()
            }
        } else {
            format!("s{state}")
        }
    }
}

/// A finite window with periodic backgrounds: cells at positions
/// `0..cells.len()`, extended leftward by repetitions of `left` (its last
/// letter sits at position -1) and rightward by repetitions of `right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaWindow {
    pub cells: Vec<State>,
    pub left: Vec<State>,
    pub right: Vec<State>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaWindowError {
    #[error("window needs at least one cell")]
    EmptyCells,
    #[error("background words must be nonempty")]
    EmptyBackground,
    #[error("state {0} out of range")]
    StateOutOfRange(State),
}

impl CaWindow {
    pub fn new(
        cells: Vec<State>,
        left: Vec<State>,
        right: Vec<State>,
        states: usize,
    ) -> Result<Self, CaWindowError> {
        if cells.is_empty() {
            return Err(CaWindowError::EmptyCells);
        }
        if left.is_empty() || right.is_empty() {
            return Err(CaWindowError::EmptyBackground);
        }
        for &s in cells.iter().chain(&left).chain(&right) {
            if s >= states {
                return Err(CaWindowError::StateOutOfRange(s));
            }
        }
        Ok(CaWindow { cells, left, right })
    }

    pub fn width(&self) -> usize {
        self.cells.len()
    }

    /// Cell state at integer position `i`, extending by the periodic
    /// backgrounds beyond the window.
    pub fn state_at(&self, i: i64) -> State {
        let w = self.cells.len() as i64;
        if i < 0 {
            let u = &self.left;
            let n = u.len() as i64;
            let offset = (-i - 1) % n;
            u[(n - 1 - offset) as usize]
        } else if i < w {
            self.cells[i as usize]
        } else {
            let v = &self.right;
            v[((i - w) % v.len() as i64) as usize]
        }
    }
}

/// Applies the global rule `steps` times. Every returned row covers
/// positions `-steps ..= width-1+steps` and is exact on that whole range
/// (the computation extends far enough that edge effects stay outside).
/// Row 0 is the extended initial row; row `t` is exact for the infinite
/// evolution wherever positions `-steps+t ..= width-1+steps-t` are
/// concerned, and those bounds always cover the window itself.
pub fn ca_step_window(
    ca: &CellularAutomaton,
    window: &CaWindow,
    steps: usize,
) -> Vec<Vec<State>> {
    let w = window.width() as i64;
    let n = steps as i64;
    // Row t computed on a grid starting at lo is exact on
    // [lo + t, hi - t]; a 2n margin keeps the full returned range exact.
    let lo = -2 * n;
    let hi = w - 1 + 2 * n;
    let mut row: Vec<State> = (lo..=hi).map(|i| window.state_at(i)).collect();

    let clip = |row: &[State]| -> Vec<State> {
        let from = (-n - lo) as usize;
        let to = (w - 1 + n - lo) as usize;
        row[from..=to].to_vec()
    };

    let mut rows = vec![clip(&row)];
    for _ in 0..steps {
        let mut next = row.clone();
        for i in 1..row.len() - 1 {
            next[i] = ca.local(row[i - 1], row[i], row[i + 1]);
        }
        row = next;
        rows.push(clip(&row));
    }
    rows
}

/// Restricts oracle row `step` (as returned by [`ca_step_window`]) to the
/// valid region `[-horizon+step, width-1+horizon-step]` that
/// [`decode_ca_row`] reads.
pub fn oracle_row_valid_region(rows: &[Vec<State>], step: usize) -> Vec<State> {
    let row = &rows[step];
    row[step..row.len() - step].to_vec()
}

/// Builds the simulating machine: `3 * states` meta-signals and one rule
/// per local table entry.
pub fn build_ca_machine(ca: &CellularAutomaton) -> SignalMachine {
    let mut signals = Vec::with_capacity(3 * ca.states());
    for s in 0..ca.states() {
        let name = ca.state_name(s);
        signals.push(MetaSignal::new(format!("{name}_L"), int(-1)));
        signals.push(MetaSignal::new(name.clone(), int(0)));
        signals.push(MetaSignal::new(format!("{name}_R"), int(1)));
    }
    let mut rules = Vec::with_capacity(ca.states().pow(3));
    for left in 0..ca.states() {
        for cell in 0..ca.states() {
            for right in 0..ca.states() {
                let v_name = ca.state_name(ca.local(left, cell, right));
                rules.push(RuleSpec::new(
                    [
                        format!("{}_R", ca.state_name(left)),
                        ca.state_name(cell),
                        format!("{}_L", ca.state_name(right)),
                    ],
                    [format!("{v_name}_L"), v_name.clone(), format!("{v_name}_R")],
                ));
            }
        }
    }
    SignalMachine::new(signals, rules).expect("generated names are well formed")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaEncodeError {
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("machine lacks meta-signal `{0}`; build it from the same automaton")]
    MachineMismatch(String),
}

/// Encodes the dependency cone for `horizon` steps: for every cell `i` in
/// `[-horizon, width-1+horizon]` a static state signal at `i`, a right
/// mover at `i + 1/4` and a left mover at `i - 1/4`.
pub fn encode_ca_cone(
    ca: &CellularAutomaton,
    machine: &SignalMachine,
    window: &CaWindow,
    horizon: usize,
) -> Result<Configuration, CaEncodeError> {
    if horizon == 0 {
        return Err(CaEncodeError::ZeroHorizon);
    }
    let lookup = |name: &str| -> Result<SignalId, CaEncodeError> {
        machine
            .id_by_name(name)
            .ok_or_else(|| CaEncodeError::MachineMismatch(name.to_string()))
    };
    let mut ids: Vec<(SignalId, SignalId, SignalId)> = Vec::with_capacity(ca.states());
    for s in 0..ca.states() {
        let name = ca.state_name(s);
        ids.push((
            lookup(&format!("{name}_L"))?,
            lookup(&name)?,
            lookup(&format!("{name}_R"))?,
        ));
    }

    let w = window.width() as i64;
    let t = horizon as i64;
    let mut config = Configuration::new();
    for i in -t..=(w - 1 + t) {
        let (left, center, right) = ids[window.state_at(i)];
        let position = int(i);
        config
            .place(&position - ratio(1, 4), left)
            .expect("cone positions are distinct");
        config
            .place(position.clone(), center)
            .expect("cone positions are distinct");
        config
            .place(&position + ratio(1, 4), right)
            .expect("cone positions are distinct");
    }
    Ok(config)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CaDecodeError {
    #[error("step {step} outside 1..={horizon}")]
    StepOutOfRange { step: usize, horizon: usize },
    #[error("no static state signal at cell {0} (encoding bug)")]
    MissingCell(i64),
    #[error("signal `{0}` at cell {1} is not a state signal")]
    NotAStateSignal(String, i64),
    #[error("configuration query failed: {0}")]
    Sample(#[from] crate::engine::ConfigAtError),
}

/// Reads simulation row `step` from a diagram: the speed-0 state signals
/// at time `t = step` (collisions fire at 3/4 + k, so integer times fall
/// strictly between update rows) over the valid positions
/// `[-horizon+step, width-1+horizon-step]`.
pub fn decode_ca_row(
    diagram: &SpaceTimeDiagram,
    ca: &CellularAutomaton,
    machine: &SignalMachine,
    window: &CaWindow,
    step: usize,
    horizon: usize,
) -> Result<Vec<State>, CaDecodeError> {
    if step == 0 || step > horizon {
        return Err(CaDecodeError::StepOutOfRange { step, horizon });
    }
    let config = diagram.config_at(&int(step as i64))?;
    let mut by_name: HashMap<String, State> = HashMap::new();
    for s in 0..ca.states() {
        by_name.insert(ca.state_name(s), s);
    }

    let w = window.width() as i64;
    let lo = -(horizon as i64) + step as i64;
    let hi = w - 1 + horizon as i64 - step as i64;
    let mut row = Vec::with_capacity((hi - lo + 1) as usize);
    for i in lo..=hi {
        let signal = config
            .signal_at(&int(i))
            .filter(|&s| machine.speed(s).is_zero())
            .ok_or(CaDecodeError::MissingCell(i))?;
        let state = by_name.get(machine.name(signal)).copied().ok_or_else(|| {
            CaDecodeError::NotAStateSignal(machine.name(signal).to_string(), i)
        })?;
        row.push(state);
    }
    Ok(row)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaParseErrorKind {
    MissingStates,
    BadStates,
    BadLocalLine,
    BadWindowLine,
    IncompleteTable(usize),
    DuplicateEntry,
    UnknownDirective(String),
}

impl fmt::Display for CaParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CaParseErrorKind::MissingStates => write!(f, "missing `states <k>` line"),
            CaParseErrorKind::BadStates => write!(f, "invalid `states` line (1..=10 states)"),
            CaParseErrorKind::BadLocalLine => write!(f, "expected `local <s> <t> <u> -> <v>`"),
            CaParseErrorKind::BadWindowLine => {
                write!(f, "expected `<cells|left|right> <digits>`")
            }
            CaParseErrorKind::IncompleteTable(n) => {
                write!(f, "local table incomplete: {n} entries missing")
            }
            CaParseErrorKind::DuplicateEntry => write!(f, "duplicate local table entry"),
            CaParseErrorKind::UnknownDirective(d) => write!(f, "unknown directive `{d}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct CaParseError {
    pub line: usize,
    pub kind: CaParseErrorKind,
}

/// Parses the CA text format: `states <k>`, one `local s t u -> v` line
/// per table entry, and optional window lines `cells`, `left`, `right`
/// holding state digits.
pub fn parse_ca(text: &str) -> Result<(CellularAutomaton, Option<CaWindow>), CaParseError> {
    let err = |line: usize, kind: CaParseErrorKind| CaParseError { line, kind };
    let mut states: Option<usize> = None;
    let mut table: HashMap<(State, State, State), State> = HashMap::new();
    let mut cells: Option<Vec<State>> = None;
    let mut left: Option<Vec<State>> = None;
    let mut right: Option<Vec<State>> = None;
    let mut last_line = 1;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let k = states.unwrap_or(0);
        let parse_state = |t: &str| -> Option<State> {
            let v: State = t.parse().ok()?;
            (v < k).then_some(v)
        };
        let parse_digits = |t: &str| -> Option<Vec<State>> {
            t.chars()
                .map(|c| {
                    let v = c.to_digit(10)? as State;
                    (v < k).then_some(v)
                })
                .collect()
        };
        match tokens[0] {
            "states" => {
                if tokens.len() != 2 {
                    return Err(err(line_no, CaParseErrorKind::BadStates));
                }
                let k: usize = tokens[1]
                    .parse()
                    .map_err(|_| err(line_no, CaParseErrorKind::BadStates))?;
                if k == 0 || k > 10 {
                    return Err(err(line_no, CaParseErrorKind::BadStates));
                }
                states = Some(k);
            }
            "local" => {
                if states.is_none() {
                    return Err(err(line_no, CaParseErrorKind::MissingStates));
                }
                if tokens.len() != 6 || tokens[4] != "->" {
                    return Err(err(line_no, CaParseErrorKind::BadLocalLine));
                }
                let entry: Option<Vec<State>> = [tokens[1], tokens[2], tokens[3], tokens[5]]
                    .iter()
                    .map(|t| parse_state(t))
                    .collect();
                let entry = entry.ok_or(err(line_no, CaParseErrorKind::BadLocalLine))?;
                if table
                    .insert((entry[0], entry[1], entry[2]), entry[3])
                    .is_some()
                {
                    return Err(err(line_no, CaParseErrorKind::DuplicateEntry));
                }
            }
            kind @ ("cells" | "left" | "right") => {
                if states.is_none() {
                    return Err(err(line_no, CaParseErrorKind::MissingStates));
                }
                if tokens.len() != 2 {
                    return Err(err(line_no, CaParseErrorKind::BadWindowLine));
                }
                let digits =
                    parse_digits(tokens[1]).ok_or(err(line_no, CaParseErrorKind::BadWindowLine))?;
                match kind {
                    "cells" => cells = Some(digits),
                    "left" => left = Some(digits),
                    _ => right = Some(digits),
                }
            }
            other => {
                return Err(err(
                    line_no,
                    CaParseErrorKind::UnknownDirective(other.to_string()),
                ))
            }
        }
    }

    let k = states.ok_or(err(last_line, CaParseErrorKind::MissingStates))?;
    let expected = k * k * k;
    if table.len() != expected {
        return Err(err(
            last_line,
            CaParseErrorKind::IncompleteTable(expected - table.len()),
        ));
    }
    let mut flat = vec![0; expected];
    for ((l, c, r), v) in table {
        flat[(l * k + c) * k + r] = v;
    }
    let ca = CellularAutomaton::new(k, flat).expect("table checked complete");

    let window = match (cells, left, right) {
        (Some(cells), Some(left), Some(right)) => Some(
            CaWindow::new(cells, left, right, k)
                .map_err(|_| err(last_line, CaParseErrorKind::BadWindowLine))?,
        ),
        _ => None,
    };
    Ok((ca, window))
}

/// Emits the canonical CA text form.
pub fn emit_ca(ca: &CellularAutomaton, window: Option<&CaWindow>) -> String {
    let mut out = format!("states {}\n", ca.states());
    for left in 0..ca.states() {
        for cell in 0..ca.states() {
            for right in 0..ca.states() {
                out.push_str(&format!(
                    "local {left} {cell} {right} -> {}\n",
                    ca.local(left, cell, right)
                ));
            }
        }
    }
    if let Some(w) = window {
        let digits = |v: &[State]| v.iter().map(|s| s.to_string()).collect::<String>();
        out.push_str(&format!("cells {}\n", digits(&w.cells)));
        out.push_str(&format!("left {}\n", digits(&w.left)));
        out.push_str(&format!("right {}\n", digits(&w.right)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, RunLimits, RunStatus};

    fn reference_window() -> CaWindow {
        // 11 framed by ^w(10) on the left and (011)^w on the right.
        CaWindow::new(vec![1, 1], vec![1, 0], vec![0, 1, 1], 2).unwrap()
    }

    #[test]
    fn rule_110_local_table() {
        let ca = CellularAutomaton::elementary(110);
        assert_eq!(ca.local(1, 1, 1), 0);
        assert_eq!(ca.local(1, 1, 0), 1);
        assert_eq!(ca.local(1, 0, 1), 1);
        assert_eq!(ca.local(1, 0, 0), 0);
        assert_eq!(ca.local(0, 1, 1), 1);
        assert_eq!(ca.local(0, 1, 0), 1);
        assert_eq!(ca.local(0, 0, 1), 1);
        assert_eq!(ca.local(0, 0, 0), 0);
    }

    #[test]
    fn all_zero_window_stays_quiescent() {
        let ca = CellularAutomaton::elementary(110);
        let window = CaWindow::new(vec![0, 0, 0], vec![0], vec![0], 2).unwrap();
        for row in ca_step_window(&ca, &window, 4) {
            assert!(row.iter().all(|&s| s == 0));
        }
    }

    #[test]
    fn periodic_backgrounds_extend_correctly() {
        let window = reference_window();
        assert_eq!(window.state_at(-1), 0);
        assert_eq!(window.state_at(-2), 1);
        assert_eq!(window.state_at(-3), 0);
        assert_eq!(window.state_at(-4), 1);
        assert_eq!(window.state_at(0), 1);
        assert_eq!(window.state_at(1), 1);
        assert_eq!(window.state_at(2), 0);
        assert_eq!(window.state_at(3), 1);
        assert_eq!(window.state_at(4), 1);
        assert_eq!(window.state_at(5), 0);
        assert_eq!(window.state_at(6), 1);
    }

    #[test]
    fn rule_110_machine_counts_are_6_and_8() {
        let machine = build_ca_machine(&CellularAutomaton::elementary(110));
        assert!(machine.validate().is_empty());
        let stats = machine.stats();
        assert_eq!(stats.meta_signals, 6);
        assert_eq!(stats.non_blank_rules, 8);
    }

    #[test]
    fn generated_rule_for_010_matches_the_construction() {
        let machine = build_ca_machine(&CellularAutomaton::elementary(110));
        let ids: Vec<SignalId> = ["zero_R", "one", "zero_L"]
            .iter()
            .map(|n| machine.id_by_name(n).unwrap())
            .collect();
        let resolution = machine.resolve(&ids).unwrap();
        let names: Vec<&str> = resolution
            .outputs
            .iter()
            .map(|&id| machine.name(id))
            .collect();
        assert_eq!(names, vec!["one_L", "one", "one_R"]);
    }

    #[test]
    fn three_state_machine_has_nine_signals_and_27_rules() {
        let ca = CellularAutomaton::new(3, vec![0; 27]).unwrap();
        let machine = build_ca_machine(&ca);
        assert!(machine.validate().is_empty());
        assert_eq!(machine.signals().len(), 9);
        assert_eq!(machine.rules().len(), 27);
    }

    #[test]
    fn cone_has_three_signals_per_cell() {
        let ca = CellularAutomaton::elementary(110);
        let machine = build_ca_machine(&ca);
        let window = reference_window();
        let horizon = 3;
        let config = encode_ca_cone(&ca, &machine, &window, horizon).unwrap();
        assert_eq!(config.len(), 3 * (window.width() + 2 * horizon));
    }

    #[test]
    fn first_update_fires_at_three_quarters() {
        let ca = CellularAutomaton::elementary(110);
        let machine = build_ca_machine(&ca);
        let window = CaWindow::new(vec![1], vec![0], vec![0], 2).unwrap();
        let config = encode_ca_cone(&ca, &machine, &window, 1).unwrap();
        let limits = RunLimits::default().with_max_time(int(1));
        let outcome = run(&machine, &config, &limits).unwrap();
        assert_eq!(outcome.status, RunStatus::TimeLimit);
        let event = outcome
            .diagram
            .events
            .iter()
            .find(|e| e.position == int(0))
            .unwrap();
        assert_eq!(event.time, ratio(3, 4));
        let names: Vec<&str> = event.inputs.iter().map(|&s| machine.name(s)).collect();
        assert_eq!(names, vec!["zero_L", "one", "zero_R"]);
        let outputs: Vec<&str> = event.outputs.iter().map(|&s| machine.name(s)).collect();
        assert_eq!(outputs, vec!["one_L", "one", "one_R"]);
    }

    #[test]
    fn decoded_rows_match_the_interpreter() {
        let ca = CellularAutomaton::elementary(110);
        let machine = build_ca_machine(&ca);
        let window = reference_window();
        let horizon = 3;
        let config = encode_ca_cone(&ca, &machine, &window, horizon).unwrap();
        let limits = RunLimits::default().with_max_time(int(horizon as i64));
        let outcome = run(&machine, &config, &limits).unwrap();
        let rows = ca_step_window(&ca, &window, horizon);
        for step in 1..=horizon {
            let decoded =
                decode_ca_row(&outcome.diagram, &ca, &machine, &window, step, horizon).unwrap();
            assert_eq!(decoded, oracle_row_valid_region(&rows, step), "step {step}");
        }
    }

    #[test]
    fn rule_applications_are_ternary_and_count_one_per_cell_update() {
        let ca = CellularAutomaton::elementary(110);
        let machine = build_ca_machine(&ca);
        let window = reference_window();
        let horizon = 3;
        let w = window.width() as i64;
        let config = encode_ca_cone(&ca, &machine, &window, horizon).unwrap();
        let limits = RunLimits::default().with_max_time(int(horizon as i64));
        let outcome = run(&machine, &config, &limits).unwrap();
        for event in &outcome.diagram.events {
            if event.rule.is_some() {
                assert_eq!(event.inputs.len(), 3);
                assert_eq!(event.outputs.len(), 3);
            } else {
                // Boundary crossings outside the valid cone.
                assert_eq!(event.inputs.len(), 2);
                assert!(event.blank);
            }
        }
        for step in 1..=horizon as i64 {
            let t = int(step) - ratio(1, 4);
            let ternary = outcome
                .diagram
                .events
                .iter()
                .filter(|e| e.time == t && e.inputs.len() == 3)
                .count();
            // Cells with fresh movers from both neighbors shrink by one
            // per side per step.
            let updated = (w + 2 * (horizon as i64) - 2 * step) as usize;
            assert_eq!(ternary, updated, "step {step}");
        }
    }

    #[test]
    fn text_format_round_trips() {
        let ca = CellularAutomaton::elementary(110);
        let window = reference_window();
        let text = emit_ca(&ca, Some(&window));
        let (ca2, window2) = parse_ca(&text).unwrap();
        assert_eq!(ca, ca2);
        assert_eq!(window2.unwrap(), window);
        assert_eq!(emit_ca(&ca2, None), emit_ca(&ca, None));
    }

    #[test]
    fn parse_rejects_incomplete_tables() {
        let err = parse_ca("states 2\nlocal 0 0 0 -> 1\n").unwrap_err();
        assert_eq!(err.kind, CaParseErrorKind::IncompleteTable(7));
    }
}
