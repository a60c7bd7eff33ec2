//! Randomized oracle-equivalence suites.
//!
//! Instances are drawn from a seeded ChaCha stream, so a (seed, count)
//! pair fully determines the suite and its report. Bounds are chosen for
//! desk-scale runtimes: at most 4 appendants of length at most 4 (empty
//! allowed), words of length at most 6 and at most 24 iterations for tag
//! systems; at most 4 states, windows of width at most 6 and horizons of
//! at most 8 steps for cellular automata.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use agc_core::ca::{
    build_ca_machine, ca_step_window, decode_ca_row, emit_ca, encode_ca_cone,
    oracle_row_valid_region, CaWindow, CellularAutomaton,
};
use agc_core::cts::{
    build_cts_machine_with, emit_cts, run_cts_simulation, CtsHalt, CtsMachineOptions,
    CtsSimStatus, CtsVariant, CyclicTagSystem, LayoutMode, Word,
};
use agc_core::engine::{run, RunLimits, SpaceTimeDiagram};
use agc_core::machine::SignalMachine;
use agc_core::rational::int;

/// A generated tag-system instance and its iteration budget.
#[derive(Debug, Clone)]
pub struct CtsInstance {
    pub sys: CyclicTagSystem,
    pub iterations: usize,
}

/// A generated cellular-automaton instance.
#[derive(Debug, Clone)]
pub struct CaInstance {
    pub ca: CellularAutomaton,
    pub window: CaWindow,
    pub horizon: usize,
}

#[derive(Debug, Clone)]
pub struct InstanceFailure {
    pub index: usize,
    pub detail: String,
    pub reproduction: String,
}

/// Outcome of a suite run; `Display` gives the stable textual report.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub kind: String,
    pub seed: u64,
    pub total: usize,
    pub failures: Vec<InstanceFailure>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn passed(&self) -> usize {
        self.total - self.failures.len()
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "verify {}: {}/{} pass (seed {})",
            self.kind,
            self.passed(),
            self.total,
            self.seed
        )?;
        for failure in &self.failures {
            writeln!(f, "instance {} FAILED: {}", failure.index, failure.detail)?;
            for line in failure.reproduction.lines() {
                writeln!(f, "    {line}")?;
            }
        }
        Ok(())
    }
}

fn random_word(rng: &mut ChaCha8Rng, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    Word((0..len).map(|_| rng.random_bool(0.5)).collect())
}

/// Draws `count` instances. With `include_halt`, roughly a third carry a
/// designated halting appendant.
pub fn generate_cts_instances(count: usize, seed: u64, include_halt: bool) -> Vec<CtsInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let appendant_count = rng.random_range(2..=4);
            let mut appendants: Vec<Word> =
                (0..appendant_count).map(|_| random_word(&mut rng, 4)).collect();
            let halt_index = if include_halt && rng.random_bool(1.0 / 3.0) {
                let h = rng.random_range(0..appendant_count);
                appendants[h] = "1".parse().unwrap();
                Some(h)
            } else {
                None
            };
            let word = random_word(&mut rng, 6);
            let iterations = rng.random_range(6..=24);
            CtsInstance {
                sys: CyclicTagSystem::new(word, appendants, halt_index)
                    .expect("generated instances are well formed"),
                iterations,
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
pub struct CtsVerifyOptions {
    pub variant: CtsVariant,
    pub mode: LayoutMode,
    pub clean: bool,
}

impl Default for CtsVerifyOptions {
    fn default() -> Self {
        CtsVerifyOptions {
            variant: CtsVariant::Standard,
            mode: LayoutMode::Dyadic,
            clean: false,
        }
    }
}

/// Number of halt-rule firings recorded in a diagram.
pub fn halt_rule_firings(
    diagram: &SpaceTimeDiagram,
    machine: &SignalMachine,
    variant: CtsVariant,
) -> usize {
    let id = |name: &str| machine.id_by_name(name).expect("CTS machine signal");
    let mut pattern = match variant {
        CtsVariant::Standard => vec![id("true_R"), id("one"), id("go_LL")],
        CtsVariant::TwoSignal => vec![id("one_RR"), id("halt")],
    };
    pattern.sort_unstable();
    diagram
        .events
        .iter()
        .filter(|e| e.inputs == pattern)
        .count()
}

/// Non-interference: the relay signals never meet a rotation in
/// progress, so no meeting set may pair `go_LL` with a speed-2 signal.
fn relay_interference(diagram: &SpaceTimeDiagram, machine: &SignalMachine) -> bool {
    let go_ll = machine.id_by_name("go_LL").expect("CTS machine signal");
    let fast: Vec<_> = ["go_RR", "one_RR", "zero_RR"]
        .iter()
        .filter_map(|n| machine.id_by_name(n))
        .collect();
    diagram.events.iter().any(|e| {
        e.inputs.contains(&go_ll) && e.inputs.iter().any(|s| fast.contains(s))
    })
}

/// Runs every instance against the interpreter and reports mismatches.
pub fn verify_cts_suite(
    instances: &[CtsInstance],
    seed: u64,
    options: CtsVerifyOptions,
) -> SuiteReport {
    let machine = build_cts_machine_with(CtsMachineOptions {
        variant: options.variant,
        clean: options.clean,
    });
    let kind = match options.variant {
        CtsVariant::Standard => "cts",
        CtsVariant::TwoSignal => "cts-two-signal",
    };
    let limits = RunLimits::default();

    let mut failures = Vec::new();
    for (index, instance) in instances.iter().enumerate() {
        if let Err(detail) = check_cts_instance(instance, &machine, options, &limits) {
            failures.push(InstanceFailure {
                index,
                detail,
                reproduction: emit_cts(&instance.sys),
            });
        }
    }
    SuiteReport {
        kind: kind.to_string(),
        seed,
        total: instances.len(),
        failures,
    }
}

/// Checks one instance; on success returns the diagram's event count.
pub fn check_cts_instance(
    instance: &CtsInstance,
    machine: &SignalMachine,
    options: CtsVerifyOptions,
    limits: &RunLimits,
) -> Result<usize, String> {
    let trace = instance.sys.run_trace(instance.iterations);
    let sim = run_cts_simulation(
        &instance.sys,
        machine,
        options.mode,
        options.variant,
        instance.iterations,
        limits,
    )
    .map_err(|e| format!("simulation error: {e}"))?;

    let status_ok = match (trace.halt, sim.status) {
        (Some(CtsHalt::EmptyWord), CtsSimStatus::HaltEmptyWord) => true,
        // The word emptied on the last simulated iteration; the engine was
        // stopped at the boundary before its discard step.
        (Some(CtsHalt::EmptyWord), CtsSimStatus::IterationLimit) => {
            trace.words.last().is_some_and(|w| w.is_empty())
        }
        (Some(CtsHalt::Appendant), CtsSimStatus::HaltAppendant) => true,
        (None, CtsSimStatus::IterationLimit) => true,
        _ => false,
    };
    if !status_ok {
        return Err(format!(
            "status mismatch: interpreter {:?}, simulation {:?}",
            trace.halt, sim.status
        ));
    }

    if sim.words != trace.words {
        let step = sim
            .words
            .iter()
            .zip(&trace.words)
            .position(|(a, b)| a != b)
            .unwrap_or_else(|| sim.words.len().min(trace.words.len()));
        let got = sim.words.get(step).map(|w| w.to_string());
        let expected = trace.words.get(step).map(|w| w.to_string());
        return Err(format!(
            "word mismatch at iteration {step}: simulation {got:?}, interpreter {expected:?} \
             ({} vs {} words)",
            sim.words.len(),
            trace.words.len()
        ));
    }

    let firings = halt_rule_firings(&sim.outcome.diagram, machine, options.variant);
    let expected_firings = usize::from(trace.halt == Some(CtsHalt::Appendant));
    if firings != expected_firings {
        return Err(format!(
            "halt rule fired {firings} times, expected {expected_firings}"
        ));
    }

    if relay_interference(&sim.outcome.diagram, machine) {
        return Err("relay interference: go_LL met a speed-2 signal".to_string());
    }

    Ok(sim.outcome.diagram.events.len())
}

/// Draws `count` cellular-automaton instances.
pub fn generate_ca_instances(count: usize, seed: u64) -> Vec<CaInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let states = rng.random_range(2..=4);
            let table: Vec<usize> = (0..states * states * states)
                .map(|_| rng.random_range(0..states))
                .collect();
            let ca = CellularAutomaton::new(states, table).expect("table sized correctly");
            let width = rng.random_range(1..=6);
            let cells: Vec<usize> = (0..width).map(|_| rng.random_range(0..states)).collect();
            let background = |rng: &mut ChaCha8Rng| -> Vec<usize> {
                let len = rng.random_range(1..=3);
                (0..len).map(|_| rng.random_range(0..states)).collect()
            };
            let left = background(&mut rng);
            let right = background(&mut rng);
            let window = CaWindow::new(cells, left, right, states).expect("states in range");
            let horizon = rng.random_range(1..=8);
            CaInstance {
                ca,
                window,
                horizon,
            }
        })
        .collect()
}

/// Runs every instance for its horizon and compares each decoded row to
/// the interpreter on the full valid cone.
pub fn verify_ca_suite(instances: &[CaInstance], seed: u64) -> SuiteReport {
    let mut failures = Vec::new();
    for (index, instance) in instances.iter().enumerate() {
        if let Err(detail) = check_ca_instance(instance) {
            failures.push(InstanceFailure {
                index,
                detail,
                reproduction: format!(
                    "{}# horizon {}\n",
                    emit_ca(&instance.ca, Some(&instance.window)),
                    instance.horizon
                ),
            });
        }
    }
    SuiteReport {
        kind: "ca".to_string(),
        seed,
        total: instances.len(),
        failures,
    }
}

fn check_ca_instance(instance: &CaInstance) -> Result<(), String> {
    let machine = build_ca_machine(&instance.ca);
    let config = encode_ca_cone(&instance.ca, &machine, &instance.window, instance.horizon)
        .map_err(|e| format!("encoding error: {e}"))?;
    let limits = RunLimits::default().with_max_time(int(instance.horizon as i64));
    let outcome =
        run(&machine, &config, &limits).map_err(|e| format!("engine error: {e}"))?;
    let rows = ca_step_window(&instance.ca, &instance.window, instance.horizon);
    for step in 1..=instance.horizon {
        let decoded = decode_ca_row(
            &outcome.diagram,
            &instance.ca,
            &machine,
            &instance.window,
            step,
            instance.horizon,
        )
        .map_err(|e| format!("decode error at step {step}: {e}"))?;
        let expected = oracle_row_valid_region(&rows, step);
        if decoded != expected {
            return Err(format!(
                "row mismatch at step {step}: decoded {decoded:?}, interpreter {expected:?}"
            ));
        }
    }
    Ok(())
}
