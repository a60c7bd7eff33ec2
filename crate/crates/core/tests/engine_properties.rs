//! Property tests for the engine over randomized machines and
//! configurations: structural diagram conformance, exact geometry
//! invariances, and agreement of the incremental complexity metrics with
//! brute-force oracles.

use proptest::prelude::*;

use agc_core::config::Configuration;
use agc_core::engine::metrics::{
    space_cut, space_cut_sweep, time_complexity, time_complexity_longest_path,
    time_complexity_non_blank,
};
use agc_core::engine::{is_stable, run, RunLimits, RunStatus};
use agc_core::machine::{MetaSignal, RuleSpec, SignalMachine};
use agc_core::rational::{ratio, Rational};

const NAMES: [&str; 5] = ["a", "b", "c", "d", "e"];
const SPEED_POOL: [(i64, i64); 7] =
    [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)];

/// Compact machine blueprint: per-signal speed indices plus rule masks.
#[derive(Debug, Clone)]
struct Blueprint {
    speeds: Vec<usize>,
    rules: Vec<(u8, u8)>,
    placements: Vec<(i64, u8, usize)>,
}

fn blueprint() -> impl Strategy<Value = Blueprint> {
    (
        prop::collection::vec(0..SPEED_POOL.len(), 2..=5),
        prop::collection::vec((1u8..32, 0u8..32), 0..=6),
        prop::collection::vec((-12i64..=12, 1u8..=3, 0usize..5), 1..=6),
    )
        .prop_map(|(speeds, rules, placements)| Blueprint {
            speeds,
            rules,
            placements,
        })
}

/// Realizes a blueprint as a valid machine and configuration, repairing
/// anything the model cannot hold (equal speeds in a set, duplicate input
/// sets, duplicate positions).
fn realize(bp: &Blueprint) -> (SignalMachine, Configuration) {
    let n = bp.speeds.len();
    let signals: Vec<MetaSignal> = bp
        .speeds
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            let (p, q) = SPEED_POOL[s];
            MetaSignal::new(NAMES[i], ratio(p, q))
        })
        .collect();

    let distinct_speeds = |indices: &[usize]| -> bool {
        for (k, &i) in indices.iter().enumerate() {
            for &j in &indices[..k] {
                if signals[i].speed == signals[j].speed {
                    return false;
                }
            }
        }
        true
    };
    let mask_to_set = |mask: u8| -> Vec<usize> {
        (0..n).filter(|i| mask & (1 << i) != 0).collect()
    };

    let mut seen_inputs: Vec<Vec<usize>> = Vec::new();
    let mut rules = Vec::new();
    for &(input_mask, output_mask) in &bp.rules {
        let inputs = mask_to_set(input_mask);
        if inputs.len() < 2 || !distinct_speeds(&inputs) || seen_inputs.contains(&inputs) {
            continue;
        }
        // Keep only output signals with pairwise distinct speeds.
        let mut outputs: Vec<usize> = Vec::new();
        for i in mask_to_set(output_mask) {
            if outputs
                .iter()
                .all(|&j| signals[i].speed != signals[j].speed)
            {
                outputs.push(i);
            }
        }
        seen_inputs.push(inputs.clone());
        rules.push(RuleSpec::new(
            inputs.iter().map(|&i| NAMES[i]),
            outputs.iter().map(|&i| NAMES[i]),
        ));
    }

    let machine = SignalMachine::new(signals, rules).expect("repaired blueprint is well formed");
    let mut config = Configuration::new();
    for &(num, den, signal) in &bp.placements {
        let id = machine.id_by_name(NAMES[signal % n]).unwrap();
        // Skip colliding positions instead of failing.
        let _ = config.place(ratio(num, den as i64), id);
    }
    (machine, config)
}

fn limits() -> RunLimits {
    RunLimits::default().with_max_collisions(300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(192))]

    #[test]
    fn runs_are_deterministic_and_conformant(bp in blueprint()) {
        let (machine, config) = realize(&bp);
        let a = run(&machine, &config, &limits()).unwrap();
        let b = run(&machine, &config, &limits()).unwrap();
        prop_assert_eq!(&a.diagram, &b.diagram);
        prop_assert_eq!(&a.final_config, &b.final_config);

        let issues = a.diagram.audit(&machine);
        prop_assert!(issues.is_empty(), "audit: {issues:?}");

        if a.status == RunStatus::Halted {
            prop_assert!(is_stable(&a.final_config, &machine));
        }
    }

    #[test]
    fn translation_shifts_positions_only(bp in blueprint()) {
        let (machine, config) = realize(&bp);
        let delta = ratio(7, 3);
        let base = run(&machine, &config, &limits()).unwrap();
        let moved = run(&machine, &config.translated(&delta), &limits()).unwrap();
        prop_assert_eq!(base.diagram.events.len(), moved.diagram.events.len());
        for (e, f) in base.diagram.events.iter().zip(&moved.diagram.events) {
            prop_assert_eq!(&e.time, &f.time);
            prop_assert_eq!(&(&e.position + &delta), &f.position);
            prop_assert_eq!(&e.inputs, &f.inputs);
            prop_assert_eq!(&e.outputs, &f.outputs);
            prop_assert_eq!(e.rule, f.rule);
        }
    }

    #[test]
    fn scaling_scales_positions_and_times(bp in blueprint()) {
        let (machine, config) = realize(&bp);
        let alpha = ratio(3, 2);
        let base = run(&machine, &config, &limits()).unwrap();
        let mut scaled_limits = limits();
        scaled_limits.accumulation_window.span =
            &scaled_limits.accumulation_window.span * &alpha;
        let scaled = run(&machine, &config.scaled(&alpha), &scaled_limits).unwrap();
        prop_assert_eq!(base.diagram.events.len(), scaled.diagram.events.len());
        for (e, f) in base.diagram.events.iter().zip(&scaled.diagram.events) {
            prop_assert_eq!(&(&e.time * &alpha), &f.time);
            prop_assert_eq!(&(&e.position * &alpha), &f.position);
            prop_assert_eq!(&e.inputs, &f.inputs);
            prop_assert_eq!(&e.outputs, &f.outputs);
        }
    }

    #[test]
    fn metrics_match_brute_force_oracles(bp in blueprint()) {
        let (machine, config) = realize(&bp);
        let outcome = run(&machine, &config, &limits()).unwrap();
        let diagram = &outcome.diagram;
        prop_assert_eq!(
            time_complexity(diagram),
            time_complexity_longest_path(diagram, true)
        );
        prop_assert_eq!(
            time_complexity_non_blank(diagram),
            time_complexity_longest_path(diagram, false)
        );
        prop_assert_eq!(space_cut(diagram), space_cut_sweep(diagram));
    }

    #[test]
    fn config_at_before_first_event_is_uniform_motion(bp in blueprint()) {
        let (machine, config) = realize(&bp);
        let outcome = run(&machine, &config, &limits()).unwrap();
        let t = match outcome.diagram.events.first() {
            Some(e) => &e.time / ratio(2, 1),
            None => Rational::from_integer(1.into()),
        };
        if matches!(outcome.diagram.horizon, agc_core::engine::Horizon::At(ref h) if &t > h) {
            return Ok(());
        }
        let sampled = outcome.diagram.config_at(&t).unwrap();
        prop_assert_eq!(sampled.len(), config.len());
        for (position, signal) in config.iter() {
            let expected = position + machine.speed(signal) * &t;
            prop_assert_eq!(sampled.signal_at(&expected), Some(signal));
        }
    }
}

/// Round-trip property for the text format, sharing the machine strategy.
mod text_round_trip {
    use super::*;
    use agc_core::text::{emit_machine, parse_machine};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn parse_emit_identity(bp in blueprint()) {
            let (machine, config) = realize(&bp);
            let emitted = emit_machine(&machine, Some(&config));
            let (machine2, config2) = parse_machine(&emitted).unwrap();
            prop_assert_eq!(&machine2, &machine);
            prop_assert_eq!(config2.unwrap_or_default(), config);
            prop_assert_eq!(emit_machine(&machine2, None), emit_machine(&machine, None));
        }
    }
}
