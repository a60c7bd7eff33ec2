//! Initial-configuration encoding, word decoding and the simulation
//! driver for cyclic tag systems.
//!
//! Left to right, an encoded configuration reads: `last`, the in-flight
//! `go_LL`, the word bits, `first`, the appendant blocks separated by
//! `sep`, and a trailing `last`. Two layouts are provided. The integer
//! layout places everything at unit spacing, matching the reference
//! construction's coordinates. The dyadic layout gives every appendant
//! block length 1 and places bit `j` at offset `(2^j - 1) / 2^j`; the 2/3
//! point of a block is then never occupied by an ordinary bit, so only a
//! deliberately placed halt bit can enter the halt collision.

use num_traits::Zero;
use thiserror::Error;

use crate::config::Configuration;
use crate::cts::{CtsVariant, CyclicTagSystem, Word};
use crate::engine::{
    CollisionEvent, ConfigAtError, Engine, EngineError, RunLimits, RunOutcome, RunStatus,
    StepOutcome,
};
use crate::machine::{SignalId, SignalMachine};
use crate::rational::{format_rational, int, ratio, Rational};

/// Spatial layout family for encoded configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LayoutMode {
    /// Unit spacing, matching the reference coordinates.
    Integer,
    /// Length-1 blocks with dyadic bit offsets; halt-safe by construction.
    #[default]
    Dyadic,
}

/// One appendant block: its delimiters and encoded bit positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    pub start: Rational,
    pub bits: Vec<Rational>,
    pub end: Rational,
}

/// Computed positions for an encoded configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtsLayout {
    pub mode: LayoutMode,
    pub last: Rational,
    pub go_ll: Rational,
    pub word_bits: Vec<Rational>,
    pub first: Rational,
    pub blocks: Vec<BlockLayout>,
    pub trailing_last: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CtsEncodeError {
    #[error(
        "appendant {index}: a non-halt 1 bit would sit at exactly 2/3 of its block \
         (position {position}); use the dyadic layout"
    )]
    HaltSafety { index: usize, position: String },
    #[error("machine lacks meta-signal `{0}`; build it for the matching variant")]
    MachineMismatch(String),
}

fn dyadic_offset(j: usize) -> Rational {
    // (2^j - 1) / 2^j
    let pow = Rational::from_integer(num_bigint::BigInt::from(1) << j);
    (&pow - int(1)) / pow
}

/// Computes the layout for a system without placing any signals.
pub fn layout_cts(
    sys: &CyclicTagSystem,
    mode: LayoutMode,
    variant: CtsVariant,
) -> Result<CtsLayout, CtsEncodeError> {
    let n = sys.word.len() as i64;
    let word_bits: Vec<Rational> = (1..=n).map(int).collect();
    let first = int(n + 1);

    let mut blocks = Vec::with_capacity(sys.appendants.len());
    let mut p = first.clone();
    for (i, appendant) in sys.appendants.iter().enumerate() {
        let is_halt = sys.halt_index == Some(i);
        let (bits, len) = if is_halt {
            match (mode, variant) {
                // A single bit at exactly 2/3 of the block.
                (LayoutMode::Integer, CtsVariant::Standard) => (vec![&p + int(2)], int(3)),
                (LayoutMode::Dyadic, CtsVariant::Standard) => (vec![&p + ratio(2, 3)], int(1)),
                // The two-signal halt marker needs no special position.
                (LayoutMode::Integer, CtsVariant::TwoSignal) => (vec![&p + int(1)], int(2)),
                (LayoutMode::Dyadic, CtsVariant::TwoSignal) => (vec![&p + ratio(1, 2)], int(1)),
            }
        } else {
            match mode {
                LayoutMode::Integer => {
                    let m = appendant.len() as i64;
                    let bits = (1..=m).map(|j| &p + int(j)).collect();
                    (bits, int(m + 1))
                }
                LayoutMode::Dyadic => {
                    let bits = (1..=appendant.len()).map(|j| &p + dyadic_offset(j)).collect();
                    (bits, int(1))
                }
            }
        };
        let end = &p + &len;
        blocks.push(BlockLayout {
            start: p,
            bits,
            end: end.clone(),
        });
        p = end;
    }

    // Halt safety: with a halt appendant designated, no ordinary 1 bit may
    // occupy the 2/3 point of its block, where the halt collision fires.
    if sys.halt_index.is_some() {
        for (i, (block, appendant)) in blocks.iter().zip(&sys.appendants).enumerate() {
            if sys.halt_index == Some(i) {
                continue;
            }
            let length = &block.end - &block.start;
            for (position, &bit) in block.bits.iter().zip(appendant.bits()) {
                if bit && (position - &block.start) * int(3) == &length * int(2) {
                    return Err(CtsEncodeError::HaltSafety {
                        index: i,
                        position: format_rational(position),
                    });
                }
            }
        }
    }

    let leftmost_bit = word_bits.first().cloned().unwrap_or_else(|| first.clone());
    Ok(CtsLayout {
        mode,
        last: int(-1),
        go_ll: leftmost_bit - ratio(1, 5),
        word_bits,
        trailing_last: blocks.last().map(|b| b.end.clone()).unwrap_or_else(|| &first + int(1)),
        first,
        blocks,
    })
}

struct CtsSignals {
    zero: SignalId,
    one: SignalId,
    first: SignalId,
    sep: SignalId,
    last: SignalId,
    go_ll: SignalId,
    go_rr: SignalId,
    true_r: SignalId,
    one_rr: SignalId,
    halt: Option<SignalId>,
}

fn lookup(machine: &SignalMachine, name: &str) -> Result<SignalId, CtsEncodeError> {
    machine
        .id_by_name(name)
        .ok_or_else(|| CtsEncodeError::MachineMismatch(name.to_string()))
}

impl CtsSignals {
    fn resolve(machine: &SignalMachine, variant: CtsVariant) -> Result<Self, CtsEncodeError> {
        Ok(CtsSignals {
            zero: lookup(machine, "zero")?,
            one: lookup(machine, "one")?,
            first: lookup(machine, "first")?,
            sep: lookup(machine, "sep")?,
            last: lookup(machine, "last")?,
            go_ll: lookup(machine, "go_LL")?,
            go_rr: lookup(machine, "go_RR")?,
            true_r: lookup(machine, "true_R")?,
            one_rr: lookup(machine, "one_RR")?,
            halt: match variant {
                CtsVariant::Standard => None,
                CtsVariant::TwoSignal => Some(lookup(machine, "halt")?),
            },
        })
    }
}

/// Encodes a system into an initial configuration for the given machine.
pub fn encode_cts(
    sys: &CyclicTagSystem,
    machine: &SignalMachine,
    mode: LayoutMode,
    variant: CtsVariant,
) -> Result<(Configuration, CtsLayout), CtsEncodeError> {
    let signals = CtsSignals::resolve(machine, variant)?;
    let layout = layout_cts(sys, mode, variant)?;

    let mut config = Configuration::new();
    let mut place = |position: &Rational, signal: SignalId| {
        config
            .place(position.clone(), signal)
            .expect("layout positions are strictly increasing");
    };

    place(&layout.last, signals.last);
    place(&layout.go_ll, signals.go_ll);
    for (position, &bit) in layout.word_bits.iter().zip(sys.word.bits()) {
        place(position, if bit { signals.one } else { signals.zero });
    }
    place(&layout.first, signals.first);
    let block_count = layout.blocks.len();
    for (i, block) in layout.blocks.iter().enumerate() {
        if sys.halt_index == Some(i) {
            let marker = signals.halt.unwrap_or(signals.one);
            place(&block.bits[0], marker);
        } else {
            for (position, &bit) in block.bits.iter().zip(sys.appendants[i].bits()) {
                place(position, if bit { signals.one } else { signals.zero });
            }
        }
        let delim = if i + 1 == block_count {
            signals.last
        } else {
            signals.sep
        };
        place(&block.end, delim);
    }

    Ok((config, layout))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeError {
    #[error("configuration contains no `first` signal")]
    NoFirst,
    #[error("configuration contains {0} `first` signals")]
    MultipleFirst(usize),
    #[error("machine lacks meta-signal `{0}`")]
    MissingSignal(String),
}

/// Reads the word: the one/zero signals strictly left of the unique
/// `first` signal. Errors when `first` is absent or ambiguous.
pub fn decode_word(
    config: &Configuration,
    machine: &SignalMachine,
) -> Result<Word, DecodeError> {
    let firsts = first_positions(config, machine)?;
    match firsts.len() {
        0 => Err(DecodeError::NoFirst),
        1 => Ok(read_left_of(config, machine, &firsts[0])),
        n => Err(DecodeError::MultipleFirst(n)),
    }
}

/// Reads the word left of the leftmost `first`. After a halt the stale
/// list-head marker survives next to the new one, and during a rotation
/// the re-creation transiently shows an extra `first` at the right end;
/// the word always sits left of the leftmost.
pub fn decode_word_at_leftmost_first(
    config: &Configuration,
    machine: &SignalMachine,
) -> Result<Word, DecodeError> {
    let firsts = first_positions(config, machine)?;
    match firsts.first() {
        None => Err(DecodeError::NoFirst),
        Some(position) => Ok(read_left_of(config, machine, position)),
    }
}

fn first_positions(
    config: &Configuration,
    machine: &SignalMachine,
) -> Result<Vec<Rational>, DecodeError> {
    let first = machine
        .id_by_name("first")
        .ok_or_else(|| DecodeError::MissingSignal("first".to_string()))?;
    Ok(config
        .iter()
        .filter(|(_, s)| *s == first)
        .map(|(p, _)| p.clone())
        .collect())
}

fn read_left_of(config: &Configuration, machine: &SignalMachine, limit: &Rational) -> Word {
    let zero = machine.id_by_name("zero");
    let one = machine.id_by_name("one");
    let mut bits = Vec::new();
    for (position, signal) in config.iter() {
        if position >= limit {
            break;
        }
        if Some(signal) == one {
            bits.push(true);
        } else if Some(signal) == zero {
            bits.push(false);
        }
    }
    Word(bits)
}

/// Status of a simulated run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtsSimStatus {
    /// The word emptied; `go_RR` was discarded at `first` and the machine
    /// stabilized.
    HaltEmptyWord,
    /// The halting appendant was activated and the machine stabilized.
    HaltAppendant,
    /// The requested iteration count was simulated.
    IterationLimit,
    /// The engine stopped for its own reasons (time or collision limit,
    /// suspected accumulation, or an unexpected stable state).
    Engine(RunStatus),
}

/// A simulated CTS run with per-iteration decoded words.
#[derive(Debug, Clone)]
pub struct CtsSimulation {
    /// `words[k]` is the decoded word after `k` iterations. For an
    /// appendant halt the last entry is the final word.
    pub words: Vec<Word>,
    pub status: CtsSimStatus,
    pub outcome: RunOutcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CtsSimError {
    #[error(transparent)]
    Encode(#[from] CtsEncodeError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Decode(#[from] DecodeError),
    #[error(transparent)]
    Sample(#[from] ConfigAtError),
    #[error("simulation needs at least two appendants: the rotation relies on a `sep` delimiter")]
    SingleAppendant,
}

/// Encodes and runs a system, decoding the word at every iteration
/// boundary (just before each `go_LL`/`last` bounce).
pub fn run_cts_simulation(
    sys: &CyclicTagSystem,
    machine: &SignalMachine,
    mode: LayoutMode,
    variant: CtsVariant,
    max_iterations: usize,
    limits: &RunLimits,
) -> Result<CtsSimulation, CtsSimError> {
    if sys.appendants.len() < 2 {
        return Err(CtsSimError::SingleAppendant);
    }
    let signals = CtsSignals::resolve(machine, variant)?;
    let (config, _layout) = encode_cts(sys, machine, mode, variant)?;

    let sorted = |mut ids: Vec<SignalId>| {
        ids.sort_unstable();
        ids
    };
    let bounce_inputs = sorted(vec![signals.go_ll, signals.last]);
    let empty_inputs = sorted(vec![signals.go_rr, signals.first]);
    let halt_inputs = match variant {
        CtsVariant::Standard => sorted(vec![signals.true_r, signals.one, signals.go_ll]),
        CtsVariant::TwoSignal => sorted(vec![signals.one_rr, signals.halt.unwrap()]),
    };

    let mut engine = Engine::new(machine, &config, limits.clone())?;
    let mut bounces: Vec<usize> = Vec::new();
    let mut halt_seen = false;
    let mut empty_seen = false;
    let run_status = loop {
        match engine.step() {
            StepOutcome::Batch { first_event, count } => {
                for idx in first_event..first_event + count {
                    let inputs = &engine.events()[idx].inputs;
                    if *inputs == bounce_inputs {
                        bounces.push(idx);
                    } else if *inputs == halt_inputs {
                        halt_seen = true;
                    } else if *inputs == empty_inputs {
                        empty_seen = true;
                    }
                }
                if bounces.len() > max_iterations {
                    break RunStatus::Interrupted;
                }
            }
            StepOutcome::Finished(status) => break status,
        }
    };
    let outcome = engine.finish(run_status);

    let mut words = Vec::with_capacity(bounces.len() + 1);
    for &bounce in &bounces {
        let sample = boundary_sample_time(&outcome.diagram.events, bounce);
        let boundary_config = outcome.diagram.config_at(&sample)?;
        words.push(decode_word_at_leftmost_first(&boundary_config, machine)?);
    }

    let status = match run_status {
        RunStatus::Halted if halt_seen => {
            words.push(decode_word_at_leftmost_first(
                &outcome.final_config,
                machine,
            )?);
            CtsSimStatus::HaltAppendant
        }
        RunStatus::Halted if empty_seen => CtsSimStatus::HaltEmptyWord,
        RunStatus::Interrupted => CtsSimStatus::IterationLimit,
        status => CtsSimStatus::Engine(status),
    };

    Ok(CtsSimulation {
        words,
        status,
        outcome,
    })
}

/// Midpoint between a bounce event and the latest strictly earlier event
/// time (or the initial instant): an exact sampling time guaranteed to
/// avoid every collision instant.
fn boundary_sample_time(events: &[CollisionEvent], bounce: usize) -> Rational {
    let bounce_time = &events[bounce].time;
    let mut previous = Rational::zero();
    for event in events[..bounce].iter().rev() {
        if &event.time < bounce_time {
            previous = event.time.clone();
            break;
        }
    }
    (&previous + bounce_time) / int(2)
}
