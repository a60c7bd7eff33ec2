//! Cyclic tag systems: reference interpreter, simulating signal machine,
//! configuration encoding and decoding.
//!
//! A cyclic tag system is a binary word plus a circular list of binary
//! appendants. Each step removes the first bit of the word; if it was 1
//! the front appendant is appended to the word; then the list rotates by
//! one. Reaching the empty word halts. Optionally one appendant is
//! designated as the halting appendant: activating it (reading a 1 with
//! it at the front) halts the system with the word as it stands after the
//! removal.
//!
//! The interpreter in this module is the oracle that the signal machine
//! simulation is verified against.

mod encode;
mod machine;

pub use encode::{
    decode_word, decode_word_at_leftmost_first, encode_cts, run_cts_simulation, BlockLayout,
    CtsEncodeError, CtsLayout, CtsSimStatus, CtsSimulation, DecodeError, LayoutMode,
};
pub use machine::{build_cts_machine, build_cts_machine_two_signal, build_cts_machine_with,
    CtsMachineOptions, CtsVariant};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// A binary word over {0, 1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<bool>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &bit in &self.0 {
            write!(f, "{}", if bit { '1' } else { '0' })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid bit `{0}` in binary word")]
pub struct WordParseError(char);

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => return Err(WordParseError(other)),
            }
        }
        Ok(Word(bits))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CtsError {
    #[error("a cyclic tag system needs at least one appendant")]
    NoAppendants,
    #[error("halt index {index} out of range for {count} appendants")]
    HaltIndexOutOfRange { index: usize, count: usize },
}

/// A cyclic tag system instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicTagSystem {
    pub word: Word,
    pub appendants: Vec<Word>,
    /// Index of the halting appendant, if one is designated. Its stored
    /// content is immaterial: activating it halts the system.
    pub halt_index: Option<usize>,
}

/// Result of one update step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepResult {
    Next(CyclicTagSystem),
    /// The word was empty.
    HaltEmptyWord,
    /// The halting appendant was activated; carries the final word.
    HaltAppendant(Word),
}

/// Why a trace ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CtsHalt {
    EmptyWord,
    Appendant,
}

/// Word states of a run: `words[k]` is the word after `k` steps. For an
/// appendant halt the last entry is the final word after the halting
/// removal. `halt` is `None` when the step limit was reached first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CtsTrace {
    pub words: Vec<Word>,
    pub halt: Option<CtsHalt>,
}

impl CyclicTagSystem {
    pub fn new(
        word: Word,
        appendants: Vec<Word>,
        halt_index: Option<usize>,
    ) -> Result<Self, CtsError> {
        if appendants.is_empty() {
            return Err(CtsError::NoAppendants);
        }
        if let Some(index) = halt_index {
            if index >= appendants.len() {
                return Err(CtsError::HaltIndexOutOfRange {
                    index,
                    count: appendants.len(),
                });
            }
        }
        Ok(CyclicTagSystem {
            word,
            appendants,
            halt_index,
        })
    }

    /// One update: remove the first bit, append the front appendant when
    /// the bit was 1, rotate the list.
    pub fn step(&self) -> StepResult {
        let Some((&first_bit, rest)) = self.word.0.split_first() else {
            return StepResult::HaltEmptyWord;
        };
        let mut word = Word(rest.to_vec());
        if first_bit {
            if self.halt_index == Some(0) {
                return StepResult::HaltAppendant(word);
            }
            word.0.extend_from_slice(self.appendants[0].bits());
        }
        let mut appendants = self.appendants.clone();
        appendants.rotate_left(1);
        let halt_index = self
            .halt_index
            .map(|h| (h + self.appendants.len() - 1) % self.appendants.len());
        StepResult::Next(CyclicTagSystem {
            word,
            appendants,
            halt_index,
        })
    }

    /// Runs for at most `max_steps` steps, recording the word after each.
    /// An empty word halts before any further step is counted.
    pub fn run_trace(&self, max_steps: usize) -> CtsTrace {
        let mut words = vec![self.word.clone()];
        let mut sys = self.clone();
        for _ in 0..max_steps {
            if sys.word.is_empty() {
                return CtsTrace {
                    words,
                    halt: Some(CtsHalt::EmptyWord),
                };
            }
            match sys.step() {
                StepResult::Next(next) => {
                    words.push(next.word.clone());
                    sys = next;
                }
                StepResult::HaltAppendant(final_word) => {
                    words.push(final_word);
                    return CtsTrace {
                        words,
                        halt: Some(CtsHalt::Appendant),
                    };
                }
                StepResult::HaltEmptyWord => unreachable!("checked before stepping"),
            }
        }
        let halt = if sys.word.is_empty() {
            Some(CtsHalt::EmptyWord)
        } else {
            None
        };
        CtsTrace { words, halt }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CtsParseError {
    #[error("line {0}: expected `word <bits|-->`")]
    BadWordLine(usize),
    #[error("line {0}: expected `appendant <bits|-->` or `halt <index>`")]
    BadLine(usize),
    #[error("line {0}: invalid binary word")]
    BadBits(usize),
    #[error("the first directive must be `word`")]
    MissingWord,
    #[error("{0}")]
    Invalid(#[from] CtsError),
}

/// Parses the CTS text format: `word <bits>`, then `appendant <bits|-->`
/// lines, optionally `halt <index>`. `--` stands for the empty word.
pub fn parse_cts(text: &str) -> Result<CyclicTagSystem, CtsParseError> {
    let mut word: Option<Word> = None;
    let mut appendants: Vec<Word> = Vec::new();
    let mut halt_index: Option<usize> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        match tokens[0] {
            "word" if word.is_none() => {
                if tokens.len() != 2 {
                    return Err(CtsParseError::BadWordLine(line_no));
                }
                word = Some(parse_bits(tokens[1]).ok_or(CtsParseError::BadBits(line_no))?);
            }
            "appendant" if word.is_some() => {
                if tokens.len() != 2 {
                    return Err(CtsParseError::BadLine(line_no));
                }
                appendants.push(parse_bits(tokens[1]).ok_or(CtsParseError::BadBits(line_no))?);
            }
            "halt" if word.is_some() => {
                if tokens.len() != 2 {
                    return Err(CtsParseError::BadLine(line_no));
                }
                halt_index =
                    Some(tokens[1].parse().map_err(|_| CtsParseError::BadLine(line_no))?);
            }
            _ if word.is_none() => return Err(CtsParseError::MissingWord),
            _ => return Err(CtsParseError::BadLine(line_no)),
        }
    }

    let word = word.ok_or(CtsParseError::MissingWord)?;
    Ok(CyclicTagSystem::new(word, appendants, halt_index)?)
}

/// Emits the canonical CTS text form.
pub fn emit_cts(sys: &CyclicTagSystem) -> String {
    let show = |w: &Word| {
        if w.is_empty() {
            "--".to_string()
        } else {
            w.to_string()
        }
    };
    let mut out = format!("word {}\n", show(&sys.word));
    for appendant in &sys.appendants {
        out.push_str(&format!("appendant {}\n", show(appendant)));
    }
    if let Some(h) = sys.halt_index {
        out.push_str(&format!("halt {h}\n"));
    }
    out
}

fn parse_bits(token: &str) -> Option<Word> {
    if token == "--" {
        return Some(Word::empty());
    }
    token.parse().ok()
}
