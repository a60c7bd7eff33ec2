//! The signal machines that simulate cyclic tag systems.
//!
//! The standard machine has 13 meta-signals and 21 non-blank rules. The
//! word sits as static bit signals between `last` and `first`; the
//! circular list follows as appendant blocks separated by `sep` signals
//! and closed by a trailing `last`. Each iteration, `go_LL` bounces off
//! `last` into `go_RR`, which erases the first word bit and sends its
//! value toward the list. At `first` the rotation starts: a speed-2
//! signal sets the front appendant in motion (leaving copies in place
//! only when the consumed bit was 1, which is how appending happens —
//! `first` then moves one block right, absorbing the copies into the
//! word), the translated appendant crosses the list and is re-created
//! behind the old trailing `last` with all distances preserved, and a
//! fresh `go_LL` restarts the cycle.
//!
//! Halting: the empty word makes `go_RR` meet `first` and disappear. The
//! halting appendant is a single `one` placed at exactly 2/3 of its
//! block, the point where the returning `go_LL` meets the bit carrier
//! `true_R`; the three-input rule {true_R, one, go_LL} -> {true_R}
//! destroys the relay and the machine stabilizes.
//!
//! The two-signal variant trades the three-input collision for two extra
//! meta-signals `halt` and `halt_R` (15 meta-signals, 24 non-blank
//! rules, every non-blank rule binary). The halt appendant is a `halt`
//! signal processed like a 1 during rotation, except that it crosses the
//! re-creation `first` without spawning lattice signals; on activation it
//! absorbs the rotation starter and the carrier, stopping the machine at
//! once.

use crate::machine::{MetaSignal, RuleSpec, SignalMachine};
use crate::rational::int;

/// Which simulating machine to build and how to encode halting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CtsVariant {
    /// 13 meta-signals, 21 non-blank rules, three-input halt rule.
    #[default]
    Standard,
    /// 15 meta-signals, 24 non-blank rules, two-input rules only.
    TwoSignal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CtsMachineOptions {
    pub variant: CtsVariant,
    /// Rewrite the right-escaping blank crossings into destructive rules
    /// so garbage signals are cleaned up. Changes the non-blank rule
    /// count, so it is off by default.
    pub clean: bool,
}

/// The 13 meta-signal / 21 non-blank rule machine.
pub fn build_cts_machine() -> SignalMachine {
    build_cts_machine_with(CtsMachineOptions::default())
}

/// The 15 meta-signal / 24 non-blank rule variant using only two-input
/// non-blank rules.
pub fn build_cts_machine_two_signal() -> SignalMachine {
    build_cts_machine_with(CtsMachineOptions {
        variant: CtsVariant::TwoSignal,
        clean: false,
    })
}

pub fn build_cts_machine_with(options: CtsMachineOptions) -> SignalMachine {
    let mut signals = vec![
        MetaSignal::new("go_LL", int(-2)),
        MetaSignal::new("zero", int(0)),
        MetaSignal::new("one", int(0)),
        MetaSignal::new("first", int(0)),
        MetaSignal::new("sep", int(0)),
        MetaSignal::new("last", int(0)),
        MetaSignal::new("zero_R", int(1)),
        MetaSignal::new("one_R", int(1)),
        MetaSignal::new("false_R", int(1)),
        MetaSignal::new("true_R", int(1)),
        MetaSignal::new("zero_RR", int(2)),
        MetaSignal::new("one_RR", int(2)),
        MetaSignal::new("go_RR", int(2)),
    ];

    let mut rules = vec![
        // Word consumption: go_RR erases the first bit, leaves the new
        // left marker behind and sends the bit value toward the list.
        RuleSpec::new(["go_RR", "zero"], ["last", "zero_R"]),
        RuleSpec::new(["go_RR", "one"], ["last", "one_R"]),
        // Empty word: go_RR is just discarded.
        RuleSpec::new(["go_RR", "first"], ["first"]),
        // Rotation start after a 1: copies stay in place, speed-1
        // duplicates travel right.
        RuleSpec::new(["one_RR", "zero"], ["zero", "zero_R", "one_RR"]),
        RuleSpec::new(["one_RR", "one"], ["one", "one_R", "one_RR"]),
        RuleSpec::new(["one_RR", "sep"], ["go_LL", "last", "false_R"]),
        // Rotation start after a 0: the appendant is detached.
        RuleSpec::new(["zero_RR", "zero"], ["zero_R", "zero_RR"]),
        RuleSpec::new(["zero_RR", "one"], ["one_R", "zero_RR"]),
        RuleSpec::new(["zero_RR", "sep"], ["go_LL", "last", "false_R"]),
        // The bit carrier reaches the block's sep-turned-last and makes
        // it the new list head.
        RuleSpec::new(["true_R", "last"], ["first", "false_R"]),
        // Re-creation at the right end: the leading delimiter opens,
        // bits re-enter through first, the trailing delimiter closes.
        RuleSpec::new(["false_R", "last"], ["first", "one_R"]),
        RuleSpec::new(["one_R", "first"], ["first", "true_R", "one_RR"]),
        RuleSpec::new(["zero_R", "first"], ["first", "false_R", "zero_RR"]),
        RuleSpec::new(["false_R", "first"], ["sep", "go_RR"]),
        // go_RR stamps the translated bits back down and closes with the
        // new trailing last.
        RuleSpec::new(["go_RR", "false_R"], ["zero", "go_RR"]),
        RuleSpec::new(["go_RR", "true_R"], ["one", "go_RR"]),
        RuleSpec::new(["go_RR", "one_R"], ["last"]),
        // The returning go_LL restores the carried bit and relays the
        // next iteration.
        RuleSpec::new(["false_R", "go_LL"], ["go_LL", "true_R"]),
        RuleSpec::new(["go_LL", "first"], ["go_LL"]),
        RuleSpec::new(["go_LL", "last"], ["go_RR"]),
    ];

    // Crossings listed in the collision table.
    let mut blanks: Vec<[&str; 2]> = vec![
        ["true_R", "zero"],
        ["true_R", "one"],
        ["true_R", "go_LL"],
        ["false_R", "zero"],
        ["false_R", "one"],
        ["false_R", "sep"],
        ["one_R", "zero"],
        ["one_R", "one"],
        ["one_R", "sep"],
        ["one_R", "last"],
        ["one_R", "go_LL"],
        ["zero_R", "zero"],
        ["zero_R", "one"],
        ["zero_R", "sep"],
        ["zero_R", "last"],
        ["zero_R", "go_LL"],
        ["go_LL", "zero"],
        ["go_LL", "one"],
    ];
    let escaping: [[&str; 2]; 6] = [
        ["one_RR", "one_R"],
        ["one_RR", "false_R"],
        ["one_RR", "true_R"],
        ["zero_RR", "one_R"],
        ["zero_RR", "false_R"],
        ["zero_RR", "true_R"],
    ];
    if options.clean {
        for [rr, carrier] in escaping {
            rules.push(RuleSpec::new([rr, carrier], [carrier]));
        }
    } else {
        blanks.extend(escaping);
    }

    match options.variant {
        CtsVariant::Standard => {
            // The halt rule: destroy the halt bit and the relay.
            rules.push(RuleSpec::new(["true_R", "one", "go_LL"], ["true_R"]));
            // Three-signal crossings of word bits, their copies and the
            // returning go_LL.
            rules.push(RuleSpec::blank(["zero_R", "zero", "go_LL"]));
            rules.push(RuleSpec::blank(["zero_R", "one", "go_LL"]));
            rules.push(RuleSpec::blank(["one_R", "zero", "go_LL"]));
            rules.push(RuleSpec::blank(["one_R", "one", "go_LL"]));
        }
        CtsVariant::TwoSignal => {
            signals.push(MetaSignal::new("halt", int(0)));
            signals.push(MetaSignal::new("halt_R", int(1)));
            // Activation: absorb the rotation starter and the carrier.
            // first never moves past halt and the relay dies with them.
            rules.push(RuleSpec::new(["one_RR", "halt"], ["halt"]));
            rules.push(RuleSpec::new(["true_R", "halt"], ["halt"]));
            // Rotation without activation: halt travels like a 1 but
            // crosses the re-creation first without spawning a lattice;
            // go_RR puts it back down.
            rules.push(RuleSpec::new(["zero_RR", "halt"], ["halt_R", "zero_RR"]));
            rules.push(RuleSpec::new(["go_RR", "halt_R"], ["halt", "go_RR"]));
            blanks.extend([
                ["halt_R", "zero"],
                ["halt_R", "one"],
                ["halt_R", "first"],
                ["halt_R", "sep"],
                ["halt_R", "last"],
                ["halt_R", "go_LL"],
            ]);
        }
    }

    for blank in blanks {
        rules.push(RuleSpec::blank(blank));
    }

    SignalMachine::new(signals, rules).expect("the CTS machine tables are well formed")
}
