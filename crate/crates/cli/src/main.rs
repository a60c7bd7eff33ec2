//! `agc` — signal machine toolbox.
//!
//! Validate, run and render machines; build cyclic-tag-system,
//! cellular-automaton and pattern-generator encodings; run seeded
//! verification suites against the reference interpreters.
//!
//! Exit codes: 0 success, 1 validation failure or verification mismatch,
//! 2 engine limit or suspected accumulation, 64 usage error, 74 I/O
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use agc_cli::suite::{
    generate_ca_instances, generate_cts_instances, verify_ca_suite, verify_cts_suite,
    CtsVerifyOptions,
};
use agc_core::ca::{build_ca_machine, encode_ca_cone, parse_ca};
use agc_core::cts::{
    build_cts_machine_with, encode_cts, parse_cts, CtsMachineOptions, CtsVariant, LayoutMode,
};
use agc_core::engine::{self, run, RunLimits, RunStatus};
use agc_core::machine::SignalMachine;
use agc_core::pattern::{
    assemble_pattern_machine, build_pattern_generator, build_pattern_generator_unequal,
    PatternSpec, UnequalPatternSpec,
};
use agc_core::rational::{parse_rational, Rational};
use agc_core::svg::{parse_style, render_svg, Style};
use agc_core::text::{emit_machine, parse_init, parse_machine};
use agc_core::Configuration;

/// Prints to stdout, ignoring broken pipes (e.g. piping into `head`).
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout(), $($arg)*);
    }};
}

const EXIT_OK: u8 = 0;
const EXIT_INVALID: u8 = 1;
const EXIT_LIMIT: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(name = "agc", version, about = "Exact signal machine simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LayoutArg {
    Integer,
    Dyadic,
}

impl From<LayoutArg> for LayoutMode {
    fn from(value: LayoutArg) -> Self {
        match value {
            LayoutArg::Integer => LayoutMode::Integer,
            LayoutArg::Dyadic => LayoutMode::Dyadic,
        }
    }
}

#[derive(Args)]
struct LimitArgs {
    /// Stop after this many collisions.
    #[arg(long)]
    max_collisions: Option<usize>,
    /// Stop at this time (a rational like `7/2`).
    #[arg(long)]
    max_time: Option<String>,
}

impl LimitArgs {
    fn build(&self) -> Result<RunLimits, String> {
        let mut limits = RunLimits::default();
        if let Some(n) = self.max_collisions {
            limits.max_collisions = n;
        }
        if let Some(t) = &self.max_time {
            limits.max_time = Some(parse_rational(t).map_err(|e| format!("--max-time: {e}"))?);
        }
        Ok(limits)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a machine file against the model invariants.
    Validate {
        #[arg(long)]
        machine: PathBuf,
    },
    /// Print the meta-signal and non-blank rule counts of a machine.
    Stats {
        #[arg(long)]
        machine: PathBuf,
    },
    /// Run a machine from its initial configuration.
    Run {
        #[arg(long)]
        machine: PathBuf,
        /// Initial configuration file (overrides `init` lines in the
        /// machine file).
        #[arg(long)]
        init: Option<PathBuf>,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Run a machine and write the space-time diagram as SVG.
    Render {
        #[arg(long)]
        machine: PathBuf,
        #[arg(long)]
        init: Option<PathBuf>,
        /// Output SVG path.
        #[arg(long)]
        svg: PathBuf,
        /// Style file: `<meta-signal> <css-color> <solid|dashed|dotted>
        /// <stroke-width>` per line.
        #[arg(long)]
        style: Option<PathBuf>,
        /// Output units per space/time unit.
        #[arg(long, default_value_t = 20.0)]
        scale: f64,
        #[command(flatten)]
        limits: LimitArgs,
    },
    /// Encode a cyclic tag system file into a machine+init file.
    EncodeCts {
        /// CTS file: `word <bits>`, `appendant <bits|-->`, `halt <index>`.
        input: PathBuf,
        /// Output machine+init file.
        output: PathBuf,
        #[arg(long, value_enum, default_value = "dyadic")]
        layout: LayoutArg,
        /// Use the 15 meta-signal / 24 rule two-signal machine.
        #[arg(long)]
        two_signal: bool,
        /// Add garbage-destroying rules (changes the rule count).
        #[arg(long)]
        clean: bool,
    },
    /// Encode a cellular automaton window into a machine+init file.
    EncodeCa {
        /// CA file: `states`, `local` table, `cells`/`left`/`right` window.
        input: PathBuf,
        /// Output machine+init file.
        output: PathBuf,
        /// Number of exactly simulated steps (sets the cone width).
        #[arg(long)]
        horizon: usize,
    },
    /// Generate a periodic pattern generator machine.
    GenPattern {
        /// Output machine+init file.
        output: PathBuf,
        /// Pattern period; letters are named mu_1 .. mu_<period>.
        #[arg(long)]
        period: usize,
        /// Border spacing d (emissions land 2d apart).
        #[arg(long, default_value = "4")]
        spacing: String,
        /// Comma-separated emission gaps for the unequal-spacing variant
        /// (overrides --spacing; one gap per letter).
        #[arg(long)]
        gaps: Option<String>,
    },
    /// Verify random cyclic tag systems against the interpreter.
    VerifyCts {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        two_signal: bool,
        #[arg(long, value_enum, default_value = "dyadic")]
        layout: LayoutArg,
        #[arg(long)]
        clean: bool,
        /// Generate no halting appendants.
        #[arg(long)]
        no_halt: bool,
    },
    /// Verify random cellular automata against the interpreter.
    VerifyCa {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run_command(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(code) => ExitCode::from(code),
    }
}

fn read(path: &Path) -> Result<String, u8> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_IO
    })
}

fn write(path: &Path, contents: &str) -> Result<(), u8> {
    fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        EXIT_IO
    })
}

/// Loads a machine file, mapping parse errors to usage failures and
/// validation violations to exit code 1.
fn load_machine(path: &Path) -> Result<(SignalMachine, Option<Configuration>), u8> {
    let text = read(path)?;
    let parsed = parse_machine(&text).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_USAGE
    })?;
    let violations = parsed.0.validate();
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("invalid: {v}");
        }
        return Err(EXIT_INVALID);
    }
    Ok(parsed)
}

fn load_config(
    machine: &SignalMachine,
    inline: Option<Configuration>,
    init: &Option<PathBuf>,
) -> Result<Configuration, u8> {
    match init {
        Some(path) => {
            let text = read(path)?;
            parse_init(machine, &text).map_err(|e| {
                eprintln!("error: {}: {e}", path.display());
                EXIT_USAGE
            })
        }
        None => Ok(inline.unwrap_or_default()),
    }
}

fn run_command(command: Command) -> Result<u8, u8> {
    match command {
        Command::Validate { machine } => {
            let text = read(&machine)?;
            let (parsed, _) = parse_machine(&text).map_err(|e| {
                eprintln!("error: {}: {e}", machine.display());
                EXIT_USAGE
            })?;
            let violations = parsed.validate();
            if violations.is_empty() {
                out!(
                    "valid: {} meta-signals, {} rules",
                    parsed.signals().len(),
                    parsed.rules().len()
                );
                Ok(EXIT_OK)
            } else {
                for v in &violations {
                    out!("violation: {v}");
                }
                Ok(EXIT_INVALID)
            }
        }

        Command::Stats { machine } => {
            let (machine, _) = load_machine(&machine)?;
            let stats = machine.stats();
            out!(
                "{} meta-signals, {} non-blank rules",
                stats.meta_signals, stats.non_blank_rules
            );
            Ok(EXIT_OK)
        }

        Command::Run {
            machine,
            init,
            limits,
        } => {
            let (machine, inline) = load_machine(&machine)?;
            let config = load_config(&machine, inline, &init)?;
            let limits = limits.build().map_err(|e| {
                eprintln!("error: {e}");
                EXIT_USAGE
            })?;
            let outcome = run(&machine, &config, &limits).expect("machine validated above");
            print_outcome(&machine, &outcome);
            Ok(status_exit(outcome.status))
        }

        Command::Render {
            machine,
            init,
            svg,
            style,
            scale,
            limits,
        } => {
            let (machine, inline) = load_machine(&machine)?;
            let config = load_config(&machine, inline, &init)?;
            let limits = limits.build().map_err(|e| {
                eprintln!("error: {e}");
                EXIT_USAGE
            })?;
            let style = match style {
                None => Style::default_for(&machine),
                Some(path) => {
                    let text = read(&path)?;
                    parse_style(&text, &machine).map_err(|e| {
                        eprintln!("error: {}: {e}", path.display());
                        EXIT_USAGE
                    })?
                }
            };
            let outcome = run(&machine, &config, &limits).expect("machine validated above");
            write(&svg, &render_svg(&outcome.diagram, &machine, &style, scale))?;
            out!(
                "{}, {} collisions, wrote {}",
                status_name(outcome.status),
                outcome.diagram.events.len(),
                svg.display()
            );
            Ok(status_exit(outcome.status))
        }

        Command::EncodeCts {
            input,
            output,
            layout,
            two_signal,
            clean,
        } => {
            let text = read(&input)?;
            let sys = parse_cts(&text).map_err(|e| {
                eprintln!("error: {}: {e}", input.display());
                EXIT_USAGE
            })?;
            let variant = if two_signal {
                CtsVariant::TwoSignal
            } else {
                CtsVariant::Standard
            };
            let machine = build_cts_machine_with(CtsMachineOptions { variant, clean });
            let (config, _) = encode_cts(&sys, &machine, layout.into(), variant).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_INVALID
            })?;
            write(&output, &emit_machine(&machine, Some(&config)))?;
            out!("wrote {}", output.display());
            Ok(EXIT_OK)
        }

        Command::EncodeCa {
            input,
            output,
            horizon,
        } => {
            let text = read(&input)?;
            let (ca, window) = parse_ca(&text).map_err(|e| {
                eprintln!("error: {}: {e}", input.display());
                EXIT_USAGE
            })?;
            let window = window.ok_or_else(|| {
                eprintln!(
                    "error: {}: needs `cells`, `left` and `right` window lines",
                    input.display()
                );
                EXIT_USAGE
            })?;
            let machine = build_ca_machine(&ca);
            let config = encode_ca_cone(&ca, &machine, &window, horizon).map_err(|e| {
                eprintln!("error: {e}");
                EXIT_USAGE
            })?;
            write(&output, &emit_machine(&machine, Some(&config)))?;
            out!("wrote {}", output.display());
            Ok(EXIT_OK)
        }

        Command::GenPattern {
            output,
            period,
            spacing,
            gaps,
        } => {
            if period == 0 {
                eprintln!("error: --period must be at least 1");
                return Err(EXIT_USAGE);
            }
            let emitted: Vec<String> = (1..=period).map(|i| format!("mu_{i}")).collect();
            let fragment = match &gaps {
                None => {
                    let spacing = parse_rational(&spacing).map_err(|e| {
                        eprintln!("error: --spacing: {e}");
                        EXIT_USAGE
                    })?;
                    build_pattern_generator(&PatternSpec {
                        emitted: emitted.clone(),
                        spacing,
                    })
                }
                Some(list) => {
                    let gaps: Result<Vec<Rational>, _> =
                        list.split(',').map(|g| parse_rational(g.trim())).collect();
                    let gaps = gaps.map_err(|e| {
                        eprintln!("error: --gaps: {e}");
                        EXIT_USAGE
                    })?;
                    build_pattern_generator_unequal(&UnequalPatternSpec {
                        emitted: emitted.clone(),
                        gaps,
                    })
                }
            }
            .map_err(|e| {
                eprintln!("error: {e}");
                EXIT_USAGE
            })?;
            let (machine, config) =
                assemble_pattern_machine(&emitted, &fragment).expect("generated names are valid");
            write(&output, &emit_machine(&machine, Some(&config)))?;
            out!("wrote {}", output.display());
            Ok(EXIT_OK)
        }

        Command::VerifyCts {
            count,
            seed,
            two_signal,
            layout,
            clean,
            no_halt,
        } => {
            if count == 0 {
                eprintln!("error: --count must be at least 1");
                return Err(EXIT_USAGE);
            }
            let variant = if two_signal {
                CtsVariant::TwoSignal
            } else {
                CtsVariant::Standard
            };
            let mode: LayoutMode = layout.into();
            // The integer layout cannot place halting appendants safely.
            let include_halt = !no_halt && mode == LayoutMode::Dyadic;
            let instances = generate_cts_instances(count, seed, include_halt);
            let report = verify_cts_suite(
                &instances,
                seed,
                CtsVerifyOptions {
                    variant,
                    mode,
                    clean,
                },
            );
            {
                use std::io::Write;
                let _ = write!(std::io::stdout(), "{report}");
            }
            if report.all_passed() {
                Ok(EXIT_OK)
            } else {
                for failure in &report.failures {
                    let path = format!("cts-failure-{}.cts", failure.index);
                    write(Path::new(&path), &failure.reproduction)?;
                    out!("reproduction written to {path}");
                }
                Ok(EXIT_INVALID)
            }
        }

        Command::VerifyCa { count, seed } => {
            if count == 0 {
                eprintln!("error: --count must be at least 1");
                return Err(EXIT_USAGE);
            }
            let instances = generate_ca_instances(count, seed);
            let report = verify_ca_suite(&instances, seed);
            {
                use std::io::Write;
                let _ = write!(std::io::stdout(), "{report}");
            }
            if report.all_passed() {
                Ok(EXIT_OK)
            } else {
                for failure in &report.failures {
                    let path = format!("ca-failure-{}.ca", failure.index);
                    write(Path::new(&path), &failure.reproduction)?;
                    out!("reproduction written to {path}");
                }
                Ok(EXIT_INVALID)
            }
        }
    }
}

fn status_name(status: RunStatus) -> &'static str {
    match status {
        RunStatus::Halted => "Halted",
        RunStatus::TimeLimit => "TimeLimit",
        RunStatus::CollisionLimit => "CollisionLimit",
        RunStatus::AccumulationSuspected => "AccumulationSuspected",
        RunStatus::Interrupted => "Interrupted",
    }
}

fn status_exit(status: RunStatus) -> u8 {
    match status {
        RunStatus::Halted => EXIT_OK,
        _ => EXIT_LIMIT,
    }
}

fn print_outcome(machine: &SignalMachine, outcome: &engine::RunOutcome) {
    out!(
        "{}, {} collisions",
        status_name(outcome.status),
        outcome.diagram.events.len()
    );
    out!(
        "time complexity: {} ({} excluding blank crossings)",
        engine::metrics::time_complexity(&outcome.diagram),
        engine::metrics::time_complexity_non_blank(&outcome.diagram)
    );
    out!("space cut: {}", engine::metrics::space_cut(&outcome.diagram));
    out!("final configuration:");
    for (position, signal) in outcome.final_config.iter() {
        out!(
            "init {} {}",
            agc_core::rational::format_rational(position),
            machine.name(signal)
        );
    }
}
