//! Exact event-driven simulation of signal machines.
//!
//! A signal machine is a finite set of meta-signals, each with a constant
//! rational speed, plus a deterministic set of collision rules mapping the
//! set of meta-signals meeting at a point to the set emitted from it. The
//! engine advances a finite configuration from collision to collision with
//! exact rational arithmetic and records the full space-time diagram.
//!
//! On top of the engine, this crate ships the reference constructions:
//!
//! * [`cts`] — a cyclic tag system interpreter and the 13-meta-signal /
//!   21-rule machine that simulates it (plus the 15/24 two-signal variant),
//! * [`ca`] — a radius-1 cellular automaton interpreter and the
//!   3-signals-per-state encoding (6 meta-signals / 8 rules for rule 110),
//! * [`pattern`] — the bouncing-signal generator for infinite periodic
//!   signal patterns,
//! * [`svg`] — space-time diagram rendering.

pub mod ca;
pub mod config;
pub mod cts;
pub mod engine;
pub mod machine;
pub mod pattern;
pub mod rational;
pub mod svg;
pub mod text;

pub use config::Configuration;
pub use engine::{run, RunLimits, RunOutcome, RunStatus, SpaceTimeDiagram};
pub use machine::{CollisionRule, MetaSignal, SignalId, SignalMachine};
pub use rational::Rational;
