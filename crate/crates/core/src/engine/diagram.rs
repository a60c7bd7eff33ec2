//! Space-time diagrams: collision events and signal segments.

use thiserror::Error;

use crate::config::Configuration;
use crate::machine::{SignalId, SignalMachine};
use crate::rational::{format_rational, Rational};

/// Index of a collision event, dense in (time, position) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EventId(pub usize);

/// A collision: the meeting set ends here, the output set starts here.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollisionEvent {
    pub id: EventId,
    pub time: Rational,
    pub position: Rational,
    /// Meeting set, sorted by speed.
    pub inputs: Vec<SignalId>,
    /// Emitted set, sorted by speed.
    pub outputs: Vec<SignalId>,
    /// True when the outputs equal the inputs, i.e. the signals cross
    /// unaffected (declared blank, undeclared meeting, or a declared rule
    /// whose outputs reproduce its inputs).
    pub blank: bool,
    /// Declared rule applied here, if any; `None` for default crossings.
    pub rule: Option<usize>,
}

/// Where a segment begins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentStart {
    /// Present in the initial configuration.
    Initial,
    /// Emitted by a collision.
    Emitted(EventId),
}

/// Where a segment ends.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentEnd {
    /// Consumed by a collision.
    Consumed(EventId),
    /// Still alive at the end of the computed portion of the diagram.
    /// The stored endpoint sits at the diagram's cut time.
    AtHorizon,
}

/// The trace of one signal: a line segment of slope 1/speed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignalSegment {
    pub signal: SignalId,
    /// Copy of the meta-signal's speed, making the diagram self-contained.
    pub speed: Rational,
    pub start_position: Rational,
    pub start_time: Rational,
    pub start: SegmentStart,
    pub end_position: Rational,
    pub end_time: Rational,
    pub end: SegmentEnd,
}

/// Upper time bound of a diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Horizon {
    /// The run ended in a stable configuration; the diagram extends to
    /// any time (open segments extrapolate past the cut).
    Unbounded,
    /// The diagram is complete up to this time only.
    At(Rational),
}

/// The full trace of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceTimeDiagram {
    pub initial: Configuration,
    pub events: Vec<CollisionEvent>,
    pub segments: Vec<SignalSegment>,
    pub horizon: Horizon,
    /// Time at which open segment endpoints are recorded.
    pub cut_time: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigAtError {
    #[error("time {0} is negative")]
    NegativeTime(String),
    #[error("time {0} is beyond the diagram horizon")]
    BeyondHorizon(String),
    #[error("configuration is undefined at collision time {0}")]
    AtCollisionTime(String),
}

impl SpaceTimeDiagram {
    /// The exact configuration at time `t`.
    ///
    /// `t` must be non-negative, within the horizon, and distinct from
    /// every collision time (a collision point holds the rule value, not
    /// a signal, at that instant).
    pub fn config_at(&self, t: &Rational) -> Result<Configuration, ConfigAtError> {
        use num_traits::Zero;
        if t < &Rational::zero() {
            return Err(ConfigAtError::NegativeTime(format_rational(t)));
        }
        if let Horizon::At(h) = &self.horizon {
            if t > h {
                return Err(ConfigAtError::BeyondHorizon(format_rational(t)));
            }
        }
        if self.events.iter().any(|e| &e.time == t) {
            return Err(ConfigAtError::AtCollisionTime(format_rational(t)));
        }
        let mut config = Configuration::new();
        for seg in &self.segments {
            if !self.segment_alive_at(seg, t) {
                continue;
            }
            let position =
                &seg.start_position + &seg.speed * (t - &seg.start_time);
            config
                .place(position, seg.signal)
                .expect("distinct positions away from collision times");
        }
        Ok(config)
    }

    fn segment_alive_at(&self, seg: &SignalSegment, t: &Rational) -> bool {
        if t < &seg.start_time {
            return false;
        }
        match seg.end {
            SegmentEnd::Consumed(_) => t < &seg.end_time,
            SegmentEnd::AtHorizon => match &self.horizon {
                Horizon::Unbounded => true,
                Horizon::At(h) => t <= h,
            },
        }
    }

    /// Segments consumed by each event, as segment indices.
    pub fn incoming_segments(&self) -> Vec<Vec<usize>> {
        let mut incoming = vec![Vec::new(); self.events.len()];
        for (i, seg) in self.segments.iter().enumerate() {
            if let SegmentEnd::Consumed(EventId(e)) = seg.end {
                incoming[e].push(i);
            }
        }
        incoming
    }

    /// Segments emitted by each event, as segment indices.
    pub fn outgoing_segments(&self) -> Vec<Vec<usize>> {
        let mut outgoing = vec![Vec::new(); self.events.len()];
        for (i, seg) in self.segments.iter().enumerate() {
            if let SegmentStart::Emitted(EventId(e)) = seg.start {
                outgoing[e].push(i);
            }
        }
        outgoing
    }

    /// Checks every structural diagram invariant and returns the list of
    /// violations found (empty for a conforming diagram): exact segment
    /// geometry, endpoint bookkeeping against events and the initial
    /// configuration, event ordering, rule consistency, and strictly
    /// increasing time along causality edges.
    pub fn audit(&self, machine: &SignalMachine) -> Vec<String> {
        let mut issues = Vec::new();
        let push = |issues: &mut Vec<String>, msg: String| issues.push(msg);

        for (i, e) in self.events.iter().enumerate() {
            if e.id != EventId(i) {
                push(&mut issues, format!("event {i} has id {:?}", e.id));
            }
            if e.inputs.len() < 2 {
                push(&mut issues, format!("event {i} has fewer than two inputs"));
            }
            use num_traits::Zero;
            if e.time <= Rational::zero() {
                push(&mut issues, format!("event {i} at non-positive time"));
            }
            if i > 0 {
                let prev = &self.events[i - 1];
                let ordered = prev.time < e.time
                    || (prev.time == e.time && prev.position < e.position);
                if !ordered {
                    push(
                        &mut issues,
                        format!("event {i} out of (time, position) order"),
                    );
                }
            }
            match machine.resolve(&e.inputs) {
                Ok(resolution) => {
                    if resolution.outputs != e.outputs {
                        push(
                            &mut issues,
                            format!(
                                "event {i}: outputs {} disagree with rule table {}",
                                machine.set_display(&e.outputs),
                                machine.set_display(&resolution.outputs)
                            ),
                        );
                    }
                }
                Err(err) => push(&mut issues, format!("event {i}: {err}")),
            }
            if e.blank != (e.inputs == e.outputs) {
                push(&mut issues, format!("event {i}: blank flag inconsistent"));
            }
        }

        let mut consumed_at = vec![Vec::new(); self.events.len()];
        let mut emitted_at = vec![Vec::new(); self.events.len()];
        for (i, seg) in self.segments.iter().enumerate() {
            if &seg.speed != machine.speed(seg.signal) {
                push(&mut issues, format!("segment {i}: stored speed differs from machine"));
            }
            let dx = &seg.end_position - &seg.start_position;
            let dt = &seg.end_time - &seg.start_time;
            if dx != &seg.speed * &dt {
                push(&mut issues, format!("segment {i}: endpoints off the signal line"));
            }
            use num_traits::Zero;
            if dt < Rational::zero() {
                push(&mut issues, format!("segment {i}: negative duration"));
            }
            match seg.start {
                SegmentStart::Initial => {
                    if !seg.start_time.is_zero() {
                        push(&mut issues, format!("segment {i}: initial start not at time 0"));
                    }
                    if self.initial.signal_at(&seg.start_position) != Some(seg.signal) {
                        push(
                            &mut issues,
                            format!("segment {i}: start not in the initial configuration"),
                        );
                    }
                }
                SegmentStart::Emitted(EventId(e)) => match self.events.get(e) {
                    None => push(&mut issues, format!("segment {i}: dangling start event")),
                    Some(event) => {
                        if event.time != seg.start_time || event.position != seg.start_position {
                            push(&mut issues, format!("segment {i}: start off its event point"));
                        }
                        emitted_at[e].push(seg.signal);
                    }
                },
            }
            match seg.end {
                SegmentEnd::Consumed(EventId(e)) => match self.events.get(e) {
                    None => push(&mut issues, format!("segment {i}: dangling end event")),
                    Some(event) => {
                        if event.time != seg.end_time || event.position != seg.end_position {
                            push(&mut issues, format!("segment {i}: end off its event point"));
                        }
                        if seg.end_time <= seg.start_time {
                            push(
                                &mut issues,
                                format!("segment {i}: consumed no later than emitted"),
                            );
                        }
                        consumed_at[e].push(seg.signal);
                    }
                },
                SegmentEnd::AtHorizon => {
                    if seg.end_time != self.cut_time {
                        push(&mut issues, format!("segment {i}: open end not at the cut time"));
                    }
                }
            }
        }

        for (i, e) in self.events.iter().enumerate() {
            let mut consumed = std::mem::take(&mut consumed_at[i]);
            consumed.sort_unstable();
            if consumed != e.inputs {
                push(
                    &mut issues,
                    format!(
                        "event {i}: consumed segments {} do not match inputs {}",
                        machine.set_display(&consumed),
                        machine.set_display(&e.inputs)
                    ),
                );
            }
            let mut emitted = std::mem::take(&mut emitted_at[i]);
            emitted.sort_unstable();
            if emitted != e.outputs {
                push(
                    &mut issues,
                    format!(
                        "event {i}: emitted segments {} do not match outputs {}",
                        machine.set_display(&emitted),
                        machine.set_display(&e.outputs)
                    ),
                );
            }
        }

        let expected = self.initial.len()
            + self
                .events
                .iter()
                .map(|e| e.outputs.len())
                .sum::<usize>();
        if self.segments.len() != expected {
            push(
                &mut issues,
                format!(
                    "segment count {} differs from initial + emitted = {expected}",
                    self.segments.len()
                ),
            );
        }

        issues
    }
}
