//! Exact event-driven execution of signal machines.
//!
//! The engine advances a finite configuration from collision to collision.
//! Between collisions every signal moves uniformly, so the next event time
//! is the minimum over meeting times of converging signal pairs, computed
//! exactly. Candidate meetings are kept in a priority queue keyed by exact
//! rational time; a pair is enqueued whenever it becomes spatially
//! adjacent, which is sufficient because the earliest future meeting is
//! always between signals that were adjacent at some point after their
//! birth. All meetings sharing the minimal time are applied in one step,
//! grouped by exact position and ordered left to right.

mod diagram;
pub mod metrics;

pub use diagram::{
    CollisionEvent, ConfigAtError, EventId, Horizon, SegmentEnd, SegmentStart,
    SignalSegment, SpaceTimeDiagram,
};

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet, VecDeque};

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::config::Configuration;
use crate::machine::{SignalId, SignalMachine, Violation};
use crate::rational::{int, Rational};

/// Run limits and the accumulation guard parameters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunLimits {
    /// Stop with `CollisionLimit` once this many events were applied.
    pub max_collisions: usize,
    /// Stop with `TimeLimit` before any event at or past this time.
    pub max_time: Option<Rational>,
    /// Accumulation guard window, see [`RunLimits::default`].
    pub accumulation_window: AccumulationWindow,
}

/// Guard heuristic: suspect an accumulation when `events` consecutive
/// event batches show strictly shrinking time gaps, all within a time
/// span of at most `span`, at positions confined to a zone the machine's
/// fastest signals could reach within that span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccumulationWindow {
    pub events: usize,
    pub span: Rational,
}

impl Default for RunLimits {
    fn default() -> Self {
        RunLimits {
            max_collisions: 100_000,
            max_time: None,
            accumulation_window: AccumulationWindow {
                events: 64,
                span: int(1),
            },
        }
    }
}

impl RunLimits {
    pub fn with_max_time(mut self, t: Rational) -> Self {
        self.max_time = Some(t);
        self
    }

    pub fn with_max_collisions(mut self, n: usize) -> Self {
        self.max_collisions = n;
        self
    }
}

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    /// Stable configuration: no collision is possible anymore.
    Halted,
    /// The time horizon was reached first.
    TimeLimit,
    /// The collision budget was exhausted.
    CollisionLimit,
    /// The accumulation guard fired (Zeno behaviour suspected).
    AccumulationSuspected,
    /// A stepping driver stopped the run; never produced by [`run`].
    Interrupted,
}

/// Result of a run: outcome tag, final configuration sampled at the
/// diagram's cut time, and the full space-time diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub final_config: Configuration,
    pub diagram: SpaceTimeDiagram,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("machine is invalid: {}", format_violations(.0))]
    InvalidMachine(Vec<Violation>),
    #[error("configuration references a meta-signal not in the machine")]
    InvalidConfiguration,
    #[error("invalid limits: {0}")]
    InvalidLimits(&'static str),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// One live signal instance between collisions.
#[derive(Debug, Clone)]
struct LiveSignal {
    token: u64,
    signal: SignalId,
    speed: Rational,
    born_position: Rational,
    born_time: Rational,
    /// Intercept of the signal's line: position at time 0.
    base: Rational,
    start: SegmentStart,
}

impl LiveSignal {
    fn position_at(&self, t: &Rational) -> Rational {
        use num_traits::Zero;
        if self.speed.is_zero() {
            self.born_position.clone()
        } else {
            &self.base + &self.speed * t
        }
    }
}

/// A candidate meeting between two signal instances, keyed by exact time.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Candidate {
    time: Rational,
    a: u64,
    b: u64,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.time
            .cmp(&other.time)
            .then_with(|| self.a.cmp(&other.a))
            .then_with(|| self.b.cmp(&other.b))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Outcome of one engine step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepOutcome {
    /// One batch of simultaneous events was applied; the new events are
    /// `events[first_event..first_event + count]`.
    Batch { first_event: usize, count: usize },
    /// The run is over; call [`Engine::finish`].
    Finished(RunStatus),
}

/// Stepwise engine; [`run`] drives it to completion.
pub struct Engine<'m> {
    machine: &'m SignalMachine,
    limits: RunLimits,
    initial: Configuration,
    live: Vec<LiveSignal>,
    alive: HashSet<u64>,
    index_of: HashMap<u64, usize>,
    heap: BinaryHeap<Reverse<Candidate>>,
    events: Vec<CollisionEvent>,
    segments: Vec<SignalSegment>,
    now: Rational,
    next_token: u64,
    guard: Guard,
    finished: Option<RunStatus>,
}

impl<'m> Engine<'m> {
    pub fn new(
        machine: &'m SignalMachine,
        initial: &Configuration,
        limits: RunLimits,
    ) -> Result<Self, EngineError> {
        let violations = machine.validate();
        if !violations.is_empty() {
            return Err(EngineError::InvalidMachine(violations));
        }
        if limits.max_collisions == 0 {
            return Err(EngineError::InvalidLimits("max_collisions must be at least 1"));
        }
        if limits.accumulation_window.events == 0 {
            return Err(EngineError::InvalidLimits("accumulation window needs at least 1 event"));
        }
        if limits.accumulation_window.span <= Rational::zero() {
            return Err(EngineError::InvalidLimits("accumulation window span must be positive"));
        }

        let v_max = machine
            .signals()
            .iter()
            .map(|s| s.speed.abs())
            .max()
            .unwrap_or_else(Rational::zero);
        let guard = Guard::new(&limits.accumulation_window, &v_max);

        let mut engine = Engine {
            machine,
            limits,
            initial: initial.clone(),
            live: Vec::with_capacity(initial.len()),
            alive: HashSet::new(),
            index_of: HashMap::new(),
            heap: BinaryHeap::new(),
            events: Vec::new(),
            segments: Vec::new(),
            now: Rational::zero(),
            next_token: 0,
            guard,
            finished: None,
        };

        for (position, signal) in initial.iter() {
            if signal.0 >= machine.signals().len() {
                return Err(EngineError::InvalidConfiguration);
            }
            let live = engine.spawn(signal, position.clone(), Rational::zero(), SegmentStart::Initial);
            engine.live.push(live);
        }
        engine.rebuild_index();
        for i in 0..engine.live.len().saturating_sub(1) {
            engine.enqueue_pair(i, i + 1);
        }
        Ok(engine)
    }

    pub fn events(&self) -> &[CollisionEvent] {
        &self.events
    }

    pub fn now(&self) -> &Rational {
        &self.now
    }

    fn spawn(
        &mut self,
        signal: SignalId,
        position: Rational,
        time: Rational,
        start: SegmentStart,
    ) -> LiveSignal {
        let token = self.next_token;
        self.next_token += 1;
        self.alive.insert(token);
        let speed = self.machine.speed(signal).clone();
        let base = &position - &speed * &time;
        LiveSignal {
            token,
            signal,
            speed,
            born_position: position,
            born_time: time,
            base,
            start,
        }
    }

    fn enqueue_pair(&mut self, i: usize, j: usize) {
        let (a, b) = (&self.live[i], &self.live[j]);
        if a.speed == b.speed {
            return;
        }
        // x_a(t) = x_b(t) at t = intercept difference over speed difference.
        let t = (&b.base - &a.base) / (&a.speed - &b.speed);
        if t > self.now {
            self.heap.push(Reverse(Candidate {
                time: t,
                a: a.token,
                b: b.token,
            }));
        }
    }

    /// Time of the earliest pending meeting, discarding stale candidates.
    fn peek_next_meeting(&mut self) -> Option<Rational> {
        while let Some(Reverse(c)) = self.heap.peek() {
            if self.alive.contains(&c.a) && self.alive.contains(&c.b) {
                return Some(c.time.clone());
            }
            self.heap.pop();
        }
        None
    }

    /// Advances to the next event batch, or reports why the run is over.
    pub fn step(&mut self) -> StepOutcome {
        if let Some(status) = self.finished {
            return StepOutcome::Finished(status);
        }
        let t = match self.peek_next_meeting() {
            None => {
                self.finished = Some(RunStatus::Halted);
                return StepOutcome::Finished(RunStatus::Halted);
            }
            Some(t) => t,
        };
        if let Some(max_time) = &self.limits.max_time {
            if &t >= max_time {
                self.finished = Some(RunStatus::TimeLimit);
                return StepOutcome::Finished(RunStatus::TimeLimit);
            }
        }
        if self.events.len() >= self.limits.max_collisions {
            self.finished = Some(RunStatus::CollisionLimit);
            return StepOutcome::Finished(RunStatus::CollisionLimit);
        }

        let first_event = self.events.len();
        let spans = self.collect_spans(&t);
        self.apply_batch(&t, spans);
        let count = self.events.len() - first_event;

        if self.guard.triggered() {
            self.finished = Some(RunStatus::AccumulationSuspected);
        }
        StepOutcome::Batch { first_event, count }
    }

    /// Pops every candidate at time `t` and grows each surviving pair
    /// into the maximal run of signals sharing one position at `t`. Every
    /// meeting group is found this way: consecutive group members became
    /// spatially adjacent at some earlier event, which enqueued their
    /// exact meeting time.
    fn collect_spans(&mut self, t: &Rational) -> Vec<(usize, usize, Rational)> {
        let mut seeds: Vec<(usize, usize)> = Vec::new();
        while matches!(self.heap.peek(), Some(Reverse(c)) if &c.time == t) {
            let Reverse(c) = self.heap.pop().unwrap();
            if let (Some(&i), Some(&j)) = (self.index_of.get(&c.a), self.index_of.get(&c.b)) {
                seeds.push((i.min(j), i.max(j)));
            }
        }
        debug_assert!(!seeds.is_empty(), "a valid candidate led the heap");

        let mut spans: Vec<(usize, usize, Rational)> = Vec::new();
        for (seed_lo, seed_hi) in seeds {
            if spans
                .iter()
                .any(|(lo, hi, _)| *lo <= seed_lo && seed_lo < *hi)
            {
                continue;
            }
            let position = self.live[seed_lo].position_at(t);
            debug_assert_eq!(self.live[seed_hi].position_at(t), position);
            let mut lo = seed_lo;
            while lo > 0 && self.live[lo - 1].position_at(t) == position {
                lo -= 1;
            }
            let mut hi = seed_hi;
            while hi + 1 < self.live.len() && self.live[hi + 1].position_at(t) == position {
                hi += 1;
            }
            spans.push((lo, hi + 1, position));
        }
        spans.sort_unstable_by_key(|span| span.0);
        debug_assert!(spans.windows(2).all(|w| w[0].1 <= w[1].0));
        spans
    }

    fn apply_batch(&mut self, t: &Rational, spans: Vec<(usize, usize, Rational)>) {
        let old = std::mem::take(&mut self.live);
        let mut new_live: Vec<LiveSignal> = Vec::with_capacity(old.len());
        // (start index in the rebuilt list, output count) per group.
        let mut regions: Vec<(usize, usize)> = Vec::new();
        let mut batch_min: Option<Rational> = None;
        let mut batch_max: Option<Rational> = None;

        let mut old_iter = old.into_iter();
        let mut taken = 0usize;
        for (lo, hi, position) in &spans {
            while taken < *lo {
                new_live.push(old_iter.next().unwrap());
                taken += 1;
            }
            let members: Vec<LiveSignal> =
                (*lo..*hi).map(|_| old_iter.next().unwrap()).collect();
            taken = *hi;

            let mut inputs: Vec<SignalId> = members.iter().map(|s| s.signal).collect();
            inputs.sort_unstable();
            let resolution = self
                .machine
                .resolve(&inputs)
                .expect("meeting signals have pairwise distinct speeds");
            let outputs = resolution.outputs;
            let event_id = EventId(self.events.len());

            for member in members {
                self.alive.remove(&member.token);
                self.segments.push(SignalSegment {
                    signal: member.signal,
                    speed: member.speed,
                    start_position: member.born_position,
                    start_time: member.born_time,
                    start: member.start,
                    end_position: position.clone(),
                    end_time: t.clone(),
                    end: SegmentEnd::Consumed(event_id),
                });
            }

            let rule = match resolution.source {
                crate::machine::RuleSource::Declared { index, .. } => Some(index),
                crate::machine::RuleSource::DefaultBlank => None,
            };
            self.events.push(CollisionEvent {
                id: event_id,
                time: t.clone(),
                position: position.clone(),
                blank: inputs == outputs,
                inputs,
                outputs: outputs.clone(),
                rule,
            });

            let region_start = new_live.len();
            for &signal in &outputs {
                let live = self.spawn(
                    signal,
                    position.clone(),
                    t.clone(),
                    SegmentStart::Emitted(event_id),
                );
                new_live.push(live);
            }
            regions.push((region_start, outputs.len()));

            batch_min = Some(match batch_min {
                None => position.clone(),
                Some(m) => m.min(position.clone()),
            });
            batch_max = Some(match batch_max {
                None => position.clone(),
                Some(m) => m.max(position.clone()),
            });
        }
        new_live.extend(old_iter);

        self.live = new_live;
        self.now = t.clone();
        self.rebuild_index();

        for &(start, count) in &regions {
            let lo = start.saturating_sub(1);
            let hi = (start + count).min(self.live.len().saturating_sub(1));
            for k in lo..hi {
                self.enqueue_pair(k, k + 1);
            }
        }

        if let (Some(min), Some(max)) = (batch_min, batch_max) {
            self.guard.record(t.clone(), min, max);
        }
    }

    fn rebuild_index(&mut self) {
        self.index_of.clear();
        for (i, s) in self.live.iter().enumerate() {
            self.index_of.insert(s.token, i);
        }
    }

    /// Finalizes the run: cuts open segments, samples the final
    /// configuration at the cut time and assembles the diagram.
    pub fn finish(mut self, status: RunStatus) -> RunOutcome {
        let pending = self.peek_next_meeting();
        let (horizon, cut) = match status {
            RunStatus::Halted => {
                // For an event-free run the initial instant already shows
                // the stable state; otherwise sample past the last event
                // (outputs of one event coincide at the event point).
                let cut = if self.events.is_empty() {
                    Rational::zero()
                } else {
                    &self.now + int(1)
                };
                (Horizon::Unbounded, cut)
            }
            RunStatus::TimeLimit => {
                let max_time = self
                    .limits
                    .max_time
                    .clone()
                    .expect("time limit implies a horizon");
                match pending {
                    // An event exactly at the horizon would leave the
                    // configuration there undefined; stop just before it.
                    Some(t) if t == max_time => {
                        let cut = (&self.now + &max_time) / int(2);
                        (Horizon::At(cut.clone()), cut)
                    }
                    _ => (Horizon::At(max_time.clone()), max_time),
                }
            }
            RunStatus::CollisionLimit
            | RunStatus::AccumulationSuspected
            | RunStatus::Interrupted => {
                let cut = match pending {
                    Some(t) => (&self.now + &t) / int(2),
                    None => &self.now + int(1),
                };
                (Horizon::At(cut.clone()), cut)
            }
        };

        let mut final_config = Configuration::new();
        for survivor in &self.live {
            let position = survivor.position_at(&cut);
            final_config
                .place(position.clone(), survivor.signal)
                .expect("no meeting at or before the cut time");
            self.segments.push(SignalSegment {
                signal: survivor.signal,
                speed: survivor.speed.clone(),
                start_position: survivor.born_position.clone(),
                start_time: survivor.born_time.clone(),
                start: survivor.start,
                end_position: position,
                end_time: cut.clone(),
                end: SegmentEnd::AtHorizon,
            });
        }

        RunOutcome {
            status,
            final_config,
            diagram: SpaceTimeDiagram {
                initial: self.initial,
                events: self.events,
                segments: self.segments,
                horizon,
                cut_time: cut,
            },
        }
    }
}

/// Runs a machine from an initial configuration until it halts or hits a
/// limit.
pub fn run(
    machine: &SignalMachine,
    initial: &Configuration,
    limits: &RunLimits,
) -> Result<RunOutcome, EngineError> {
    let mut engine = Engine::new(machine, initial, limits.clone())?;
    loop {
        if let StepOutcome::Finished(status) = engine.step() {
            return Ok(engine.finish(status));
        }
    }
}

/// True when no pair of signals converges: for positions `p_i < p_j`,
/// every `speed_i <= speed_j`.
pub fn is_stable(config: &Configuration, machine: &SignalMachine) -> bool {
    let speeds: Vec<&Rational> = config.iter().map(|(_, s)| machine.speed(s)).collect();
    speeds.windows(2).all(|w| w[0] <= w[1])
}

/// The earliest time after `now` at which two or more signals share a
/// position, with all meeting groups at that time: each group is the
/// exact position and the meeting set there. `config` holds the signal
/// positions as of time `now`. Returns `None` when no pair ever meets.
pub fn next_event_batch(
    machine: &SignalMachine,
    config: &Configuration,
    now: &Rational,
) -> Option<(Rational, Vec<(Rational, Vec<SignalId>)>)> {
    let entries: Vec<(&Rational, SignalId, &Rational)> = config
        .iter()
        .map(|(p, s)| (p, s, machine.speed(s)))
        .collect();

    let mut best: Option<Rational> = None;
    for w in entries.windows(2) {
        let (pa, _, va) = &w[0];
        let (pb, _, vb) = &w[1];
        if va <= vb {
            continue;
        }
        let t = now + (*pb - *pa) / (*va - *vb);
        best = Some(match best {
            None => t,
            Some(b) => b.min(t),
        });
    }
    let t = best?;

    let positions: Vec<Rational> = entries
        .iter()
        .map(|(p, _, v)| *p + *v * (&t - now))
        .collect();
    let mut groups = Vec::new();
    let mut i = 0;
    while i < entries.len() {
        let mut j = i + 1;
        while j < entries.len() && positions[j] == positions[i] {
            j += 1;
        }
        if j - i >= 2 {
            let mut ids: Vec<SignalId> = entries[i..j].iter().map(|(_, s, _)| *s).collect();
            ids.sort_unstable();
            groups.push((positions[i].clone(), ids));
        }
        i = j;
    }
    debug_assert!(!groups.is_empty());
    Some((t, groups))
}

/// Accumulation guard state: a sliding window over recent batches.
struct Guard {
    window: VecDeque<(Rational, Rational, Rational)>,
    capacity: usize,
    span: Rational,
    position_bound: Rational,
}

impl Guard {
    fn new(window: &AccumulationWindow, v_max: &Rational) -> Self {
        Guard {
            window: VecDeque::with_capacity(window.events + 1),
            capacity: window.events + 1,
            span: window.span.clone(),
            position_bound: &window.span * v_max * int(4),
        }
    }

    fn record(&mut self, time: Rational, min_pos: Rational, max_pos: Rational) {
        if self.window.len() == self.capacity {
            self.window.pop_front();
        }
        self.window.push_back((time, min_pos, max_pos));
    }

    fn triggered(&self) -> bool {
        if self.window.len() < self.capacity {
            return false;
        }
        let first = self.window.front().unwrap();
        let last = self.window.back().unwrap();
        if &last.0 - &first.0 > self.span {
            return false;
        }
        let mut prev_gap: Option<Rational> = None;
        for pair in self.window.iter().zip(self.window.iter().skip(1)) {
            let gap = &pair.1 .0 - &pair.0 .0;
            if let Some(prev) = prev_gap {
                if gap >= prev {
                    return false;
                }
            }
            prev_gap = Some(gap);
        }
        let min_pos = self.window.iter().map(|e| &e.1).min().unwrap();
        let max_pos = self.window.iter().map(|e| &e.2).max().unwrap();
        max_pos - min_pos <= self.position_bound
    }
}
