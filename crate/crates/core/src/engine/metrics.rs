//! Complexity measures over finished space-time diagrams.
//!
//! Time complexity is the longest chain in the collision causality DAG:
//! event A precedes event B when a signal emitted at A ends at B. Space
//! complexity is the maximum number of signals present at the same time.
//! Whether blank crossings count as collisions is a modelling choice, so
//! both variants are exposed.

use std::collections::HashMap;

use crate::engine::diagram::{SegmentEnd, SegmentStart, SpaceTimeDiagram};
use crate::rational::Rational;

/// Longest causality chain counting every collision, blank crossings
/// included. A diagram without events has complexity 0.
pub fn time_complexity(diagram: &SpaceTimeDiagram) -> usize {
    chain_depth(diagram, true)
}

/// Longest causality chain over non-blank collisions only. Signals pass
/// through blank crossings unchanged, so causality is traced across them.
pub fn time_complexity_non_blank(diagram: &SpaceTimeDiagram) -> usize {
    chain_depth(diagram, false)
}

fn chain_depth(diagram: &SpaceTimeDiagram, include_blank: bool) -> usize {
    let incoming = diagram.incoming_segments();
    let outgoing = diagram.outgoing_segments();

    // Depth credit carried by each segment: the depth of the nearest
    // counted ancestor event (0 for signals with no counted ancestor).
    let mut credit: Vec<usize> = vec![0; diagram.segments.len()];
    let mut deepest = 0;

    for (e, event) in diagram.events.iter().enumerate() {
        let counted = include_blank || !event.blank;
        if counted {
            let depth = 1 + incoming[e]
                .iter()
                .map(|&s| credit[s])
                .max()
                .unwrap_or(0);
            deepest = deepest.max(depth);
            for &s in &outgoing[e] {
                credit[s] = depth;
            }
        } else {
            // A blank crossing: each outgoing signal continues an incoming
            // signal of the same meta-signal.
            for &s in &outgoing[e] {
                let sig = diagram.segments[s].signal;
                let pred = incoming[e]
                    .iter()
                    .find(|&&p| diagram.segments[p].signal == sig)
                    .copied()
                    .expect("blank event outputs equal its inputs");
                credit[s] = credit[pred];
            }
        }
    }
    deepest
}

/// Maximum number of signals alive at the same time, taken over the
/// inter-event intervals of the diagram.
pub fn space_cut(diagram: &SpaceTimeDiagram) -> usize {
    let mut count = diagram.initial.len();
    let mut best = count;
    let mut i = 0;
    let events = &diagram.events;
    while i < events.len() {
        let t = &events[i].time;
        let mut j = i;
        while j < events.len() && &events[j].time == t {
            count += events[j].outputs.len();
            count -= events[j].inputs.len();
            j += 1;
        }
        best = best.max(count);
        i = j;
    }
    best
}

/// Brute-force longest path over the explicit causality DAG, independent
/// of the incremental computation above: builds the edge list and takes
/// the maximum path length in events over a topological order.
///
/// Intended as a cross-check oracle in tests and verification suites.
pub fn time_complexity_longest_path(diagram: &SpaceTimeDiagram, include_blank: bool) -> usize {
    let incoming = diagram.incoming_segments();
    let mut edges: HashMap<usize, Vec<usize>> = HashMap::new();
    let mut nodes: Vec<usize> = Vec::new();
    for (e, event) in diagram.events.iter().enumerate() {
        if include_blank || !event.blank {
            nodes.push(e);
        }
    }
    for &to in &nodes {
        for &seg in &incoming[to] {
            for from in ancestors(diagram, &incoming, seg, include_blank) {
                edges.entry(from).or_default().push(to);
            }
        }
    }
    // Events are indexed in time order, so ascending index is topological.
    let mut depth: HashMap<usize, usize> = HashMap::new();
    let mut best = 0;
    for &node in &nodes {
        let d = depth.get(&node).copied().unwrap_or(1);
        best = best.max(d);
        if let Some(nexts) = edges.get(&node) {
            for &n in nexts {
                let entry = depth.entry(n).or_insert(1);
                *entry = (*entry).max(d + 1);
            }
        }
    }
    best
}

/// Counted events reachable backwards from a segment, skipping over
/// uncounted blank crossings.
fn ancestors(
    diagram: &SpaceTimeDiagram,
    incoming: &[Vec<usize>],
    seg: usize,
    include_blank: bool,
) -> Vec<usize> {
    let mut current = seg;
    loop {
        match diagram.segments[current].start {
            SegmentStart::Initial => return Vec::new(),
            SegmentStart::Emitted(e) => {
                let event = &diagram.events[e.0];
                if include_blank || !event.blank {
                    return vec![e.0];
                }
                let sig = diagram.segments[current].signal;
                current = incoming[e.0]
                    .iter()
                    .copied()
                    .find(|&p| diagram.segments[p].signal == sig)
                    .expect("blank event outputs equal its inputs");
            }
        }
    }
}

/// Brute-force space cut: counts segments crossing a horizontal line at
/// each midpoint between consecutive distinct event times (and before the
/// first and after the last event). Oracle counterpart of [`space_cut`].
pub fn space_cut_sweep(diagram: &SpaceTimeDiagram) -> usize {
    use crate::rational::{int, ratio};

    let mut times: Vec<&Rational> = diagram.events.iter().map(|e| &e.time).collect();
    times.dedup();

    let mut samples: Vec<Rational> = Vec::new();
    match times.first() {
        None => samples.push(ratio(1, 2).min(&diagram.cut_time / int(2)).max(int(0))),
        Some(first) => {
            samples.push(*first / int(2));
            for w in times.windows(2) {
                samples.push((w[0] + w[1]) / int(2));
            }
            samples.push(*times.last().unwrap() + int(1));
        }
    }

    let mut best = 0;
    for t in &samples {
        let alive = diagram
            .segments
            .iter()
            .filter(|seg| {
                if t < &seg.start_time {
                    return false;
                }
                match seg.end {
                    SegmentEnd::Consumed(_) => t < &seg.end_time,
                    SegmentEnd::AtHorizon => true,
                }
            })
            .count();
        best = best.max(alive);
    }
    best
}
