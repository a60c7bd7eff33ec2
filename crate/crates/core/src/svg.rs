//! Space-time diagram rendering to SVG 1.1.
//!
//! One line element per signal segment, position on the horizontal axis
//! and time increasing upward (the SVG y axis is inverted). Collision
//! events get small dots and the meta-signals a legend. Output is
//! deterministic for a given diagram and style. Exact rationals are
//! converted to floats here only; nothing feeds back into the model.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::engine::SpaceTimeDiagram;
use crate::machine::{SignalId, SignalMachine};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinePattern {
    Solid,
    Dashed,
    Dotted,
}

impl LinePattern {
    fn dash_array(self) -> Option<&'static str> {
        match self {
            LinePattern::Solid => None,
            LinePattern::Dashed => Some("6,4"),
            LinePattern::Dotted => Some("1.5,3"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalStyle {
    pub color: String,
    pub pattern: LinePattern,
    pub width: f64,
}

/// Per-meta-signal drawing styles plus global rendering options.
#[derive(Debug, Clone, PartialEq)]
pub struct Style {
    by_signal: HashMap<usize, SignalStyle>,
    pub show_events: bool,
}

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f",
];

impl Style {
    /// Deterministic default: palette colors assigned in meta-signal
    /// order, solid strokes of width 1.
    pub fn default_for(machine: &SignalMachine) -> Style {
        let mut by_signal = HashMap::new();
        for (i, _) in machine.signals().iter().enumerate() {
            by_signal.insert(
                i,
                SignalStyle {
                    color: PALETTE[i % PALETTE.len()].to_string(),
                    pattern: LinePattern::Solid,
                    width: 1.0,
                },
            );
        }
        Style {
            by_signal,
            show_events: true,
        }
    }

    pub fn set(&mut self, signal: SignalId, style: SignalStyle) {
        self.by_signal.insert(signal.0, style);
    }

    fn get(&self, signal: SignalId) -> SignalStyle {
        self.by_signal
            .get(&signal.0)
            .cloned()
            .unwrap_or(SignalStyle {
                color: "#000000".to_string(),
                pattern: LinePattern::Solid,
                width: 1.0,
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StyleParseError {
    #[error("line {0}: expected `<meta-signal> <css-color> <solid|dashed|dotted> <stroke-width>`")]
    BadLine(usize),
    #[error("line {0}: unknown meta-signal `{1}`")]
    UnknownSignal(usize, String),
    #[error("line {0}: unknown line pattern `{1}`")]
    UnknownPattern(usize, String),
    #[error("line {0}: invalid stroke width `{1}`")]
    BadWidth(usize, String),
}

/// Parses a style file: one `<meta-signal> <css-color>
/// <solid|dashed|dotted> <stroke-width>` line per meta-signal; `#` starts
/// a comment only at the beginning of a line so color literals keep
/// their hash.
pub fn parse_style(text: &str, machine: &SignalMachine) -> Result<Style, StyleParseError> {
    let mut style = Style::default_for(machine);
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(StyleParseError::BadLine(line_no));
        }
        let signal = machine
            .id_by_name(tokens[0])
            .ok_or_else(|| StyleParseError::UnknownSignal(line_no, tokens[0].to_string()))?;
        let pattern = match tokens[2] {
            "solid" => LinePattern::Solid,
            "dashed" => LinePattern::Dashed,
            "dotted" => LinePattern::Dotted,
            other => return Err(StyleParseError::UnknownPattern(line_no, other.to_string())),
        };
        let width: f64 = tokens[3]
            .parse()
            .ok()
            .filter(|w: &f64| w.is_finite() && *w > 0.0)
            .ok_or_else(|| StyleParseError::BadWidth(line_no, tokens[3].to_string()))?;
        style.set(
            signal,
            SignalStyle {
                color: tokens[1].to_string(),
                pattern,
                width,
            },
        );
    }
    Ok(style)
}

fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Far outside any drawable range; saturate.
        if r.numer().sign() == num_bigint::Sign::Minus {
            f64::MIN
        } else {
            f64::MAX
        }
    })
}

/// Renders the diagram. `scale` is in output units per space/time unit.
pub fn render_svg(
    diagram: &SpaceTimeDiagram,
    machine: &SignalMachine,
    style: &Style,
    scale: f64,
) -> String {
    const PAD: f64 = 24.0;
    const LEGEND_WIDTH: f64 = 130.0;
    const LEGEND_ROW: f64 = 16.0;

    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut max_t: f64 = 0.0;
    for seg in &diagram.segments {
        for (p, t) in [
            (&seg.start_position, &seg.start_time),
            (&seg.end_position, &seg.end_time),
        ] {
            let p = to_f64(p);
            let t = to_f64(t);
            min_x = min_x.min(p);
            max_x = max_x.max(p);
            max_t = max_t.max(t);
        }
    }
    if diagram.segments.is_empty() {
        min_x = 0.0;
        max_x = 1.0;
        max_t = 1.0;
    }

    let plot_width = ((max_x - min_x) * scale).max(1.0);
    let plot_height = (max_t * scale).max(1.0);
    let legend_height = machine.signals().len() as f64 * LEGEND_ROW + PAD;
    let width = plot_width + 2.0 * PAD + LEGEND_WIDTH;
    let height = (plot_height + 2.0 * PAD).max(legend_height);

    let x_of = |p: f64| PAD + (p - min_x) * scale;
    let y_of = |t: f64| PAD + (max_t - t) * scale;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.1}" height="{height:.1}" viewBox="0 0 {width:.1} {height:.1}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);

    for seg in &diagram.segments {
        let s = style.get(seg.signal);
        let x1 = x_of(to_f64(&seg.start_position));
        let y1 = y_of(to_f64(&seg.start_time));
        let x2 = x_of(to_f64(&seg.end_position));
        let y2 = y_of(to_f64(&seg.end_time));
        let dash = match s.pattern.dash_array() {
            Some(d) => format!(r#" stroke-dasharray="{d}""#),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" stroke="{}" stroke-width="{:.2}"{dash}/>"#,
            s.color, s.width
        );
    }

    if style.show_events {
        for event in &diagram.events {
            let cx = x_of(to_f64(&event.position));
            let cy = y_of(to_f64(&event.time));
            let fill = if event.blank { "#bbbbbb" } else { "#000000" };
            let _ = writeln!(
                out,
                r#"<circle cx="{cx:.3}" cy="{cy:.3}" r="1.8" fill="{fill}"/>"#
            );
        }
    }

    // Legend: one sample stroke and name per meta-signal.
    let legend_x = plot_width + 2.0 * PAD;
    for (i, meta) in machine.signals().iter().enumerate() {
        let s = style.get(SignalId(i));
        let y = PAD + i as f64 * LEGEND_ROW;
        let dash = match s.pattern.dash_array() {
            Some(d) => format!(r#" stroke-dasharray="{d}""#),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            r#"<line x1="{legend_x:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="{}" stroke-width="{:.2}"{dash}/>"#,
            legend_x + 26.0,
            s.color,
            s.width
        );
        let _ = writeln!(
            out,
            r#"<text x="{:.1}" y="{:.1}" font-family="monospace" font-size="11">{}</text>"#,
            legend_x + 32.0,
            y + 4.0,
            meta.name
        );
    }

    out.push_str("</svg>\n");
    out
}
