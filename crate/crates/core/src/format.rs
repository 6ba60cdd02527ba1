//! Byte-stable text encodings: `\n` line endings, one header row,
//! locale-independent decimals, numbers at six significant digits.

use std::fmt::Write;

use crate::bifurcation::BifurcationDiagram;
use crate::dynamics::params::ParamTarget;
use crate::dynamics::trajectory::{AppliedEvent, Trajectory};
use crate::error::{Chain, Error, Result};
use crate::stats::sig6;

/// Shortest decimal that round-trips the value rounded to six significant
/// digits.
pub fn fmt_num(v: f64) -> String {
    let r = sig6(v);
    if r == 0.0 {
        "0".to_string()
    } else {
        format!("{r}")
    }
}

pub const TRAJECTORY_HEADER: &str = "n,x,y";
pub const DIAGRAM_HEADER: &str = "r,chain,value";
pub const EVENTS_HEADER: &str = "iteration,target,value";

pub fn trajectory_csv(t: &Trajectory) -> String {
    let mut out = String::with_capacity(24 * t.len());
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for s in &t.states {
        let _ = writeln!(out, "{},{},{}", s.n, fmt_num(s.x), fmt_num(s.y));
    }
    out
}

/// One row per (cell, chain, attractor value), sorted by r, chain, value.
/// Divergent cells contribute no rows.
pub fn diagram_csv(d: &BifurcationDiagram) -> String {
    let mut out = String::new();
    out.push_str(DIAGRAM_HEADER);
    out.push('\n');
    for (i, &r) in d.r.iter().enumerate() {
        let r = fmt_num(r);
        for chain in [Chain::X, Chain::Y] {
            for v in d.values(i, chain) {
                let _ = writeln!(out, "{r},{chain},{}", fmt_num(v));
            }
        }
    }
    out
}

pub fn events_csv(events: &[AppliedEvent]) -> String {
    let mut out = String::new();
    out.push_str(EVENTS_HEADER);
    out.push('\n');
    for e in events {
        let _ = writeln!(out, "{},{},{}", e.iteration, e.target, fmt_num(e.value));
    }
    out
}

/// Parse an `iteration,target,value` event log.
pub fn parse_events(text: &str) -> Result<Vec<AppliedEvent>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.trim() == EVENTS_HEADER => {}
        other => {
            return Err(Error::InvalidParams(format!(
                "event log must start with {EVENTS_HEADER:?}, got {:?}",
                other.map(|(_, l)| l)
            )))
        }
    }
    lines
        .map(|(no, line)| {
            let bad = |what: &str| {
                Error::InvalidParams(format!("event log line {}: {what}: {line:?}", no + 1))
            };
            let fields: Vec<&str> = line.trim().split(',').collect();
            let [iteration, target, value] = fields[..] else {
                return Err(bad("expected 3 fields"));
            };
            Ok(AppliedEvent {
                iteration: iteration.parse().map_err(|_| bad("bad iteration"))?,
                target: target
                    .parse::<ParamTarget>()
                    .map_err(|_| bad("bad target"))?,
                value: value
                    .parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| bad("bad value"))?,
            })
        })
        .collect()
}
