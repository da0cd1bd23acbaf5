//! Step traces: register snapshots in the row layout the CLI renders, plus
//! the deterministic cycle-model counters.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::value::RnsValue;

/// One trace row: a register snapshot (or inverse-constant row) at a step.
/// Cells are `None` where the digit is invalid; `moduli` carries each
/// digit's current modulus (1 once fully divided out).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRow {
    pub step: u32,
    pub state: String,
    pub register: String,
    pub digits: Vec<Option<u64>>,
    pub moduli: Vec<u64>,
    pub note: String,
}

/// Event counts behind the cycle estimate.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CycleCounters {
    /// Mixed-radix digits consumed (2 cycles each: subtract, multiply).
    pub mrc_digits: u64,
    /// Scaling steps (2 cycles each: offset subtract, inverse multiply).
    pub scale_steps: u64,
    /// Divisor increments (1 cycle each).
    pub increments: u64,
    /// Whole-word PAC operations (1 cycle each).
    pub pac_ops: u64,
    /// Control state transitions (1 cycle each).
    pub state_transitions: u64,
}

/// A recorded run: rows (when captured) plus cycle counters.
#[derive(Debug, Clone, Default)]
pub struct Trace {
    pub rows: Vec<TraceRow>,
    pub counters: CycleCounters,
    capture_rows: bool,
    step: u32,
}

impl Trace {
    pub fn new() -> Self {
        Trace { capture_rows: true, ..Default::default() }
    }

    /// Counters only; row capture disabled for bulk runs.
    pub fn disabled() -> Self {
        Trace::default()
    }

    /// Wrap previously captured rows (e.g. parsed back from JSON).
    pub fn from_rows(rows: Vec<TraceRow>) -> Self {
        let step = rows.iter().map(|r| r.step).max().unwrap_or(0);
        Trace { rows, counters: CycleCounters::default(), capture_rows: true, step }
    }

    pub fn capturing(&self) -> bool {
        self.capture_rows
    }

    pub(crate) fn begin_step(&mut self) -> u32 {
        self.step += 1;
        self.step
    }

    pub(crate) fn push(
        &mut self,
        state: &str,
        register: &str,
        digits: Vec<Option<u64>>,
        moduli: Vec<u64>,
        note: String,
    ) {
        if self.capture_rows {
            self.rows.push(TraceRow {
                step: self.step,
                state: state.to_string(),
                register: register.to_string(),
                digits,
                moduli,
                note,
            });
        }
    }

    pub(crate) fn snapshot(&mut self, state: &str, register: &str, v: &RnsValue, note: String) {
        if self.capture_rows {
            let cells = v.cells();
            let moduli = v.current_moduli();
            self.push(state, register, cells, moduli, note);
        }
    }

    pub(crate) fn note(&mut self, state: &str, register: &str, note: String) {
        self.push(state, register, Vec::new(), Vec::new(), note);
    }
}

/// Deterministic cycle model: 2 per mixed-radix digit, 2 per scale step,
/// 1 per increment, 1 per PAC operation, 1 per state transition.
pub fn cycle_estimate(trace: &Trace) -> u64 {
    let c = &trace.counters;
    2 * c.mrc_digits + 2 * c.scale_steps + c.increments + c.pac_ops + c.state_transitions
}

/// Serialization formats for traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceFormat {
    Markdown,
    Csv,
    Json,
}

impl std::str::FromStr for TraceFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "md" | "markdown" => Ok(TraceFormat::Markdown),
            "csv" => Ok(TraceFormat::Csv),
            "json" => Ok(TraceFormat::Json),
            other => Err(format!("unknown trace format `{other}` (expected md, csv, or json)")),
        }
    }
}

/// Render a trace deterministically in the requested format.
pub fn emit_trace(trace: &Trace, format: TraceFormat) -> String {
    match format {
        TraceFormat::Markdown => emit_markdown(&trace.rows),
        TraceFormat::Csv => emit_csv(&trace.rows),
        TraceFormat::Json => emit_json(&trace.rows),
    }
}

fn digit_count(rows: &[TraceRow]) -> usize {
    rows.iter().map(|r| r.digits.len()).max().unwrap_or(0)
}

fn emit_markdown(rows: &[TraceRow]) -> String {
    let n = digit_count(rows);
    let mut out = String::new();
    out.push_str("| Step | State | Register |");
    for i in 1..=n {
        out.push_str(&format!(" d_{i} |"));
    }
    out.push_str(" Note |\n");
    out.push_str(&"|---".repeat(n + 4));
    out.push_str("|\n");
    let mut last_moduli: Option<&[u64]> = None;
    for row in rows {
        let mut note = row.note.clone();
        if !row.moduli.is_empty() {
            if let Some(prev) = last_moduli {
                let changes: Vec<String> = row
                    .moduli
                    .iter()
                    .zip(prev)
                    .enumerate()
                    .filter(|(_, (now, before))| now != before)
                    .map(|(i, (now, _))| format!("M_{} -> {}", i + 1, now))
                    .collect();
                if !changes.is_empty() {
                    if !note.is_empty() {
                        note.push_str("; ");
                    }
                    note.push_str(&changes.join(", "));
                }
            }
            last_moduli = Some(&row.moduli);
        }
        out.push_str(&format!("| {} | {} | {} |", row.step, row.state, row.register));
        for i in 0..n {
            match row.digits.get(i) {
                Some(Some(v)) => out.push_str(&format!(" {v} |")),
                Some(None) => out.push_str(" * |"),
                None => out.push_str("  |"),
            }
        }
        out.push_str(&format!(" {note} |\n"));
    }
    out
}

fn emit_csv(rows: &[TraceRow]) -> String {
    let n = digit_count(rows);
    let mut out = String::new();
    out.push_str("step,state,register");
    for i in 1..=n {
        out.push_str(&format!(",d_{i}"));
    }
    for i in 1..=n {
        out.push_str(&format!(",m_{i}"));
    }
    out.push_str(",note\n");
    for row in rows {
        out.push_str(&format!("{},{},{}", row.step, row.state, row.register));
        for i in 0..n {
            match row.digits.get(i) {
                Some(Some(v)) => out.push_str(&format!(",{v}")),
                _ => out.push_str(",*"),
            }
        }
        for i in 0..n {
            match row.moduli.get(i) {
                Some(m) => out.push_str(&format!(",{m}")),
                None => out.push(','),
            }
        }
        let quoted = row.note.replace('"', "\"\"");
        out.push_str(&format!(",\"{quoted}\"\n"));
    }
    out
}

fn emit_json(rows: &[TraceRow]) -> String {
    serde_json::to_string_pretty(rows).expect("trace rows serialize")
}

/// Parse rows previously emitted as JSON.
pub fn parse_trace_json(text: &str) -> Result<Vec<TraceRow>> {
    serde_json::from_str(text).map_err(|e| Error::Internal(format!("trace json: {e}")))
}
