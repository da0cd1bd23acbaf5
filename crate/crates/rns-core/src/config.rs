//! Text formats consumed by the CLI: format config files and digit lists.
//!
//! A format config is line-oriented; blank lines and `#` comments are
//! skipped:
//!
//! ```text
//! width 9
//! power 2 8
//! power 3 5
//! plain 457
//! ```
//!
//! A digit list is comma-separated cells, `*` marking an invalid digit:
//! `48,*,48,48,48,48,48,48`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::format::{make_format, RnsFormat};
use crate::value::RnsValue;

/// Parsed but not yet validated format description.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormatConfig {
    pub power_specs: Vec<(u64, u32)>,
    pub plain_primes: Vec<u64>,
    pub digit_width: Option<u32>,
}

impl FormatConfig {
    pub fn build(&self) -> Result<RnsFormat> {
        let width = self
            .digit_width
            .ok_or_else(|| Error::Internal("config is missing a `width` line".into()))?;
        make_format(&self.power_specs, &self.plain_primes, width)
    }
}

/// Parse a format config file.
pub fn parse_format_config(text: &str) -> Result<FormatConfig> {
    let mut cfg = FormatConfig::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let bad = |msg: &str| Error::Internal(format!("config line {}: {msg}", lineno + 1));
        match parts.next() {
            Some("power") => {
                let base: u64 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("expected `power BASE POWER`"))?;
                let power: u32 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("expected `power BASE POWER`"))?;
                if parts.next().is_some() {
                    return Err(bad("trailing tokens after `power BASE POWER`"));
                }
                cfg.power_specs.push((base, power));
            }
            Some("plain") => {
                let p: u64 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("expected `plain PRIME`"))?;
                if parts.next().is_some() {
                    return Err(bad("trailing tokens after `plain PRIME`"));
                }
                cfg.plain_primes.push(p);
            }
            Some("width") => {
                if cfg.digit_width.is_some() {
                    return Err(bad("duplicate `width` line"));
                }
                let w: u32 = parts
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| bad("expected `width N`"))?;
                if parts.next().is_some() {
                    return Err(bad("trailing tokens after `width N`"));
                }
                cfg.digit_width = Some(w);
            }
            Some(other) => {
                return Err(bad(&format!("unknown directive `{other}`")));
            }
            None => unreachable!("blank lines are skipped"),
        }
    }
    Ok(cfg)
}

/// Parse a comma-separated digit list; `*` cells are invalid digits.
pub fn parse_digit_cells(text: &str) -> Result<Vec<Option<u64>>> {
    text.split(',')
        .map(|cell| {
            let cell = cell.trim();
            if cell == "*" {
                Ok(None)
            } else {
                cell.parse::<u64>()
                    .map(Some)
                    .map_err(|_| Error::Internal(format!("bad digit cell `{cell}`")))
            }
        })
        .collect()
}

/// Parse a digit list against a format, producing a value with `*` digits
/// invalidated and the rest at full power.
pub fn value_from_cells(format: &Arc<RnsFormat>, text: &str) -> Result<RnsValue> {
    let cells = parse_digit_cells(text)?;
    RnsValue::from_digits(format, &cells)
}
