//! Divisor decomposition: reduce a divisor to 1 through scalings by powers
//! of its own base moduli, incrementing when stuck, base-extending when the
//! base-2 digit is exhausted. The product of the scale factors is the
//! approximate divisor `y_hat >= y`.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::inverse::InverseTable;
use crate::mixed_radix::base_extend_in;
use crate::scaling::scale_in_place;
use crate::trace::Trace;
use crate::value::RnsValue;

/// One decomposition action.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScriptStep {
    /// Add one to the working divisor.
    Increment,
    /// Divide by `factor = base(digit)^powers`.
    Scale { digit: usize, powers: u32, factor: u64 },
    /// Restore all reduced or invalid digits to full power.
    BaseExtend,
}

/// The recorded decomposition: ordered steps, the product of all scale
/// factors, and the increment count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorScript {
    pub steps: Vec<ScriptStep>,
    pub y_hat: BigUint,
    pub increments: usize,
}

impl FactorScript {
    pub fn factors(&self) -> Vec<u64> {
        self.steps
            .iter()
            .filter_map(|s| match s {
                ScriptStep::Scale { factor, .. } => Some(*factor),
                _ => None,
            })
            .collect()
    }
}

/// Decide the next action for the current working divisor, or `None` once
/// it has reached one.
///
/// Priority: scale the lowest-index digit reporting a zero, taking all
/// available powers at once; otherwise increment while the base-2 digit
/// still has powers; otherwise base extend. A value sitting at the top of
/// a reduced range (`effective_range - 1`) is base-extended before any
/// increment, since the increment would wrap it to zero.
pub fn next_step(state: &RnsValue) -> Option<ScriptStep> {
    if state.is_one() {
        return None;
    }
    if let Some(&(digit, powers)) = state.any_zero().first() {
        let factor = state.format().spec(digit).base().pow(powers);
        return Some(ScriptStep::Scale { digit, powers, factor });
    }
    let b2 = state.format().base2_index();
    if state.digit(b2).power_remaining() == 0 {
        return Some(ScriptStep::BaseExtend);
    }
    if state.at_range_top() && !state.is_normalized() {
        return Some(ScriptStep::BaseExtend);
    }
    Some(ScriptStep::Increment)
}

const MAX_STEPS: usize = 100_000;

/// Decompose a divisor to 1, recording every step.
pub fn decompose(y: &RnsValue, tbl: &InverseTable) -> Result<(FactorScript, Trace)> {
    let mut trace = Trace::new();
    let script = decompose_in(y, tbl, &mut trace)?;
    Ok((script, trace))
}

pub(crate) fn decompose_in(
    y: &RnsValue,
    tbl: &InverseTable,
    trace: &mut Trace,
) -> Result<FactorScript> {
    if y.is_zero() {
        return Err(Error::ZeroDivisor);
    }
    let mut work = y.clone();
    trace.begin_step();
    trace.snapshot("DECOMPOSE", "DENOM", &work, format!("starting value = {}", work.decode()));

    let mut steps = Vec::new();
    let mut y_hat = BigUint::one();
    let mut increments = 0usize;
    while let Some(step) = next_step(&work) {
        if steps.len() >= MAX_STEPS {
            return Err(Error::Internal("divisor decomposition did not terminate".into()));
        }
        match step {
            ScriptStep::Scale { digit, powers, factor } => {
                trace.begin_step();
                scale_in_place(&mut work, digit, powers, tbl, trace, "DIV_DENOM", "DENOM", true, true)?;
                y_hat *= BigUint::from(factor);
            }
            ScriptStep::Increment => {
                work.add_scalar_in_place(1);
                trace.counters.increments += 1;
                increments += 1;
                if work.is_zero() {
                    return Err(Error::IncrementOverflow);
                }
                trace.begin_step();
                trace.snapshot(
                    "INC_DENOM",
                    "DENOM",
                    &work,
                    format!("increment; value = {}", work.decode()),
                );
            }
            ScriptStep::BaseExtend => {
                trace.begin_step();
                base_extend_in(&mut work, tbl, trace, "BASE_EXTEND", "DENOM")?;
            }
        }
        steps.push(step);
    }
    trace.begin_step();
    trace.note("DECOMPOSE", "DENOM", format!("done; y_hat = {y_hat}"));
    Ok(FactorScript { steps, y_hat, increments })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::mod9_power_format;
    use crate::inverse::build_inverse_table;
    use num_traits::ToPrimitive;

    fn setup(y: u64) -> (RnsValue, InverseTable) {
        let fmt = mod9_power_format();
        (RnsValue::encode_u64(&fmt, y).unwrap(), build_inverse_table(&fmt))
    }

    #[test]
    fn next_step_policy() {
        let (v, _) = setup(123456);
        assert_eq!(
            next_step(&v),
            Some(ScriptStep::Scale { digit: 3, powers: 1, factor: 3 })
        );
        let (v, _) = setup(643);
        assert_eq!(next_step(&v), Some(ScriptStep::Increment));
        let (v, _) = setup(1);
        assert_eq!(next_step(&v), None);
    }

    #[test]
    fn next_step_base_extend_priority() {
        let (v, tbl) = setup(23 * 256);
        let scaled = crate::scaling::scale_by_power(&v, 4, 8, &tbl).unwrap();
        // 23 left, base-2 digit exhausted, no other zeros.
        assert_eq!(next_step(&scaled), Some(ScriptStep::BaseExtend));
    }

    #[test]
    fn reference_decomposition_123456() {
        let (v, tbl) = setup(123456);
        let (script, _) = decompose(&v, &tbl).unwrap();
        assert_eq!(script.factors(), [3, 64, 4, 7, 3, 8]);
        assert_eq!(script.increments, 2);
        assert_eq!(script.y_hat.to_u64().unwrap(), 129024);
        let kinds: Vec<&ScriptStep> = script
            .steps
            .iter()
            .filter(|s| matches!(s, ScriptStep::BaseExtend))
            .collect();
        assert_eq!(kinds.len(), 1);
    }

    #[test]
    fn reference_decomposition_11634943() {
        let (v, tbl) = setup(11634943);
        let (script, _) = decompose(&v, &tbl).unwrap();
        assert_eq!(script.factors(), [256, 25, 9, 2, 3, 2, 17]);
        assert_eq!(script.y_hat.to_u64().unwrap(), 11750400);
        assert!(script.y_hat >= BigUint::from(11634943u64));
    }

    #[test]
    fn trivial_and_error_cases() {
        let (one, tbl) = setup(1);
        let (script, _) = decompose(&one, &tbl).unwrap();
        assert!(script.steps.is_empty());
        assert_eq!(script.y_hat, BigUint::one());
        assert_eq!(script.increments, 0);

        let (zero, tbl) = setup(0);
        assert_eq!(decompose(&zero, &tbl).unwrap_err(), Error::ZeroDivisor);
    }

    #[test]
    fn script_replays_as_integer_arithmetic() {
        let (v, tbl) = setup(11634943);
        let (script, _) = decompose(&v, &tbl).unwrap();
        let mut x = BigUint::from(11634943u64);
        for step in &script.steps {
            match step {
                ScriptStep::Scale { factor, .. } => {
                    assert_eq!((&x % BigUint::from(*factor)).to_u64().unwrap(), 0);
                    x /= BigUint::from(*factor);
                }
                ScriptStep::Increment => x += 1u32,
                ScriptStep::BaseExtend => {}
            }
        }
        assert_eq!(x, BigUint::one());
    }

    #[test]
    fn y_hat_dominates_y() {
        let (_, tbl) = setup(0);
        let fmt = mod9_power_format();
        for y in [2u64, 17, 23, 97, 123456, 999983, 11634943] {
            let v = RnsValue::encode_u64(&fmt, y).unwrap();
            let (script, _) = decompose(&v, &tbl).unwrap();
            assert!(script.y_hat >= BigUint::from(y), "y_hat < y for {y}");
            if script.increments == 0 {
                assert_eq!(script.y_hat, BigUint::from(y));
            }
        }
    }
}
