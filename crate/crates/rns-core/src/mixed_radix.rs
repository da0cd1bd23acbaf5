//! Mixed-radix conversion over the valid digits of an RNS value, and the
//! two operations built on it: magnitude comparison and base extension.
//!
//! Digits are consumed in ascending order of *current* modulus, least
//! significant mixed-radix digit first. Invalid digits are skipped; the
//! conversion stops as soon as the working value reaches zero.

use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::arith::{addmod, mulmod};
use crate::error::{Error, Result};
use crate::inverse::{mod_inverse, InverseTable};
use crate::trace::Trace;
use crate::value::RnsValue;

/// One generated mixed-radix digit: `value` in `[0, radix)` taken from
/// format position `source` when that digit's current modulus was `radix`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MixedRadixDigit {
    pub source: usize,
    pub radix: u64,
    pub value: u64,
}

/// Live recombination registers for one base-extension target: the digit
/// accumulator and the running weight, both modulo the target's full
/// modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RecombinationState {
    pub target: usize,
    pub accumulator: u64,
    pub weight: u64,
    pub steps: u32,
}

/// History of one target's recombination: `(weight used, accumulator after)`
/// per consumed mixed-radix digit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecombinationLog {
    pub target: usize,
    pub weights: Vec<u64>,
    pub accumulators: Vec<u64>,
}

/// Divide the working value by the full current modulus of `index`,
/// invalidating it. Inverses are computed on the fly.
fn scale_out_digit(work: &mut RnsValue, index: usize) {
    let radix = work.current_modulus(index);
    for j in 0..work.format().digit_count() {
        let d = *work.digit(j);
        if !d.is_valid() || j == index {
            continue;
        }
        let m = work.current_modulus(j);
        let inv = mod_inverse(radix % m, m).expect("coprime moduli");
        work.set_digit(j, mulmod(d.value(), inv, m), d.power_remaining());
    }
    let stale = work.digit(index).value();
    work.set_digit(index, stale, 0);
}

/// Same, but pulling inverses from the table (keyed by the consumed digit's
/// current power and each target's current power).
fn scale_out_digit_tbl(work: &mut RnsValue, index: usize, tbl: &InverseTable) {
    let k = work.digit(index).power_remaining();
    for j in 0..work.format().digit_count() {
        let d = *work.digit(j);
        if !d.is_valid() || j == index {
            continue;
        }
        let m = work.current_modulus(j);
        let inv = tbl.inverse(index, k, j, d.power_remaining());
        work.set_digit(j, mulmod(d.value(), inv, m), d.power_remaining());
    }
    let stale = work.digit(index).value();
    work.set_digit(index, stale, 0);
}

/// Convert to mixed-radix digits, with the step trace.
pub fn mrc_digits(v: &RnsValue) -> (Vec<MixedRadixDigit>, Trace) {
    let mut trace = Trace::new();
    let mut work = v.clone();
    let mut digits = Vec::new();
    trace.begin_step();
    trace.snapshot("MRC", "X", &work, format!("starting value = {}", work.decode()));
    loop {
        if work.is_zero() {
            trace.begin_step();
            trace.snapshot("MRC", "X", &work, "zero detected; STOP".into());
            break;
        }
        let Some(&index) = work.valid_ascending().first() else { break };
        let radix = work.current_modulus(index);
        let a = work.digit(index).value();
        digits.push(MixedRadixDigit { source: index, radix, value: a });
        trace.counters.mrc_digits += 1;

        work.sub_scalar_in_place(a);
        trace.begin_step();
        trace.snapshot(
            "MRC",
            "X",
            &work,
            format!("subtract d_{} = {a}; mixed-radix digit a_{} = {a}", index + 1, digits.len()),
        );
        if work.is_zero() {
            trace.begin_step();
            trace.snapshot("MRC", "X", &work, "zero detected; STOP".into());
            break;
        }
        scale_out_digit(&mut work, index);
        trace.begin_step();
        trace.snapshot(
            "MRC",
            "X",
            &work,
            format!("multiply by 1/{radix}; d_{} invalidated", index + 1),
        );
    }
    (digits, trace)
}

/// Recombine mixed-radix digits back to an integer:
/// sum of `value * product(earlier radices)`.
pub fn mrc_value(digits: &[MixedRadixDigit]) -> BigUint {
    let mut total = BigUint::zero();
    let mut weight = BigUint::from(1u32);
    for d in digits {
        total += BigUint::from(d.value) * &weight;
        weight *= BigUint::from(d.radix);
    }
    total
}

/// Compare two values of identical format and validity pattern by lockstep
/// mixed-radix conversion; the highest differing digit decides.
pub fn compare(a: &RnsValue, b: &RnsValue) -> Result<Ordering> {
    compare_counted(a, b, &mut Trace::disabled())
}

pub(crate) fn compare_counted(a: &RnsValue, b: &RnsValue, trace: &mut Trace) -> Result<Ordering> {
    if !a.same_format(b) {
        return Err(Error::FormatMismatch);
    }
    if !a.same_validity(b) {
        return Err(Error::ValidityMismatch);
    }
    let mut wa = a.clone();
    let mut wb = b.clone();
    let mut ord = Ordering::Equal;
    loop {
        if wa.is_zero() && wb.is_zero() {
            break;
        }
        let Some(&index) = wa.valid_ascending().first() else { break };
        let da = wa.digit(index).value();
        let db = wb.digit(index).value();
        if da != db {
            ord = da.cmp(&db);
        }
        trace.counters.mrc_digits += 1;
        wa.sub_scalar_in_place(da);
        wb.sub_scalar_in_place(db);
        if wa.is_zero() && wb.is_zero() {
            break;
        }
        scale_out_digit(&mut wa, index);
        scale_out_digit(&mut wb, index);
    }
    Ok(ord)
}

/// Restore every reduced or invalid digit to full power, preserving the
/// decoded value. One mixed-radix pass feeds a running accumulator per
/// target (accumulate on cycle 1, weight update on cycle 2).
pub fn base_extend(v: &RnsValue, tbl: &InverseTable) -> Result<RnsValue> {
    let mut out = v.clone();
    base_extend_in(&mut out, tbl, &mut Trace::disabled(), "BASE_EXTEND", "X")?;
    Ok(out)
}

/// Traced variant returning the per-target recombination history.
pub fn base_extend_traced(
    v: &RnsValue,
    tbl: &InverseTable,
) -> Result<(RnsValue, Trace, Vec<RecombinationLog>)> {
    let mut out = v.clone();
    let mut trace = Trace::new();
    trace.begin_step();
    trace.snapshot("BASE_EXTEND", "X", &out, format!("starting value = {}", out.decode()));
    let logs = base_extend_in(&mut out, tbl, &mut trace, "BASE_EXTEND", "X")?;
    Ok((out, trace, logs))
}

pub(crate) fn base_extend_in(
    v: &mut RnsValue,
    tbl: &InverseTable,
    trace: &mut Trace,
    state: &str,
    register: &str,
) -> Result<Vec<RecombinationLog>> {
    let fmt = v.format().clone();
    let targets: Vec<usize> = (0..fmt.digit_count())
        .filter(|&i| v.digit(i).power_remaining() < fmt.spec(i).max_power())
        .collect();
    if targets.is_empty() {
        return Ok(Vec::new());
    }

    let mut states: Vec<RecombinationState> = targets
        .iter()
        .map(|&t| RecombinationState { target: t, accumulator: 0, weight: 1, steps: 0 })
        .collect();
    let mut logs: Vec<RecombinationLog> = targets
        .iter()
        .map(|&t| RecombinationLog { target: t, weights: Vec::new(), accumulators: Vec::new() })
        .collect();

    let mut work = v.clone();
    let mut count = 0u32;
    loop {
        if work.is_zero() {
            break;
        }
        let Some(&index) = work.valid_ascending().first() else { break };
        let radix = work.current_modulus(index);
        let a = work.digit(index).value();
        count += 1;
        trace.counters.mrc_digits += 1;

        for (st, log) in states.iter_mut().zip(&mut logs) {
            let m = fmt.spec(st.target).modulus();
            log.weights.push(st.weight);
            st.accumulator = addmod(st.accumulator, mulmod(a % m, st.weight, m), m);
            log.accumulators.push(st.accumulator);
            st.weight = mulmod(st.weight, radix % m, m);
            st.steps += 1;
        }

        work.sub_scalar_in_place(a);
        trace.begin_step();
        trace.snapshot(
            state,
            "MRC",
            &work,
            format!("subtract d_{} = {a}; mixed-radix digit a_{count} = {a}", index + 1),
        );
        if trace.capturing() {
            let mut cells: Vec<Option<u64>> = vec![None; fmt.digit_count()];
            for st in &states {
                cells[st.target] = Some(st.accumulator);
            }
            let weights: Vec<String> = states.iter().map(|s| s.weight.to_string()).collect();
            trace.push(
                state,
                "RECOMB",
                cells,
                targets.iter().map(|&t| fmt.spec(t).modulus()).collect(),
                format!("accumulate a*weight per target; next weights [{}]", weights.join(", ")),
            );
        }
        if work.is_zero() {
            break;
        }
        scale_out_digit_tbl(&mut work, index, tbl);
        trace.begin_step();
        trace.snapshot(
            state,
            "MRC",
            &work,
            format!("multiply by 1/{radix}; d_{} invalidated", index + 1),
        );
    }

    for st in &states {
        let max_power = fmt.spec(st.target).max_power();
        v.set_digit(st.target, st.accumulator, max_power);
    }
    trace.begin_step();
    trace.snapshot(state, register, v, format!("all moduli restored; value = {}", v.decode()));
    Ok(logs)
}
