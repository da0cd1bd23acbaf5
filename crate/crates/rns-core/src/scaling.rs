//! Scaling: exact division of an RNS value by powers of its own base moduli.
//!
//! The selected digit is divided directly and loses the divided-out powers;
//! every other valid digit is multiplied by the inverse of the factor at
//! that digit's current modulus. Scaling by a digit's full remaining power
//! invalidates it.

use crate::arith::mulmod;
use crate::error::{Error, Result};
use crate::inverse::InverseTable;
use crate::trace::Trace;
use crate::value::RnsValue;

/// The minimal amount to subtract so the value becomes divisible by
/// `base_i^k`: the selected digit's value mod `base_i^k`.
pub fn offset_for(v: &RnsValue, index: usize, k: u32) -> Result<u64> {
    let d = v.digit(index);
    if !d.is_valid() {
        return Err(Error::DigitInvalid(index));
    }
    if k == 0 || k > d.power_remaining() {
        return Err(Error::PowerExceeded {
            digit: index,
            requested: k,
            available: d.power_remaining(),
        });
    }
    Ok(d.value() % v.format().spec(index).base().pow(k))
}

/// Divide by `base_index^k`; the value must already be divisible.
pub fn scale_by_power(v: &RnsValue, index: usize, k: u32, tbl: &InverseTable) -> Result<RnsValue> {
    let mut out = v.clone();
    scale_in_place(&mut out, index, k, tbl, &mut Trace::disabled(), "SCALE", "X", true, true)?;
    Ok(out)
}

/// In-place scaling shared by the traced drivers. Emits the inverse row and
/// the multiply row, mirroring the hardware's two-cycle scale. `emit_inv`
/// suppresses the inverse row when a paired register already printed it;
/// `count` is off when this register scales in the same cycles as another.
#[allow(clippy::too_many_arguments)]
pub(crate) fn scale_in_place(
    v: &mut RnsValue,
    index: usize,
    k: u32,
    tbl: &InverseTable,
    trace: &mut Trace,
    state: &str,
    register: &str,
    emit_inv: bool,
    count: bool,
) -> Result<()> {
    let digit = *v.digit(index);
    if !digit.is_valid() {
        return Err(Error::DigitInvalid(index));
    }
    if k == 0 || k > digit.power_remaining() {
        return Err(Error::PowerExceeded {
            digit: index,
            requested: k,
            available: digit.power_remaining(),
        });
    }
    let base = v.format().spec(index).base();
    let factor = base.pow(k);
    if !digit.value().is_multiple_of(factor) {
        return Err(Error::NotDivisible { digit: index, value: digit.value(), base, power: k });
    }

    if trace.capturing() && emit_inv {
        let inv_cells: Vec<Option<u64>> = (0..v.format().digit_count())
            .map(|j| {
                let d = v.digit(j);
                if j == index || !d.is_valid() {
                    None
                } else {
                    Some(tbl.inverse(index, k, j, d.power_remaining()))
                }
            })
            .collect();
        trace.push(
            state,
            "INV",
            inv_cells,
            v.current_moduli(),
            format!("multiplicative inverses of {factor}"),
        );
    }

    for j in 0..v.format().digit_count() {
        let d = *v.digit(j);
        if !d.is_valid() {
            continue;
        }
        if j == index {
            let new_power = d.power_remaining() - k;
            v.set_digit(j, d.value() / factor, new_power);
        } else {
            let m = v.current_modulus(j);
            let inv = tbl.inverse(index, k, j, d.power_remaining());
            v.set_digit(j, mulmod(d.value(), inv, m), d.power_remaining());
        }
    }
    if count {
        trace.counters.scale_steps += 1;
    }
    if trace.capturing() {
        let note = format!("multiply by 1/{factor}; value = {}", v.decode());
        trace.snapshot(state, register, v, note);
    }
    Ok(())
}

/// Left-to-right fold of `scale_by_power` over `(digit index, powers)`
/// factors, with a step trace.
pub fn multi_factor_scale(
    v: &RnsValue,
    factors: &[(usize, u32)],
    tbl: &InverseTable,
) -> Result<(RnsValue, Trace)> {
    let mut trace = Trace::new();
    let mut out = v.clone();
    trace.begin_step();
    trace.snapshot("SCALE", "X", &out, format!("starting value = {}", out.decode()));
    for (step, &(index, k)) in factors.iter().enumerate() {
        trace.begin_step();
        scale_in_place(&mut out, index, k, tbl, &mut trace, "SCALE", "X", true, true)
            .map_err(|e| Error::ScaleStep { step, source: Box::new(e) })?;
    }
    Ok((out, trace))
}
