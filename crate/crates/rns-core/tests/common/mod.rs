//! Property drivers shared by the standalone property suite and the
//! acceptance gate. Each returns `Err` with a description on the first
//! counterexample.

use num_bigint::{BigUint, RandBigInt};
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::sync::Arc;

use rns_core::oracle::toy_format;
use rns_core::{
    base_extend, build_inverse_table, compare, mod9_default_format, mrc_digits, mrc_value,
    scale_by_power, InverseTable, RnsFormat, RnsValue,
};

pub type Check = Result<(), String>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_value(rng: &mut ChaCha8Rng, fmt: &Arc<RnsFormat>) -> (BigUint, RnsValue) {
    let x = rng.gen_biguint_below(&fmt.range());
    let v = RnsValue::encode(fmt, &x).expect("in range");
    (x, v)
}

/// Invalidate a random subset of digits (always keeping at least one).
/// Falls back to the original when the decoded value would no longer fit
/// the remaining range.
pub fn randomly_reduce(rng: &mut ChaCha8Rng, v: &RnsValue) -> RnsValue {
    let n = v.format().digit_count();
    let keep = rng.gen_range(1..=n);
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut out = v.clone();
    for &i in &order[keep..] {
        out = out.invalidate_digit(i);
    }
    if v.decode() < out.effective_range() {
        out
    } else {
        v.clone()
    }
}

pub fn check_round_trip_toy_exhaustive() -> Check {
    let fmt = toy_format();
    for x in 0u64..360 {
        let v = RnsValue::encode_u64(&fmt, x).map_err(|e| e.to_string())?;
        let back = v.decode().to_u64().unwrap();
        if back != x {
            return Err(format!("round trip failed for {x}: got {back}"));
        }
    }
    Ok(())
}

pub fn check_round_trip_random(cases: usize, seed: u64) -> Check {
    let fmt = mod9_default_format();
    let mut rng = rng(seed);
    for i in 0..cases {
        let (x, v) = random_value(&mut rng, &fmt);
        if v.decode() != x {
            return Err(format!("case {i}: round trip failed for {x}"));
        }
    }
    Ok(())
}

pub fn check_pac_homomorphism(cases: usize, seed: u64) -> Check {
    let fmt = mod9_default_format();
    let range = fmt.range();
    let mut rng = rng(seed);
    for i in 0..cases {
        let (a, va) = random_value(&mut rng, &fmt);
        let (b, vb) = random_value(&mut rng, &fmt);
        let sum = va.pac_add(&vb).map_err(|e| e.to_string())?.decode();
        if sum != (&a + &b) % &range {
            return Err(format!("case {i}: add homomorphism failed"));
        }
        let diff = va.pac_sub(&vb).map_err(|e| e.to_string())?.decode();
        let expected_diff = ((&a + &range) - &b) % &range;
        if diff != expected_diff {
            return Err(format!("case {i}: sub homomorphism failed"));
        }
        let prod = va.pac_mul(&vb).map_err(|e| e.to_string())?.decode();
        if prod != (&a * &b) % &range {
            return Err(format!("case {i}: mul homomorphism failed"));
        }
    }
    Ok(())
}

fn scaling_case(
    tbl: &InverseTable,
    fmt: &Arc<RnsFormat>,
    c: &BigUint,
    digit: usize,
    k: u32,
) -> Check {
    let factor = BigUint::from(fmt.spec(digit).base().pow(k));
    let x = c * &factor;
    if x >= fmt.range() {
        return Ok(());
    }
    let v = RnsValue::encode(fmt, &x).map_err(|e| e.to_string())?;
    let scaled = scale_by_power(&v, digit, k, tbl).map_err(|e| e.to_string())?;
    if scaled.decode() != *c {
        return Err(format!("exact-division law failed: {x} / {factor}"));
    }
    let want_range = fmt.range() / &factor;
    if scaled.effective_range() != want_range {
        return Err(format!("range law failed for {x} / {factor}"));
    }
    Ok(())
}

pub fn check_scaling_laws(cases: usize, seed: u64) -> Check {
    let fmt = mod9_default_format();
    let tbl = build_inverse_table(&fmt);
    let mut rng = rng(seed);
    let power_digits: Vec<usize> = (0..fmt.digit_count())
        .filter(|&i| fmt.spec(i).is_power_based())
        .collect();
    for _ in 0..cases {
        let digit = power_digits[rng.gen_range(0..power_digits.len())];
        let k = rng.gen_range(1..=fmt.spec(digit).max_power());
        let factor = BigUint::from(fmt.spec(digit).base().pow(k));
        let c = rng.gen_biguint_below(&(fmt.range() / &factor));
        scaling_case(&tbl, &fmt, &c, digit, k)?;
    }
    // Toy format, exhaustively: every value and every applicable factor.
    let toy = toy_format();
    let toy_tbl = build_inverse_table(&toy);
    for x in 0u64..360 {
        let v = RnsValue::encode_u64(&toy, x).map_err(|e| e.to_string())?;
        for digit in 0..toy.digit_count() {
            let max_k = v.divisible_powers(digit).map_err(|e| e.to_string())?;
            for k in 1..=max_k {
                let scaled = scale_by_power(&v, digit, k, &toy_tbl).map_err(|e| e.to_string())?;
                let factor = toy.spec(digit).base().pow(k);
                if scaled.decode().to_u64().unwrap() * factor != x {
                    return Err(format!("toy exact-division failed: {x} digit {digit} k {k}"));
                }
            }
        }
    }
    Ok(())
}

pub fn check_mrc_reconstruction(cases: usize, seed: u64) -> Check {
    let toy = toy_format();
    for x in 0u64..360 {
        let v = RnsValue::encode_u64(&toy, x).map_err(|e| e.to_string())?;
        let (digits, _) = mrc_digits(&v);
        if mrc_value(&digits).to_u64().unwrap() != x {
            return Err(format!("toy reconstruction failed for {x}"));
        }
    }
    let fmt = mod9_default_format();
    let mut rng = rng(seed);
    for i in 0..cases {
        let (x, v) = random_value(&mut rng, &fmt);
        let (digits, _) = mrc_digits(&v);
        if mrc_value(&digits) != x {
            return Err(format!("case {i}: reconstruction failed for {x}"));
        }
        for d in &digits {
            if d.value >= d.radix {
                return Err(format!("case {i}: digit {} out of radix {}", d.value, d.radix));
            }
        }
    }
    Ok(())
}

pub fn check_base_extension(cases: usize, seed: u64) -> Check {
    let fmt = mod9_default_format();
    let tbl = build_inverse_table(&fmt);
    let mut rng = rng(seed);
    for i in 0..cases {
        let (x, v) = random_value(&mut rng, &fmt);
        let reduced = randomly_reduce(&mut rng, &v);
        if x >= reduced.effective_range() {
            continue;
        }
        let extended = base_extend(&reduced, &tbl).map_err(|e| e.to_string())?;
        if !extended.is_normalized() {
            return Err(format!("case {i}: extension did not normalize"));
        }
        if extended.decode() != x {
            return Err(format!("case {i}: extension changed the value"));
        }
        let again = base_extend(&extended, &tbl).map_err(|e| e.to_string())?;
        if again != extended {
            return Err(format!("case {i}: extension is not idempotent"));
        }
    }
    // Power-reduced digits as extension targets: divide two factors out,
    // then restore the full word.
    let power_digits: Vec<usize> = (0..fmt.digit_count())
        .filter(|&i| fmt.spec(i).is_power_based())
        .collect();
    for i in 0..cases / 4 {
        let a = power_digits[rng.gen_range(0..power_digits.len())];
        let mut b = power_digits[rng.gen_range(0..power_digits.len())];
        if b == a {
            b = power_digits[(power_digits.iter().position(|&d| d == a).unwrap() + 1) % power_digits.len()];
        }
        let ka = rng.gen_range(1..=fmt.spec(a).max_power());
        let kb = rng.gen_range(1..=fmt.spec(b).max_power());
        let product = BigUint::from(fmt.spec(a).base().pow(ka)) * BigUint::from(fmt.spec(b).base().pow(kb));
        let c = rng.gen_biguint_below(&(fmt.range() / &product));
        let x = &c * &product;
        let v = RnsValue::encode(&fmt, &x).map_err(|e| e.to_string())?;
        let (scaled, _) = rns_core::multi_factor_scale(&v, &[(a, ka), (b, kb)], &tbl)
            .map_err(|e| e.to_string())?;
        if scaled.decode() != c {
            return Err(format!("case {i}: factor chain did not divide exactly"));
        }
        let restored = base_extend(&scaled, &tbl).map_err(|e| e.to_string())?;
        if !restored.is_normalized() || restored.decode() != c {
            return Err(format!("case {i}: restoring reduced powers failed"));
        }
    }
    Ok(())
}

pub fn check_compare_order(cases: usize, seed: u64) -> Check {
    let toy = toy_format();
    for a in 0u64..60 {
        for b in 0u64..60 {
            let va = RnsValue::encode_u64(&toy, a).map_err(|e| e.to_string())?;
            let vb = RnsValue::encode_u64(&toy, b).map_err(|e| e.to_string())?;
            let got = compare(&va, &vb).map_err(|e| e.to_string())?;
            if got != a.cmp(&b) {
                return Err(format!("toy compare failed for ({a}, {b})"));
            }
        }
    }
    let fmt = mod9_default_format();
    let mut rng = rng(seed);
    for i in 0..cases {
        let (a, va) = random_value(&mut rng, &fmt);
        let (b, vb) = random_value(&mut rng, &fmt);
        let got = compare(&va, &vb).map_err(|e| e.to_string())?;
        if got != a.cmp(&b) {
            return Err(format!("case {i}: compare disagreed with integer order"));
        }
        if compare(&va, &va).map_err(|e| e.to_string())? != Ordering::Equal {
            return Err(format!("case {i}: self-compare not equal"));
        }
    }
    let zero = RnsValue::encode_u64(&fmt, 0).map_err(|e| e.to_string())?;
    if !zero.decode().is_zero() {
        return Err("zero decode".into());
    }
    Ok(())
}
