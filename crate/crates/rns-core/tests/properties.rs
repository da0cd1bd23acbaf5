//! Standalone property suite: every law the arithmetic promises, checked
//! against big-integer ground truth with seeded randomized cases plus
//! exhaustive toy-format sweeps.

mod common;

use common::*;
use num_bigint::{BigUint, RandBigInt};
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rand::Rng;

use rns_core::oracle::{oracle_divmod, toy_format};
use rns_core::{
    apply_script_to_numer, build_inverse_table, decompose, divide, mod9_default_format,
    offset_for, scale_by_power, DivideOptions, DivisionMode, RnsValue, ScriptStep,
};

#[test]
fn round_trip_toy_exhaustive() {
    check_round_trip_toy_exhaustive().unwrap();
}

#[test]
fn round_trip_randomized() {
    check_round_trip_random(10_000, 0x5eed_0001).unwrap();
}

#[test]
fn pac_homomorphism() {
    check_pac_homomorphism(1_500, 0x5eed_0002).unwrap();
}

#[test]
fn scaling_exact_division_and_range_laws() {
    check_scaling_laws(1_200, 0x5eed_0003).unwrap();
}

#[test]
fn mrc_reconstruction() {
    check_mrc_reconstruction(1_200, 0x5eed_0004).unwrap();
}

#[test]
fn base_extension_idempotent_and_value_preserving() {
    check_base_extension(1_200, 0x5eed_0005).unwrap();
}

#[test]
fn compare_matches_integer_order() {
    check_compare_order(1_200, 0x5eed_0006).unwrap();
}

#[test]
fn subtract_scalar_law() {
    let fmt = mod9_default_format();
    let mut rng = rng(0x5eed_0007);
    for _ in 0..1_000 {
        let (x, v) = random_value(&mut rng, &fmt);
        let t = rng.gen_range(0..=u64::MAX >> 40);
        if BigUint::from(t) > x {
            continue;
        }
        assert_eq!(v.subtract_scalar(t).decode(), x - t);
    }
}

#[test]
fn divisible_powers_matches_integer_factorization() {
    let fmt = mod9_default_format();
    let mut rng = rng(0x5eed_0008);
    for _ in 0..1_000 {
        let (x, v) = random_value(&mut rng, &fmt);
        for i in 0..fmt.digit_count() {
            let k = v.divisible_powers(i).unwrap();
            let base = BigUint::from(fmt.spec(i).base());
            let mut pow = BigUint::from(1u32);
            for _ in 0..k {
                pow *= &base;
            }
            assert_eq!(&x % &pow, BigUint::from(0u32), "base^k must divide x");
            if k < fmt.spec(i).max_power() {
                assert_ne!(&x % (&pow * &base), BigUint::from(0u32), "k must be maximal");
            }
        }
    }
}

#[test]
fn offset_then_scale_is_floor_division() {
    let fmt = mod9_default_format();
    let tbl = build_inverse_table(&fmt);
    let mut rng = rng(0x5eed_0009);
    let power_digits: Vec<usize> = (0..fmt.digit_count())
        .filter(|&i| fmt.spec(i).is_power_based())
        .collect();
    for _ in 0..1_000 {
        let (x, v) = random_value(&mut rng, &fmt);
        let i = power_digits[rng.gen_range(0..power_digits.len())];
        let k = rng.gen_range(1..=fmt.spec(i).max_power());
        let t = offset_for(&v, i, k).unwrap();
        let adjusted = v.subtract_scalar(t);
        let scaled = scale_by_power(&adjusted, i, k, &tbl).unwrap();
        let factor = BigUint::from(fmt.spec(i).base().pow(k));
        assert_eq!(scaled.decode(), &x / &factor);
    }
}

#[test]
fn scaling_order_commutes_at_value_level() {
    let fmt = mod9_default_format();
    let tbl = build_inverse_table(&fmt);
    let mut rng = rng(0x5eed_000a);
    for _ in 0..500 {
        let fa = fmt.spec(3).base(); // 3^5 digit
        let fb = fmt.spec(4).base(); // 2^8 digit
        let ka = rng.gen_range(1..=3u32);
        let kb = rng.gen_range(1..=4u32);
        let product = BigUint::from(fa.pow(ka) * fb.pow(kb));
        let c = rng.gen_biguint_below(&(fmt.range() / &product));
        let x = &c * &product;
        let v = RnsValue::encode(&fmt, &x).unwrap();
        let ab = scale_by_power(&scale_by_power(&v, 3, ka, &tbl).unwrap(), 4, kb, &tbl).unwrap();
        let ba = scale_by_power(&scale_by_power(&v, 4, kb, &tbl).unwrap(), 3, ka, &tbl).unwrap();
        assert_eq!(ab.decode(), ba.decode());
        assert_eq!(ab.decode(), c);
    }
}

#[test]
fn decomposition_laws_randomized() {
    let fmt = mod9_default_format();
    let tbl = build_inverse_table(&fmt);
    let mut rng = rng(0x5eed_000b);
    for _ in 0..200 {
        let y = rng.gen_biguint_below(&fmt.range());
        if y < BigUint::from(1u32) {
            continue;
        }
        let yv = RnsValue::encode(&fmt, &y).unwrap();
        let (script, _) = match decompose(&yv, &tbl) {
            Ok(s) => s,
            // Divisors at the very top of the range cannot be incremented.
            Err(rns_core::Error::IncrementOverflow) => continue,
            Err(e) => panic!("decompose failed: {e}"),
        };
        assert!(script.y_hat >= y, "y_hat must dominate y");
        if script.increments == 0 {
            assert_eq!(script.y_hat, y);
        }
        // Replaying the script as integer arithmetic reaches exactly 1.
        let mut w = y.clone();
        for step in &script.steps {
            match step {
                ScriptStep::Scale { factor, .. } => {
                    assert_eq!(&w % BigUint::from(*factor), BigUint::from(0u32));
                    w /= BigUint::from(*factor);
                }
                ScriptStep::Increment => w += 1u32,
                ScriptStep::BaseExtend => {}
            }
        }
        assert_eq!(w, BigUint::from(1u32));
    }
}

#[test]
fn division_euclidean_identity_randomized() {
    let fmt = mod9_default_format();
    let tbl = build_inverse_table(&fmt);
    let mut rng = rng(0x5eed_000c);
    for _ in 0..300 {
        let (x, xv) = random_value(&mut rng, &fmt);
        let y = rng.gen_biguint_below(&x.clone().max(BigUint::from(2u32))) + 1u32;
        let yv = RnsValue::encode(&fmt, &y).unwrap();
        let r = divide(&xv, &yv, &tbl, &DivideOptions::quiet()).unwrap();
        let q = r.quotient.decode();
        let rem = r.remainder.decode();
        assert_eq!(&q * &y + &rem, x);
        assert!(rem < y);
        let (eq, er) = oracle_divmod(&x, &y).unwrap();
        assert_eq!((q, rem), (eq, er));
    }
}

#[test]
fn per_iteration_partial_quotients_match_oracle() {
    let fmt = mod9_default_format();
    let tbl = build_inverse_table(&fmt);
    let mut rng = rng(0x5eed_000d);
    for _ in 0..50 {
        let (x, xv) = random_value(&mut rng, &fmt);
        let y = rng.gen_biguint_below(&x.clone().max(BigUint::from(2u32))) + 1u32;
        let yv = RnsValue::encode(&fmt, &y).unwrap();
        let (script, _) = match decompose(&yv, &tbl) {
            Ok(s) => s,
            Err(_) => continue,
        };
        let (z, _, _) = apply_script_to_numer(&xv, &script, &tbl).unwrap();
        assert_eq!(z.decode(), &x / &script.y_hat);
    }
}

#[test]
fn replay_and_live_modes_agree() {
    let fmt = mod9_default_format();
    let tbl = build_inverse_table(&fmt);
    let mut rng = rng(0x5eed_000e);
    for _ in 0..40 {
        let (x, xv) = random_value(&mut rng, &fmt);
        let y = rng.gen_biguint_below(&x.clone().max(BigUint::from(2u32))) + 1u32;
        let yv = RnsValue::encode(&fmt, &y).unwrap();
        let a = divide(&xv, &yv, &tbl, &DivideOptions::traced(DivisionMode::Replay)).unwrap();
        let b = divide(&xv, &yv, &tbl, &DivideOptions::traced(DivisionMode::Live)).unwrap();
        assert_eq!(a.quotient, b.quotient);
        assert_eq!(a.remainder, b.remainder);
        assert_eq!(a.z_values, b.z_values);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn toy_round_trip_prop(x in 0u64..360) {
        let fmt = toy_format();
        let v = RnsValue::encode_u64(&fmt, x).unwrap();
        prop_assert_eq!(v.decode().to_u64().unwrap(), x);
    }

    #[test]
    fn toy_division_prop(x in 0u64..360, y in 1u64..360) {
        let fmt = toy_format();
        let tbl = build_inverse_table(&fmt);
        let xv = RnsValue::encode_u64(&fmt, x).unwrap();
        let yv = RnsValue::encode_u64(&fmt, y).unwrap();
        let r = divide(&xv, &yv, &tbl, &DivideOptions::quiet()).unwrap();
        prop_assert_eq!(r.quotient.decode().to_u64().unwrap(), x / y);
        prop_assert_eq!(r.remainder.decode().to_u64().unwrap(), x % y);
    }

    #[test]
    fn toy_pac_prop(a in 0u64..360, b in 0u64..360) {
        let fmt = toy_format();
        let va = RnsValue::encode_u64(&fmt, a).unwrap();
        let vb = RnsValue::encode_u64(&fmt, b).unwrap();
        prop_assert_eq!(va.pac_add(&vb).unwrap().decode().to_u64().unwrap(), (a + b) % 360);
        prop_assert_eq!(va.pac_mul(&vb).unwrap().decode().to_u64().unwrap(), (a * b) % 360);
        prop_assert_eq!(va.pac_sub(&vb).unwrap().decode().to_u64().unwrap(), (360 + a - b) % 360);
    }
}
