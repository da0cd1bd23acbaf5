#![no_main]

use libfuzzer_sys::fuzz_target;
use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rns_core::oracle::{oracle_divmod, toy_format};
use rns_core::{build_inverse_table, divide, mod9_power_format, DivideOptions, RnsValue};

fuzz_target!(|data: &[u8]| {
    if data.len() < 8 {
        return;
    }
    // Differential check on the toy word from the first eight bytes.
    let x = u32::from_le_bytes(data[0..4].try_into().unwrap()) as u64 % 360;
    let y = 1 + u32::from_le_bytes(data[4..8].try_into().unwrap()) as u64 % 359;
    let toy = toy_format();
    let tbl = build_inverse_table(&toy);
    let xv = RnsValue::encode_u64(&toy, x).unwrap();
    let yv = RnsValue::encode_u64(&toy, y).unwrap();
    let r = divide(&xv, &yv, &tbl, &DivideOptions::quiet()).expect("toy division succeeds");
    assert_eq!(r.quotient.decode().to_u64().unwrap(), x / y);
    assert_eq!(r.remainder.decode().to_u64().unwrap(), x % y);

    // Wider word when enough bytes remain.
    if data.len() >= 24 {
        let fmt = mod9_power_format();
        let tbl = build_inverse_table(&fmt);
        let range = fmt.range();
        let x = BigUint::from_bytes_le(&data[8..16]) % &range;
        let y = BigUint::from_bytes_le(&data[16..24]) % &range;
        if y.is_zero() {
            return;
        }
        let xv = RnsValue::encode(&fmt, &x).unwrap();
        let yv = RnsValue::encode(&fmt, &y).unwrap();
        let (eq, er) = oracle_divmod(&x, &y).unwrap();
        match divide(&xv, &yv, &tbl, &DivideOptions::quiet()) {
            Ok(r) => {
                assert_eq!(r.quotient.decode(), eq);
                assert_eq!(r.remainder.decode(), er);
            }
            // Only divisors at the very top of the range may refuse.
            Err(rns_core::Error::IncrementOverflow) => {
                assert_eq!(&y + BigUint::one(), range);
            }
            Err(e) => panic!("unexpected division error: {e}"),
        }
    }
});
