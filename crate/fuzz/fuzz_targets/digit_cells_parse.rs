#![no_main]

use libfuzzer_sys::fuzz_target;
use num_bigint::BigUint;
use rns_core::config::parse_digit_cells;
use rns_core::oracle::toy_format;
use rns_core::{mod9_power_format, RnsValue};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(cells) = parse_digit_cells(text) else { return };
    for fmt in [toy_format(), mod9_power_format()] {
        if cells.len() != fmt.digit_count() {
            continue;
        }
        let Ok(v) = RnsValue::from_digits(&fmt, &cells) else { continue };
        let x = v.decode();
        assert!(x < v.effective_range());
        // Every valid digit must agree with the decoded value.
        for (i, cell) in cells.iter().enumerate() {
            if let Some(c) = cell {
                let m = BigUint::from(fmt.spec(i).modulus());
                assert_eq!(&x % &m, BigUint::from(*c));
            }
        }
    }
});
