#![no_main]

use libfuzzer_sys::fuzz_target;
use rns_core::config::parse_format_config;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let first = parse_format_config(text);
    // Parsing is deterministic and never panics; accepted configs must
    // build into a validated format or fail cleanly.
    let second = parse_format_config(text);
    match (&first, &second) {
        (Ok(a), Ok(b)) => {
            assert_eq!(a, b);
            let _ = a.build();
        }
        (Err(_), Err(_)) => {}
        _ => panic!("parse is not deterministic"),
    }
});
