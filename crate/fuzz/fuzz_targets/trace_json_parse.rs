#![no_main]

use libfuzzer_sys::fuzz_target;
use rns_core::{emit_trace, parse_trace_json, Trace, TraceFormat};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(rows) = parse_trace_json(text) else { return };
    // Whatever parses must survive a full emit/parse cycle unchanged, and
    // the other emitters must not panic on it.
    let trace = Trace::from_rows(rows.clone());
    let json = emit_trace(&trace, TraceFormat::Json);
    let reparsed = parse_trace_json(&json).expect("emitted trace json parses");
    assert_eq!(reparsed, rows);
    let _ = emit_trace(&trace, TraceFormat::Markdown);
    let _ = emit_trace(&trace, TraceFormat::Csv);
});
