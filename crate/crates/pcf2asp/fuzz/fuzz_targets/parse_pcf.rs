//! Fuzz the PCF parser: it must never panic, and anything it accepts must
//! survive a pretty-print/reparse round trip unchanged.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(source) = std::str::from_utf8(data) else {
        return;
    };
    if source.len() > 16 * 1024 {
        return;
    }
    if let Ok(expr) = pcf2asp::pcf::parse_expr(source) {
        let printed = pcf2asp::pcf::pretty(&expr);
        let reparsed = pcf2asp::pcf::parse_expr(&printed)
            .unwrap_or_else(|e| panic!("pretty output failed to reparse: {e}\n{printed}"));
        assert_eq!(reparsed, expr, "round trip changed the tree\n{printed}");
    }
});
