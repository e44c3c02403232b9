//! Fuzz the ASP program parser: no panics, and accepted programs must
//! round-trip through the emitter.

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(source) = std::str::from_utf8(data) else {
        return;
    };
    if source.len() > 16 * 1024 {
        return;
    }
    if let Ok(program) = pcf2asp::asp::parse_program(source) {
        let printed = pcf2asp::asp::emit(&program);
        let reparsed = pcf2asp::asp::parse_program(&printed)
            .unwrap_or_else(|e| panic!("emitted text failed to reparse: {e}\n{printed}"));
        assert_eq!(reparsed, program, "round trip changed the program\n{printed}");
    }
});
