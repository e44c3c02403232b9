//! Differential fuzzing of the whole pipeline: whenever the interpreter and
//! the grounded translation both produce a number for the same closed
//! expression, they must agree. Budgets are kept small so divergent inputs
//! fail fast instead of hanging the fuzzer.

#![no_main]

use libfuzzer_sys::fuzz_target;

use pcf2asp::eval::{evaluate, Closure, StepBudget, Value};
use pcf2asp::ground::{extract_result, ground_positive, GroundBudget};
use pcf2asp::transpile::translate;

fuzz_target!(|data: &[u8]| {
    let Ok(source) = std::str::from_utf8(data) else {
        return;
    };
    if source.len() > 2 * 1024 {
        return;
    }
    let Ok(expr) = pcf2asp::pcf::parse_expr(source) else {
        return;
    };
    if !expr.free_vars().is_empty() {
        return;
    }
    let value = evaluate(&Closure::closed(expr.clone()), StepBudget::new(20_000));
    let program = match translate(&expr) {
        Ok(p) => p,
        Err(_) => return,
    };
    let grounded = ground_positive(&program, &GroundBudget::new(20_000, 20_000))
        .map(|answer| extract_result(&answer));
    if let (Ok(Value::Nat(n)), Ok(Ok(Some(m)))) = (&value, &grounded) {
        assert_eq!(
            *m, *n as i64,
            "interpreter and grounding disagree on `{source}`"
        );
    }
});
