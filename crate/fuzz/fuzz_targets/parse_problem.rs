#![no_main]

use ddelay::parse_problem_str;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(problem) = parse_problem_str(text) else {
        return;
    };
    // Emitting and reparsing must reproduce the problem exactly.
    let emitted = serde_json::to_string(&problem.to_json()).expect("emitted problem serializes");
    let again = parse_problem_str(&emitted).expect("emitted problem parses");
    assert_eq!(problem, again, "round trip changed the problem:\n{emitted}");
});
