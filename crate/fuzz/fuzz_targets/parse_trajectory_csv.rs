#![no_main]

use ddelay::format::{parse_trajectory_csv, trajectory_to_csv};
use ddelay::{NumberStyle, Rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(traj) = parse_trajectory_csv::<Rational>(text) {
        let csv = trajectory_to_csv(&traj, NumberStyle::Exact);
        let again = parse_trajectory_csv::<Rational>(&csv).expect("written trajectory parses");
        assert_eq!(traj, again);
    }
    if let Ok(traj) = parse_trajectory_csv::<f64>(text) {
        let csv = trajectory_to_csv(&traj, NumberStyle::Exact);
        assert_eq!(parse_trajectory_csv::<f64>(&csv).ok(), Some(traj));
    }
});
