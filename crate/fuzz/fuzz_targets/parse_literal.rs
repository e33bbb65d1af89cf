#![no_main]

use ddelay::{Rational, Scalar};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(x) = Rational::parse_literal(text) {
        let lit = x.to_literal();
        assert_eq!(Rational::parse_literal(&lit).ok(), Some(x), "{text:?} -> {lit:?}");
    }
    if let Ok(x) = f64::parse_literal(text) {
        assert!(x.is_finite());
        assert_eq!(f64::parse_literal(&x.to_literal()).ok(), Some(x));
    }
});
