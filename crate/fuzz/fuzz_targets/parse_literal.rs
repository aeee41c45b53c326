#![no_main]

use delpezzo::literal::parse_literal;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(literal) = parse_literal(text) {
        let rendered = literal.to_string();
        let reparsed = parse_literal(&rendered).expect("rendered literal parses");
        assert_eq!(reparsed, literal, "{text:?} -> {rendered:?}");
    }
});
