#![no_main]

use delpezzo::literal::parse_class;
use delpezzo::positivity::is_k_very_ample;
use delpezzo::{Rank, SurfaceContext};
use libfuzzer_sys::fuzz_target;

// First byte: rank and padding; second byte: k; the rest is the literal.
fuzz_target!(|data: &[u8]| {
    let [head, k, rest @ ..] = data else {
        return;
    };
    let Ok(text) = std::str::from_utf8(rest) else {
        return;
    };
    let rank = Rank::new(usize::from(head % 8) + 1).unwrap();
    let pad = head & 0x80 != 0;
    if let Ok(class) = parse_class(text, rank, pad) {
        assert_eq!(class.rank(), rank);
        let reparsed = parse_class(&class.to_string(), rank, false).expect("rendered class parses");
        assert_eq!(reparsed, class);
        let ctx = SurfaceContext::new(rank);
        let report = is_k_very_ample(&class, i64::from(k % 4), &ctx).expect("valid class and k");
        assert_eq!(report.subject, class);
    }
});
