#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(raw) = elocc::io::read_schmidt_csv(s) {
            if let Ok(v) = elocc::normalize_descending(&raw, 1e-12) {
                // Exercise the numeric paths behind the parser.
                let s2 = elocc::renyi_entropy(&v, 2.0);
                assert!(s2.is_finite());
                assert!(elocc::locc_convertible(&v, &v));
            }
        }
    }
});
