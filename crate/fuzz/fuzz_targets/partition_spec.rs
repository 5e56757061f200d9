#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(kind) = elocc::PartitionKind::parse(s) {
            for n in [2usize, 3, 8] {
                if let Ok(part) = kind.resolve(n) {
                    assert!(!part.a_sites().is_empty());
                    assert!(part.a_sites().len() < n);
                }
            }
        }
    }
});
