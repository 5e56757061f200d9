#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(spec) = elocc::ModelSpec::parse(s) {
            // A parsed spec must round-trip through its display form.
            let shown = spec.to_string();
            let again = elocc::ModelSpec::parse(&shown).expect("display form reparses");
            assert_eq!(spec, again);
            let _ = spec.build(4);
        }
    }
});
