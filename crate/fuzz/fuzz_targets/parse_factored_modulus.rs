#![no_main]

use libfuzzer_sys::fuzz_target;

use totient_classes::classifier::FactoredModulus;

fuzz_target!(|data: &str| {
    if let Ok(m) = data.parse::<FactoredModulus>() {
        // anything that parses must round-trip through its display form
        let again: FactoredModulus = m
            .to_string()
            .parse()
            .expect("display output re-parses");
        assert_eq!(again, m);
    }
});
