#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| diversity_l1::harness::profile(data));
