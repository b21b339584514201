#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    let _ = ptscatter::config::parse_grid_override(data);
});
