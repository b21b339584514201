#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Full sweep-config documents: grid validation caps point counts, so an
    // accepted config is cheap enough to evaluate at one corner point.
    if let Ok(config) = ptscatter::config::parse_sweep_config(data) {
        if let Some(&k) = config.grid.points().first() {
            let _ = ptscatter::sample_point(&config.potential, k, config.route);
        }
    }
});
