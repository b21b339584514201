#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    // Potential documents are untrusted input; parsing must only ever
    // return Ok/Err. Exercise the PT-residual probe on accepted values so
    // validation bugs (NaN rho, empty grids, reversed segments) surface.
    if let Ok(potential) = ptscatter::config::parse_potential_json(data) {
        let _ = potential.support_radius();
        let _ = potential.pt_symmetry_residual(8);
    }
});
