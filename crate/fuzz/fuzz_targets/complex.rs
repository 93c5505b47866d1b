#![no_main]

use branchforge::surface::{surface_checks, Complex2D};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(k) = Complex2D::from_json(text) {
        let _ = surface_checks(&k);
        let again = Complex2D::from_json(&k.to_json()).expect("written complexes parse");
        assert_eq!(k, again);
    }
});
