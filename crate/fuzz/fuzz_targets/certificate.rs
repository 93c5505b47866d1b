#![no_main]

use branchforge::branching::{validate_certificate, BranchingCertificate};
use branchforge::geometries::projective_levi;
use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

static GRAPH: OnceLock<branchforge::graph::Graph> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let g = GRAPH.get_or_init(|| projective_levi(2).unwrap().graph);
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cert) = BranchingCertificate::from_json(g, text) {
        let _ = validate_certificate(g, &cert);
        let again = BranchingCertificate::from_json(g, &cert.to_json(g)).expect("written certificates parse");
        assert_eq!(cert, again);
    }
});
