#![no_main]

use branchforge::geometries::projective_levi;
use branchforge::roundtree::RoundTreeStage;
use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

static GRAPH: OnceLock<branchforge::graph::Graph> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let g = GRAPH.get_or_init(|| projective_levi(2).unwrap().graph);
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(stage) = RoundTreeStage::from_json(g, text) {
        let _ = stage.verify();
        let json = stage.to_json();
        let again = RoundTreeStage::from_json(g, &json).expect("written stages parse");
        assert_eq!(again.to_json(), json);
    }
});
