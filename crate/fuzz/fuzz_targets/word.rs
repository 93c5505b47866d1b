#![no_main]

use branchforge::coxeter::normal_form;
use branchforge::geometries::projective_levi;
use branchforge::graph::parse_word;
use libfuzzer_sys::fuzz_target;
use std::sync::OnceLock;

static GRAPH: OnceLock<branchforge::graph::Graph> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let g = GRAPH.get_or_init(|| projective_levi(2).unwrap().graph);
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(word) = parse_word(g, text) {
        let nf = normal_form(g, &word).expect("parsed words use valid letters");
        assert!(nf.len() <= word.len());
        // a normal form is its own normal form
        assert_eq!(normal_form(g, nf.letters()).unwrap(), nf);
    }
});
