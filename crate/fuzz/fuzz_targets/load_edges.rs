#![no_main]

use libfuzzer_sys::fuzz_target;
use tango::arch::load_edges;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(graph) = load_edges(text) else { return };
    let n = graph.num_physical();
    for a in 0..n {
        for b in 0..n {
            assert_eq!(graph.distance(a, b), graph.distance(b, a));
            assert!(graph.distance(a, b) <= graph.diameter());
        }
    }
    let again = load_edges(&graph.to_string()).expect("printed graph loads");
    assert_eq!(again.edges(), graph.edges());
});
