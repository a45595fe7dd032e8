#![no_main]

use libfuzzer_sys::fuzz_target;
use tango::qasm::{parse_qasm, serialize_qasm};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(circuit) = parse_qasm(text) else { return };
    // Whatever parses must survive a round trip.
    let again = parse_qasm(&serialize_qasm(&circuit, circuit.num_qubits)).expect("serialized QASM parses");
    assert_eq!(again.gates.len(), circuit.gates.len());
    assert_eq!(again.cx_count(), circuit.cx_count());
    assert_eq!(again.depth(), circuit.depth());
});
