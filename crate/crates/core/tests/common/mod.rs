#![allow(dead_code)]

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use tango::arch::CouplingGraph;
use tango::circuit::{Gate, GateKind, LogicalCircuit};

const SINGLES: [GateKind; 8] = [
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
    GateKind::H,
    GateKind::S,
    GateKind::Sdg,
    GateKind::T,
    GateKind::Tdg,
];

const ROTATIONS: [GateKind; 6] = [
    GateKind::RX,
    GateKind::RY,
    GateKind::RZ,
    GateKind::U1,
    GateKind::U2,
    GateKind::U3,
];

fn random_gate(rng: &mut impl Rng, n: usize, cx_share: f64) -> Gate {
    if n >= 2 && rng.gen_bool(cx_share) {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        return Gate::cx(a, b);
    }
    let q = rng.gen_range(0..n);
    if rng.gen_bool(0.7) {
        Gate::single(*SINGLES.choose(rng).unwrap(), q)
    } else {
        let kind = *ROTATIONS.choose(rng).unwrap();
        let params = (0..kind.num_params()).map(|_| rng.gen_range(-3.2..3.2)).collect();
        Gate::new(kind, vec![q], params)
    }
}

/// Random unitary circuit, CX for roughly half of the gates.
pub fn random_circuit(rng: &mut impl Rng, n: usize, len: usize) -> LogicalCircuit {
    random_circuit_with(rng, n, len, 0.5)
}

pub fn random_circuit_with(rng: &mut impl Rng, n: usize, len: usize, cx_share: f64) -> LogicalCircuit {
    LogicalCircuit::with_gates(n, (0..len).map(|_| random_gate(rng, n, cx_share)).collect())
}

/// Adds a measurement of every qubit at the end.
pub fn with_measures(mut c: LogicalCircuit) -> LogicalCircuit {
    c.num_clbits = c.num_qubits;
    for q in 0..c.num_qubits {
        c.push(Gate::measure(q, q));
    }
    c
}

/// Random spanning tree plus `extra` random edges.
pub fn random_graph(rng: &mut impl Rng, n: usize, extra: usize) -> CouplingGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        edges.push((parent, order[i]));
    }
    for _ in 0..extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            edges.push((a, b));
        }
    }
    CouplingGraph::new(n, edges).unwrap()
}

pub fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
    let single = (prop::sample::select(SINGLES.to_vec()), 0..n).prop_map(|(k, q)| Gate::single(k, q));
    let rot = (
        prop::sample::select(ROTATIONS.to_vec()),
        0..n,
        prop::collection::vec(-3.2f64..3.2, 3),
    )
        .prop_map(|(k, q, p)| Gate::new(k, vec![q], p[..k.num_params()].to_vec()));
    let cx = (0..n, 1..n.max(2)).prop_map(move |(a, d)| Gate::cx(a, (a + d) % n));
    if n >= 2 {
        prop_oneof![2 => single, 1 => rot, 3 => cx].boxed()
    } else {
        prop_oneof![single, rot].boxed()
    }
}

pub fn arb_circuit(max_n: usize, max_len: usize) -> impl Strategy<Value = LogicalCircuit> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(arb_gate(n), 0..=max_len).prop_map(move |g| LogicalCircuit::with_gates(n, g))
    })
}

pub fn arb_graph(min_n: usize, max_n: usize) -> impl Strategy<Value = CouplingGraph> {
    (min_n..=max_n, any::<u64>(), 0usize..6).prop_map(|(n, seed, extra)| {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        random_graph(&mut rng, n, extra)
    })
}
