mod common;

use common::{arb_circuit, arb_gate, arb_graph};
use proptest::prelude::*;
use tango::arch::{Builtin, CouplingGraph};
use tango::circuit::{build_dag, compute_depth, count_cx, reverse_circuit, Gate, GateKind, LogicalCircuit};
use tango::mapping::Mapping;
use tango::peephole::{cancel_and_commute, decompose_naive, decompose_swaps, optimize};
use tango::pipeline::{run_pipeline, PipelineConfig};
use tango::placement::{candidate_scores, compute_weights, place_all, z_scores, PlacementConfig};
use tango::router::{route, RouterConfig};
use tango::verify::{check_connectivity, equivalent, unitary_of, TOLERANCE};

/// Longest weighted path through explicit wire-predecessor edges.
fn longest_path_depth(gates: &[Gate]) -> usize {
    let gates: Vec<&Gate> = gates.iter().filter(|g| g.kind != GateKind::Barrier).collect();
    let cost = |g: &Gate| if g.kind == GateKind::Swap { 3 } else { 1 };
    let mut finish = vec![0usize; gates.len()];
    for (i, g) in gates.iter().enumerate() {
        let start = (0..i)
            .filter(|&j| gates[j].qubits.iter().any(|q| g.qubits.contains(q)))
            .map(|j| finish[j])
            .max()
            .unwrap_or(0);
        finish[i] = start + cost(g);
    }
    finish.into_iter().max().unwrap_or(0)
}

fn floyd_warshall(g: &CouplingGraph) -> Vec<Vec<usize>> {
    let n = g.num_physical();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for &(u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

fn arb_with_swaps(max_n: usize, max_len: usize) -> impl Strategy<Value = (usize, Vec<Gate>)> {
    (2..=max_n).prop_flat_map(move |n| {
        let swap = (0..n, 1..n).prop_map(move |(a, d)| Gate::swap(a, (a + d) % n));
        let gate = prop_oneof![3 => arb_gate(n), 1 => swap];
        (Just(n), prop::collection::vec(gate, 0..=max_len))
    })
}

fn pipeline_quick() -> PipelineConfig {
    let mut c = PipelineConfig::default();
    c.router.runs = 1;
    c
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn layers_grow_along_dependencies(c in arb_circuit(6, 40)) {
        let dag = build_dag(&c);
        for (g, preds) in dag.predecessors.iter().enumerate() {
            for &p in preds {
                prop_assert!(p < g);
                prop_assert!(dag.layer[p] < dag.layer[g]);
            }
            if !preds.is_empty() {
                prop_assert_eq!(dag.layer[g], preds.iter().map(|&p| dag.layer[p] + 1).max().unwrap());
            }
        }
        let w = compute_weights(&c, &dag, 0.99);
        for a in 0..dag.len() {
            for b in 0..dag.len() {
                if dag.layer[a] <= dag.layer[b] {
                    prop_assert!(w.gate_weight[a] >= w.gate_weight[b]);
                }
            }
        }
    }

    #[test]
    fn depth_matches_longest_path((n, gates) in arb_with_swaps(6, 40)) {
        prop_assert_eq!(compute_depth(&gates, n), longest_path_depth(&gates));
    }

    #[test]
    fn reversal_is_an_involution(c in arb_circuit(6, 30)) {
        let r = reverse_circuit(&c);
        prop_assert_eq!(r.depth(), c.depth());
        prop_assert_eq!(reverse_circuit(&r), c);
    }

    #[test]
    fn bfs_distances_match_floyd_warshall(g in arb_graph(2, 14)) {
        let fw = floyd_warshall(&g);
        for (a, row) in fw.iter().enumerate() {
            for (b, &d) in row.iter().enumerate() {
                prop_assert_eq!(g.distance(a, b), d);
            }
        }
        prop_assert_eq!(g.diameter(), fw.iter().flatten().copied().max().unwrap());
    }

    #[test]
    fn center_has_minimum_eccentricity(g in arb_graph(1, 14)) {
        let fw = floyd_warshall(&g);
        let ecc: Vec<usize> = fw.iter().map(|r| *r.iter().max().unwrap()).collect();
        let best = *ecc.iter().min().unwrap();
        prop_assert_eq!(ecc[g.center()], best);
    }

    #[test]
    fn z_scores_have_zero_mean_unit_variance(v in prop::collection::vec(-1e3f64..1e3, 2..40)) {
        let z = z_scores(&v);
        let n = z.len() as f64;
        let mean = z.iter().sum::<f64>() / n;
        let var = z.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        prop_assert!(mean.abs() < 1e-9);
        prop_assert!(var.abs() < 1e-9 || (var - 1.0).abs() < 1e-9, "variance {}", var);
    }

    #[test]
    fn placement_scores_are_scale_invariant(
        c in arb_circuit(6, 30),
        g in arb_graph(6, 12),
        factor in 0.01f64..100.0,
        placed in 0usize..5,
    ) {
        let dag = build_dag(&c);
        let w = compute_weights(&c, &dag, 0.99);
        let mut scaled = w.clone();
        scaled.scale_pairs(factor);
        let n = c.num_qubits;
        let mut m = Mapping::new(n, g.num_physical());
        for q in 0..placed.min(n.saturating_sub(1)) {
            m.assign(q, q);
        }
        let q = n - 1;
        let cfg = PlacementConfig::default();
        let a = candidate_scores(q, &m, &w, &g, &cfg);
        let b = candidate_scores(q, &m, &scaled, &g, &cfg);
        for (x, y) in a.iter().zip(&b) {
            prop_assert_eq!(x.0, y.0);
            prop_assert!((x.3 - y.3).abs() < 1e-6, "{} vs {}", x.3, y.3);
        }
    }

    #[test]
    fn placement_is_complete_and_injective(c in arb_circuit(8, 30), g in arb_graph(8, 14)) {
        let m = place_all(&c, &g, &PlacementConfig::default()).unwrap();
        prop_assert!(m.is_complete());
        let mut seen = std::collections::HashSet::new();
        for q in 0..c.num_qubits {
            prop_assert!(seen.insert(m.phys(q)));
            prop_assert_eq!(m.logical(m.phys(q)), Some(q));
        }
    }

    #[test]
    fn routing_is_legal_and_equivalent(c in arb_circuit(6, 30), g in arb_graph(6, 9)) {
        let out = run_pipeline(&c, &g, &pipeline_quick()).unwrap();
        prop_assert!(check_connectivity(&out.circuit.gates, &g).is_empty());
        prop_assert!(equivalent(&c, &out.circuit.gates, &out.circuit.initial_mapping, &out.circuit.final_mapping).unwrap());
    }

    #[test]
    fn router_depth_matches_emitted_depth(c in arb_circuit(7, 40), g in arb_graph(7, 12)) {
        let m = place_all(&c, &g, &PlacementConfig::default()).unwrap();
        let routed = route(&c, &g, &m, &RouterConfig::default());
        prop_assert_eq!(compute_depth(&routed.gates, g.num_physical()), routed.router_depth);
        let naive = decompose_naive(&routed.gates);
        prop_assert_eq!(compute_depth(&naive, g.num_physical()), routed.router_depth);
    }

    #[test]
    fn peephole_preserves_the_unitary((n, gates) in arb_with_swaps(5, 30)) {
        let before = LogicalCircuit::with_gates(n, gates.clone());
        let after = LogicalCircuit::with_gates(n, optimize(&gates, n));
        let (u, v) = (unitary_of(&before).unwrap(), unitary_of(&after).unwrap());
        prop_assert!(u.equal_up_to_phase(&v, TOLERANCE));
    }

    #[test]
    fn peephole_reaches_a_fixpoint((_n, gates) in arb_with_swaps(5, 30)) {
        let once = cancel_and_commute(&decompose_naive(&gates));
        prop_assert_eq!(cancel_and_commute(&once), once);
    }

    #[test]
    fn peephole_never_makes_things_worse((n, gates) in arb_with_swaps(6, 40)) {
        let naive = decompose_naive(&gates);
        let adaptive = decompose_swaps(&gates, n);
        prop_assert_eq!(count_cx(&adaptive), count_cx(&naive));
        prop_assert_eq!(compute_depth(&adaptive, n), compute_depth(&naive, n));
        let opt = optimize(&gates, n);
        prop_assert!(count_cx(&opt) <= count_cx(&naive));
        prop_assert!(compute_depth(&opt, n) <= compute_depth(&naive, n));
    }

    #[test]
    fn equivalence_is_reflexive_and_phase_blind(c in arb_circuit(5, 25)) {
        let id = Mapping::identity(c.num_qubits, c.num_qubits);
        prop_assert!(equivalent(&c, &c.gates, &id, &id).unwrap());
        // RZ and U1 differ only by a global phase.
        let swapped: Vec<Gate> = c.gates.iter().map(|g| match g.kind {
            GateKind::U1 => Gate::rotation(GateKind::RZ, g.qubits[0], g.params[0]),
            GateKind::RZ => Gate::rotation(GateKind::U1, g.qubits[0], g.params[0]),
            _ => g.clone(),
        }).collect();
        prop_assert!(equivalent(&c, &swapped, &id, &id).unwrap());
        let mut broken = c.gates.clone();
        broken.push(Gate::single(GateKind::X, 0));
        prop_assert!(!equivalent(&c, &broken, &id, &id).unwrap());
    }
}

#[test]
fn builtin_devices_match_the_oracle() {
    for (which, nodes, edges) in [(Builtin::Q20, 20, 43), (Builtin::Rochester, 53, 58)] {
        let g = CouplingGraph::builtin(which);
        assert_eq!((g.num_physical(), g.edges().len()), (nodes, edges));
        let fw = floyd_warshall(&g);
        assert!(fw.iter().flatten().all(|&d| d < nodes), "{which:?} is disconnected");
        assert_eq!(g.diameter(), fw.iter().flatten().copied().max().unwrap());
    }
}

fn corpus(target: &str) -> Vec<String> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files.iter().map(|p| std::fs::read_to_string(p).unwrap()).collect()
}

#[test]
fn fuzz_seeds_satisfy_target_invariants() {
    use tango::arch::load_edges;
    use tango::mapping::MapFile;
    use tango::qasm::{parse_qasm, serialize_qasm};

    for text in corpus("parse_qasm") {
        let c = parse_qasm(&text).unwrap();
        let again = parse_qasm(&serialize_qasm(&c, c.num_qubits)).unwrap();
        assert_eq!(
            (again.gates.len(), again.cx_count(), again.depth()),
            (c.gates.len(), c.cx_count(), c.depth())
        );
    }
    for text in corpus("load_edges") {
        let g = load_edges(&text).unwrap();
        assert_eq!(load_edges(&g.to_string()).unwrap().edges(), g.edges());
    }
    for text in corpus("map_json") {
        let f = MapFile::parse(&text).unwrap();
        let width = f.initial.iter().chain(&f.final_).copied().max().map_or(0, |m| m + 1);
        let (a, b) = f.mappings(width).unwrap();
        assert_eq!((a.layout(), b.layout()), (f.initial.clone(), f.final_.clone()));
    }
}

fn qasm_soup() -> impl Strategy<Value = String> {
    let token = prop::sample::select(vec![
        "OPENQASM 2.0;",
        "include \"qelib1.inc\";",
        "qreg q[3];",
        "creg c[3];",
        "qreg",
        "q[",
        "]",
        "[",
        "(",
        ")",
        "pi",
        "/",
        "*",
        "-",
        ",",
        ";",
        "\n",
        "cx",
        "u3",
        "rz",
        "h",
        "swap",
        "measure",
        "->",
        "barrier",
        "gate",
        "{",
        "}",
        "0",
        "1",
        "2",
        "99999999999999999999",
        "1e308",
        "q",
        "c",
        "//",
        "if",
        "==",
        "opaque",
    ]);
    prop::collection::vec(token, 0..60).prop_map(|t| t.join(" "))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn qasm_parser_never_panics(text in qasm_soup()) {
        if let Ok(c) = tango::qasm::parse_qasm(&text) {
            let again = tango::qasm::parse_qasm(&tango::qasm::serialize_qasm(&c, c.num_qubits)).unwrap();
            prop_assert_eq!(again.gates.len(), c.gates.len());
        }
    }

    #[test]
    fn edge_loader_never_panics(text in "[0-9 #\\-\\n]{0,80}") {
        let _ = tango::arch::load_edges(&text);
    }

    #[test]
    fn map_file_parser_never_panics(text in "[\\{\\}\\[\\]\",:0-9 a-z]{0,80}") {
        if let Ok(f) = tango::mapping::MapFile::parse(&text) {
            let width = f.initial.iter().chain(&f.final_).copied().max().map_or(0, |m| m + 1);
            if width <= 1 << 16 {
                let _ = f.mappings(width);
            }
        }
    }
}
