//! Initial placement of logical qubits.
//!
//! Gates are weighted by `gamma^layer`, so earlier layers dominate. Qubits are
//! placed heaviest first: the first on the device center, every later one on
//! the free node maximizing a blend of two standardized scores, closeness to
//! already placed partners and room left for partners still to come.

use std::collections::BTreeMap;

use crate::arch::CouplingGraph;
use crate::circuit::{DependencyDag, LogicalCircuit};
use crate::mapping::Mapping;
use crate::tiebreak::{TieBreak, TIE_EPS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlacementConfig {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

impl Default for PlacementConfig {
    fn default() -> Self {
        PlacementConfig {
            alpha: 0.5,
            beta: 0.5,
            gamma: 0.99,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PlacementError {
    #[error("circuit needs {needed} qubits but the device has {available}")]
    TooManyQubits { needed: usize, available: usize },
    #[error("invalid placement parameters: {0}")]
    InvalidConfig(String),
}

impl PlacementConfig {
    pub fn validate(&self) -> Result<(), PlacementError> {
        if !(self.alpha >= 0.0 && self.beta >= 0.0) {
            return Err(PlacementError::InvalidConfig("alpha and beta must be >= 0".into()));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(PlacementError::InvalidConfig("gamma must be in (0, 1]".into()));
        }
        Ok(())
    }
}

/// Per-gate, per-qubit and per-pair weights of a circuit.
#[derive(Clone, Debug)]
pub struct WeightTable {
    pub gamma: f64,
    pub gate_weight: Vec<f64>,
    pub qubit_weight: Vec<f64>,
    /// Keyed by `(low, high)` logical qubit pair.
    pub pair_weight: BTreeMap<(usize, usize), f64>,
    /// Interaction partners of each logical qubit, sorted.
    partners: Vec<Vec<usize>>,
    /// Qubits touched by at least one unitary gate.
    active: Vec<bool>,
}

impl WeightTable {
    pub fn pair(&self, q: usize, w: usize) -> f64 {
        self.pair_weight.get(&(q.min(w), q.max(w))).copied().unwrap_or(0.0)
    }

    pub fn partners(&self, q: usize) -> &[usize] {
        &self.partners[q]
    }

    /// Multiplies every pair weight by `factor`.
    pub fn scale_pairs(&mut self, factor: f64) {
        for w in self.pair_weight.values_mut() {
            *w *= factor;
        }
    }
}

pub fn compute_weights(circuit: &LogicalCircuit, dag: &DependencyDag, gamma: f64) -> WeightTable {
    let gate_weight: Vec<f64> = dag.layer.iter().map(|&l| gamma.powi(l as i32)).collect();
    let mut qubit_weight = vec![0.0; circuit.num_qubits];
    let mut pair_weight = BTreeMap::new();
    let mut active = vec![false; circuit.num_qubits];
    for (gate, &w) in circuit.gates.iter().zip(&gate_weight) {
        if gate.is_single_unitary() {
            active[gate.qubits[0]] = true;
        }
        // Only two-qubit gates constrain placement; single-qubit gates still
        // shift layers but carry no weight of their own.
        if !gate.is_two_qubit() {
            continue;
        }
        let (a, b) = (gate.qubits[0], gate.qubits[1]);
        active[a] = true;
        active[b] = true;
        qubit_weight[a] += w;
        qubit_weight[b] += w;
        *pair_weight.entry((a.min(b), a.max(b))).or_insert(0.0) += w;
    }
    let mut partners = vec![Vec::new(); circuit.num_qubits];
    for &(a, b) in pair_weight.keys() {
        partners[a].push(b);
        partners[b].push(a);
    }
    for p in &mut partners {
        p.sort_unstable();
    }
    WeightTable {
        gamma,
        gate_weight,
        qubit_weight,
        pair_weight,
        partners,
        active,
    }
}

/// Closeness of candidate node `node` to the already placed partners of `q`.
pub fn score_mapped(q: usize, node: usize, mapping: &Mapping, weights: &WeightTable, graph: &CouplingGraph) -> f64 {
    let dia = graph.diameter().max(1) as f64;
    weights
        .partners(q)
        .iter()
        .filter_map(|&w| mapping.physical(w).map(|p| (w, p)))
        .map(|(w, p)| (1.0 - graph.distance(node, p) as f64 / dia) * weights.pair(q, w))
        .sum()
}

/// Free room around `node` relative to the number of unplaced partners of `q`;
/// negative when the partners cannot all fit next to it.
pub fn score_unmapped(q: usize, node: usize, mapping: &Mapping, weights: &WeightTable, graph: &CouplingGraph) -> f64 {
    let free = graph
        .neighbors(node)
        .iter()
        .filter(|&&n| !mapping.is_occupied(n))
        .count();
    let mut waiting = 0usize;
    let mut weight_sum = 0.0;
    for &u in weights.partners(q) {
        if mapping.physical(u).is_none() && u != q {
            waiting += 1;
            weight_sum += weights.pair(q, u);
        }
    }
    let denom = free.max(waiting);
    if denom == 0 {
        return 0.0;
    }
    (free as f64 - waiting as f64) * weight_sum / denom as f64
}

/// Z-scores over a population; all zero when the spread vanishes.
pub fn z_scores(values: &[f64]) -> Vec<f64> {
    let n = values.len() as f64;
    if values.is_empty() {
        return Vec::new();
    }
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let sd = var.sqrt();
    if sd <= 1e-12 * (1.0 + mean.abs()) {
        return vec![0.0; values.len()];
    }
    values.iter().map(|v| (v - mean) / sd).collect()
}

/// Scores of every free node for qubit `q`: `(node, f_p, f_up, combined)`.
pub fn candidate_scores(
    q: usize,
    mapping: &Mapping,
    weights: &WeightTable,
    graph: &CouplingGraph,
    config: &PlacementConfig,
) -> Vec<(usize, f64, f64, f64)> {
    let free: Vec<usize> = (0..graph.num_physical()).filter(|&p| !mapping.is_occupied(p)).collect();
    let fp: Vec<f64> = free
        .iter()
        .map(|&v| score_mapped(q, v, mapping, weights, graph))
        .collect();
    let fup: Vec<f64> = free
        .iter()
        .map(|&v| score_unmapped(q, v, mapping, weights, graph))
        .collect();
    let zp = z_scores(&fp);
    let zup = z_scores(&fup);
    free.iter()
        .enumerate()
        .map(|(i, &v)| (v, fp[i], fup[i], config.alpha * zp[i] + config.beta * zup[i]))
        .collect()
}

/// Logical qubits in placement order: descending weight, gate-less ones split off.
fn placement_order(weights: &WeightTable, tie: &mut TieBreak) -> (Vec<usize>, Vec<usize>) {
    let mut active: Vec<usize> = (0..weights.qubit_weight.len()).filter(|&q| weights.active[q]).collect();
    let idle: Vec<usize> = (0..weights.qubit_weight.len())
        .filter(|&q| !weights.active[q])
        .collect();
    active.sort_by(|&a, &b| {
        weights.qubit_weight[b]
            .partial_cmp(&weights.qubit_weight[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    if let TieBreak::Random(_) = tie {
        // Shuffle within groups of equal weight.
        let mut start = 0;
        while start < active.len() {
            let w = weights.qubit_weight[active[start]];
            let mut end = start + 1;
            while end < active.len() && (weights.qubit_weight[active[end]] - w).abs() <= TIE_EPS {
                end += 1;
            }
            for i in (start + 1..end).rev() {
                let j = start + tie.pick(i - start + 1);
                active.swap(i, j);
            }
            start = end;
        }
    }
    (active, idle)
}

/// Deterministic placement.
pub fn place_all(
    circuit: &LogicalCircuit,
    graph: &CouplingGraph,
    config: &PlacementConfig,
) -> Result<Mapping, PlacementError> {
    place_all_with(circuit, graph, config, &mut TieBreak::First)
}

pub fn place_all_with(
    circuit: &LogicalCircuit,
    graph: &CouplingGraph,
    config: &PlacementConfig,
    tie: &mut TieBreak,
) -> Result<Mapping, PlacementError> {
    config.validate()?;
    if circuit.num_qubits > graph.num_physical() {
        return Err(PlacementError::TooManyQubits {
            needed: circuit.num_qubits,
            available: graph.num_physical(),
        });
    }
    let dag = crate::circuit::build_dag(circuit);
    let weights = compute_weights(circuit, &dag, config.gamma);
    let (order, idle) = placement_order(&weights, tie);
    let mut mapping = Mapping::new(circuit.num_qubits, graph.num_physical());
    for (i, &q) in order.iter().enumerate() {
        let node = if i == 0 {
            graph.center()
        } else {
            let scored: Vec<(usize, f64)> = candidate_scores(q, &mapping, &weights, graph, config)
                .into_iter()
                .map(|(v, _, _, s)| (v, s))
                .collect();
            tie.argmax(&scored).expect("a free node exists")
        };
        mapping.assign(q, node);
    }
    for q in idle {
        let node = (0..graph.num_physical())
            .find(|&p| !mapping.is_occupied(p))
            .expect("a free node exists");
        mapping.assign(q, node);
    }
    Ok(mapping)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_dag, Gate};

    fn path(n: usize) -> CouplingGraph {
        CouplingGraph::new(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn weights_of(c: &LogicalCircuit, gamma: f64) -> WeightTable {
        compute_weights(c, &build_dag(c), gamma)
    }

    #[test]
    fn gate_weights_decay_by_layer() {
        let c = LogicalCircuit::with_gates(2, vec![Gate::cx(0, 1), Gate::cx(0, 1)]);
        let w = weights_of(&c, 0.99);
        assert_eq!(w.gate_weight, vec![1.0, 0.99]);
        assert!((w.pair(0, 1) - 1.99).abs() < 1e-12);
        assert!((w.pair(1, 0) - 1.99).abs() < 1e-12);
        assert!((w.qubit_weight[0] - 1.99).abs() < 1e-12);
    }

    #[test]
    fn single_qubit_gates_only_shift_layers() {
        let c = LogicalCircuit::with_gates(2, vec![Gate::single(crate::circuit::GateKind::H, 0), Gate::cx(0, 1)]);
        let w = weights_of(&c, 0.5);
        assert_eq!(w.qubit_weight, vec![0.5, 0.5]);
        assert_eq!(w.pair(0, 1), 0.5);
    }

    // A 3-qubit table with e_01 = 1.99 and e_02 = 2.
    fn table() -> WeightTable {
        let c = LogicalCircuit::with_gates(3, vec![Gate::cx(0, 1), Gate::cx(0, 1), Gate::cx(0, 2), Gate::cx(2, 0)]);
        let mut w = weights_of(&c, 0.99);
        w.pair_weight.insert((0, 2), 2.0);
        w
    }

    #[test]
    fn mapped_score_examples() {
        let g = path(5);
        let w = table();
        let empty = Mapping::new(3, 5);
        assert_eq!(score_mapped(0, 2, &empty, &w, &g), 0.0);

        let mut m = Mapping::new(3, 5);
        m.assign(2, 4);
        // Partner at the diameter distance contributes nothing.
        assert_eq!(score_mapped(0, 0, &m, &w, &g), 0.0);

        let mut m = Mapping::new(3, 5);
        m.assign(1, 1);
        let s = score_mapped(0, 0, &m, &w, &g);
        assert!((s - 1.4925).abs() < 1e-12, "{s}");
    }

    #[test]
    fn unmapped_score_examples() {
        let g = path(5);
        // q0 has no partners.
        let w = weights_of(&LogicalCircuit::with_gates(3, vec![Gate::cx(1, 2)]), 1.0);
        assert_eq!(score_unmapped(0, 2, &Mapping::new(3, 5), &w, &g), 0.0);

        // f = 2 free neighbors, two waiting partners with total weight 3.
        let c = LogicalCircuit::with_gates(3, vec![Gate::cx(0, 1), Gate::cx(0, 2), Gate::cx(0, 2)]);
        let w = weights_of(&c, 1.0);
        let m = Mapping::new(3, 5);
        assert_eq!(score_unmapped(0, 2, &m, &w, &g), 0.0);

        // f = 1 (end of the path), three waiting partners with total weight 3.
        let c = LogicalCircuit::with_gates(4, vec![Gate::cx(0, 1), Gate::cx(0, 2), Gate::cx(0, 3)]);
        let w = weights_of(&c, 1.0);
        let m = Mapping::new(4, 5);
        assert_eq!(score_unmapped(0, 0, &m, &w, &g), -2.0);
    }

    #[test]
    fn z_scores_standardize() {
        let z = z_scores(&[1.0, 2.0, 3.0, 10.0]);
        let mean: f64 = z.iter().sum::<f64>() / 4.0;
        let var: f64 = z.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / 4.0;
        assert!(mean.abs() < 1e-9 && (var - 1.0).abs() < 1e-9);
        assert_eq!(z_scores(&[2.0, 2.0]), vec![0.0, 0.0]);
        assert!(z_scores(&[]).is_empty());
    }

    #[test]
    fn one_qubit_goes_to_center() {
        let c = LogicalCircuit::with_gates(1, vec![Gate::single(crate::circuit::GateKind::X, 0)]);
        let m = place_all(&c, &path(5), &PlacementConfig::default()).unwrap();
        assert_eq!(m.phys(0), 2);
    }

    #[test]
    fn too_many_qubits() {
        let c = LogicalCircuit::new(6);
        assert_eq!(
            place_all(&c, &path(5), &PlacementConfig::default()),
            Err(PlacementError::TooManyQubits {
                needed: 6,
                available: 5
            })
        );
    }

    #[test]
    fn gate_less_qubits_fill_lowest_free_nodes() {
        let c = LogicalCircuit::with_gates(3, vec![Gate::cx(2, 1)]);
        let m = place_all(&c, &path(5), &PlacementConfig::default()).unwrap();
        assert!(m.is_complete());
        assert_eq!(m.phys(0), 0);
        assert_eq!(g_dist(&path(5), m.phys(1), m.phys(2)), 1);
    }

    fn g_dist(g: &CouplingGraph, a: usize, b: usize) -> usize {
        g.distance(a, b)
    }

    #[test]
    fn invalid_config() {
        let c = LogicalCircuit::new(1);
        let cfg = PlacementConfig {
            gamma: 0.0,
            ..Default::default()
        };
        assert!(matches!(
            place_all(&c, &path(3), &cfg),
            Err(PlacementError::InvalidConfig(_))
        ));
    }
}
