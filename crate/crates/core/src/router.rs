//! SWAP-insertion routing.
//!
//! Each blocked step first scores every candidate SWAP by how many front-layer
//! two-qubit gates it unlocks, counting cascades. Among SWAPs that unlock the
//! most gates, the winner minimizes
//!
//! ```text
//! h_refine = h_decay + dp_term - reward_term
//! ```
//!
//! When no SWAP unlocks anything, the closest blocked gate is moved one hop
//! closer with the SWAP of lowest `h_decay`.
//!
//! Single-qubit gates are buffered per logical qubit and flushed when the next
//! two-qubit gate on that qubit executes. `dp` tracks the ASAP depth of every
//! physical qubit, and `rec` remembers the last two-qubit gate emitted on it.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::arch::CouplingGraph;
use crate::circuit::{compute_depth, count_cx, Gate, GateKind, LogicalCircuit};
use crate::mapping::Mapping;
use crate::tiebreak::TieBreak;

/// SWAP selection strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SwapSelector {
    /// Executable-gate count first, then `h_refine`.
    #[default]
    TwoStage,
    /// `h_decay` alone over all candidates (ablation baseline).
    DistanceOnly,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RouterConfig {
    pub delta: f64,
    pub reward: f64,
    /// Discount of the extended layer in `h_decay`.
    pub w: f64,
    /// Extended-layer size.
    pub window: usize,
    /// Number of leading two-qubit gates whose qubits define SWAP candidates;
    /// `None` means the whole front layer.
    pub candidate_k: Option<usize>,
    /// SWAP decisions without execution after which decay is reset.
    pub decay_reset: usize,
    pub runs: usize,
    pub seed: u64,
    pub selector: SwapSelector,
}

impl Default for RouterConfig {
    fn default() -> Self {
        RouterConfig {
            delta: 0.001,
            reward: 0.5,
            w: 0.5,
            window: 20,
            candidate_k: None,
            decay_reset: 5,
            runs: 3,
            seed: 0,
            selector: SwapSelector::TwoStage,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RouterError {
    #[error("invalid router parameters: {0}")]
    InvalidConfig(String),
    #[error("gate {0} is not executable under the current mapping")]
    NotExecutable(usize),
}

impl RouterConfig {
    pub fn validate(&self) -> Result<(), RouterError> {
        let bad = |m: &str| Err(RouterError::InvalidConfig(m.to_string()));
        if !(0.0..=1.0).contains(&self.delta) {
            return bad("delta must be in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.w) {
            return bad("w must be in [0, 1]");
        }
        if self.reward.is_nan() || self.reward < 0.0 {
            return bad("reward must be >= 0");
        }
        if self.candidate_k == Some(0) {
            return bad("candidate-k must be >= 1");
        }
        if self.runs == 0 {
            return bad("runs must be >= 1");
        }
        if self.decay_reset == 0 {
            return bad("decay reset interval must be >= 1");
        }
        Ok(())
    }
}

/// Role of a physical qubit in the last two-qubit gate emitted on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Control,
    Target,
    Swap,
}

/// Last emitted two-qubit gate on a physical qubit, by emitted index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rec {
    pub emitted: usize,
    pub role: Role,
}

/// A routed circuit over physical qubits. Mappings are full permutations:
/// logical qubits past the circuit width stand for idle physical qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct PhysicalCircuit {
    pub num_physical: usize,
    pub num_logical: usize,
    pub num_clbits: usize,
    pub gates: Vec<Gate>,
    pub initial_mapping: Mapping,
    pub final_mapping: Mapping,
    pub swaps_inserted: usize,
    /// Largest per-qubit depth tracked while routing, SWAPs counted as 3.
    pub router_depth: usize,
}

impl PhysicalCircuit {
    pub fn cx_count(&self) -> usize {
        count_cx(&self.gates)
    }

    pub fn depth(&self) -> usize {
        compute_depth(&self.gates, self.num_physical)
    }

    pub fn swap_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::Swap).count()
    }

    /// The gate list as a circuit over `num_physical` qubits.
    pub fn to_circuit(&self) -> LogicalCircuit {
        LogicalCircuit {
            num_qubits: self.num_physical,
            num_clbits: self.num_clbits,
            gates: self.gates.clone(),
        }
    }

    /// Gate order reversed; initial and final mappings exchanged.
    pub fn reversed(&self) -> PhysicalCircuit {
        PhysicalCircuit {
            gates: self.gates.iter().rev().cloned().collect(),
            initial_mapping: self.final_mapping.clone(),
            final_mapping: self.initial_mapping.clone(),
            ..self.clone()
        }
    }
}

/// Two-qubit skeleton of a circuit. Single-qubit gates hang off the last
/// two-qubit gate before them on their wire.
#[derive(Clone, Debug)]
struct Skeleton {
    /// Circuit gate ids of the two-qubit gates, program order.
    gates: Vec<usize>,
    preds: Vec<Vec<usize>>,
    succs: Vec<Vec<usize>>,
    /// Single-qubit gates preceding any two-qubit gate on their wire.
    leading: Vec<usize>,
    /// Single-qubit gates to buffer once a two-qubit gate executes.
    trailing: Vec<Vec<usize>>,
    measures: Vec<usize>,
}

impl Skeleton {
    fn new(circuit: &LogicalCircuit) -> Self {
        let mut last: Vec<Option<usize>> = vec![None; circuit.num_qubits];
        let mut sk = Skeleton {
            gates: Vec::new(),
            preds: Vec::new(),
            succs: Vec::new(),
            leading: Vec::new(),
            trailing: Vec::new(),
            measures: Vec::new(),
        };
        for (id, gate) in circuit.gates.iter().enumerate() {
            match gate.kind {
                GateKind::Barrier => {}
                GateKind::Measure => sk.measures.push(id),
                _ if gate.is_two_qubit() => {
                    let idx = sk.gates.len();
                    let mut preds = Vec::with_capacity(2);
                    for &q in &gate.qubits {
                        if let Some(p) = last[q] {
                            if !preds.contains(&p) {
                                preds.push(p);
                                sk.succs[p].push(idx);
                            }
                        }
                        last[q] = Some(idx);
                    }
                    sk.gates.push(id);
                    sk.preds.push(preds);
                    sk.succs.push(Vec::new());
                    sk.trailing.push(Vec::new());
                }
                _ => match last[gate.qubits[0]] {
                    Some(p) => sk.trailing[p].push(id),
                    None => sk.leading.push(id),
                },
            }
        }
        sk
    }
}

/// Mutable routing bookkeeping.
#[derive(Clone, Debug)]
pub struct RoutingState {
    pub mapping: Mapping,
    pub dp: Vec<usize>,
    /// Pending single-qubit gate ids, per logical qubit.
    pub sg: Vec<VecDeque<usize>>,
    pub rec: Vec<Option<Rec>>,
    pub decay: Vec<f64>,
    pub emitted: Vec<Gate>,
    /// Executed circuit gate ids (two-qubit gates and buffered singles).
    pub executed: Vec<bool>,
    pub swaps: usize,
}

impl RoutingState {
    /// Pending single-qubit gates on the logical qubit at `physical`.
    pub fn sg_at(&self, physical: usize) -> Option<&VecDeque<usize>> {
        self.mapping.logical(physical).map(|l| &self.sg[l])
    }

    pub fn max_dp(&self) -> usize {
        self.dp.iter().copied().max().unwrap_or(0)
    }
}

/// Routes one circuit from one initial mapping.
pub struct Router<'a> {
    circuit: &'a LogicalCircuit,
    graph: &'a CouplingGraph,
    config: &'a RouterConfig,
    sk: Skeleton,
    pub state: RoutingState,
    remaining: Vec<u8>,
    done: Vec<bool>,
    front: BTreeSet<usize>,
    cursor: usize,
    since_exec: usize,
    tie: TieBreak,
    initial_mapping: Mapping,
}

type Edge = (usize, usize);

impl<'a> Router<'a> {
    /// `initial` must place every logical qubit of `circuit`; it is padded to
    /// a full permutation internally.
    pub fn new(
        circuit: &'a LogicalCircuit,
        graph: &'a CouplingGraph,
        initial: &Mapping,
        config: &'a RouterConfig,
        tie: TieBreak,
    ) -> Self {
        assert!(initial.is_complete(), "initial mapping must be complete");
        let mapping = initial.truncated(circuit.num_qubits).padded();
        let mapping_copy = mapping.clone();
        let sk = Skeleton::new(circuit);
        let n = graph.num_physical();
        let remaining: Vec<u8> = sk.preds.iter().map(|p| p.len() as u8).collect();
        let front = (0..sk.gates.len()).filter(|&i| remaining[i] == 0).collect();
        let state = RoutingState {
            sg: vec![VecDeque::new(); mapping.num_logical()],
            mapping,
            dp: vec![0; n],
            rec: vec![None; n],
            decay: vec![1.0; n],
            emitted: Vec::with_capacity(circuit.gates.len() * 2),
            executed: vec![false; circuit.gates.len()],
            swaps: 0,
        };
        let done = vec![false; sk.gates.len()];
        let mut router = Router {
            circuit,
            graph,
            config,
            sk,
            state,
            remaining,
            done,
            front,
            cursor: 0,
            since_exec: 0,
            tie,
            initial_mapping: mapping_copy,
        };
        for id in router.sk.leading.clone() {
            router.buffer_single(id);
        }
        router
    }

    /// Circuit ids of the current front layer, in program order.
    pub fn front_layer(&self) -> Vec<usize> {
        self.front.iter().map(|&i| self.sk.gates[i]).collect()
    }

    /// Circuit ids of the extended layer.
    pub fn extended_layer(&self) -> Vec<usize> {
        self.extended(self.config.window)
            .into_iter()
            .map(|i| self.sk.gates[i])
            .collect()
    }

    fn extended(&self, window: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(window);
        let mut i = self.cursor;
        while out.len() < window && i < self.sk.gates.len() {
            if !self.done[i] && !self.front.contains(&i) {
                out.push(i);
            }
            i += 1;
        }
        out
    }

    fn operands(&self, idx: usize) -> (usize, usize) {
        let g = &self.circuit.gates[self.sk.gates[idx]];
        (g.qubits[0], g.qubits[1])
    }

    fn skeleton_index(&self, gate_id: usize) -> usize {
        self.sk
            .gates
            .binary_search(&gate_id)
            .expect("gate id names a two-qubit gate")
    }

    /// Whether the two-qubit gate `gate_id` acts on a coupling edge now.
    pub fn is_executable(&self, gate_id: usize) -> bool {
        let (a, b) = self.operands(self.skeleton_index(gate_id));
        let m = &self.state.mapping;
        self.graph.is_edge(m.phys(a), m.phys(b))
    }

    fn flush(&mut self, logical: usize) {
        let p = self.state.mapping.phys(logical);
        while let Some(id) = self.state.sg[logical].pop_front() {
            let gate = self.circuit.gates[id].remapped(|_| p);
            self.state.emitted.push(gate);
            self.state.dp[p] += 1;
        }
    }

    /// Emits the two-qubit gate `gate_id` after flushing both operands'
    /// buffers, then buffers the single-qubit gates that follow it.
    pub fn execute_gate(&mut self, gate_id: usize) -> Result<(), RouterError> {
        let idx = self.skeleton_index(gate_id);
        if self.done[idx] || !self.front.contains(&idx) || !self.is_executable(gate_id) {
            return Err(RouterError::NotExecutable(gate_id));
        }
        let (q0, q1) = self.operands(idx);
        self.flush(q0);
        self.flush(q1);
        let (p0, p1) = (self.state.mapping.phys(q0), self.state.mapping.phys(q1));
        let gate = &self.circuit.gates[gate_id];
        let emitted_index = self.state.emitted.len();
        self.state
            .emitted
            .push(gate.remapped(|q| if q == q0 { p0 } else { p1 }));
        let cost = if gate.kind == GateKind::Swap { 3 } else { 1 };
        let d = self.state.dp[p0].max(self.state.dp[p1]) + cost;
        self.state.dp[p0] = d;
        self.state.dp[p1] = d;
        let (r0, r1) = if gate.kind == GateKind::Swap {
            (Role::Swap, Role::Swap)
        } else {
            (Role::Control, Role::Target)
        };
        self.state.rec[p0] = Some(Rec {
            emitted: emitted_index,
            role: r0,
        });
        self.state.rec[p1] = Some(Rec {
            emitted: emitted_index,
            role: r1,
        });
        self.state.executed[gate_id] = true;
        self.done[idx] = true;
        self.front.remove(&idx);
        for &s in &self.sk.succs[idx] {
            self.remaining[s] -= 1;
            if self.remaining[s] == 0 {
                self.front.insert(s);
            }
        }
        while self.cursor < self.done.len() && self.done[self.cursor] {
            self.cursor += 1;
        }
        for k in 0..self.sk.trailing[idx].len() {
            let id = self.sk.trailing[idx][k];
            self.buffer_single(id);
        }
        self.since_exec = 0;
        self.state.decay.fill(1.0);
        Ok(())
    }

    /// Queues a single-qubit gate on its logical qubit.
    pub fn buffer_single(&mut self, gate_id: usize) {
        let q = self.circuit.gates[gate_id].qubits[0];
        self.state.sg[q].push_back(gate_id);
        self.state.executed[gate_id] = true;
    }

    /// Pops buffered gates from the shallower operand of a blocked gate to
    /// level the two depths.
    pub fn balance_before_swap(&mut self, gate_id: usize) {
        let (q0, q1) = self.operands(self.skeleton_index(gate_id));
        let (p0, p1) = (self.state.mapping.phys(q0), self.state.mapping.phys(q1));
        let (d0, d1) = (self.state.dp[p0], self.state.dp[p1]);
        let (s, ls) = if d1 < d0 { (p1, q1) } else { (p0, q0) };
        let k = d0.abs_diff(d1).min(self.state.sg[ls].len());
        for _ in 0..k {
            let id = self.state.sg[ls].pop_front().expect("k <= buffer length");
            let gate = self.circuit.gates[id].remapped(|_| s);
            self.state.emitted.push(gate);
            self.state.dp[s] += 1;
        }
    }

    /// Executes executable front-layer gates until none is left. Returns the
    /// number executed.
    pub fn execute_ready(&mut self) -> usize {
        let mut count = 0;
        loop {
            let ready: Vec<usize> = self
                .front
                .iter()
                .copied()
                .filter(|&i| {
                    let (a, b) = self.operands(i);
                    self.graph
                        .is_edge(self.state.mapping.phys(a), self.state.mapping.phys(b))
                })
                .collect();
            if ready.is_empty() {
                return count;
            }
            for i in ready {
                let id = self.sk.gates[i];
                self.execute_gate(id).expect("checked executable");
                count += 1;
            }
        }
    }

    /// Edges touching a qubit of the first `candidate_k` unexecuted two-qubit
    /// gates, in lexicographic order.
    pub fn swap_candidates(&self) -> Vec<Edge> {
        let leading: Vec<usize> = match self.config.candidate_k {
            None => self.front.iter().copied().collect(),
            Some(k) => {
                let mut v: Vec<usize> = self.front.iter().copied().take(k).collect();
                if v.len() < k {
                    v.extend(self.extended(k - v.len()));
                }
                v
            }
        };
        let mut nodes = BTreeSet::new();
        for i in leading {
            let (a, b) = self.operands(i);
            nodes.insert(self.state.mapping.phys(a));
            nodes.insert(self.state.mapping.phys(b));
        }
        let mut edges = BTreeSet::new();
        for &p in &nodes {
            for &n in self.graph.neighbors(p) {
                edges.insert((p.min(n), p.max(n)));
            }
        }
        edges.into_iter().collect()
    }

    fn swapped_phys(&self, logical: usize, (a, b): Edge) -> usize {
        let p = self.state.mapping.phys(logical);
        if p == a {
            b
        } else if p == b {
            a
        } else {
            p
        }
    }

    fn gate_distance_after(&self, idx: usize, swap: Edge) -> usize {
        let (q0, q1) = self.operands(idx);
        self.graph
            .distance(self.swapped_phys(q0, swap), self.swapped_phys(q1, swap))
    }

    /// Number of two-qubit gates that become executable, cascading through
    /// successors, once `swap` is applied. The state is left untouched.
    pub fn h_exec2q(&self, swap: Edge) -> usize {
        let mut pending: Vec<usize> = self.front.iter().copied().collect();
        let mut overlay: HashMap<usize, u8> = HashMap::new();
        let mut count = 0;
        loop {
            let before = pending.len();
            let mut next = Vec::with_capacity(pending.len());
            let mut released = Vec::new();
            for &i in &pending {
                if self.gate_distance_after(i, swap) == 1 {
                    count += 1;
                    for &s in &self.sk.succs[i] {
                        let r = overlay.entry(s).or_insert(self.remaining[s]);
                        *r -= 1;
                        if *r == 0 {
                            released.push(s);
                        }
                    }
                } else {
                    next.push(i);
                }
            }
            let progressed = next.len() < before;
            next.extend(released);
            pending = next;
            if !progressed {
                return count;
            }
        }
    }

    fn layer_distance(&self, layer: &[usize], swap: Edge) -> f64 {
        layer.iter().map(|&i| self.gate_distance_after(i, swap) as f64).sum()
    }

    fn h_decay_with(&self, swap: Edge, front: &[usize], ext: &[usize]) -> f64 {
        let (a, b) = swap;
        let decay = self.state.decay[a].max(self.state.decay[b]);
        let mut cost = 0.0;
        if !front.is_empty() {
            cost += self.layer_distance(front, swap) / front.len() as f64;
        }
        if !ext.is_empty() {
            cost += self.config.w * self.layer_distance(ext, swap) / ext.len() as f64;
        }
        decay * cost
    }

    /// Decay-weighted mean distance of the front and extended layers after
    /// `swap`.
    pub fn h_decay(&self, swap: Edge) -> f64 {
        let front: Vec<usize> = self.front.iter().copied().collect();
        let ext = self.extended(self.config.window);
        self.h_decay_with(swap, &front, &ext)
    }

    /// Post-SWAP maximum depth, normalized by the current maximum plus three.
    pub fn dp_term(&self, (a, b): Edge) -> f64 {
        let current = self.state.max_dp();
        let after = current.max(self.state.dp[a].max(self.state.dp[b]) + 3);
        after as f64 / (current + 3) as f64
    }

    /// Raw post-SWAP maximum depth.
    pub fn dp_max_after(&self, (a, b): Edge) -> usize {
        self.state.max_dp().max(self.state.dp[a].max(self.state.dp[b]) + 3)
    }

    /// `reward` when both endpoints last took part in the same emitted gate.
    pub fn reward_term(&self, (a, b): Edge) -> f64 {
        match (self.state.rec[a], self.state.rec[b]) {
            (Some(x), Some(y)) if x.emitted == y.emitted => self.config.reward,
            _ => 0.0,
        }
    }

    pub fn h_refine(&self, swap: Edge) -> f64 {
        self.h_decay(swap) + self.dp_term(swap) - self.reward_term(swap)
    }

    /// The front-layer gate with the shortest distance (lowest index on ties).
    pub fn blocking_gate(&self) -> Option<usize> {
        self.front
            .iter()
            .copied()
            .min_by_key(|&i| {
                let (a, b) = self.operands(i);
                (
                    self.graph
                        .distance(self.state.mapping.phys(a), self.state.mapping.phys(b)),
                    i,
                )
            })
            .map(|i| self.sk.gates[i])
    }

    /// Chooses the SWAP to insert. Requires a non-empty front layer with no
    /// executable gate.
    pub fn select_swap(&mut self) -> Edge {
        let front: Vec<usize> = self.front.iter().copied().collect();
        let ext = self.extended(self.config.window);
        let candidates = self.swap_candidates();
        match self.config.selector {
            SwapSelector::TwoStage => {
                let exec: Vec<usize> = candidates.iter().map(|&e| self.h_exec2q(e)).collect();
                let mes = exec.iter().copied().max().unwrap_or(0);
                if mes > 0 {
                    let scored: Vec<(Edge, f64)> = candidates
                        .iter()
                        .zip(&exec)
                        .filter(|&(_, &x)| x == mes)
                        .map(|(&e, _)| {
                            let h = self.h_decay_with(e, &front, &ext) + self.dp_term(e) - self.reward_term(e);
                            (e, h)
                        })
                        .collect();
                    return self.tie.argmin(&scored).expect("candidates attaining MES");
                }
                self.fallback_swap(&front, &ext)
            }
            SwapSelector::DistanceOnly => {
                // Release valve: distance-only search can oscillate.
                if self.since_exec > 2 * self.graph.diameter() + 4 {
                    return self.fallback_swap(&front, &ext);
                }
                let scored: Vec<(Edge, f64)> = candidates
                    .iter()
                    .map(|&e| (e, self.h_decay_with(e, &front, &ext)))
                    .collect();
                self.tie.argmin(&scored).expect("non-empty candidate set")
            }
        }
    }

    /// A SWAP shortening the closest blocked gate by one hop, lowest `h_decay`.
    fn fallback_swap(&mut self, front: &[usize], ext: &[usize]) -> Edge {
        let target = self.blocking_gate().expect("front layer is non-empty");
        let idx = self.skeleton_index(target);
        let (q0, q1) = self.operands(idx);
        let (p0, p1) = (self.state.mapping.phys(q0), self.state.mapping.phys(q1));
        let d = self.graph.distance(p0, p1);
        let mut options = BTreeSet::new();
        for p in [p0, p1] {
            for &n in self.graph.neighbors(p) {
                let e = (p.min(n), p.max(n));
                if self.gate_distance_after(idx, e) + 1 == d {
                    options.insert(e);
                }
            }
        }
        let scored: Vec<(Edge, f64)> = options
            .into_iter()
            .map(|e| (e, self.h_decay_with(e, front, ext)))
            .collect();
        self.tie
            .argmin(&scored)
            .expect("a shortest-path neighbor always exists")
    }

    /// Inserts a SWAP on `(a, b)`. Pending single-qubit gates travel with
    /// their logical qubits.
    pub fn apply_swap(&mut self, (a, b): Edge) {
        debug_assert!(self.graph.is_edge(a, b));
        // Orientation hint: follow the gate both endpoints last shared.
        let orientation = match (self.state.rec[a], self.state.rec[b]) {
            (Some(x), Some(y)) if x.emitted == y.emitted => {
                let g = &self.state.emitted[x.emitted];
                (g.qubits[0], g.qubits[1])
            }
            _ => (a.min(b), a.max(b)),
        };
        self.state.mapping.swap_physical(a, b);
        let d = self.state.dp[a].max(self.state.dp[b]) + 3;
        self.state.dp[a] = d;
        self.state.dp[b] = d;
        self.state.decay[a] += self.config.delta;
        self.state.decay[b] += self.config.delta;
        let index = self.state.emitted.len();
        self.state.emitted.push(Gate::swap(orientation.0, orientation.1));
        let rec = Some(Rec {
            emitted: index,
            role: Role::Swap,
        });
        self.state.rec[a] = rec;
        self.state.rec[b] = rec;
        self.state.swaps += 1;
        self.since_exec += 1;
        if self.since_exec.is_multiple_of(self.config.decay_reset) {
            self.state.decay.fill(1.0);
        }
    }

    /// One routing decision: balance, select, apply. Returns the SWAP.
    pub fn step(&mut self) -> Option<Edge> {
        let blocked = self.blocking_gate()?;
        self.balance_before_swap(blocked);
        let swap = self.select_swap();
        self.apply_swap(swap);
        Some(swap)
    }

    /// Routes the whole circuit.
    pub fn run(mut self) -> PhysicalCircuit {
        self.finish()
    }

    fn finish(&mut self) -> PhysicalCircuit {
        let initial_mapping = self.initial_mapping.clone();
        loop {
            self.execute_ready();
            if self.front.is_empty() {
                break;
            }
            self.step();
        }
        for p in 0..self.graph.num_physical() {
            if let Some(l) = self.state.mapping.logical(p) {
                self.flush(l);
            }
        }
        for &id in &self.sk.measures {
            let g = &self.circuit.gates[id];
            let p = self.state.mapping.phys(g.qubits[0]);
            self.state.emitted.push(g.remapped(|_| p));
            self.state.dp[p] += 1;
            self.state.executed[id] = true;
        }
        PhysicalCircuit {
            num_physical: self.graph.num_physical(),
            num_logical: self.circuit.num_qubits,
            num_clbits: self.circuit.num_clbits,
            gates: std::mem::take(&mut self.state.emitted),
            initial_mapping,
            final_mapping: self.state.mapping.clone(),
            swaps_inserted: self.state.swaps,
            router_depth: self.state.max_dp(),
        }
    }
}

/// Routes `circuit` from `initial` with deterministic tie-breaking.
pub fn route(
    circuit: &LogicalCircuit,
    graph: &CouplingGraph,
    initial: &Mapping,
    config: &RouterConfig,
) -> PhysicalCircuit {
    Router::new(circuit, graph, initial, config, TieBreak::First).run()
}

/// Routes with a caller-owned tie-breaker, advancing its random stream.
pub fn route_with(
    circuit: &LogicalCircuit,
    graph: &CouplingGraph,
    initial: &Mapping,
    config: &RouterConfig,
    tie: &mut TieBreak,
) -> PhysicalCircuit {
    let taken = std::mem::replace(tie, TieBreak::First);
    let mut router = Router::new(circuit, graph, initial, config, taken);
    let out = router.finish();
    *tie = router.tie;
    out
}
