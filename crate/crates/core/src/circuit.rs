//! Circuit representation, gate-dependency DAG and depth accounting.
//!
//! A gate's id is its position in [`LogicalCircuit::gates`]. The dependency
//! DAG links every gate to the most recent earlier gate on each of its wires.

use std::collections::HashSet;
use std::fmt;

/// Gate vocabulary understood by the compiler.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    RX,
    RY,
    RZ,
    U1,
    U2,
    U3,
    Id,
    CX,
    Swap,
    Measure,
    Barrier,
}

impl GateKind {
    /// Number of qubit operands.
    pub fn arity(self) -> usize {
        match self {
            GateKind::CX | GateKind::Swap => 2,
            _ => 1,
        }
    }

    /// Number of real parameters.
    pub fn num_params(self) -> usize {
        match self {
            GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::U1 => 1,
            GateKind::U2 => 2,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    /// Lower-case OpenQASM mnemonic.
    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::RX => "rx",
            GateKind::RY => "ry",
            GateKind::RZ => "rz",
            GateKind::U1 => "u1",
            GateKind::U2 => "u2",
            GateKind::U3 => "u3",
            GateKind::Id => "id",
            GateKind::CX => "cx",
            GateKind::Swap => "swap",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }

    pub fn from_mnemonic(name: &str) -> Option<GateKind> {
        let kind = match name {
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "h" => GateKind::H,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "t" => GateKind::T,
            "tdg" => GateKind::Tdg,
            "rx" => GateKind::RX,
            "ry" => GateKind::RY,
            "rz" => GateKind::RZ,
            "u1" => GateKind::U1,
            "u2" => GateKind::U2,
            "u3" | "U" => GateKind::U3,
            "id" => GateKind::Id,
            "cx" | "CX" => GateKind::CX,
            "swap" => GateKind::Swap,
            "measure" => GateKind::Measure,
            "barrier" => GateKind::Barrier,
            _ => return None,
        };
        Some(kind)
    }

    /// Diagonal in the computational basis.
    pub fn is_diagonal(self) -> bool {
        matches!(
            self,
            GateKind::Z
                | GateKind::S
                | GateKind::Sdg
                | GateKind::T
                | GateKind::Tdg
                | GateKind::RZ
                | GateKind::U1
                | GateKind::Id
        )
    }

    /// A rotation about the X axis (commutes with a CX target).
    pub fn is_x_axis(self) -> bool {
        matches!(self, GateKind::X | GateKind::RX | GateKind::Id)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// One gate application. For CX the operands are `[control, target]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub params: Vec<f64>,
    /// Classical bit written by a `Measure`.
    pub clbit: Option<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>, params: Vec<f64>) -> Self {
        Gate {
            kind,
            qubits,
            params,
            clbit: None,
        }
    }

    pub fn single(kind: GateKind, qubit: usize) -> Self {
        Gate::new(kind, vec![qubit], Vec::new())
    }

    pub fn rotation(kind: GateKind, qubit: usize, angle: f64) -> Self {
        Gate::new(kind, vec![qubit], vec![angle])
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::new(GateKind::CX, vec![control, target], Vec::new())
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, vec![a, b], Vec::new())
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        Gate {
            kind: GateKind::Measure,
            qubits: vec![qubit],
            params: Vec::new(),
            clbit: Some(clbit),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.qubits.len() == 2
    }

    /// Unitary single-qubit gate (not a measurement or barrier).
    pub fn is_single_unitary(&self) -> bool {
        self.qubits.len() == 1 && !matches!(self.kind, GateKind::Measure | GateKind::Barrier)
    }

    pub fn acts_on(&self, qubit: usize) -> bool {
        self.qubits.contains(&qubit)
    }

    /// Same gate with operands renamed through `f`.
    pub fn remapped(&self, f: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            qubits: self.qubits.iter().map(|&q| f(q)).collect(),
            params: self.params.clone(),
            clbit: self.clbit,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.params.is_empty() {
            let ps: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", ps.join(","))?;
        }
        let qs: Vec<String> = self.qubits.iter().map(|q| format!("q[{q}]")).collect();
        write!(f, " {}", qs.join(","))
    }
}

#[derive(Debug, Clone, thiserror::Error, PartialEq)]
pub enum CircuitError {
    #[error("gate {index} ({kind}) expects {expected} qubit(s), got {got}")]
    Arity {
        index: usize,
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("gate {index} uses qubit {qubit} outside a {num_qubits}-qubit circuit")]
    QubitOutOfRange {
        index: usize,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("gate {index} repeats qubit {qubit}")]
    DuplicateOperand { index: usize, qubit: usize },
}

/// An ordered gate list over `num_qubits` logical qubits.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LogicalCircuit {
    pub num_qubits: usize,
    pub num_clbits: usize,
    pub gates: Vec<Gate>,
}

impl LogicalCircuit {
    pub fn new(num_qubits: usize) -> Self {
        LogicalCircuit {
            num_qubits,
            num_clbits: 0,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(num_qubits: usize, gates: Vec<Gate>) -> Self {
        LogicalCircuit {
            num_qubits,
            num_clbits: 0,
            gates,
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Rejects malformed gate operands.
    pub fn validate(&self) -> Result<(), CircuitError> {
        for (index, gate) in self.gates.iter().enumerate() {
            let expected = gate.kind.arity();
            if gate.kind != GateKind::Barrier && gate.qubits.len() != expected {
                return Err(CircuitError::Arity {
                    index,
                    kind: gate.kind,
                    expected,
                    got: gate.qubits.len(),
                });
            }
            for (k, &qubit) in gate.qubits.iter().enumerate() {
                if qubit >= self.num_qubits {
                    return Err(CircuitError::QubitOutOfRange {
                        index,
                        qubit,
                        num_qubits: self.num_qubits,
                    });
                }
                if gate.qubits[..k].contains(&qubit) {
                    return Err(CircuitError::DuplicateOperand { index, qubit });
                }
            }
        }
        Ok(())
    }

    /// Number of CX gates, counting a SWAP as three.
    pub fn cx_count(&self) -> usize {
        count_cx(&self.gates)
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn depth(&self) -> usize {
        compute_depth(&self.gates, self.num_qubits)
    }
}

pub fn count_cx(gates: &[Gate]) -> usize {
    gates
        .iter()
        .map(|g| match g.kind {
            GateKind::CX => 1,
            GateKind::Swap => 3,
            _ => 0,
        })
        .sum()
}

/// ASAP depth: single-qubit gates and measurements add 1, two-qubit gates
/// level both wires to `max + 1`, SWAP to `max + 3`. Barriers are ignored.
pub fn compute_depth(gates: &[Gate], num_qubits: usize) -> usize {
    let width = gates
        .iter()
        .flat_map(|g| g.qubits.iter().copied())
        .max()
        .map_or(num_qubits, |m| num_qubits.max(m + 1));
    let mut depth = vec![0usize; width];
    for gate in gates {
        match gate.kind {
            GateKind::Barrier => {}
            GateKind::CX | GateKind::Swap => {
                let cost = if gate.kind == GateKind::Swap { 3 } else { 1 };
                let (a, b) = (gate.qubits[0], gate.qubits[1]);
                let d = depth[a].max(depth[b]) + cost;
                depth[a] = d;
                depth[b] = d;
            }
            _ => depth[gate.qubits[0]] += 1,
        }
    }
    depth.into_iter().max().unwrap_or(0)
}

/// Gate order reversed. Gates are not inverted.
pub fn reverse_circuit(circuit: &LogicalCircuit) -> LogicalCircuit {
    LogicalCircuit {
        num_qubits: circuit.num_qubits,
        num_clbits: circuit.num_clbits,
        gates: circuit.gates.iter().rev().cloned().collect(),
    }
}

/// Gate-dependency DAG with 0-based longest-path layers.
#[derive(Clone, Debug, Default)]
pub struct DependencyDag {
    pub predecessors: Vec<Vec<usize>>,
    pub successors: Vec<Vec<usize>>,
    pub layer: Vec<usize>,
    two_qubit: Vec<bool>,
}

impl DependencyDag {
    pub fn len(&self) -> usize {
        self.layer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layer.is_empty()
    }

    pub fn is_two_qubit(&self, gate: usize) -> bool {
        self.two_qubit[gate]
    }

    /// Whether every two-qubit gate reachable backwards through single-qubit
    /// gates is in `executed`.
    fn two_qubit_ancestors_done(&self, gate: usize, executed: &HashSet<usize>) -> bool {
        let mut stack: Vec<usize> = self.predecessors[gate].clone();
        while let Some(p) = stack.pop() {
            if self.two_qubit[p] {
                if !executed.contains(&p) {
                    return false;
                }
            } else {
                stack.extend(self.predecessors[p].iter().copied());
            }
        }
        true
    }
}

pub fn build_dag(circuit: &LogicalCircuit) -> DependencyDag {
    let n = circuit.gates.len();
    let mut last: Vec<Option<usize>> = vec![None; circuit.num_qubits];
    let mut predecessors = vec![Vec::new(); n];
    let mut successors = vec![Vec::new(); n];
    let mut layer = vec![0usize; n];
    let mut two_qubit = vec![false; n];
    for (id, gate) in circuit.gates.iter().enumerate() {
        two_qubit[id] = gate.is_two_qubit() && gate.kind != GateKind::Barrier;
        let mut preds: Vec<usize> = Vec::with_capacity(2);
        for &q in &gate.qubits {
            if let Some(p) = last[q] {
                if !preds.contains(&p) {
                    preds.push(p);
                }
            }
            last[q] = Some(id);
        }
        layer[id] = preds.iter().map(|&p| layer[p] + 1).max().unwrap_or(0);
        for &p in &preds {
            successors[p].push(id);
        }
        predecessors[id] = preds;
    }
    DependencyDag {
        predecessors,
        successors,
        layer,
        two_qubit,
    }
}

/// Unexecuted two-qubit gates whose two-qubit ancestors are all executed.
/// Single-qubit gates never block.
pub fn front_layer(dag: &DependencyDag, executed: &HashSet<usize>) -> Vec<usize> {
    (0..dag.len())
        .filter(|&g| dag.two_qubit[g] && !executed.contains(&g))
        .filter(|&g| dag.two_qubit_ancestors_done(g, executed))
        .collect()
}

/// The next `window` unexecuted two-qubit gates after the front layer, in
/// program order.
pub fn extended_layer(dag: &DependencyDag, executed: &HashSet<usize>, window: usize) -> Vec<usize> {
    if window == 0 {
        return Vec::new();
    }
    let front: HashSet<usize> = front_layer(dag, executed).into_iter().collect();
    (0..dag.len())
        .filter(|&g| dag.two_qubit[g] && !executed.contains(&g) && !front.contains(&g))
        .take(window)
        .collect()
}
