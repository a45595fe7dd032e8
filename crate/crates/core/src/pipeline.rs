//! Full compilation: placement, then bidirectional routing with the best pass kept.
//!
//! Every run places the circuit, then routes it three times:
//!
//! 1. forward from the placement, ending in mapping `M1`;
//! 2. the reversed circuit from `M1`, ending in `M2`; reversing that output
//!    gives a forward routing from `M2` to `M1`;
//! 3. forward again from `M2`.
//!
//! Run 0 breaks ties deterministically; later runs use seeded random choices.
//! The kept result has the lowest depth, then fewest CX, then earliest pass.

use crate::arch::CouplingGraph;
use crate::circuit::{compute_depth, count_cx, reverse_circuit, CircuitError, Gate, GateKind, LogicalCircuit};
use crate::peephole::{decompose_naive, optimize};
use crate::placement::{place_all_with, PlacementConfig, PlacementError};
use crate::router::{route_with, PhysicalCircuit, RouterConfig, RouterError};
use crate::tiebreak::TieBreak;

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub placement: PlacementConfig,
    pub router: RouterConfig,
    /// Adaptive SWAP decomposition plus gate cancellation.
    pub peephole: bool,
    /// Keep SWAPs as macros instead of CX triples (only without peephole).
    pub emit_swaps: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            placement: PlacementConfig::default(),
            router: RouterConfig::default(),
            peephole: true,
            emit_swaps: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Placement(#[from] PlacementError),
    #[error(transparent)]
    Router(#[from] RouterError),
}

impl PipelineError {
    pub fn is_too_many_qubits(&self) -> bool {
        matches!(self, PipelineError::Placement(PlacementError::TooManyQubits { .. }))
    }
}

/// The kept routing and where it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Compiled {
    pub circuit: PhysicalCircuit,
    pub cnot: usize,
    pub depth: usize,
    /// 1-based pass index within the run.
    pub pass: usize,
    pub run: usize,
}

/// Applies the configured clean-up to a routed circuit.
pub fn finalize(routed: PhysicalCircuit, config: &PipelineConfig) -> PhysicalCircuit {
    let gates = if config.peephole {
        optimize(&routed.gates, routed.num_physical)
    } else if config.emit_swaps {
        routed.gates.clone()
    } else {
        decompose_naive(&routed.gates)
    };
    PhysicalCircuit { gates, ..routed }
}

fn without_measures(circuit: &LogicalCircuit) -> (LogicalCircuit, Vec<Gate>) {
    let (measures, gates): (Vec<Gate>, Vec<Gate>) = circuit
        .gates
        .iter()
        .filter(|g| g.kind != GateKind::Barrier)
        .cloned()
        .partition(|g| g.kind == GateKind::Measure);
    (
        LogicalCircuit {
            gates,
            ..circuit.clone()
        },
        measures,
    )
}

pub fn run_pipeline(
    circuit: &LogicalCircuit,
    graph: &CouplingGraph,
    config: &PipelineConfig,
) -> Result<Compiled, PipelineError> {
    circuit.validate()?;
    config.placement.validate()?;
    config.router.validate()?;
    let (body, measures) = without_measures(circuit);
    let reversed = reverse_circuit(&body);

    let mut best: Option<Compiled> = None;
    for run in 0..config.router.runs {
        let mut tie = TieBreak::for_run(config.router.seed, run);
        let placed = place_all_with(&body, graph, &config.placement, &mut tie)?;
        let first = route_with(&body, graph, &placed, &config.router, &mut tie);
        let second = route_with(&reversed, graph, &first.final_mapping, &config.router, &mut tie).reversed();
        let third = route_with(&body, graph, &second.initial_mapping, &config.router, &mut tie);
        for (pass, routed) in [first, second, third].into_iter().enumerate() {
            let mut out = finalize(routed, config);
            for m in &measures {
                let p = out.final_mapping.phys(m.qubits[0]);
                out.gates.push(m.remapped(|_| p));
            }
            let candidate = Compiled {
                cnot: count_cx(&out.gates),
                depth: compute_depth(&out.gates, out.num_physical),
                circuit: out,
                pass: pass + 1,
                run,
            };
            log::debug!(
                "run {run} pass {}: cx={} depth={} swaps={}",
                candidate.pass,
                candidate.cnot,
                candidate.depth,
                candidate.circuit.swaps_inserted
            );
            let better = match &best {
                None => true,
                Some(b) => (candidate.depth, candidate.cnot) < (b.depth, b.cnot),
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    Ok(best.expect("at least one run"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{check_connectivity, equivalent};

    fn path(n: usize) -> CouplingGraph {
        CouplingGraph::new(n, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn pipeline_output_is_legal_and_equivalent() {
        let g = path(4);
        let c = LogicalCircuit::with_gates(
            4,
            vec![
                Gate::single(GateKind::H, 0),
                Gate::cx(0, 3),
                Gate::cx(1, 2),
                Gate::single(GateKind::T, 2),
                Gate::cx(2, 0),
                Gate::cx(3, 1),
                Gate::measure(0, 0),
            ],
        );
        let mut c = c;
        c.num_clbits = 1;
        let out = run_pipeline(&c, &g, &PipelineConfig::default()).unwrap();
        assert!(check_connectivity(&out.circuit.gates, &g).is_empty());
        assert!(equivalent(
            &c,
            &out.circuit.gates,
            &out.circuit.initial_mapping,
            &out.circuit.final_mapping
        )
        .unwrap());
        assert_eq!(out.cnot, count_cx(&out.circuit.gates));
        assert_eq!(out.circuit.gates.last().unwrap().kind, GateKind::Measure);
    }

    #[test]
    fn reversed_pass_is_a_forward_routing() {
        let g = path(5);
        let c = LogicalCircuit::with_gates(5, vec![Gate::cx(0, 4), Gate::cx(1, 3), Gate::cx(4, 2)]);
        let config = PipelineConfig {
            peephole: false,
            emit_swaps: true,
            ..PipelineConfig::default()
        };
        let mut tie = TieBreak::First;
        let m = crate::mapping::Mapping::identity(5, 5);
        let back = route_with(&reverse_circuit(&c), &g, &m, &config.router, &mut tie).reversed();
        assert_eq!(back.final_mapping, m);
        assert!(equivalent(&c, &back.gates, &back.initial_mapping, &back.final_mapping).unwrap());
    }

    #[test]
    fn too_many_qubits() {
        let err = run_pipeline(&LogicalCircuit::new(6), &path(5), &PipelineConfig::default()).unwrap_err();
        assert!(err.is_too_many_qubits());
    }

    #[test]
    fn seeds_are_reproducible() {
        let g = path(6);
        let c = LogicalCircuit::with_gates(6, vec![Gate::cx(0, 5), Gate::cx(2, 4), Gate::cx(5, 1), Gate::cx(3, 0)]);
        let config = PipelineConfig::default();
        assert_eq!(
            run_pipeline(&c, &g, &config).unwrap(),
            run_pipeline(&c, &g, &config).unwrap()
        );
    }
}
