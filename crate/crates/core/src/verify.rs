//! Checks that a routed circuit respects the device and computes the original.
//!
//! Basis states are little-endian: qubit `q` is bit `q` of the index.
//!
//! A routed circuit `R` with mappings `π0 → π1` is equivalent to a logical
//! circuit `L` when `R·P(π0) = e^{iφ}·P(π1)·(L ⊗ I)` for one global phase
//! `φ`, where `I` acts on the idle qubits the mappings name. Only physical
//! qubits that are touched by `R`, hold a circuit qubit, or change occupant
//! are simulated.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arch::CouplingGraph;
use crate::circuit::{Gate, GateKind, LogicalCircuit};
use crate::mapping::Mapping;

/// Largest register [`unitary_of`] accepts.
pub const MAX_UNITARY_QUBITS: usize = 12;
/// Logical widths up to this are compared column by column.
pub const MAX_DENSE_QUBITS: usize = 10;
/// Largest simulated physical frame.
pub const MAX_FRAME_QUBITS: usize = 22;
/// Random probe states used above [`MAX_DENSE_QUBITS`].
pub const PROBES: usize = 3;
pub const TOLERANCE: f64 = 1e-8;
const PROBE_SEED: u64 = 0x7A4E_601D;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VerifyError {
    #[error("{width} qubits exceed the simulation limit of {max}")]
    TooManyQubits { width: usize, max: usize },
    #[error("mapping does not place logical qubit {0}")]
    Unplaced(usize),
    #[error("routed circuit uses physical qubit {qubit} but the device has {num_physical}")]
    QubitOutOfRange { qubit: usize, num_physical: usize },
}

/// A two-qubit gate on a pair that is not a coupling edge.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("gate {index} ({name}) acts on non-adjacent physical qubits {a} and {b}")]
pub struct ConnectivityViolation {
    pub index: usize,
    pub name: &'static str,
    pub a: usize,
    pub b: usize,
}

/// Dense square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary {
    pub dim: usize,
    pub data: Vec<Complex64>,
}

impl Unitary {
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    /// Equal to `other` up to one global phase, entrywise within `tol`.
    pub fn equal_up_to_phase(&self, other: &Unitary, tol: f64) -> bool {
        self.dim == other.dim && same_up_to_phase(&self.data, &other.data, tol)
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// 2×2 matrix of a single-qubit unitary, `[[m00, m01], [m10, m11]]`.
pub fn gate_matrix(gate: &Gate) -> [[Complex64; 2]; 2] {
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let diag = |phase: f64| [[one, zero], [zero, Complex64::from_polar(1.0, phase)]];
    let u3 = |theta: f64, phi: f64, lambda: f64| {
        let (s, co) = (theta / 2.0).sin_cos();
        [
            [c(co, 0.0), -Complex64::from_polar(s, lambda)],
            [Complex64::from_polar(s, phi), Complex64::from_polar(co, phi + lambda)],
        ]
    };
    let p = &gate.params;
    match gate.kind {
        GateKind::Id => [[one, zero], [zero, one]],
        GateKind::X => [[zero, one], [one, zero]],
        GateKind::Y => [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
        GateKind::Z => diag(std::f64::consts::PI),
        GateKind::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        GateKind::S => diag(FRAC_PI_2),
        GateKind::Sdg => diag(-FRAC_PI_2),
        GateKind::T => diag(FRAC_PI_4),
        GateKind::Tdg => diag(-FRAC_PI_4),
        GateKind::U1 => diag(p[0]),
        GateKind::RZ => [
            [Complex64::from_polar(1.0, -p[0] / 2.0), zero],
            [zero, Complex64::from_polar(1.0, p[0] / 2.0)],
        ],
        GateKind::RX => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateKind::RY => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::U2 => u3(FRAC_PI_2, p[0], p[1]),
        GateKind::U3 => u3(p[0], p[1], p[2]),
        GateKind::CX | GateKind::Swap | GateKind::Measure | GateKind::Barrier => {
            panic!("{} is not a single-qubit unitary", gate.kind)
        }
    }
}

/// Applies a unitary gate in place. Measures and barriers are ignored.
pub fn apply_gate(state: &mut [Complex64], gate: &Gate) {
    match gate.kind {
        GateKind::Measure | GateKind::Barrier => {}
        GateKind::CX => {
            let (cb, tb) = (1usize << gate.qubits[0], 1usize << gate.qubits[1]);
            for i in 0..state.len() {
                if i & cb != 0 && i & tb == 0 {
                    state.swap(i, i | tb);
                }
            }
        }
        GateKind::Swap => {
            let (ab, bb) = (1usize << gate.qubits[0], 1usize << gate.qubits[1]);
            for i in 0..state.len() {
                if i & ab != 0 && i & bb == 0 {
                    state.swap(i, i ^ ab ^ bb);
                }
            }
        }
        _ => {
            let m = gate_matrix(gate);
            let bit = 1usize << gate.qubits[0];
            for i in 0..state.len() {
                if i & bit == 0 {
                    let (a, b) = (state[i], state[i | bit]);
                    state[i] = m[0][0] * a + m[0][1] * b;
                    state[i | bit] = m[1][0] * a + m[1][1] * b;
                }
            }
        }
    }
}

pub fn simulate(gates: &[Gate], state: &mut [Complex64]) {
    for g in gates {
        apply_gate(state, g);
    }
}

/// Dense unitary of a circuit on at most [`MAX_UNITARY_QUBITS`] qubits.
pub fn unitary_of(circuit: &LogicalCircuit) -> Result<Unitary, VerifyError> {
    let n = circuit.num_qubits;
    if n > MAX_UNITARY_QUBITS {
        return Err(VerifyError::TooManyQubits {
            width: n,
            max: MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut data = vec![c(0.0, 0.0); dim * dim];
    let mut column = vec![c(0.0, 0.0); dim];
    for col in 0..dim {
        column.fill(c(0.0, 0.0));
        column[col] = c(1.0, 0.0);
        simulate(&circuit.gates, &mut column);
        for (row, amp) in column.iter().enumerate() {
            data[row * dim + col] = *amp;
        }
    }
    Ok(Unitary { dim, data })
}

/// Every two-qubit gate that does not act on a coupling edge.
pub fn check_connectivity(gates: &[Gate], graph: &CouplingGraph) -> Vec<ConnectivityViolation> {
    gates
        .iter()
        .enumerate()
        .filter(|(_, g)| g.is_two_qubit())
        .filter(|(_, g)| {
            let (a, b) = (g.qubits[0], g.qubits[1]);
            a >= graph.num_physical() || b >= graph.num_physical() || !graph.is_edge(a, b)
        })
        .map(|(index, g)| ConnectivityViolation {
            index,
            name: g.kind.mnemonic(),
            a: g.qubits[0],
            b: g.qubits[1],
        })
        .collect()
}

/// `a ≈ e^{iφ}·b` for the phase read off the largest entry of `b`.
fn same_up_to_phase(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let Some(k) = (0..b.len()).max_by(|&i, &j| b[i].norm_sqr().total_cmp(&b[j].norm_sqr())) else {
        return true;
    };
    if b[k].norm() < tol {
        return a.iter().all(|x| x.norm() <= tol);
    }
    let ratio = a[k] / b[k];
    if (ratio.norm() - 1.0).abs() > tol {
        return false;
    }
    let phase = ratio / ratio.norm();
    a.iter().zip(b).all(|(x, y)| (x - phase * y).norm() <= tol)
}

/// Moves basis-state bits: source bit `i` goes to bit `dest[i]` of a register
/// of `width` qubits; the other bits are zero.
fn embed(state: &[Complex64], dest: &[usize], width: usize) -> Vec<Complex64> {
    let mut out = vec![c(0.0, 0.0); 1usize << width];
    for (i, amp) in state.iter().enumerate() {
        let mut j = 0;
        for (bit, &d) in dest.iter().enumerate() {
            if i >> bit & 1 == 1 {
                j |= 1 << d;
            }
        }
        out[j] = *amp;
    }
    out
}

fn random_state(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    for x in &mut v {
        *x /= norm;
    }
    v
}

/// Whether `routed` (physical qubits, from `initial` to `final_`) implements
/// `original`.
///
/// Mapping entries past the circuit width name idle qubits, which must come
/// out where `final_` says, unchanged. Physical qubits the mappings leave
/// empty are taken to start in `|0⟩` and must end there. Measurements must
/// land on the final position of their logical qubit with the same bit.
pub fn equivalent(
    original: &LogicalCircuit,
    routed: &[Gate],
    initial: &Mapping,
    final_: &Mapping,
) -> Result<bool, VerifyError> {
    let n = original.num_qubits;
    for l in 0..n {
        for m in [initial, final_] {
            if l >= m.num_logical() || m.physical(l).is_none() {
                return Err(VerifyError::Unplaced(l));
            }
        }
    }
    let num_physical = initial.num_physical().max(final_.num_physical());
    for g in routed {
        if let Some(&q) = g.qubits.iter().find(|&&q| q >= num_physical) {
            return Err(VerifyError::QubitOutOfRange { qubit: q, num_physical });
        }
    }
    if initial.num_physical() != final_.num_physical() {
        return Ok(false);
    }

    let mut expected_measures: Vec<(usize, Option<usize>)> = original
        .gates
        .iter()
        .filter(|g| g.kind == GateKind::Measure)
        .map(|g| (final_.phys(g.qubits[0]), g.clbit))
        .collect();
    let mut actual_measures: Vec<(usize, Option<usize>)> = routed
        .iter()
        .filter(|g| g.kind == GateKind::Measure)
        .map(|g| (g.qubits[0], g.clbit))
        .collect();
    expected_measures.sort_unstable();
    actual_measures.sort_unstable();
    if expected_measures != actual_measures {
        return Ok(false);
    }

    // Qubits whose state matters for the comparison.
    let mut frame: BTreeSet<usize> = (0..n).flat_map(|l| [initial.phys(l), final_.phys(l)]).collect();
    for g in routed {
        if g.kind != GateKind::Barrier {
            frame.extend(&g.qubits);
        }
    }
    frame.extend((0..num_physical).filter(|&p| initial.logical(p) != final_.logical(p)));
    let frame: Vec<usize> = frame.into_iter().collect();
    let width = frame.len();
    if width > MAX_FRAME_QUBITS {
        return Err(VerifyError::TooManyQubits {
            width,
            max: MAX_FRAME_QUBITS,
        });
    }
    let local = |p: usize| frame.binary_search(&p).expect("frame holds every used qubit");

    // Logical inputs: circuit qubits first, then idle occupants in the frame.
    let mut inputs: Vec<usize> = (0..n).collect();
    inputs.extend(frame.iter().filter_map(|&p| initial.logical(p)).filter(|&l| l >= n));
    let mut start_local = Vec::with_capacity(inputs.len());
    let mut end_local = Vec::with_capacity(inputs.len());
    for &l in &inputs {
        let end = match final_.physical(l).filter(|&p| local_of(&frame, p).is_some()) {
            Some(p) => p,
            None => return Ok(false),
        };
        start_local.push(local(initial.phys(l)));
        end_local.push(local(end));
    }

    let physical_gates: Vec<Gate> = routed
        .iter()
        .filter(|g| g.kind != GateKind::Barrier && g.kind != GateKind::Measure)
        .map(|g| g.remapped(local))
        .collect();
    let logical_gates: Vec<Gate> = original
        .gates
        .iter()
        .filter(|g| g.kind != GateKind::Barrier && g.kind != GateKind::Measure)
        .cloned()
        .collect();
    let run = |input: &[Complex64]| {
        let mut lhs = embed(input, &start_local, width);
        simulate(&physical_gates, &mut lhs);
        let mut logical = input.to_vec();
        simulate(&logical_gates, &mut logical);
        (lhs, embed(&logical, &end_local, width))
    };

    let k = inputs.len();
    let dim = 1usize << k;
    if k <= MAX_DENSE_QUBITS {
        // Whole isometry at once so one phase covers every column.
        let mut lhs_all = Vec::new();
        let mut rhs_all = Vec::new();
        let mut basis = vec![c(0.0, 0.0); dim];
        for col in 0..dim {
            basis.fill(c(0.0, 0.0));
            basis[col] = c(1.0, 0.0);
            let (lhs, rhs) = run(&basis);
            lhs_all.extend(lhs);
            rhs_all.extend(rhs);
        }
        return Ok(same_up_to_phase(&lhs_all, &rhs_all, TOLERANCE));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    for _ in 0..PROBES {
        let input = random_state(&mut rng, dim);
        let (lhs, rhs) = run(&input);
        if !same_up_to_phase(&lhs, &rhs, TOLERANCE) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn local_of(frame: &[usize], p: usize) -> Option<usize> {
    frame.binary_search(&p).ok()
}
