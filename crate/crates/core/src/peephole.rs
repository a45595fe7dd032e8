//! Post-routing clean-up: SWAP decomposition and local gate cancellation.

use std::f64::consts::TAU;

use crate::circuit::{Gate, GateKind};

/// Commuting gates a candidate may be moved past while looking for a partner.
pub const LOOK_THROUGH: usize = 4;

/// Rotation angles this close to a multiple of 2π are dropped.
pub const ANGLE_EPS: f64 = 1e-12;

fn swap_as_cx(c: usize, t: usize) -> [Gate; 3] {
    [Gate::cx(c, t), Gate::cx(t, c), Gate::cx(c, t)]
}

/// Expands every SWAP into three CX gates in operand order.
pub fn decompose_naive(gates: &[Gate]) -> Vec<Gate> {
    let mut out = Vec::with_capacity(gates.len());
    for g in gates {
        if g.kind == GateKind::Swap {
            out.extend(swap_as_cx(g.qubits[0], g.qubits[1]));
        } else {
            out.push(g.clone());
        }
    }
    out
}

/// Expands SWAPs into CX triples oriented to cancel against a neighbouring
/// CX on the same pair.
///
/// If the last two-qubit gate on both wires is one CX on the pair, the triple
/// starts with that orientation. Otherwise, if the next two-qubit gate on both
/// wires is one CX on the pair, the triple ends with it. Otherwise the lower
/// index is the first control.
pub fn decompose_swaps(gates: &[Gate], num_physical: usize) -> Vec<Gate> {
    let width = gates
        .iter()
        .flat_map(|g| g.qubits.iter().map(|&q| q + 1))
        .max()
        .unwrap_or(0)
        .max(num_physical);
    // Next two-qubit gate index per input gate and wire, computed backwards.
    let mut next_2q: Vec<[Option<usize>; 2]> = vec![[None, None]; gates.len()];
    let mut upcoming: Vec<Option<usize>> = vec![None; width];
    for (i, g) in gates.iter().enumerate().rev() {
        if g.is_two_qubit() {
            next_2q[i] = [upcoming[g.qubits[0]], upcoming[g.qubits[1]]];
            upcoming[g.qubits[0]] = Some(i);
            upcoming[g.qubits[1]] = Some(i);
        }
    }

    let mut out: Vec<Gate> = Vec::with_capacity(gates.len() + 2 * gates.len() / 3);
    let mut last_2q: Vec<Option<usize>> = vec![None; width];
    for (i, g) in gates.iter().enumerate() {
        if g.kind != GateKind::Swap {
            if g.is_two_qubit() {
                last_2q[g.qubits[0]] = Some(out.len());
                last_2q[g.qubits[1]] = Some(out.len());
            }
            out.push(g.clone());
            continue;
        }
        let (a, b) = (g.qubits[0], g.qubits[1]);
        let on_pair = |h: &Gate| h.kind == GateKind::CX && ((h.qubits == [a, b]) || (h.qubits == [b, a]));
        let before = match (last_2q[a], last_2q[b]) {
            (Some(x), Some(y)) if x == y && on_pair(&out[x]) => Some((out[x].qubits[0], out[x].qubits[1])),
            _ => None,
        };
        let after = match next_2q[i] {
            [Some(x), Some(y)] if x == y && on_pair(&gates[x]) => Some((gates[x].qubits[0], gates[x].qubits[1])),
            _ => None,
        };
        let (c, t) = before.or(after).unwrap_or((a.min(b), a.max(b)));
        last_2q[a] = Some(out.len() + 2);
        last_2q[b] = Some(out.len() + 2);
        out.extend(swap_as_cx(c, t));
    }
    out
}

fn shares_qubit(a: &Gate, b: &Gate) -> bool {
    a.qubits.iter().any(|q| b.qubits.contains(q))
}

fn is_rotation(kind: GateKind) -> bool {
    matches!(kind, GateKind::RX | GateKind::RY | GateKind::RZ | GateKind::U1)
}

/// Result of combining two adjacent gates on the same operands.
enum Combined {
    Identity,
    Gate(Gate),
}

fn combine(a: &Gate, b: &Gate) -> Option<Combined> {
    use GateKind::*;
    if a.qubits != b.qubits {
        // CX operands must match in order; everything else here is one qubit.
        return None;
    }
    match (a.kind, b.kind) {
        (X, X) | (Y, Y) | (Z, Z) | (H, H) | (CX, CX) | (Swap, Swap) => Some(Combined::Identity),
        (S, Sdg) | (Sdg, S) | (T, Tdg) | (Tdg, T) => Some(Combined::Identity),
        (k, l) if k == l && is_rotation(k) => {
            let theta = a.params[0] + b.params[0];
            let reduced = theta.rem_euclid(TAU);
            if reduced < ANGLE_EPS || TAU - reduced < ANGLE_EPS {
                Some(Combined::Identity)
            } else {
                Some(Combined::Gate(Gate::rotation(k, a.qubits[0], theta)))
            }
        }
        _ => None,
    }
}

/// Single-qubit `s` against a CX, when they share a wire.
fn single_commutes_with_cx(s: &Gate, cx: &Gate) -> bool {
    let q = s.qubits[0];
    (q == cx.qubits[0] && s.kind.is_diagonal()) || (q == cx.qubits[1] && s.kind.is_x_axis())
}

/// Whether two gates sharing at least one wire commute under the local rules.
pub fn commutes(a: &Gate, b: &Gate) -> bool {
    use GateKind::*;
    if !shares_qubit(a, b) {
        return true;
    }
    let unitary = |g: &Gate| g.kind == CX || g.is_single_unitary();
    if !unitary(a) || !unitary(b) {
        return false;
    }
    match (a.kind, b.kind) {
        (CX, CX) => {
            let (c1, t1, c2, t2) = (a.qubits[0], a.qubits[1], b.qubits[0], b.qubits[1]);
            (c1 == c2 && t1 != t2) || (t1 == t2 && c1 != c2) || (c1 == c2 && t1 == t2)
        }
        (CX, _) => single_commutes_with_cx(b, a),
        (_, CX) => single_commutes_with_cx(a, b),
        (k, l) => (k.is_diagonal() && l.is_diagonal()) || (k.is_x_axis() && l.is_x_axis()),
    }
}

/// One sweep over `gates`; returns whether anything changed.
fn sweep(gates: &mut [Option<Gate>], wires: &[Vec<usize>], cursor: &mut [usize]) -> bool {
    let mut changed = false;
    for c in cursor.iter_mut() {
        *c = 0;
    }
    for i in 0..gates.len() {
        let Some(gate) = gates[i].clone() else { continue };
        if gate.kind == GateKind::Barrier || gate.kind == GateKind::Measure {
            continue;
        }
        // Later gates on gate i's wires, merged in program order.
        let mut later: Vec<usize> = Vec::new();
        for &q in &gate.qubits {
            let wire = &wires[q];
            while cursor[q] < wire.len() && wire[cursor[q]] <= i {
                cursor[q] += 1;
            }
            later.extend(
                wire[cursor[q]..]
                    .iter()
                    .copied()
                    .filter(|&j| gates[j].is_some())
                    .take(LOOK_THROUGH + 1),
            );
        }
        later.sort_unstable();
        later.dedup();
        for (passed, j) in later.into_iter().enumerate() {
            let other = gates[j].as_ref().expect("filtered live gates");
            if let Some(result) = combine(&gate, other) {
                gates[i] = None;
                gates[j] = match result {
                    Combined::Identity => None,
                    Combined::Gate(g) => Some(g),
                };
                changed = true;
                break;
            }
            if passed == LOOK_THROUGH || !commutes(&gate, other) {
                break;
            }
        }
    }
    changed
}

/// Cancels inverse pairs and merges rotations, looking past up to
/// [`LOOK_THROUGH`] commuting gates, until nothing changes.
pub fn cancel_and_commute(gates: &[Gate]) -> Vec<Gate> {
    let width = gates
        .iter()
        .flat_map(|g| g.qubits.iter().map(|&q| q + 1))
        .max()
        .unwrap_or(0);
    let mut wires: Vec<Vec<usize>> = vec![Vec::new(); width];
    for (i, g) in gates.iter().enumerate() {
        for &q in &g.qubits {
            wires[q].push(i);
        }
    }
    let mut live: Vec<Option<Gate>> = gates.iter().cloned().map(Some).collect();
    let mut cursor = vec![0; width];
    while sweep(&mut live, &wires, &mut cursor) {}
    live.into_iter().flatten().collect()
}

/// Adaptive SWAP decomposition followed by cancellation.
pub fn optimize(gates: &[Gate], num_physical: usize) -> Vec<Gate> {
    cancel_and_commute(&decompose_swaps(gates, num_physical))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{compute_depth, count_cx};

    #[test]
    fn isolated_swap_uses_default_orientation() {
        assert_eq!(
            decompose_swaps(&[Gate::swap(3, 2)], 4),
            vec![Gate::cx(2, 3), Gate::cx(3, 2), Gate::cx(2, 3)]
        );
        assert_eq!(
            decompose_naive(&[Gate::swap(3, 2)]),
            vec![Gate::cx(3, 2), Gate::cx(2, 3), Gate::cx(3, 2)]
        );
    }

    #[test]
    fn swap_follows_preceding_cx() {
        let out = decompose_swaps(&[Gate::cx(1, 0), Gate::swap(0, 1)], 2);
        assert_eq!(out[1], Gate::cx(1, 0));
        assert_eq!(cancel_and_commute(&out), vec![Gate::cx(0, 1), Gate::cx(1, 0)]);
    }

    #[test]
    fn swap_ends_with_following_cx() {
        let out = decompose_swaps(&[Gate::swap(0, 1), Gate::cx(1, 0)], 2);
        assert_eq!(out[2], Gate::cx(1, 0));
        assert_eq!(count_cx(&cancel_and_commute(&out)), 2);
    }

    #[test]
    fn swap_adjacent_to_cx_example() {
        // CX(2,3); CX(0,1); SWAP(0,1); CX(1,2); CX(2,3).
        let routed = vec![
            Gate::cx(2, 3),
            Gate::cx(0, 1),
            Gate::swap(0, 1),
            Gate::cx(1, 2),
            Gate::cx(2, 3),
        ];
        let naive = decompose_naive(&routed);
        assert_eq!(count_cx(&naive), 7);
        assert_eq!(compute_depth(&naive, 4), 6);
        let opt = optimize(&routed, 4);
        assert_eq!(count_cx(&opt), 5);
        assert_eq!(compute_depth(&opt, 4), 4);
    }

    #[test]
    fn self_inverse_pairs_cancel() {
        for k in [GateKind::X, GateKind::Y, GateKind::Z, GateKind::H] {
            assert!(cancel_and_commute(&[Gate::single(k, 0), Gate::single(k, 0)]).is_empty());
        }
        for (a, b) in [(GateKind::S, GateKind::Sdg), (GateKind::Tdg, GateKind::T)] {
            assert!(cancel_and_commute(&[Gate::single(a, 1), Gate::single(b, 1)]).is_empty());
        }
        assert!(cancel_and_commute(&[Gate::cx(0, 1), Gate::cx(0, 1)]).is_empty());
        assert_eq!(cancel_and_commute(&[Gate::cx(0, 1), Gate::cx(1, 0)]).len(), 2);
        assert_eq!(
            cancel_and_commute(&[Gate::single(GateKind::T, 0), Gate::single(GateKind::T, 0)]).len(),
            2
        );
    }

    #[test]
    fn rotations_merge() {
        let out = cancel_and_commute(&[
            Gate::rotation(GateKind::RZ, 0, 0.25),
            Gate::rotation(GateKind::RZ, 0, 0.5),
        ]);
        assert_eq!(out, vec![Gate::rotation(GateKind::RZ, 0, 0.75)]);
        let out = cancel_and_commute(&[
            Gate::rotation(GateKind::RX, 0, 1.0),
            Gate::rotation(GateKind::RX, 0, -1.0),
        ]);
        assert!(out.is_empty());
        let out = cancel_and_commute(&[
            Gate::rotation(GateKind::U1, 0, TAU - 0.5),
            Gate::rotation(GateKind::U1, 0, 0.5),
        ]);
        assert!(out.is_empty());
    }

    #[test]
    fn cancellation_reaches_fixpoint() {
        // H X X H collapses completely.
        let gates = [GateKind::H, GateKind::X, GateKind::X, GateKind::H].map(|k| Gate::single(k, 0));
        assert!(cancel_and_commute(&gates).is_empty());
    }

    #[test]
    fn commutation_rules() {
        // Shared control and shared target.
        assert!(cancel_and_commute(&[Gate::cx(0, 1), Gate::cx(0, 2), Gate::cx(0, 1)]) == vec![Gate::cx(0, 2)]);
        assert!(cancel_and_commute(&[Gate::cx(0, 2), Gate::cx(1, 2), Gate::cx(0, 2)]) == vec![Gate::cx(1, 2)]);
        // X on the target, T on the control.
        let out = cancel_and_commute(&[Gate::cx(0, 1), Gate::single(GateKind::X, 1), Gate::cx(0, 1)]);
        assert_eq!(out, vec![Gate::single(GateKind::X, 1)]);
        let out = cancel_and_commute(&[Gate::cx(0, 1), Gate::single(GateKind::T, 0), Gate::cx(0, 1)]);
        assert_eq!(out, vec![Gate::single(GateKind::T, 0)]);
        // T on the target blocks.
        let gates = [Gate::cx(0, 1), Gate::single(GateKind::T, 1), Gate::cx(0, 1)];
        assert_eq!(cancel_and_commute(&gates).len(), 3);
        // Control/target overlap blocks.
        let gates = [Gate::cx(0, 1), Gate::cx(1, 2), Gate::cx(0, 1)];
        assert_eq!(cancel_and_commute(&gates).len(), 3);
    }

    #[test]
    fn look_through_is_bounded() {
        let kinds = [GateKind::T, GateKind::S, GateKind::Z, GateKind::T, GateKind::S];
        let build = |n: usize| {
            let mut g = vec![Gate::cx(0, 1)];
            g.extend(kinds[..n].iter().map(|&k| Gate::single(k, 0)));
            g.push(Gate::cx(0, 1));
            g
        };
        assert_eq!(count_cx(&cancel_and_commute(&build(LOOK_THROUGH))), 0);
        assert_eq!(count_cx(&cancel_and_commute(&build(LOOK_THROUGH + 1))), 2);
    }

    #[test]
    fn measures_and_barriers_block() {
        let gates = [
            Gate::single(GateKind::X, 0),
            Gate::measure(0, 0),
            Gate::single(GateKind::X, 0),
        ];
        assert_eq!(cancel_and_commute(&gates).len(), 3);
    }
}
