use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Scores closer than this are treated as tied.
pub const TIE_EPS: f64 = 1e-10;

/// How to choose among equally scored options.
#[derive(Clone, Debug)]
pub enum TieBreak {
    /// The first option (lowest index / smallest edge).
    First,
    /// Uniformly at random.
    Random(Box<ChaCha8Rng>),
}

impl TieBreak {
    /// Deterministic for run 0; seeded random for later runs.
    pub fn for_run(seed: u64, run: usize) -> Self {
        if run == 0 {
            TieBreak::First
        } else {
            let mixed = seed ^ (run as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            TieBreak::Random(Box::new(ChaCha8Rng::seed_from_u64(mixed)))
        }
    }

    /// Index into a tie set of size `n > 0`.
    pub fn pick(&mut self, n: usize) -> usize {
        debug_assert!(n > 0);
        match self {
            TieBreak::First => 0,
            TieBreak::Random(_) if n == 1 => 0,
            TieBreak::Random(rng) => rng.gen_range(0..n),
        }
    }

    /// Picks among `items` whose score is within [`TIE_EPS`] of the minimum.
    /// `items` must already be in tie-break order.
    pub fn argmin<T: Copy>(&mut self, items: &[(T, f64)]) -> Option<T> {
        let best = items.iter().map(|&(_, s)| s).fold(f64::INFINITY, f64::min);
        let ties: Vec<T> = items
            .iter()
            .filter(|&&(_, s)| s <= best + TIE_EPS)
            .map(|&(t, _)| t)
            .collect();
        if ties.is_empty() {
            return None;
        }
        let k = self.pick(ties.len());
        Some(ties[k])
    }

    pub fn argmax<T: Copy>(&mut self, items: &[(T, f64)]) -> Option<T> {
        let negated: Vec<(T, f64)> = items.iter().map(|&(t, s)| (t, -s)).collect();
        self.argmin(&negated)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_is_lowest() {
        let mut t = TieBreak::First;
        assert_eq!(t.argmin(&[(3, 1.0), (1, 0.5), (2, 0.5)]), Some(1));
        assert_eq!(t.argmax(&[(3, 1.0), (1, 0.5), (2, 1.0)]), Some(3));
        assert_eq!(t.argmin::<u8>(&[]), None);
    }

    #[test]
    fn random_stays_within_ties() {
        let mut t = TieBreak::for_run(7, 1);
        for _ in 0..50 {
            let v = t.argmin(&[(0, 2.0), (1, 1.0), (2, 1.0), (3, 1.0 + 1e-14)]).unwrap();
            assert!((1..=3).contains(&v));
        }
    }

    #[test]
    fn seeded_runs_repeat() {
        let draw = |seed| {
            let mut t = TieBreak::for_run(seed, 2);
            (0..10).map(|_| t.pick(5)).collect::<Vec<_>>()
        };
        assert_eq!(draw(11), draw(11));
    }
}
