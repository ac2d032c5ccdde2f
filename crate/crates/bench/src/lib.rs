//! Seeded fixtures shared by the benchmarks.

use qtree_core::{GeneratorSet, QuadraticHamiltonian};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A step coupling every generator once through a random perfect matching,
/// plus `extra` random couplings that merge matched pairs into larger blocks.
pub fn matching_step(basis: &GeneratorSet, extra: usize, seed: u64) -> QuadraticHamiltonian<'_> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = basis.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut h = QuadraticHamiltonian::new(basis, rng.random_range(0.1..1.0));
    for pair in order.chunks_exact(2) {
        h.add_term(pair[0], pair[1], rng.random_range(-1.0..1.0))
            .expect("distinct indices");
    }
    for _ in 0..extra {
        let (j, k) = (rng.random_range(0..n), rng.random_range(0..n));
        if j != k {
            h.add_term(j, k, rng.random_range(-1.0..1.0))
                .expect("distinct indices");
        }
    }
    h
}

/// Random bit vectors of length `m`.
pub fn random_bits(m: usize, count: usize, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..m).map(|_| rng.random_bool(0.5)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use qtree_core::QubitTree;

    #[test]
    fn matching_step_touches_every_generator() {
        let tree = QubitTree::cf_binary(3).unwrap();
        let gs = GeneratorSet::from_tree(&tree);
        let h = matching_step(&gs, 0, 1);
        let mut seen = vec![false; gs.len()];
        for (j, k, _) in h.terms() {
            seen[j] = true;
            seen[k] = true;
        }
        assert_eq!(seen.iter().filter(|&&s| s).count(), gs.len() - gs.len() % 2);
    }

    #[test]
    fn fixtures_are_deterministic() {
        assert_eq!(random_bits(9, 3, 5), random_bits(9, 3, 5));
    }
}
