//! Seeded random fixtures for property suites and certificates.
//!
//! Nothing here draws ambient randomness: every generator takes a caller
//! seeded RNG, and certificate-producing callers record the seed.

use crate::cube::Cube;
use crate::set::PointSet;
use rand::Rng;

/// Each point joins independently with probability `num/den`.
pub fn random_set(cube: Cube, num: u32, den: u32, rng: &mut impl Rng) -> PointSet {
    let mut set = PointSet::empty(cube);
    for i in 0..cube.point_count() {
        if rng.gen_ratio(num, den) {
            set.insert_index(i);
        }
    }
    set
}

/// A uniformly random set of exactly `count` points.
pub fn random_set_of_size(cube: Cube, count: usize, rng: &mut impl Rng) -> PointSet {
    let total = cube.point_count();
    debug_assert!(count <= total);
    // Reservoir-free: sample by index with a running quota.
    let mut set = PointSet::empty(cube);
    let mut remaining = count;
    for i in 0..total {
        let left = total - i;
        if remaining > 0 && rng.gen_ratio(remaining as u32, left as u32) {
            set.insert_index(i);
            remaining -= 1;
        }
    }
    debug_assert_eq!(set.cardinality(), count);
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn fixed_seed_reproduces() {
        let cube = Cube::new(3, 3).unwrap();
        let a = random_set(cube, 1, 3, &mut ChaCha8Rng::seed_from_u64(5));
        let b = random_set(cube, 1, 3, &mut ChaCha8Rng::seed_from_u64(5));
        assert_eq!(a, b);
    }

    #[test]
    fn sized_sets_have_exact_cardinality() {
        let cube = Cube::new(2, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for count in [0, 1, 7, 32] {
            assert_eq!(random_set_of_size(cube, count, &mut rng).cardinality(), count);
        }
    }
}
