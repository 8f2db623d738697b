//! Uniformization: restrict to a block subspace on which every slice is
//! nearly as dense as the whole set.

use super::dens;
use crate::cube::{Cube, Subspace, Symbol, VariableWord, Word};
use crate::error::{Error, Result};
use crate::ratio::{q_floor, q_int, Q};
use crate::set::PointSet;
use crate::trace::ProcedureTrace;
use num::{One, Zero};

/// Outcome of the uniformization loop.
#[derive(Clone, Debug)]
pub enum Uniformized {
    /// A block `V ⊆ [k]^l`, `l < n`, with `dens(A_x) >= dens(A) - eps`
    /// for every `x ∈ V`.
    Done { prefix_len: u16, block: Subspace, trace: ProcedureTrace },
    /// The next block would need `l >= n`.
    Exhausted { trace: ProcedureTrace },
}

/// The density-increment prefix walk: start with the block `[k]^m`; while
/// some slice of the current block is `eps` below the set's density, move
/// to the sub-block over the first prefix whose slice density exceeds
/// `dens(A) + r * rho`, where `rho = eps / (k^m - 1)`. At most
/// `floor(1/rho) + 1` rounds.
pub fn uniformize(a: &PointSet, m: u16, eps: &Q) -> Result<Uniformized> {
    if *eps <= Q::zero() || *eps >= Q::one() {
        return Err(Error::ParameterOutOfRange("eps must satisfy 0 < eps < 1".into()));
    }
    if m < 1 {
        return Err(Error::ParameterOutOfRange("m must be >= 1".into()));
    }
    let cube = a.cube();
    let k = cube.k();
    let density = dens(a);
    let block_points = q_int(cube.stride(m) as i64);
    let rho = eps.clone() / (block_points - q_int(1));
    let target = density.clone() - eps.clone();
    let round_cap: u64 = {
        let floor = q_floor(&rho.clone().recip());
        let cap: u64 = floor.try_into().unwrap_or(u64::MAX);
        cap + 1
    };

    let mut trace = ProcedureTrace::new("uniformize", false);
    trace.param("eps", eps);
    trace.param("rho", &rho);
    trace.param("density", &density);
    trace.param_int("m", m as u64);

    let block_cube = Cube::new(k, m)?;
    let mut prefix: Vec<u16> = Vec::new();
    let mut round = 0u64;
    loop {
        round += 1;
        if round > round_cap {
            return Err(Error::internal("uniformize", "round cap exceeded"));
        }
        let l = prefix.len() as u16 + m;
        if l >= cube.n() {
            trace.step(round, "out of room", None).quantity_str("needed_l", l.to_string());
            trace.finish("exhausted");
            return Ok(Uniformized::Exhausted { trace });
        }
        // The current block: prefix ⌢ [k]^m.
        let mut violator = false;
        let mut escalation: Option<(Word, Q)> = None;
        let escalation_bound = density.clone() + rho.clone() * q_int(round as i64);
        for w in block_cube.words() {
            let mut letters = prefix.clone();
            letters.extend_from_slice(w.letters());
            let x = Word::new(k, letters)?;
            let slice_density = dens(&a.slice(&x)?);
            if slice_density < target {
                violator = true;
            }
            if escalation.is_none() && slice_density >= escalation_bound {
                escalation = Some((x, slice_density));
            }
        }
        if !violator {
            let symbols: Vec<Symbol> = prefix
                .iter()
                .map(|&l| Symbol::Letter(l))
                .chain((1..=m).map(Symbol::Var))
                .collect();
            let block = Subspace::new(VariableWord::new(k, m, symbols)?);
            // Postcondition recheck through an independent pass.
            for x in block.points_iter() {
                if dens(&a.slice(&x)?) < target {
                    return Err(Error::internal("uniformize", "slice recheck below target"));
                }
            }
            trace.step(round, "accepted", Some(block.to_string()));
            trace.finish("success");
            return Ok(Uniformized::Done { prefix_len: l, block, trace });
        }
        match escalation {
            Some((x, slice_density)) => {
                trace
                    .step(round, "escalate", Some(x.to_string()))
                    .quantity("slice_density", &slice_density)
                    .quantity("bound", &escalation_bound);
                prefix = x.letters().to_vec();
            }
            None => {
                // Impossible: the block average is at least
                // density + (round-1) * rho and some slice is eps below it.
                return Err(Error::internal("uniformize", "no escalation slice despite violator"));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::q;
    use crate::search::SearchBudget;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn half_cube_escalates_once() {
        // A = {x in [2]^3 : x_1 = 1}: the slice at prefix 2 is empty, the
        // slice at prefix 1 is full, so round 2 accepts 1 ⌢ [2]^1.
        let cube = Cube::new(2, 3).unwrap();
        let a = PointSet::from_fn(cube, |x| x.letters()[0] == 1);
        match uniformize(&a, 1, &q(1, 4)).unwrap() {
            Uniformized::Done { prefix_len, block, trace } => {
                assert_eq!(prefix_len, 2);
                assert_eq!(block.to_string(), "1a");
                assert_eq!(trace.steps.len(), 2);
                for x in block.points_iter() {
                    assert!(dens(&a.slice(&x).unwrap()) >= q(1, 2) - q(1, 4));
                }
            }
            other => panic!("expected success, got {other:?}"),
        }
    }

    #[test]
    fn full_cube_accepts_immediately() {
        let a = PointSet::full(Cube::new(3, 2).unwrap());
        match uniformize(&a, 1, &q(1, 2)).unwrap() {
            Uniformized::Done { prefix_len, block, .. } => {
                assert_eq!(prefix_len, 1);
                assert_eq!(block, Subspace::identity(3, 1).unwrap());
            }
            other => panic!("expected success, got {other:?}"),
        }
    }

    #[test]
    fn sparse_set_accepts_trivially() {
        // density <= eps: the target bound is non-positive.
        let cube = Cube::new(2, 3).unwrap();
        let mut a = PointSet::empty(cube);
        a.insert_index(0);
        match uniformize(&a, 1, &q(1, 2)).unwrap() {
            Uniformized::Done { prefix_len, .. } => assert_eq!(prefix_len, 1),
            other => panic!("expected success, got {other:?}"),
        }
    }

    #[test]
    fn no_room_is_exhausted() {
        let cube = Cube::new(2, 2).unwrap();
        let a = PointSet::from_fn(cube, |x| x.letters() == [1, 2] || x.letters() == [2, 1]);
        match uniformize(&a, 2, &q(1, 4)).unwrap() {
            Uniformized::Exhausted { .. } => {}
            other => panic!("expected exhausted, got {other:?}"),
        }
    }

    #[test]
    fn lemma_hypothesis_scale_never_exhausts() {
        // n >= eps^-1 k^m m = 4 with n = 6: termination within
        // floor(1/rho) + 1 = 3 rounds, success on 100 seeded sets.
        let cube = Cube::new(2, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1705);
        let budget = SearchBudget::default();
        let _ = &budget;
        for _ in 0..100 {
            let a = crate::fixtures::random_set(cube, 2, 3, &mut rng);
            match uniformize(&a, 1, &q(1, 2)).unwrap() {
                Uniformized::Done { prefix_len, block, trace } => {
                    assert!(trace.steps.len() as u64 <= 3);
                    assert!(prefix_len < 6);
                    let bound = dens(&a) - q(1, 2);
                    for x in block.points_iter() {
                        assert!(dens(&a.slice(&x).unwrap()) >= bound);
                    }
                }
                other => panic!("expected success, got {other:?}"),
            }
        }
    }
}
